#pragma once

#include <vector>

#include "mml/common.hpp"

namespace mml {

/// Quadratic Majorana Hamiltonian H = (i/4) sum_jk A_jk c_j c_k on one chain.
/// Index k = 0..2L-1 is c_{k+1}; m1 is index 0 and m2 is index 2L-1.
struct QuadraticGenerator {
  RealMatrix A;
  int L = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double zeta = 0.0;
};

/// Heisenberg propagator c(t) = O c with O = exp(A t).
struct Propagator {
  RealMatrix O;
  double t = 0.0;
};

/// G_kl = <c_k c_l> in the normalized ground-space state, G = I + i Gamma.
struct GroundCovariance {
  Matrix G;
  RealMatrix Gamma;
};

/// Sweet-point generator: couples gamma_{j,1} = c_{2j} to gamma_{j,2} = c_{2j+1}
/// with strength delta, so that i A has eigenvalues +-delta (L-1 times each)
/// and two zeros carried by m1, m2.
QuadraticGenerator kitaev_generator(int L, double delta);

/// Largest |zeta| keeping the quench generator in the topological phase.
double quench_zeta_bound(double delta, double epsilon);

/// Sweet-point generator plus zeta * epsilon * sum_j a_j^dagger a_j.
/// Throws RegimeError unless |zeta| < delta / epsilon.
QuadraticGenerator quench_generator(int L, double delta, double epsilon, double zeta);

Propagator propagate(const QuadraticGenerator& gen, double t);

GroundCovariance ground_covariance(int L);

enum class QuenchMethod {
  stepping,  // one exponential per distinct time step, propagate row of m1
  direct,    // full exponential at every requested time (reference)
};

/// lambda(t) = tr[D*_t(m1) m1 Pi_G] / tr[Pi_G] = sum_k O_{1k}(t) G_{k1}.
std::vector<double> lambda_quench(int L, double delta, double epsilon, double zeta,
                                  const std::vector<double>& times,
                                  QuenchMethod method = QuenchMethod::stepping);

/// Arithmetic mean of lambda_quench over zeta_grid; evaluated in parallel
/// with an ordered reduction.
std::vector<double> lambda_quench_averaged(int L, double delta, double epsilon,
                                           const std::vector<double>& zeta_grid,
                                           const std::vector<double>& times,
                                           QuenchMethod method = QuenchMethod::stepping);

/// Per-Majorana weights |O_{1k}(t)|.
RealVector light_cone_profile(const QuadraticGenerator& gen, double t);

/// Smallest site s (1-based) whose cumulative squared weight over sites <= s
/// reaches `fraction`.
int cumulative_front(const RealVector& w, double fraction);

/// Largest site s whose squared weight over sites >= s is at least `eta`.
int tail_front(const RealVector& w, double eta);

struct LightConeFit {
  double velocity = 0.0;   // sites per unit time
  double intercept = 0.0;
  std::vector<double> times;
  std::vector<int> fronts;
};

/// Tracks tail_front(eta) of m1's Heisenberg row on a uniform probe grid
/// until the front reaches L/4 (or t_cap), and fits front = a + v t over the
/// probes with front >= L/8.
LightConeFit fit_light_cone(const QuadraticGenerator& gen, double eta = 1e-10,
                            double t_cap = 1e4);

/// |<D*_t(m1 m2)> - lambda_1 lambda_2| restricted to the zero-mode
/// coefficient: |O_{1,2L} O_{2L,1}|.
double clustering_residual(const QuadraticGenerator& gen, double t);

struct SteadyWindow {
  double v_fit = 0.0;
  double t_max = 0.0;  // fraction_tmax * L / (2 v_fit)
  double t_lo = 0.0;
  double t_hi = 0.0;
};

SteadyWindow steady_window(const QuadraticGenerator& gen, double lo_fraction = 0.6,
                           double hi_fraction = 0.9, double fraction_tmax = 0.8);

/// Mean of series over t in [lo, hi]; throws if no samples fall inside.
double window_mean(const std::vector<double>& times, const std::vector<double>& values, double lo,
                   double hi);

/// Uniform grid 0, dt, 2 dt, ... up to and including t_max (within dt/2).
std::vector<double> uniform_grid(double t_max, double dt);

}  // namespace mml
