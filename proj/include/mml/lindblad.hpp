#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mml/clifford_fock.hpp"
#include "mml/kernels.hpp"
#include "mml/spectral.hpp"

namespace mml {

/// Largest chain the Lindblad backend accepts.
inline constexpr int kLindbladMaxL = 12;

/// Energy quantum exchanged with the bath by a jump operator.
enum class EnergyTag { zero, plus_delta, minus_delta, plus_2delta, minus_2delta, injected };

std::string to_string(EnergyTag tag);

struct JumpOperator {
  FockOperator op;  // includes sqrt(rate)
  EnergyTag tag = EnergyTag::zero;
  double rate = 0.0;
  std::string label;
};

struct LindbladSet {
  std::shared_ptr<const FockSystem> system;
  SpectralDensity bath;
  bool lamb_shift = false;
  LambShiftCoefficients lamb_shift_coefficients;
  FockOperator hamiltonian;
  std::vector<JumpOperator> jumps;
  std::shared_ptr<const LindbladKernel> kernel;
};

/// True when O commutes with the total parity, i.e. has only even Majorana
/// monomials. tol is relative to max|O|.
bool is_bosonic(const FockSystem& sys, const FockOperator& O, double tol = 1e-12);

/// Jump operators and Hamiltonian of the weak-coupling thermal bath for every
/// chain of `sys`:
///   L_i^(0)    = sqrt(2 phi(0)) (b_i^dag b_{i-1} + h.c.),  i = 2..L-1
///   L_1^(+-D)  = sqrt(phi(+-D)) i m1 b_1 / b_1^dag
///   L_2^(+-D)  = sqrt(phi(+-D)) i m2 b_{L-1} / b_{L-1}^dag
///   L_i^(2D)   = sqrt(phi(2D)) b_{i-1} b_i,  L_i^(-2D) = sqrt(phi(-2D)) b_i^dag b_{i-1}^dag
///   H          = delta sum_j b_j^dag b_j  (+ H_LS)
/// Jumps with zero rate are omitted. Requires 3 <= L <= 12 per chain.
LindbladSet build_lindblad_set(std::shared_ptr<const FockSystem> sys, const SpectralDensity& bath,
                               bool include_lamb_shift);

/// Single chain in the bond representation.
LindbladSet build_lindblad_set(const ChainSpec& chain, const SpectralDensity& bath,
                               bool include_lamb_shift,
                               Representation rep = Representation::bond);

/// Copy of `set` with additional jump operators and a recompiled kernel. No
/// parity check is applied to the extra jumps.
LindbladSet with_extra_jumps(const LindbladSet& set, const std::vector<JumpOperator>& extra);

/// L(O) (forward) or L*(O) (adjoint) on a dense operator.
Matrix apply_lindbladian(const LindbladSet& set, const Matrix& O, Direction dir,
                         KernelKind kind = KernelKind::automatic);

struct EvolveOptions {
  double dt = 1e-3;
  double t_max = 1.0;
  int sample_every = 1;  // record observables every this many steps
  int error_every = 0;   // Richardson estimate cadence in steps; 0 picks ~16 checks per run
  KernelKind kernel = KernelKind::automatic;
  double stability_limit = 0.1;  // required dt * max_rate
  bool keep_operators = false;
};

using Observable = std::function<double(const Matrix&)>;
/// Called after every recorded sample; returning true ends the run.
using StopPredicate = std::function<bool(double t, const std::vector<double>& sample)>;

struct EvolutionResult {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[k][i]: observable k at times[i]
  std::vector<Matrix> operators;            // sampled operators when keep_operators
  Matrix final_operator;
  double max_local_error = 0.0;  // Richardson estimate, relative to max|X|
  std::size_t steps = 0;
  bool stopped = false;
};

/// Classical RK4 with fixed step. Throws StabilityError when
/// dt * max_rate > stability_limit.
EvolutionResult evolve(const LindbladSet& set, const Matrix& O0, Direction dir,
                       const EvolveOptions& opt, const std::vector<Observable>& observables,
                       const StopPredicate& stop = {});

struct ThermalSeries {
  std::vector<double> times;
  std::vector<double> values;
  double max_local_error = 0.0;
  bool stopped = false;
};

/// lambda(t) = tr[e^{tL*}(m1) m1 Pi_G] / tr Pi_G on chain 0.
ThermalSeries lambda_thermal(const LindbladSet& set, const EvolveOptions& opt);

/// F_opt(t) = 2/3 + ||e^{tL}(m1 Pi_G)||_1^2 / 12 on chain 0 of a single-chain
/// set. With stop_below, the run ends at the first sample below it.
ThermalSeries fopt_global(const LindbladSet& set, const EvolveOptions& opt,
                          std::optional<double> stop_below = std::nullopt);

/// theta_1(t) = tr[i m1 m2 rho(t)] with rho(0) = (1 + i m1 m2) Pi_G / 2,
/// evolved forward. Independent of the lambda^2 reduction.
ThermalSeries theta1_direct(const LindbladSet& set, const EvolveOptions& opt);

/// theta_2(t) = |tr[(1 - i m1 m2) i m1 m2 e^{tL*}(i m1 m2) Pi_G]| / 2.
ThermalSeries theta2_thermal(const LindbladSet& set, const EvolveOptions& opt);

}  // namespace mml
