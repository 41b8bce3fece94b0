#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mml/fit.hpp"
#include "mml/free_fermion.hpp"
#include "mml/kernels.hpp"
#include "mml/spectral.hpp"

namespace mml {

enum class Scenario { quench, quench_averaged, thermal_beta0, thermal_finite_t, memory_time_scaling, arrhenius };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct QuenchParams {
  int L = 100;
  double epsilon = 1.0;
  double zeta = 0.5;
  std::vector<double> delta_over_epsilon{2.0, 4.0, 8.0, 16.0};
  // zeta grid of the averaged scenario: `zeta_points` equispaced values in [zeta_min, zeta_max]
  double zeta_min = 0.02;
  double zeta_max = 1.0;
  int zeta_points = 50;
  double dt_delta = 0.05;  // dt = dt_delta / delta
  double window_lo = 0.6;
  double window_hi = 0.9;
  double tmax_fraction = 0.8;  // T_max = tmax_fraction * L / (2 v_fit)
  int output_stride = 10;      // write every n-th time sample

  std::vector<double> zeta_grid() const;
};

struct BathParams {
  SpectralFamily family = SpectralFamily::tabulated;
  double delta = 1.0;
  double g2f_0 = 4.0;
  double g2f_delta = 1.2;
  double g2f_2delta = 0.36;
  double omega_cut = 5.0;  // in units of delta
  double beta = 0.0;
  bool lamb_shift = false;

  SpectralDensity density(double beta_override) const;
};

struct ThermalParams {
  std::vector<int> L_list{4, 5, 6, 7, 8, 9};
  std::vector<double> beta_list{0.0};  // thermal-finiteT
  std::vector<double> g2f_delta_list{0.1, 0.3, 1.0};  // arrhenius noise intensities
  std::vector<double> beta_delta_grid{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};  // arrhenius
  int arrhenius_L = 6;
  int arrhenius_L_long = 8;
  double t_max = 2.0;          // in units of 1/delta
  double sample_dt = 0.01;     // in units of 1/delta
  double dt = 0.0;             // 0 selects the largest stable step dividing sample_dt
  double t_eval = 1.0;         // arrhenius evaluation time, units of 1/delta
  double F_thr = 0.99;
  bool diffusive_control = true;  // memory-time-scaling: also run with phi(+-2 delta) = 0
  bool global_fidelity = true;
  bool theta2 = false;
  KernelKind kernel = KernelKind::automatic;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::quench;
  std::string name = "run";
  QuenchParams quench;
  BathParams bath;
  ThermalParams thermal;
  std::uint64_t seed = 0;
  bool long_run = false;

  /// Collects every violated precondition and throws one ValidationError.
  void validate() const;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct Dataset {
  std::string scenario;
  std::string backend;
  std::string normalization;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, double>> metrics;  // in insertion order
  double max_local_error = 0.0;

  double metric(const std::string& key) const;
};

/// First time at which F drops below F_thr, by linear interpolation between the
/// bracketing samples. Throws NoCrossingError when F stays above F_thr and
/// ValidationError when F(0) <= F_thr or the bracketing samples differ by 0.005
/// or more.
double memory_time(const std::vector<double>& times, const std::vector<double>& F, double F_thr);

Dataset run_quench_sweep(const ExperimentConfig& cfg);
Dataset run_thermal_sweep(const ExperimentConfig& cfg);
Dataset run_memory_time_scaling(const ExperimentConfig& cfg);
Dataset run_arrhenius(const ExperimentConfig& cfg);

/// Dispatches on cfg.scenario after validation.
Dataset run_experiment(const ExperimentConfig& cfg);

/// Integration step for a thermal run: cfg dt if set, otherwise the largest
/// step that divides sample_dt and passes the stability heuristic.
double thermal_step(double max_rate, double sample_dt, double requested_dt);

}  // namespace mml
