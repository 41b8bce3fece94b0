#include "mml/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <sstream>

#include "mml/fidelity.hpp"
#include "mml/lindblad.hpp"

namespace mml {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string, Scenario>& scenario_names() {
  static const std::map<std::string, Scenario> m = {
      {"quench", Scenario::quench},
      {"quench-averaged", Scenario::quench_averaged},
      {"thermal-beta0", Scenario::thermal_beta0},
      {"thermal-finiteT", Scenario::thermal_finite_t},
      {"memory-time-scaling", Scenario::memory_time_scaling},
      {"arrhenius", Scenario::arrhenius}};
  return m;
}

// Runs body(i) for i in [0, n) in parallel and rethrows the first failure
// (lowest index) after the loop.
template <typename Body>
void parallel_map(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errs(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errs[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::string lambda_normalization(bool lamb_shift) {
  return std::string("lambda=tr[D*(m1) m1 Pi_G]/tr[Pi_G];lamb_shift=") + (lamb_shift ? "on" : "off");
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [k, v] : scenario_names())
    if (v == s) return k;
  return "quench";
}

Scenario scenario_from_string(const std::string& s) {
  const auto& m = scenario_names();
  const auto it = m.find(s);
  if (it == m.end()) {
    std::string names;
    for (const auto& [k, v] : m) names += (names.empty() ? "" : ", ") + k;
    throw ValidationError("unknown scenario '" + s + "' (expected one of: " + names + ")");
  }
  return it->second;
}

std::vector<double> QuenchParams::zeta_grid() const {
  std::vector<double> g(static_cast<std::size_t>(std::max(zeta_points, 0)));
  for (int k = 0; k < zeta_points; ++k)
    g[static_cast<std::size_t>(k)] =
        zeta_points == 1 ? zeta_min : zeta_min + (zeta_max - zeta_min) * k / (zeta_points - 1);
  return g;
}

SpectralDensity BathParams::density(double beta_override) const {
  if (family == SpectralFamily::super_ohmic)
    return SpectralDensity::super_ohmic(g2f_delta, beta_override, delta, omega_cut * delta);
  return SpectralDensity::tabulated(g2f_0, g2f_delta, g2f_2delta, beta_override, delta);
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("table " + name + ": row width does not match header");
  rows.push_back(std::move(row));
}

double Dataset::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics)
    if (k == key) return v;
  throw Error("dataset has no metric '" + key + "'");
}

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) bad.push_back(msg);
  };
  need(!name.empty(), "name must not be empty");

  const bool is_quench = scenario == Scenario::quench || scenario == Scenario::quench_averaged;
  if (is_quench) {
    const auto& q = quench;
    need(q.L >= 2, "quench.L must be >= 2");
    need(q.epsilon > 0 && std::isfinite(q.epsilon), "quench.epsilon must be > 0");
    need(!q.delta_over_epsilon.empty(), "quench.delta_over_epsilon must not be empty");
    double rmin = std::numeric_limits<double>::infinity();
    for (double r : q.delta_over_epsilon) {
      need(r > 0 && std::isfinite(r), "quench.delta_over_epsilon entries must be > 0");
      rmin = std::min(rmin, r);
    }
    // |zeta| < delta / epsilon for every delta in the sweep.
    if (scenario == Scenario::quench) {
      need(std::isfinite(q.zeta) && std::abs(q.zeta) < rmin,
           "quench.zeta outside the topological regime |zeta| < delta/epsilon for the smallest gap");
    } else {
      need(q.zeta_points >= 1, "quench.zeta_points must be >= 1");
      need(q.zeta_min <= q.zeta_max, "quench.zeta_min must not exceed quench.zeta_max");
      need(std::max(std::abs(q.zeta_min), std::abs(q.zeta_max)) < rmin,
           "quench zeta grid leaves the topological regime |zeta| < delta/epsilon");
    }
    need(q.dt_delta > 0, "quench.dt_delta must be > 0");
    need(0 <= q.window_lo && q.window_lo < q.window_hi && q.window_hi <= 1,
         "quench window must satisfy 0 <= window_lo < window_hi <= 1");
    need(q.tmax_fraction > 0 && q.tmax_fraction <= 1, "quench.tmax_fraction must lie in (0, 1]");
    need(q.output_stride >= 1, "quench.output_stride must be >= 1");
  } else {
    const auto& b = bath;
    const auto& t = thermal;
    need(b.delta > 0 && std::isfinite(b.delta), "bath.delta must be > 0");
    need(b.g2f_0 >= 0 && b.g2f_delta >= 0 && b.g2f_2delta >= 0, "bath g2f values must be >= 0");
    need(b.omega_cut > 0, "bath.omega_cut must be > 0");
    need(b.beta >= 0, "bath.beta must be >= 0");
    need(!(b.lamb_shift && b.family == SpectralFamily::tabulated && scenario != Scenario::arrhenius),
         "bath.lamb_shift needs the super-ohmic family (tabulated densities have no cutoff)");
    need(t.t_max > 0, "thermal.t_max must be > 0");
    need(t.sample_dt > 0 && t.sample_dt <= t.t_max, "thermal.sample_dt must lie in (0, t_max]");
    need(t.dt >= 0, "thermal.dt must be >= 0 (0 = automatic)");
    need(t.F_thr > 0.5 && t.F_thr < 1, "thermal.F_thr must lie in (1/2, 1)");
    need(t.t_eval > 0, "thermal.t_eval must be > 0");

    std::vector<int> Ls;
    if (scenario == Scenario::arrhenius) {
      Ls.push_back(long_run ? t.arrhenius_L_long : t.arrhenius_L);
      need(!t.g2f_delta_list.empty(), "thermal.g2f_delta_list must not be empty");
      for (double g : t.g2f_delta_list) need(g > 0, "thermal.g2f_delta_list entries must be > 0");
      need(t.beta_delta_grid.size() >= 3, "thermal.beta_delta_grid needs at least 3 points");
      for (double x : t.beta_delta_grid) need(x >= 0, "thermal.beta_delta_grid entries must be >= 0");
    } else {
      Ls = t.L_list;
      need(!Ls.empty(), "thermal.L_list must not be empty");
    }
    if (scenario == Scenario::thermal_finite_t) {
      need(!t.beta_list.empty(), "thermal.beta_list must not be empty");
      for (double x : t.beta_list) need(x >= 0, "thermal.beta_list entries must be >= 0");
    }
    if (scenario == Scenario::memory_time_scaling) {
      need(Ls.size() >= 3, "memory-time-scaling needs at least 3 chain lengths");
      need(!(t.diffusive_control && b.family != SpectralFamily::tabulated),
           "thermal.diffusive_control needs a tabulated bath (phi(+-2 delta) is forced to 0)");
    }
    for (int L : Ls) {
      need(L >= 3, "chain length L = " + std::to_string(L) + " below 3");
      need(L <= 9 || long_run || L > kLindbladMaxL,
           "chain length L = " + std::to_string(L) + " above 9 requires the long-run flag");
    }
    if (bad.empty())
      for (int L : Ls)
        if (L > kLindbladMaxL)
          throw DenseLimitError("dense backend limit: L = " + std::to_string(L) + " exceeds " +
                                std::to_string(kLindbladMaxL));
  }

  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw ValidationError(msg);
  }
}

double memory_time(const std::vector<double>& times, const std::vector<double>& F, double F_thr) {
  if (times.size() != F.size() || times.empty()) throw ValidationError("memory_time: empty or mismatched series");
  if (!(F[0] > F_thr)) throw ValidationError("memory_time: F(0) must exceed the threshold");
  for (std::size_t i = 1; i < F.size(); ++i) {
    if (F[i] < F_thr) {
      const double f0 = F[i - 1], f1 = F[i];
      if (std::abs(f0 - f1) >= 0.005)
        throw ValidationError("memory_time: samples too coarse near the crossing (|dF| >= 0.005)");
      const double t0 = times[i - 1], t1 = times[i];
      return t0 + (f0 - F_thr) * (t1 - t0) / (f0 - f1);
    }
  }
  std::ostringstream os;
  os << "threshold not reached: F stays above " << F_thr << " up to t = " << times.back()
     << " (final F = " << F.back() << ")";
  throw NoCrossingError(os.str(), F.back());
}

double thermal_step(double max_rate, double sample_dt, double requested_dt) {
  if (requested_dt > 0) return requested_dt;
  const double n = std::max(1.0, std::ceil(sample_dt * max_rate / 0.1 * (1.0 + 1e-12)));
  return sample_dt / n;
}

// ---------------------------------------------------------------------------
// Quench

Dataset run_quench_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const QuenchParams& q = cfg.quench;
  const bool averaged = cfg.scenario == Scenario::quench_averaged;
  const std::vector<double> grid = averaged ? q.zeta_grid() : std::vector<double>{q.zeta};
  double zeta_fast = 0.0;
  for (double z : grid) zeta_fast = std::max(zeta_fast, std::abs(z));

  struct Point {
    double delta = 0, t_lo = 0, t_hi = 0, t_max = 0, v_fit = kNaN, lambda_st = 1;
    std::vector<double> times, lambda;
  };
  std::vector<Point> pts(q.delta_over_epsilon.size());

  auto compute = [&](std::size_t i) {
    Point& p = pts[i];
    p.delta = q.delta_over_epsilon[i] * q.epsilon;
    if (zeta_fast > 0) {
      const SteadyWindow w = steady_window(quench_generator(q.L, p.delta, q.epsilon, zeta_fast), q.window_lo,
                                           q.window_hi, q.tmax_fraction);
      p.v_fit = w.v_fit;
      p.t_max = w.t_max;
    } else {
      // No light cone to fit; the evolution is trivial.
      p.t_max = q.tmax_fraction * q.L / (2.0 * p.delta);
    }
    p.t_lo = q.window_lo * p.t_max;
    p.t_hi = q.window_hi * p.t_max;
    p.times = uniform_grid(p.t_max, q.dt_delta / p.delta);
    p.lambda = averaged ? lambda_quench_averaged(q.L, p.delta, q.epsilon, grid, p.times)
                        : lambda_quench(q.L, p.delta, q.epsilon, q.zeta, p.times);
    p.lambda_st = window_mean(p.times, p.lambda, p.t_lo, p.t_hi);
  };
  if (averaged) {
    for (std::size_t i = 0; i < pts.size(); ++i) compute(i);  // parallel inside the zeta average
  } else {
    parallel_map(pts.size(), compute);
  }

  Dataset ds;
  ds.scenario = to_string(cfg.scenario);
  ds.backend = "free-fermion";
  ds.normalization = lambda_normalization(false);

  Table series{"lambda", {"delta", "epsilon", averaged ? "zeta_points" : "zeta", "t", "lambda"}, {}};
  Table steady{"steady",
               {"delta", "epsilon", "epsilon_over_delta", "lambda_st", "one_minus_lambda_st", "t_lo", "t_hi",
                "v_fit"},
               {}};
  for (const Point& p : pts) {
    const Cell zcell = averaged ? Cell(static_cast<long long>(grid.size())) : Cell(q.zeta);
    for (std::size_t k = 0; k < p.times.size(); k += static_cast<std::size_t>(q.output_stride))
      series.add({p.delta, q.epsilon, zcell, p.times[k], p.lambda[k]});
    steady.add({p.delta, q.epsilon, q.epsilon / p.delta, p.lambda_st, 1.0 - p.lambda_st, p.t_lo, p.t_hi, p.v_fit});
  }
  ds.tables = {series, steady};

  std::vector<double> xs, ys;
  bool fittable = pts.size() >= 3;
  for (const Point& p : pts) {
    xs.push_back(q.epsilon / p.delta);
    ys.push_back(1.0 - p.lambda_st);
    if (!(ys.back() > 0)) fittable = false;
  }
  double max_dev = 0.0;
  for (const Point& p : pts) max_dev = std::max(max_dev, std::abs(1.0 - p.lambda_st));
  ds.metrics.emplace_back("max_abs_one_minus_lambda_st", max_dev);
  if (fittable) {
    const FitResult f = fit(FitModel::power, xs, ys);
    ds.metrics.emplace_back("exponent", f.params[1]);
    ds.metrics.emplace_back("exponent_error", f.errors[1]);
    ds.metrics.emplace_back("prefactor", f.params[0]);
    ds.metrics.emplace_back("r2", f.r2);
  } else {
    ds.metrics.emplace_back("exponent", kNaN);
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Thermal

namespace {

struct ThermalCurve {
  int L = 0;
  double beta = 0;
  std::vector<double> times, lambda, F_decode, F_global, theta1, theta2;
  double max_local_error = 0;
  double dt = 0;
};

EvolveOptions thermal_options(const LindbladSet& set, const ThermalParams& t, double delta, double t_max) {
  EvolveOptions opt;
  const double sample_dt = t.sample_dt / delta;
  opt.dt = thermal_step(set.kernel->max_rate(), sample_dt, t.dt / delta);
  opt.t_max = t_max;
  opt.sample_every = std::max(1, static_cast<int>(std::llround(sample_dt / opt.dt)));
  opt.kernel = t.kernel;
  return opt;
}

ThermalCurve thermal_curve(int L, const SpectralDensity& bath, bool lamb_shift, const ThermalParams& t,
                           double t_max, bool global, bool theta2) {
  const LindbladSet set = build_lindblad_set(ChainSpec{L, 'a'}, bath, lamb_shift);
  const EvolveOptions opt = thermal_options(set, t, bath.delta, t_max);
  ThermalCurve c;
  c.L = L;
  c.beta = bath.beta;
  c.dt = opt.dt;
  const ThermalSeries lam = lambda_thermal(set, opt);
  c.times = lam.times;
  c.lambda = lam.values;
  c.max_local_error = lam.max_local_error;
  for (double l : c.lambda) c.F_decode.push_back(decode_fidelity_homogeneous(std::clamp(l, -1.0, 1.0)));
  c.theta1 = theta1_from_lambda(c.lambda);
  if (global) {
    const ThermalSeries f = fopt_global(set, opt);
    c.F_global = f.values;
    c.max_local_error = std::max(c.max_local_error, f.max_local_error);
  } else {
    c.F_global.assign(c.times.size(), kNaN);
  }
  if (theta2) {
    const ThermalSeries th = theta2_thermal(set, opt);
    c.theta2 = th.values;
    c.max_local_error = std::max(c.max_local_error, th.max_local_error);
  } else {
    c.theta2.assign(c.times.size(), kNaN);
  }
  return c;
}

std::string thermal_backend(const ThermalParams& t) {
  return "lindblad-dense-rk4/" + to_string(t.kernel);
}

}  // namespace

Dataset run_thermal_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.scenario != Scenario::thermal_beta0 && cfg.scenario != Scenario::thermal_finite_t)
    throw ValidationError("run_thermal_sweep needs scenario thermal-beta0 or thermal-finiteT");
  const ThermalParams& t = cfg.thermal;
  const BathParams& b = cfg.bath;
  const std::vector<double> betas =
      cfg.scenario == Scenario::thermal_beta0 ? std::vector<double>{0.0} : t.beta_list;

  std::vector<std::pair<int, double>> points;
  for (int L : t.L_list)
    for (double beta : betas) points.emplace_back(L, beta);
  std::vector<ThermalCurve> curves(points.size());
  parallel_map(points.size(), [&](std::size_t i) {
    curves[i] = thermal_curve(points[i].first, b.density(points[i].second), b.lamb_shift, t, t.t_max / b.delta,
                              t.global_fidelity, t.theta2);
  });

  Dataset ds;
  ds.scenario = to_string(cfg.scenario);
  ds.backend = thermal_backend(t);
  ds.normalization = lambda_normalization(b.lamb_shift);
  Table tab{"thermal",
            {"L", "beta", "t", "lambda", "F_decode", "F_global", "theta1", "theta2"},
            {}};
  double min_gap = std::numeric_limits<double>::infinity();
  double max_err_lambda = 0.0, max_err_fdec = 0.0;
  const double g2fd = b.density(0.0).g2f(b.delta);
  for (const auto& c : curves) {
    ds.max_local_error = std::max(ds.max_local_error, c.max_local_error);
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      tab.add({static_cast<long long>(c.L), c.beta, c.times[k], c.lambda[k], c.F_decode[k], c.F_global[k],
               c.theta1[k], c.theta2[k]});
      if (std::isfinite(c.F_global[k])) min_gap = std::min(min_gap, c.F_global[k] - c.F_decode[k]);
      if (c.beta == 0.0 && !b.lamb_shift) {
        const double exact = std::exp(-g2fd * c.times[k]);
        max_err_lambda = std::max(max_err_lambda, std::abs(c.lambda[k] - exact) / exact);
        max_err_fdec = std::max(max_err_fdec, std::abs(c.F_decode[k] - 0.5 * (1 + exact * exact)));
      }
    }
  }
  ds.tables = {tab};
  ds.metrics.emplace_back("min_global_minus_decode", std::isfinite(min_gap) ? min_gap : kNaN);
  if (cfg.scenario == Scenario::thermal_beta0 && !b.lamb_shift) {
    ds.metrics.emplace_back("max_rel_error_lambda_vs_analytic", max_err_lambda);
    ds.metrics.emplace_back("max_abs_error_F_decode_vs_analytic", max_err_fdec);
  }
  ds.metrics.emplace_back("max_local_error", ds.max_local_error);
  return ds;
}

Dataset run_memory_time_scaling(const ExperimentConfig& cfg) {
  cfg.validate();
  const ThermalParams& t = cfg.thermal;
  const BathParams& b = cfg.bath;

  struct Variant {
    std::string name;
    SpectralDensity bath;
  };
  std::vector<Variant> variants{{"full", b.density(b.beta)}};
  if (t.diffusive_control) {
    SpectralDensity d = b.density(b.beta);
    d.g2f_2delta = 0.0;
    variants.push_back({"diffusive", d});
  }

  struct Run {
    std::size_t variant = 0;
    int L = 0;
    ThermalSeries F;
    double t_star = kNaN;
  };
  std::vector<Run> runs;
  for (std::size_t v = 0; v < variants.size(); ++v)
    for (int L : t.L_list) runs.push_back({v, L, {}, kNaN});

  parallel_map(runs.size(), [&](std::size_t i) {
    Run& r = runs[i];
    const LindbladSet set = build_lindblad_set(ChainSpec{r.L, 'a'}, variants[r.variant].bath, b.lamb_shift);
    const EvolveOptions opt = thermal_options(set, t, b.delta, t.t_max / b.delta);
    r.F = fopt_global(set, opt, t.F_thr);
    r.t_star = memory_time(r.F.times, r.F.values, t.F_thr);
  });

  Dataset ds;
  ds.scenario = to_string(cfg.scenario);
  ds.backend = thermal_backend(t);
  ds.normalization = lambda_normalization(b.lamb_shift) + ";F_thr=" + std::to_string(t.F_thr);
  Table tstar{"tstar", {"variant", "L", "t_star"}, {}};
  Table curves{"fidelity", {"variant", "L", "t", "F_global"}, {}};
  for (const Run& r : runs) {
    ds.max_local_error = std::max(ds.max_local_error, r.F.max_local_error);
    tstar.add({variants[r.variant].name, static_cast<long long>(r.L), r.t_star});
    for (std::size_t k = 0; k < r.F.times.size(); ++k)
      curves.add({variants[r.variant].name, static_cast<long long>(r.L), r.F.times[k], r.F.values[k]});
  }
  ds.tables = {tstar, curves};

  for (std::size_t v = 0; v < variants.size(); ++v) {
    std::vector<double> Ls, ts;
    for (const Run& r : runs)
      if (r.variant == v) {
        Ls.push_back(r.L);
        ts.push_back(r.t_star);
      }
    const std::string p = variants[v].name + "_";
    const FitResult lin = fit(FitModel::linear, Ls, ts);
    const FitResult quad = fit(FitModel::quadratic, Ls, ts);
    ds.metrics.emplace_back(p + "monotone", strictly_increasing(ts) ? 1.0 : 0.0);
    ds.metrics.emplace_back(p + "linear_slope", lin.params[1]);
    ds.metrics.emplace_back(p + "linear_slope_error", lin.errors[1]);
    ds.metrics.emplace_back(p + "linear_r2", lin.r2);
    ds.metrics.emplace_back(p + "quadratic_coefficient", quad.params[1]);
    ds.metrics.emplace_back(p + "quadratic_r2", quad.r2);
  }
  ds.metrics.emplace_back("max_local_error", ds.max_local_error);
  return ds;
}

Dataset run_arrhenius(const ExperimentConfig& cfg) {
  cfg.validate();
  const ThermalParams& t = cfg.thermal;
  const BathParams& b = cfg.bath;
  const int L = cfg.long_run ? t.arrhenius_L_long : t.arrhenius_L;
  const double t_eval = t.t_eval / b.delta;

  struct Point {
    double g2f = 0, beta_delta = 0, F_global = kNaN, F_decode = kNaN, lambda = kNaN, err = 0;
  };
  std::vector<Point> pts;
  for (double g : t.g2f_delta_list)
    for (double x : t.beta_delta_grid) pts.push_back({g, x});

  parallel_map(pts.size(), [&](std::size_t i) {
    Point& p = pts[i];
    const SpectralDensity bath =
        SpectralDensity::super_ohmic(p.g2f, p.beta_delta / b.delta, b.delta, b.omega_cut * b.delta);
    const ThermalCurve c = thermal_curve(L, bath, b.lamb_shift, t, t_eval, true, false);
    p.lambda = c.lambda.back();
    p.F_decode = c.F_decode.back();
    p.F_global = c.F_global.back();
    p.err = c.max_local_error;
  });

  Dataset ds;
  ds.scenario = to_string(cfg.scenario);
  ds.backend = thermal_backend(t);
  ds.normalization = lambda_normalization(b.lamb_shift) + ";family=super-ohmic;L=" + std::to_string(L);
  Table tab{"arrhenius",
            {"L", "g2f_delta", "beta_delta", "t", "lambda", "F_decode", "F_global", "loss_decode", "loss_global"},
            {}};
  for (const Point& p : pts) {
    ds.max_local_error = std::max(ds.max_local_error, p.err);
    tab.add({static_cast<long long>(L), p.g2f, p.beta_delta, t_eval, p.lambda, p.F_decode, p.F_global,
             1.0 - p.F_decode, 1.0 - p.F_global});
  }
  ds.tables = {tab};

  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t gi = 0; gi < t.g2f_delta_list.size(); ++gi) {
    std::vector<double> xs, rec, dec;
    for (const Point& p : pts)
      if (p.g2f == t.g2f_delta_list[gi]) {
        xs.push_back(p.beta_delta);
        rec.push_back(1.0 - p.F_global);
        dec.push_back(1.0 - p.F_decode);
      }
    const std::string key = "g" + std::to_string(gi) + "_";
    ds.metrics.emplace_back(key + "g2f_delta", t.g2f_delta_list[gi]);
    bool positive = true;
    for (std::size_t k = 0; k < xs.size(); ++k) positive = positive && rec[k] > 0 && dec[k] > 0;
    if (!positive) {
      ds.metrics.emplace_back(key + "k_recovery", kNaN);
      ds.metrics.emplace_back(key + "k_decoding", kNaN);
      min_ratio = kNaN;
      continue;
    }
    const FitResult fr = fit(FitModel::exponential, xs, rec);
    const FitResult fd = fit(FitModel::exponential, xs, dec);
    ds.metrics.emplace_back(key + "k_recovery", fr.params[1]);
    ds.metrics.emplace_back(key + "k_recovery_error", fr.errors[1]);
    ds.metrics.emplace_back(key + "r2_recovery", fr.r2);
    ds.metrics.emplace_back(key + "k_decoding", fd.params[1]);
    ds.metrics.emplace_back(key + "k_decoding_error", fd.errors[1]);
    ds.metrics.emplace_back(key + "r2_decoding", fd.r2);
    const double ratio = fr.params[1] / fd.params[1];
    ds.metrics.emplace_back(key + "ratio", ratio);
    if (!std::isnan(min_ratio)) min_ratio = std::min(min_ratio, ratio);
  }
  ds.metrics.emplace_back("min_ratio", min_ratio);
  ds.metrics.emplace_back("max_local_error", ds.max_local_error);
  return ds;
}

Dataset run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::quench:
    case Scenario::quench_averaged: return run_quench_sweep(cfg);
    case Scenario::thermal_beta0:
    case Scenario::thermal_finite_t: return run_thermal_sweep(cfg);
    case Scenario::memory_time_scaling: return run_memory_time_scaling(cfg);
    case Scenario::arrhenius: return run_arrhenius(cfg);
  }
  throw ValidationError("unknown scenario");
}

}  // namespace mml
