#include "mml/free_fermion.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "mml/fit.hpp"
#include "mml/linalg.hpp"

namespace mml {

namespace {

void check_chain(int L) {
  if (L < 2) throw ValidationError("chain length L must be >= 2, got " + std::to_string(L));
}

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0) throw ValidationError("times must be finite and >= 0");
    if (i > 0 && times[i] < times[i - 1]) throw ValidationError("times must be sorted ascending");
  }
}

// Row of m1 in exp(A t) for every requested time, by stepping.
template <typename Visit>
void step_row(const RealMatrix& A, const std::vector<double>& times, Visit&& visit) {
  const Eigen::Index n = A.rows();
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
  row(0) = 1.0;
  double tc = 0.0;
  double cached_gap = -1.0;
  RealMatrix S;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double gap = times[i] - tc;
    if (gap > 0) {
      if (std::abs(gap - cached_gap) > 1e-13 * std::max(1.0, gap)) {
        S = expm(A * gap);
        cached_gap = gap;
      }
      row = row * S;
      tc = times[i];
    }
    visit(i, row);
  }
}

}  // namespace

QuadraticGenerator kitaev_generator(int L, double delta) {
  check_chain(L);
  if (!(delta > 0)) throw ValidationError("gap delta must be > 0");
  QuadraticGenerator g;
  g.L = L;
  g.delta = delta;
  g.A = RealMatrix::Zero(2 * L, 2 * L);
  for (int j = 1; j <= L - 1; ++j) {
    const int g1 = 2 * j - 1, g2 = 2 * j;  // c_{2j}, c_{2j+1}
    g.A(g1, g2) = delta;
    g.A(g2, g1) = -delta;
  }
  return g;
}

double quench_zeta_bound(double delta, double epsilon) { return delta / epsilon; }

QuadraticGenerator quench_generator(int L, double delta, double epsilon, double zeta) {
  QuadraticGenerator g = kitaev_generator(L, delta);
  if (!(epsilon > 0)) throw ValidationError("perturbation scale epsilon must be > 0");
  if (!std::isfinite(zeta)) throw ValidationError("zeta must be finite");
  const double bound = quench_zeta_bound(delta, epsilon);
  if (!(std::abs(zeta) < bound)) {
    std::ostringstream os;
    os << "quench strength |zeta| = " << std::abs(zeta) << " outside the topological regime |zeta| < "
       << "delta/epsilon = " << bound;
    throw RegimeError(os.str());
  }
  g.epsilon = epsilon;
  g.zeta = zeta;
  // epsilon a_i^dagger a_i = epsilon (1 + i c_{2i-1} c_{2i}) / 2.
  for (int i = 1; i <= L; ++i) {
    const int p = 2 * i - 2, q = 2 * i - 1;
    g.A(p, q) += zeta * epsilon;
    g.A(q, p) -= zeta * epsilon;
  }
  return g;
}

Propagator propagate(const QuadraticGenerator& gen, double t) {
  if (!std::isfinite(t)) throw ValidationError("propagation time must be finite");
  Propagator p;
  p.t = t;
  p.O = expm(gen.A * t);
  const Eigen::Index n = p.O.rows();
  const double orth = (p.O.transpose() * p.O - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (orth > 1e-9) throw NumericalError("propagator lost orthogonality: " + std::to_string(orth));
  return p;
}

GroundCovariance ground_covariance(int L) {
  check_chain(L);
  GroundCovariance gc;
  gc.Gamma = RealMatrix::Zero(2 * L, 2 * L);
  for (int j = 1; j <= L - 1; ++j) {
    gc.Gamma(2 * j - 1, 2 * j) = 1.0;
    gc.Gamma(2 * j, 2 * j - 1) = -1.0;
  }
  gc.G = Matrix::Identity(2 * L, 2 * L) + I * gc.Gamma.cast<cplx>();
  return gc;
}

std::vector<double> lambda_quench(int L, double delta, double epsilon, double zeta,
                                  const std::vector<double>& times, QuenchMethod method) {
  check_times(times);
  const QuadraticGenerator gen = quench_generator(L, delta, epsilon, zeta);
  const Vector g0 = ground_covariance(L).G.col(0);
  std::vector<double> out(times.size());
  auto record = [&](std::size_t i, const Eigen::RowVectorXd& row) {
    const cplx lam = (row.cast<cplx>() * g0).value();
    if (std::abs(lam.imag()) > 1e-10) throw NumericalError("lambda acquired an imaginary part");
    out[i] = lam.real();
  };
  if (method == QuenchMethod::stepping) {
    step_row(gen.A, times, record);
  } else {
    for (std::size_t i = 0; i < times.size(); ++i) record(i, propagate(gen, times[i]).O.row(0));
  }
  return out;
}

std::vector<double> lambda_quench_averaged(int L, double delta, double epsilon,
                                           const std::vector<double>& zeta_grid,
                                           const std::vector<double>& times, QuenchMethod method) {
  if (zeta_grid.empty()) throw ValidationError("zeta grid is empty");
  check_times(times);
  for (double z : zeta_grid) quench_generator(L, delta, epsilon, z);

  const auto nz = static_cast<std::ptrdiff_t>(zeta_grid.size());
  std::vector<std::vector<double>> parts(zeta_grid.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < nz; ++k) {
    try {
      parts[static_cast<std::size_t>(k)] =
          lambda_quench(L, delta, epsilon, zeta_grid[static_cast<std::size_t>(k)], times, method);
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  std::vector<double> mean(times.size(), 0.0);
  for (const auto& p : parts)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += p[i];
  for (double& m : mean) m /= static_cast<double>(zeta_grid.size());
  return mean;
}

RealVector light_cone_profile(const QuadraticGenerator& gen, double t) {
  return propagate(gen, t).O.row(0).cwiseAbs().transpose();
}

int cumulative_front(const RealVector& w, double fraction) {
  const Eigen::Index n = w.size();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    acc += w(k) * w(k);
    if (k % 2 == 1 && acc >= fraction) return static_cast<int>(k / 2 + 1);
  }
  return static_cast<int>(n / 2);
}

int tail_front(const RealVector& w, double eta) {
  const Eigen::Index n = w.size();
  double acc = 0.0;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    acc += w(k) * w(k);
    if (k % 2 == 0 && acc >= eta) return static_cast<int>(k / 2 + 1);
  }
  return 1;
}

LightConeFit fit_light_cone(const QuadraticGenerator& gen, double eta, double t_cap) {
  const int L = gen.L;
  const double v_bound = gen.A.cwiseAbs().maxCoeff();
  if (!(v_bound > 0)) throw ValidationError("light cone needs a nonzero generator");
  const double tau = 1.0 / (4.0 * v_bound);
  const double target = L / 4.0;

  LightConeFit out;
  const RealMatrix S = expm(gen.A * tau);
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(gen.A.rows());
  row(0) = 1.0;
  for (int k = 1;; ++k) {
    row = row * S;
    const double t = k * tau;
    const int front = tail_front(row.cwiseAbs().transpose(), eta);
    out.times.push_back(t);
    out.fronts.push_back(front);
    if (front >= target || t >= t_cap) break;
  }

  std::vector<double> ts, fs;
  for (std::size_t i = 0; i < out.times.size(); ++i)
    if (out.fronts[i] >= L / 8.0) {
      ts.push_back(out.times[i]);
      fs.push_back(out.fronts[i]);
    }
  if (ts.size() < 3 || ts.front() == ts.back()) {
    ts.clear();
    fs.clear();
    for (std::size_t i = 0; i < out.times.size(); ++i) {
      ts.push_back(out.times[i]);
      fs.push_back(out.fronts[i]);
    }
  }
  const FitResult f = fit(FitModel::linear, ts, fs);
  out.intercept = f.params[0];
  out.velocity = f.params[1];
  if (!(out.velocity > 0)) throw NumericalError("light-cone front does not advance");
  return out;
}

double clustering_residual(const QuadraticGenerator& gen, double t) {
  const RealMatrix O = propagate(gen, t).O;
  const Eigen::Index e = O.rows() - 1;
  return std::abs(O(0, e) * O(e, 0));
}

SteadyWindow steady_window(const QuadraticGenerator& gen, double lo_fraction, double hi_fraction,
                           double fraction_tmax) {
  if (!(0 <= lo_fraction && lo_fraction < hi_fraction && hi_fraction <= 1))
    throw ValidationError("steady window fractions must satisfy 0 <= lo < hi <= 1");
  SteadyWindow w;
  w.v_fit = fit_light_cone(gen).velocity;
  w.t_max = fraction_tmax * gen.L / (2.0 * w.v_fit);
  w.t_lo = lo_fraction * w.t_max;
  w.t_hi = hi_fraction * w.t_max;
  return w;
}

double window_mean(const std::vector<double>& times, const std::vector<double>& values, double lo,
                   double hi) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= lo && times[i] <= hi) {
      acc += values[i];
      ++n;
    }
  if (n == 0) throw ValidationError("no samples inside the steady window");
  return acc / static_cast<double>(n);
}

std::vector<double> uniform_grid(double t_max, double dt) {
  if (!(dt > 0) || !(t_max >= 0) || !std::isfinite(t_max))
    throw ValidationError("time grid needs dt > 0 and finite t_max >= 0");
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 0.5));
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * dt;
  return t;
}

}  // namespace mml
