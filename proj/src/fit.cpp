#include "mml/fit.hpp"

#include <algorithm>
#include <cmath>

#include "mml/common.hpp"

namespace mml {

std::string to_string(FitModel m) {
  switch (m) {
    case FitModel::power: return "power";
    case FitModel::exponential: return "exponential";
    case FitModel::linear: return "linear";
    case FitModel::quadratic: return "quadratic";
  }
  return "linear";
}

FitResult fit(FitModel model, const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n != ys.size()) throw ValidationError("fit: xs and ys differ in length");
  if (n < 3) throw ValidationError("fit: need at least 3 points");

  std::vector<double> u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw ValidationError("fit: non-finite data");
    switch (model) {
      case FitModel::power:
        if (xs[i] <= 0 || ys[i] <= 0) throw ValidationError("fit: power model needs positive data");
        u[i] = std::log(xs[i]);
        v[i] = std::log(ys[i]);
        break;
      case FitModel::exponential:
        if (ys[i] <= 0) throw ValidationError("fit: exponential model needs positive ys");
        u[i] = xs[i];
        v[i] = std::log(ys[i]);
        break;
      case FitModel::linear:
        u[i] = xs[i];
        v[i] = ys[i];
        break;
      case FitModel::quadratic:
        u[i] = xs[i] * xs[i];
        v[i] = ys[i];
        break;
    }
  }

  double mu = 0, mv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= static_cast<double>(n);
  mv /= static_cast<double>(n);
  double suu = 0, suv = 0, svv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  const double scale = std::max(1.0, mu * mu);
  if (suu <= 1e-14 * scale * static_cast<double>(n))
    throw ValidationError("fit: degenerate design matrix");

  const double slope = suv / suu;
  const double icpt = mv - slope * mu;
  FitResult r;
  r.model = model;
  double ssr = 0;
  r.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.residuals[i] = v[i] - (icpt + slope * u[i]);
    ssr += r.residuals[i] * r.residuals[i];
  }
  const double s2 = ssr / static_cast<double>(n - 2);
  const double se_slope = std::sqrt(s2 / suu);
  const double se_icpt = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mu * mu / suu));
  r.r2 = svv > 0 ? std::clamp(1.0 - ssr / svv, 0.0, 1.0) : 1.0;

  switch (model) {
    case FitModel::power:
      r.params = {std::exp(icpt), slope};
      r.errors = {std::exp(icpt) * se_icpt, se_slope};
      break;
    case FitModel::exponential:
      r.params = {std::exp(icpt), -slope};
      r.errors = {std::exp(icpt) * se_icpt, se_slope};
      break;
    default:
      r.params = {icpt, slope};
      r.errors = {se_icpt, se_slope};
      break;
  }
  return r;
}

}  // namespace mml
