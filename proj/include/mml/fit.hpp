#pragma once

#include <string>
#include <vector>

namespace mml {

/// power:       y = a x^b        (log-log regression), params {a, b}
/// exponential: y = a exp(-k x)  (log-linear regression), params {a, k}
/// linear:      y = a + b x, params {a, b}
/// quadratic:   y = a + b x^2, params {a, b}
enum class FitModel { power, exponential, linear, quadratic };

std::string to_string(FitModel m);

struct FitResult {
  FitModel model = FitModel::linear;
  std::vector<double> params;
  std::vector<double> errors;     // standard errors of params
  double r2 = 0.0;                // in the regression space
  std::vector<double> residuals;  // in the regression space
};

/// Least squares with standard errors from the residual variance. Needs at
/// least 3 points; log-space models need positive x (power) and y.
FitResult fit(FitModel model, const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace mml
