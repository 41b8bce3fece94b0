#pragma once

#include <functional>
#include <string>

namespace mml {

enum class SpectralFamily { super_ohmic, tabulated };

std::string to_string(SpectralFamily f);

/// Bath description. Only the products g^2 f(.) enter the dynamics, so the
/// density is parameterized by them directly.
///
/// super_ohmic: g^2 f(w) = g2f_delta * (w / delta)^2 * exp(-(w - delta) / omega_cut),
///              i.e. f(w) proportional to w^2 exp(-w / omega_cut).
/// tabulated:   g^2 f at w = 0, delta, 2 delta only.
struct SpectralDensity {
  SpectralFamily family = SpectralFamily::tabulated;
  double beta = 0.0;
  double delta = 1.0;
  double omega_cut = 5.0;
  double g2f_0 = 0.0;
  double g2f_delta = 0.0;
  double g2f_2delta = 0.0;

  static SpectralDensity super_ohmic(double g2f_delta, double beta, double delta, double omega_cut);
  static SpectralDensity tabulated(double g2f_0, double g2f_delta, double g2f_2delta, double beta,
                                   double delta);

  /// Throws ValidationError on negative values, non-positive delta/cutoff.
  void validate() const;
  /// g^2 f(|w|). Tabulated densities accept only |w| in {0, delta, 2 delta}.
  double g2f(double w) const;
};

/// phi(w) = g^2 f(|w|) (1 + tanh(beta w / 2)) / 2, evaluated as
/// g^2 f(|w|) / (1 + exp(-beta w)) so that detailed balance survives large beta w.
double phi(double omega, const SpectralDensity& s);

/// S(w) = (1/pi) P int_0^inf dE g^2 f(E) [w + E tanh(beta E / 2)] / ((|w| - E)(|w| + E)).
/// Throws UnsupportedFamilyError for tabulated densities.
double lamb_shift_S(double omega, const SpectralDensity& s, double rel_tol = 1e-11);

/// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
double integrate_gk(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double abs_tol = 0.0);

/// Coefficients of the Lamb-shift Hamiltonian in terms of bond occupations.
struct LambShiftCoefficients {
  double edge = 0.0;     // multiplies n_1 + n_{L-1}
  double bulk = 0.0;     // multiplies n_i, 2 <= i <= L-2
  double quartic = 0.0;  // multiplies n_{i-1} n_i, 2 <= i <= L-1
};

LambShiftCoefficients lamb_shift_coefficients(const SpectralDensity& s);

}  // namespace mml
