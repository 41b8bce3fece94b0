#include "mml/spectral.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "mml/common.hpp"

namespace mml {

std::string to_string(SpectralFamily f) {
  return f == SpectralFamily::super_ohmic ? "super-ohmic" : "tabulated";
}

SpectralDensity SpectralDensity::super_ohmic(double g2f_delta, double beta, double delta,
                                             double omega_cut) {
  SpectralDensity s;
  s.family = SpectralFamily::super_ohmic;
  s.g2f_delta = g2f_delta;
  s.beta = beta;
  s.delta = delta;
  s.omega_cut = omega_cut;
  s.g2f_0 = 0.0;
  s.g2f_2delta = s.g2f(2 * delta);
  return s;
}

SpectralDensity SpectralDensity::tabulated(double g2f_0, double g2f_delta, double g2f_2delta,
                                           double beta, double delta) {
  SpectralDensity s;
  s.family = SpectralFamily::tabulated;
  s.g2f_0 = g2f_0;
  s.g2f_delta = g2f_delta;
  s.g2f_2delta = g2f_2delta;
  s.beta = beta;
  s.delta = delta;
  return s;
}

void SpectralDensity::validate() const {
  if (!(delta > 0) || !std::isfinite(delta)) throw ValidationError("bath: delta must be > 0");
  if (!(beta >= 0) || !std::isfinite(beta)) throw ValidationError("bath: beta must be >= 0");
  if (!(g2f_0 >= 0) || !(g2f_delta >= 0) || !(g2f_2delta >= 0))
    throw ValidationError("bath: g^2 f values must be >= 0");
  if (family == SpectralFamily::super_ohmic && (!(omega_cut > 0) || !std::isfinite(omega_cut)))
    throw ValidationError("bath: cutoff omega_cut must be > 0");
}

double SpectralDensity::g2f(double w) const {
  const double a = std::abs(w);
  if (family == SpectralFamily::super_ohmic) {
    const double x = a / delta;
    return g2f_delta * x * x * std::exp(-(a - delta) / omega_cut);
  }
  const double tol = 1e-12 * delta;
  if (a <= tol) return g2f_0;
  if (std::abs(a - delta) <= tol) return g2f_delta;
  if (std::abs(a - 2 * delta) <= tol) return g2f_2delta;
  throw ValidationError("tabulated spectral density is only defined at 0, delta and 2 delta");
}

double phi(double omega, const SpectralDensity& s) {
  const double x = s.beta * omega;
  // (1 + tanh(x/2)) / 2 = 1 / (1 + exp(-x))
  const double occ = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  return s.g2f(omega) * occ;
}

namespace {

struct GKResult {
  double value;
  double error;
};

GKResult gk15(const std::function<double(double)>& f, double a, double b) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = wk[7] * fc, g = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double v = f(c - h * xk[i]) + f(c + h * xk[i]);
    k += wk[i] * v;
    if (i % 2 == 1) g += wg[i / 2] * v;
  }
  return {k * h, std::abs((k - g) * h)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             GKResult whole) {
  if (whole.error <= tol || depth >= 60) return whole.value;
  const double m = 0.5 * (a + b);
  const GKResult l = gk15(f, a, m), r = gk15(f, m, b);
  if (std::abs((l.value + r.value) - whole.value) <= tol && l.error + r.error <= tol)
    return l.value + r.value;
  return adapt(f, a, m, 0.5 * tol, depth + 1, l) + adapt(f, m, b, 0.5 * tol, depth + 1, r);
}

}  // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double abs_tol) {
  if (a == b) return 0.0;
  const GKResult whole = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole.value));
  return adapt(f, a, b, std::max(tol, 1e-300), 0, whole);
}

double lamb_shift_S(double omega, const SpectralDensity& s, double rel_tol) {
  s.validate();
  if (s.family != SpectralFamily::super_ohmic)
    throw UnsupportedFamilyError(
        "Lamb shift integrals need a spectral density with a high-energy cutoff "
        "(super-ohmic family); tabulated densities are not integrable");
  if (s.g2f_delta == 0.0) return 0.0;

  const double w = std::abs(omega);
  const double beta = s.beta;
  const double cut = s.omega_cut;
  // h(E) = g^2 f(E) [omega + E tanh(beta E/2)] / (w + E)
  auto h = [&](double E) {
    return s.g2f(E) * (omega + E * std::tanh(0.5 * beta * E)) / (w + E);
  };
  // Absolute floor so that near-cancelling contributions do not force
  // unreachable relative tolerances on the pieces.
  const double floor = 1e-16 * s.g2f_delta * (cut + w);

  double total = 0.0;
  if (w == 0.0) {
    auto integrand = [&](double E) { return E > 0 ? -h(E) / E : 0.0; };
    const double end = 60.0 * cut;
    for (double a = 0.0; a < end; a += cut)
      total += integrate_gk(integrand, a, std::min(a + cut, end), rel_tol, floor);
    return total / std::numbers::pi;
  }

  // Symmetrized principal value on [0, 2w]: int_0^w [h(w - s) - h(w + s)] / s ds,
  // on log-spaced panels toward the pole.
  auto sym = [&](double x) { return (h(w - x) - h(w + x)) / x; };
  double hi = w;
  for (int k = 0; k < 40; ++k) {
    const double lo = 0.5 * hi;
    total += integrate_gk(sym, lo, hi, rel_tol, floor);
    hi = lo;
  }
  total += integrate_gk(sym, 0.0, hi, rel_tol, floor);

  // Regular tail on [2w, 2w + 60 cutoff].
  auto tail = [&](double E) { return h(E) / (w - E); };
  const double start = 2 * w, end = 2 * w + 60.0 * cut;
  for (double a = start; a < end; a += cut)
    total += integrate_gk(tail, a, std::min(a + cut, end), rel_tol, floor);
  return total / std::numbers::pi;
}

LambShiftCoefficients lamb_shift_coefficients(const SpectralDensity& s) {
  const double d = s.delta;
  const double S0 = lamb_shift_S(0.0, s);
  const double Sd = lamb_shift_S(d, s), Smd = lamb_shift_S(-d, s);
  const double S2 = lamb_shift_S(2 * d, s), Sm2 = lamb_shift_S(-2 * d, s);
  LambShiftCoefficients c;
  c.edge = Sd - Smd - S0 + S2;
  c.bulk = 2.0 * (S2 - S0);
  c.quartic = 2.0 * S0 - S2 - Sm2;
  return c;
}

}  // namespace mml
