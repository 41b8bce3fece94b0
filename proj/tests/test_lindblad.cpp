#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "mml/fidelity.hpp"
#include "mml/lindblad.hpp"
#include "mml/linalg.hpp"
#include "oracles.hpp"

using namespace mml;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

SpectralDensity fig5_bath(double beta = 0.0) { return SpectralDensity::tabulated(4.0, 1.2, 0.36, beta, 1.0); }

EvolveOptions opts(double dt, double t_max, int sample_every) {
  EvolveOptions o;
  o.dt = dt;
  o.t_max = t_max;
  o.sample_every = sample_every;
  return o;
}

}  // namespace

TEST_CASE("jump catalogue") {
  const LindbladSet set = build_lindblad_set(ChainSpec{6, 'a'}, fig5_bath(0.8), false);
  std::map<std::string, double> rate;
  for (const auto& j : set.jumps) rate[j.label] = j.rate;
  // 3 diffusive (i = 2..L-1 over bonds), 2 per edge, 2 per adjacent bond pair.
  CHECK(set.jumps.size() == 4 + 4 + 2 * 4);
  CHECK(rate.count("a:L0_2") == 1);
  CHECK(rate.count("a:L0_5") == 1);
  CHECK(std::log(rate["a:L1+"] / rate["a:L1-"]) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::log(rate["a:L2+"] / rate["a:L2-"]) == doctest::Approx(0.8).epsilon(1e-12));
  for (const auto& j : set.jumps) {
    CHECK(is_bosonic(*set.system, j.op));
    CHECK(j.rate >= 0.0);
  }
  CHECK(set.hamiltonian.is_hermitian(1e-12));

  const LindbladSet so = build_lindblad_set(ChainSpec{6, 'a'}, SpectralDensity::super_ohmic(0.3, 1.0, 1.0, 5.0), false);
  for (const auto& j : so.jumps) CHECK(j.tag != EnergyTag::zero);
}

TEST_CASE("bosonic check agrees with the monomial expansion") {
  const FockSystem sys = build_mode_operators(ChainSpec{3, 'a'}, Representation::bond);
  const MonomialBasis basis(sys);
  const auto& ch = sys.chain(0);
  const FockOperator even = ch.m1 * ch.b[0] + ch.b[0].adjoint() * ch.b[1];
  const FockOperator odd = ch.m1 + ch.b[0] * ch.b[1];
  auto all_even = [&](const FockOperator& O) {
    for (const auto& t : basis.decompose(O))
      if (t.degree() % 2) return false;
    return true;
  };
  CHECK(is_bosonic(sys, even) == all_even(even));
  CHECK(is_bosonic(sys, odd) == all_even(odd));
  CHECK(is_bosonic(sys, even));
  CHECK_FALSE(is_bosonic(sys, odd));
}

TEST_CASE("size guards") {
  CHECK_THROWS_AS(build_lindblad_set(ChainSpec{2, 'a'}, fig5_bath(), false), ValidationError);
  CHECK_THROWS_AS(build_lindblad_set(ChainSpec{kLindbladMaxL + 1, 'a'}, fig5_bath(), false), DenseLimitError);
}

TEST_CASE("adjoint unitality and the m1 eigenoperator") {
  for (double beta : {0.0, 0.5, 3.0})
    for (auto rep : {Representation::bond, Representation::site}) {
      const LindbladSet set = build_lindblad_set(ChainSpec{4, 'a'}, fig5_bath(beta), false, rep);
      const Matrix Id = set.system->identity().dense();
      CHECK(max_abs(apply_lindbladian(set, Id, Direction::adjoint)) <= 1e-12);

      const auto& ch = set.system->chain(0);
      const Matrix m1 = ch.m1.dense();
      const Matrix got = apply_lindbladian(set, m1, Direction::adjoint);
      const double th = std::tanh(0.5 * beta);
      const Matrix g = (I * ch.gamma(1, 1) * ch.gamma(1, 2)).dense();
      // -2 g2f(delta) m1 (1 + s tanh(beta delta / 2) i g11 g12) / 2 with s the
      // orientation of the bond pair in the ground space.
      const double s = -((I * ch.gamma(1, 1) * ch.gamma(1, 2)) * ch.Pi_G()).trace().real() / 2.0;
      const Matrix expect = -1.2 * m1 * (Id + s * th * g);
      CHECK(max_abs(got - expect) <= 1e-12);
      if (beta == 0.0) CHECK(max_abs(got + 1.2 * m1) <= 1e-12);
    }
}

TEST_CASE("RK4 at infinite temperature") {
  const LindbladSet set = build_lindblad_set(ChainSpec{6, 'a'}, fig5_bath(), false);
  const Matrix m1 = set.system->chain(0).m1.dense();
  auto err = [&](double dt) {
    const auto r = evolve(set, m1, Direction::adjoint, opts(dt, 1.0, 1000000), {});
    return (r.final_operator - std::exp(-1.2) * m1).norm() / m1.norm();
  };
  const double e1 = err(4e-3), e2 = err(2e-3);
  CHECK(e2 <= 1e-6);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));

  const ThermalSeries lam = lambda_thermal(set, opts(2e-3, 1.0, 50));
  for (std::size_t i = 0; i < lam.times.size(); ++i)
    CHECK(std::abs(lam.values[i] - std::exp(-1.2 * lam.times[i])) <= 1e-6 * std::exp(-1.2 * lam.times[i]));
  CHECK(lam.max_local_error < 1e-8);
}

TEST_CASE("stability guard") {
  const LindbladSet set = build_lindblad_set(ChainSpec{4, 'a'}, fig5_bath(), false);
  const Matrix m1 = set.system->chain(0).m1.dense();
  CHECK_THROWS_AS(evolve(set, m1, Direction::adjoint, opts(0.5, 1.0, 1), {}), StabilityError);
}

TEST_CASE("forward evolution of a density operator") {
  const LindbladSet set = build_lindblad_set(ChainSpec{4, 'a'}, fig5_bath(1.0), false);
  std::mt19937_64 rng(12);
  const int d = static_cast<int>(set.kernel->dim());
  const Matrix A = oracle::random_matrix(d, rng);
  Matrix rho = A * A.adjoint();
  rho /= rho.trace().real();

  const SparseMatrix P = set.system->P_f().sparse();
  Observable tr = [](const Matrix& X) { return X.trace().real(); };
  Observable herm = [](const Matrix& X) { return (X - X.adjoint()).cwiseAbs().maxCoeff(); };
  Observable mineig = [](const Matrix& X) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (X + X.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  Observable par = [&](const Matrix& X) { return trace_product(X, P).real(); };
  const auto r = evolve(set, rho, Direction::forward, opts(2e-3, 1.0, 25), {tr, herm, mineig, par});
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    CHECK(std::abs(r.values[0][i] - 1.0) <= 1e-9);
    CHECK(r.values[1][i] <= 1e-9);
    CHECK(r.values[2][i] >= -1e-8);
    CHECK(std::abs(r.values[3][i] - r.values[3][0]) <= 1e-10);
  }
}

TEST_CASE("injected fermionic jump breaks parity conservation") {
  const LindbladSet set = build_lindblad_set(ChainSpec{4, 'a'}, fig5_bath(), false);
  const auto& ch = set.system->chain(0);
  const Matrix rho0 = ((set.system->identity() - I * (ch.m1 * ch.m2)) * ch.Pi_G()).dense() / 2.0;
  const SparseMatrix P = set.system->P_f().sparse();
  Observable par = [&](const Matrix& X) { return trace_product(X, P).real(); };
  const LindbladSet bad = with_extra_jumps(set, {JumpOperator{ch.m1, EnergyTag::injected, 1.0, "injected:m1"}});
  const auto r = evolve(bad, rho0, Direction::forward, opts(1e-3, 1.0, 100), {par});
  CHECK(std::abs(r.values[0].back() - r.values[0].front()) > 1e-4);
}

TEST_CASE("unitary evolution without a bath") {
  const LindbladSet set = build_lindblad_set(ChainSpec{4, 'a'}, SpectralDensity::tabulated(0, 0, 0, 0, 1.0), false);
  CHECK(set.jumps.empty());
  std::mt19937_64 rng(2);
  const Matrix X = oracle::random_matrix(static_cast<int>(set.kernel->dim()), rng);
  Observable hs = [](const Matrix& O) { return (O.adjoint() * O).trace().real(); };
  const auto r = evolve(set, X, Direction::adjoint, opts(1e-2, 2.0, 10), {hs});
  for (double v : r.values[0]) CHECK(std::abs(v - r.values[0][0]) <= 1e-9 * r.values[0][0]);

  const ThermalSeries f = fopt_global(set, opts(1e-2, 1.0, 10));
  for (double v : f.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finite-temperature initial slope of lambda") {
  for (double beta : {0.5, 2.0}) {
    const LindbladSet set = build_lindblad_set(ChainSpec{5, 'a'}, fig5_bath(beta), false);
    const double tmax = 0.01 / 1.2;
    const ThermalSeries s = lambda_thermal(set, opts(tmax / 200.0, tmax, 20));
    // Quadratic fit through the samples; the linear coefficient is the slope.
    Eigen::MatrixXd V(s.times.size(), 3);
    Eigen::VectorXd y(s.times.size());
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      V(i, 0) = 1.0;
      V(i, 1) = s.times[i];
      V(i, 2) = s.times[i] * s.times[i];
      y(i) = s.values[i];
    }
    const Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
    const double expect = -1.2 * (1.0 - std::tanh(0.5 * beta));
    CHECK(c(1) == doctest::Approx(expect).epsilon(0.01));
  }
  const LindbladSet cold = build_lindblad_set(ChainSpec{5, 'a'}, fig5_bath(60.0), false);
  const ThermalSeries s = lambda_thermal(cold, opts(1e-3, 0.01, 10));
  CHECK(std::abs(s.values.back() - 1.0) <= 1e-12);
}

TEST_CASE("figures of merit at infinite temperature") {
  const LindbladSet set = build_lindblad_set(ChainSpec{5, 'a'}, fig5_bath(), false);
  const auto o = opts(2e-3, 1.0, 50);
  const ThermalSeries lam = lambda_thermal(set, o);
  const ThermalSeries t1 = theta1_direct(set, o);
  const ThermalSeries t2 = theta2_thermal(set, o);
  REQUIRE(t1.values.size() == lam.values.size());
  CHECK(t1.values.front() == doctest::Approx(1.0));
  CHECK(t2.values.front() == doctest::Approx(1.0));
  for (std::size_t i = 0; i < lam.values.size(); ++i) {
    const double ref = std::exp(-2.4 * lam.times[i]);
    CHECK(std::abs(t1.values[i] - lam.values[i] * lam.values[i]) <= 1e-9);
    CHECK(std::abs(t1.values[i] - ref) <= 1e-6);
    CHECK(std::abs(t2.values[i] - t1.values[i]) <= 1e-8);
  }
}

TEST_CASE("global fidelity dominates decoding and grows with L") {
  const auto o = opts(2e-3, 1.0, 50);
  std::vector<double> at_one;
  for (int L : {4, 5, 6}) {
    const LindbladSet set = build_lindblad_set(ChainSpec{L, 'a'}, fig5_bath(), false);
    const ThermalSeries f = fopt_global(set, o);
    const ThermalSeries lam = lambda_thermal(set, o);
    CHECK(f.values.front() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const double dec = decode_fidelity_homogeneous(lam.values[i]);
      CHECK(f.values[i] >= dec - 1e-9);
      if (f.times[i] > 0.1) CHECK(f.values[i] > dec);
    }
    at_one.push_back(f.values.back());
  }
  CHECK(at_one[0] < at_one[1]);
  CHECK(at_one[1] < at_one[2]);
}

TEST_CASE("Lamb shift Hamiltonian") {
  const auto bath = SpectralDensity::super_ohmic(0.3, 0.0, 1.0, 5.0);
  const LindbladSet off = build_lindblad_set(ChainSpec{5, 'a'}, bath, false);
  const LindbladSet on = build_lindblad_set(ChainSpec{5, 'a'}, bath, true);
  const Matrix dH = on.hamiltonian.dense() - off.hamiltonian.dense();
  Matrix offdiag = dH;
  offdiag.diagonal().setZero();
  CHECK(max_abs(offdiag) == 0.0);
  // No interaction at infinite temperature: the shift is a sum of single-bond terms.
  const auto& ch = on.system->chain(0);
  Matrix expect = Matrix::Zero(dH.rows(), dH.cols());
  const auto& c = on.lamb_shift_coefficients;
  for (int j = 1; j <= 4; ++j) expect += ((j == 1 || j == 4) ? c.edge : c.bulk) * ch.bond_number(j).dense();
  CHECK(max_abs(dH - expect) <= 1e-8 * std::abs(c.bulk));
  CHECK_THROWS_AS(build_lindblad_set(ChainSpec{5, 'a'}, fig5_bath(), true), UnsupportedFamilyError);
}
