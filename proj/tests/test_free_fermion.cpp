#include <doctest.h>

#include <random>

#include "mml/clifford_fock.hpp"
#include "mml/free_fermion.hpp"
#include "mml/linalg.hpp"
#include "oracles.hpp"

using namespace mml;

namespace {

template <class D>
double max_abs(const Eigen::MatrixBase<D>& m) {
  return m.cwiseAbs().maxCoeff();
}

// Dense Heisenberg lambda(t) through the Fock-space Hamiltonian built from A.
std::vector<double> dense_lambda(int L, const QuadraticGenerator& gen, const std::vector<double>& times) {
  const FockSystem sys = build_mode_operators(ChainSpec{L, 'a'});
  const Matrix H = quadratic_hamiltonian(sys, 0, gen.A).dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  const Matrix m1 = sys.chain(0).m1.dense(), P = sys.chain(0).Pi_G().dense();
  std::vector<double> out;
  for (double t : times) {
    const Vector ph = (I * t * es.eigenvalues().cast<cplx>()).array().exp();
    const Matrix U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    out.push_back(((U * m1 * U.adjoint()) * m1 * P).trace().real() / P.trace().real());
  }
  return out;
}

}  // namespace

TEST_CASE("sweet-point generator") {
  SUBCASE("L=2: one bond, rank 2") {
    const auto g = kitaev_generator(2, 1.5);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g.A);
    CHECK(lu.rank() == 2);
    const auto ev = oracle::hermitian_eigenvalues((I * g.A.cast<cplx>()).eval());
    CHECK(ev[0] == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("zero modes drop out") {
    for (int L : {2, 5, 9}) {
      const auto g = kitaev_generator(L, 1.0);
      CHECK(g.A.col(0).cwiseAbs().maxCoeff() == 0.0);
      CHECK(g.A.col(2 * L - 1).cwiseAbs().maxCoeff() == 0.0);
      CHECK(antisymmetry_residual(g.A) <= 1e-12);
    }
  }
  SUBCASE("L=4 spectrum of iA") {
    const auto ev = oracle::hermitian_eigenvalues((I * kitaev_generator(4, 1.0).A.cast<cplx>()).eval());
    const std::vector<double> expect{-1, -1, -1, 0, 0, 1, 1, 1};
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(ev[k] - expect[k]) <= 1e-12);
  }
}

TEST_CASE("quench generator") {
  CHECK(max_abs(quench_generator(6, 1.0, 1.0, 0.0).A - kitaev_generator(6, 1.0).A) == 0.0);
  const auto g = quench_generator(6, 1.0, 1.0, 0.5);
  CHECK(antisymmetry_residual(g.A) <= 1e-12);
  const auto ev = oracle::hermitian_eigenvalues((I * g.A.cast<cplx>()).eval());
  // Gapped spectrum: the two smallest |eigenvalues| are the split zero modes,
  // everything else stays away from zero.
  std::vector<double> mags;
  for (double e : ev) mags.push_back(std::abs(e));
  std::sort(mags.begin(), mags.end());
  CHECK(mags[2] > 0.25);
  CHECK_THROWS_AS(quench_generator(6, 1.0, 1.0, 2.0), RegimeError);
  CHECK_THROWS_AS(quench_generator(6, 1.0, 1.0, -1.0), RegimeError);
  CHECK_NOTHROW(quench_generator(6, 1.0, 1.0, 0.99));
}

TEST_CASE("propagator") {
  const auto g = quench_generator(4, 1.0, 1.0, 0.5);
  CHECK(max_abs(propagate(g, 0.0).O - Eigen::MatrixXd::Identity(8, 8)) <= 1e-15);
  const Eigen::MatrixXd P = propagate(g, 1.0).O;
  CHECK(max_abs(P - oracle::taylor_expm(g.A)) <= 1e-10);
  QuadraticGenerator neg = g;
  neg.A = -g.A;
  CHECK(max_abs(P * propagate(neg, 1.0).O - Eigen::MatrixXd::Identity(8, 8)) <= 1e-10);
  CHECK(max_abs(P.transpose() * P - Eigen::MatrixXd::Identity(8, 8)) <= 1e-9);
  CHECK(P.determinant() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ground covariance") {
  const auto gc = ground_covariance(5);
  const Matrix sym = gc.G + gc.G.transpose();
  CHECK(max_abs(sym - 2.0 * Matrix::Identity(10, 10)) <= 1e-15);
  CHECK(max_abs(gc.Gamma + gc.Gamma.transpose()) == 0.0);
  // <i m1 m2> = i G(m1, m2) vanishes.
  CHECK(std::abs(gc.G(0, 9)) == 0.0);

  // Dense oracle at L=3: tr[c_k c_l Pi_G] / tr Pi_G.
  const FockSystem sys = build_mode_operators(ChainSpec{3, 'a'});
  const auto& ch = sys.chain(0);
  const Matrix P = ch.Pi_G().dense();
  const auto g3 = ground_covariance(3);
  double worst = 0.0;
  for (int k = 0; k < 6; ++k)
    for (int l = 0; l < 6; ++l) {
      const cplx v = (ch.c[k].dense() * ch.c[l].dense() * P).trace() / P.trace();
      worst = std::max(worst, std::abs(v - g3.G(k, l)));
    }
  CHECK(worst <= 1e-12);
  // The bond pair expectation is +-1 depending on orientation; magnitude 1.
  const cplx bond = I * g3.G(1, 2);
  CHECK(std::abs(std::abs(bond) - 1.0) <= 1e-15);
}

TEST_CASE("lambda_quench") {
  const std::vector<double> times = uniform_grid(20.0, 0.5);
  SUBCASE("zeta = 0 keeps lambda at 1") {
    for (double v : lambda_quench(12, 1.0, 1.0, 0.0, times)) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("stepping and direct agree") {
    const auto a = lambda_quench(20, 2.0, 1.0, 0.5, times, QuenchMethod::stepping);
    const auto b = lambda_quench(20, 2.0, 1.0, 0.5, times, QuenchMethod::direct);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
  }
  SUBCASE("dense Heisenberg oracle at L = 3, 4") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ud(0.0, 15.0);
    for (int L : {3, 4}) {
      std::vector<double> ts(20);
      for (double& t : ts) t = ud(rng);
      std::sort(ts.begin(), ts.end());
      const auto gen = quench_generator(L, 1.0, 1.0, 0.5);
      const auto ref = dense_lambda(L, gen, ts);
      const auto got = lambda_quench(L, 1.0, 1.0, 0.5, ts, QuenchMethod::direct);
      for (std::size_t i = 0; i < ts.size(); ++i) CHECK(std::abs(ref[i] - got[i]) <= 1e-10);
    }
  }
  SUBCASE("bounded by one") {
    for (double zeta : {-0.9, -0.3, 0.2, 0.7})
      for (double v : lambda_quench(16, 1.0, 1.0, zeta, times)) CHECK(std::abs(v) <= 1.0 + 1e-9);
  }
  SUBCASE("times must be non-negative and non-decreasing") {
    CHECK_THROWS_AS(lambda_quench(6, 1.0, 1.0, 0.1, {1.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(lambda_quench(6, 1.0, 1.0, 0.1, {-1.0}), ValidationError);
  }
}

TEST_CASE("lambda_quench_averaged") {
  const std::vector<double> times = uniform_grid(10.0, 0.25);
  for (double v : lambda_quench_averaged(10, 1.0, 1.0, {0.0}, times)) CHECK(v == doctest::Approx(1.0));
  const auto single = lambda_quench_averaged(10, 1.0, 1.0, {0.4}, times);
  const auto ref = lambda_quench(10, 1.0, 1.0, 0.4, times);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(single[i] == ref[i]);
  const auto two = lambda_quench_averaged(10, 1.0, 1.0, {0.2, 0.6}, times);
  const auto a = lambda_quench(10, 1.0, 1.0, 0.2, times), b = lambda_quench(10, 1.0, 1.0, 0.6, times);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(two[i] - 0.5 * (a[i] + b[i])) <= 1e-15);
  CHECK_THROWS_AS(lambda_quench_averaged(10, 1.0, 1.0, {}, times), ValidationError);
}

TEST_CASE("light cone profile") {
  const auto g = quench_generator(40, 1.0, 1.0, 0.5);
  const RealVector w0 = light_cone_profile(g, 0.0);
  CHECK(w0(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w0.tail(w0.size() - 1).cwiseAbs().maxCoeff() <= 1e-15);
  for (double t : {0.5, 3.0, 7.0}) CHECK(light_cone_profile(g, t).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));

  // Front where the cumulative weight crosses 99% grows at most linearly.
  std::vector<double> ts, fronts;
  for (double t = 1.0; t <= 12.0; t += 1.0) {
    ts.push_back(t);
    fronts.push_back(cumulative_front(light_cone_profile(g, t), 0.99));
  }
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(fronts[i] <= 3.0 + 2.0 * ts[i]);
}

TEST_CASE("steady window and clustering at L=60") {
  const auto g = quench_generator(60, 1.0, 1.0, 0.5);
  const SteadyWindow w = steady_window(g);
  CHECK(w.v_fit > 0.3);
  CHECK(w.v_fit < 2.0);
  CHECK(w.t_lo < w.t_hi);
  CHECK(w.t_hi <= w.t_max);
  for (double t = 0.0; t < 60.0 / (4.0 * w.v_fit); t += 0.5) CHECK(clustering_residual(g, t) <= 1e-6);
}

TEST_CASE("window mean and uniform grid") {
  const auto ts = uniform_grid(1.0, 0.1);
  REQUIRE(ts.size() == 11);
  CHECK(ts.back() == doctest::Approx(1.0));
  std::vector<double> ys(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ys[i] = ts[i];
  CHECK(window_mean(ts, ys, 0.45, 0.75) == doctest::Approx(0.6));
  CHECK_THROWS_AS(window_mean(ts, ys, 2.0, 3.0), ValidationError);
}
