#include "mml/selftest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>

#include "mml/clifford_fock.hpp"
#include "mml/free_fermion.hpp"
#include "mml/lindblad.hpp"
#include "mml/linalg.hpp"

namespace mml {

namespace {

SelfCheck check(std::string name, double residual, double tol, std::string detail = {}, bool lower = false) {
  SelfCheck c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tol;
  c.lower_bound = lower;
  c.pass = lower ? residual > tol : residual <= tol;
  c.detail = std::move(detail);
  return c;
}

double quench_vs_dense(int L, std::mt19937_64& rng) {
  const double delta = 1.0, eps = 1.0, zeta = 0.5;
  const QuadraticGenerator gen = quench_generator(L, delta, eps, zeta);
  const FockSystem sys = build_mode_operators(ChainSpec{L, 'a'}, Representation::site);
  const Matrix H = quadratic_hamiltonian(sys, 0, gen.A).dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  const Matrix m1 = sys.chain(0).m1.dense();
  const Matrix PiG = sys.chain(0).Pi_G().dense();
  const double norm = PiG.trace().real();

  std::uniform_real_distribution<double> ud(0.0, 10.0);
  std::vector<double> times(20);
  for (double& t : times) t = ud(rng);
  std::sort(times.begin(), times.end());
  const std::vector<double> lam = lambda_quench(L, delta, eps, zeta, times, QuenchMethod::direct);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Vector ph = (-I * times[i] * es.eigenvalues().cast<cplx>()).array().exp();
    const Matrix U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    const Matrix m1t = U.adjoint() * m1 * U;
    const double dense = (m1t * m1 * PiG).trace().real() / norm;
    worst = std::max(worst, std::abs(dense - lam[i]));
  }
  return worst;
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
  std::vector<SelfCheck> out;
  std::mt19937_64 rng(20240611);

  for (int L : {3, 4})
    out.push_back(check("free-fermion vs dense Heisenberg lambda(t), L=" + std::to_string(L) + ", 20 times",
                        quench_vs_dense(L, rng), 1e-10));

  const SpectralDensity bath = SpectralDensity::tabulated(4.0, 1.2, 0.36, 0.0, 1.0);
  const LindbladSet set = build_lindblad_set(ChainSpec{4, 'a'}, bath, false);
  const ChainOperators& ch = set.system->chain(0);

  {
    const Matrix Id = set.system->identity().dense();
    out.push_back(check("adjoint unitality L*(1) = 0, L=4",
                        apply_lindbladian(set, Id, Direction::adjoint).cwiseAbs().maxCoeff(), 1e-12));
  }
  {
    EvolveOptions opt;
    opt.dt = 1e-3;
    opt.t_max = 1.0;
    opt.sample_every = 1000;
    const ThermalSeries s = lambda_thermal(set, opt);
    const double exact = std::exp(-1.2);
    out.push_back(check("RK4 lambda(1/delta) vs exp(-g2f(delta) t) at beta=0, L=4",
                        std::abs(s.values.back() - exact) / exact, 1e-6));
  }

  const FockOperator Id = set.system->identity();
  const FockOperator& PiG = ch.Pi_G();
  const Matrix rho0 = ((Id - I * (ch.m1 * ch.m2)) * PiG).dense() / PiG.trace().real();
  const SparseMatrix P = set.system->P_f().sparse();
  Observable parity = [&](const Matrix& rho) { return trace_product(rho, P).real(); };
  EvolveOptions opt;
  opt.dt = 1e-3;
  opt.t_max = 1.0;
  opt.sample_every = 10;
  auto drift = [&](const LindbladSet& s) {
    const EvolutionResult r = evolve(s, rho0, Direction::forward, opt, {parity});
    double d = 0.0;
    for (double v : r.values[0]) d = std::max(d, std::abs(v - r.values[0][0]));
    parity_expectation(*s.system, r.final_operator, ParityKind::full);
    return d;
  };
  out.push_back(check("parity conserved under bosonic jumps, L=4, t=1/delta", drift(set), 1e-10));
  {
    JumpOperator odd{ch.m1, EnergyTag::injected, 1.0, "injected:m1"};
    out.push_back(check("parity drift with an injected fermionic jump, L=4, t=1/delta",
                        drift(with_extra_jumps(set, {odd})), 1e-4, "", true));
  }

  {
    const LogicalSet ls = logical_operators(ChainSpec{3, 'a'}, ChainSpec{3, 'b'});
    std::array<Matrix, 4> s;
    for (std::size_t i = 0; i < 4; ++i) s[i] = ls.sigma[i].dense();
    double dev = 0.0;
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        Matrix target = Matrix::Zero(s[0].rows(), s[0].cols());
        if (i == j) {
          target = s[0];
        } else {
          const int k = 6 - i - j;
          const double e = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
          target = (I * e) * s[static_cast<std::size_t>(k)];
        }
        dev = std::max(dev, (s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)] - target)
                                .cwiseAbs()
                                .maxCoeff());
      }
    out.push_back(check("logical Pauli algebra sigma_i sigma_j = delta_ij sigma_0 + i eps_ijk sigma_k, L=3+3",
                        dev, 1e-12));
  }
  {
    const double tn = trace_norm((ch.m1 * PiG).dense());
    out.push_back(check("||m1 Pi_G||_1 = 2, L=4", std::abs(tn - 2.0), 1e-12));
  }
  return out;
}

std::string format_selftest(const std::vector<SelfCheck>& checks) {
  std::string out;
  char buf[512];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%s  %-80s residual=%.3e %s %.1e%s%s\n", c.pass ? "PASS" : "FAIL",
                  c.name.c_str(), c.residual, c.lower_bound ? ">" : "<=", c.tolerance,
                  c.detail.empty() ? "" : "  ", c.detail.c_str());
    out += buf;
  }
  return out;
}

}  // namespace mml
