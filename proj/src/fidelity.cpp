#include "mml/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mml/linalg.hpp"

namespace mml {

void LambdaQuadruple::validate() const {
  for (std::size_t i = 0; i < 4; ++i)
    if (!std::isfinite(lambda[i]) || std::abs(lambda[i]) > 1.0 + 1e-9) {
      std::ostringstream os;
      os << "lambda_" << i + 1 << " = " << lambda[i] << " outside [-1, 1]";
      throw ValidationError(os.str());
    }
}

double decode_fidelity_homogeneous(double lambda) {
  if (!std::isfinite(lambda) || std::abs(lambda) > 1.0 + 1e-9)
    throw ValidationError("lambda outside [-1, 1]");
  return 0.5 * (1.0 + lambda * lambda);
}

namespace {

double triple_fidelity(const std::array<double, 3>& u) { return 0.5 * (1.0 + (u[0] + u[1] + u[2]) / 3.0); }

}  // namespace

DecodeResult decode_fidelity_general(const LambdaQuadruple& q) {
  q.validate();
  std::array<double, 4> l;
  for (std::size_t i = 0; i < 4; ++i) l[i] = std::abs(q.lambda[i]);
  auto p = [&](int a, int b) { return l[static_cast<std::size_t>(a - 1)] * l[static_cast<std::size_t>(b - 1)]; };

  DecodeResult r;
  DecodeTriple sym;
  sym.descriptor = "four-mode{12|34,23|14,13|24}";
  sym.four_mode = true;
  sym.upsilon = {0.5 * (p(2, 3) + p(1, 4)), 0.5 * (p(1, 3) + p(2, 4)), 0.5 * (p(1, 2) + p(3, 4))};
  sym.fidelity = triple_fidelity(sym.upsilon);
  r.candidates.push_back(sym);

  static constexpr std::array<std::array<int, 3>, 4> threes = {
      {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}};
  for (const auto& m : threes) {
    DecodeTriple t;
    t.modes = m;
    t.descriptor = "three-mode{" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "," +
                   std::to_string(m[2]) + "}";
    t.upsilon = {p(m[0], m[1]), p(m[1], m[2]), p(m[2], m[0])};
    t.fidelity = triple_fidelity(t.upsilon);
    r.candidates.push_back(t);
  }

  r.best = r.candidates.front();
  for (const auto& c : r.candidates)
    if (c.fidelity > r.best.fidelity) r.best = c;
  r.fidelity = r.best.fidelity;
  r.three_mode_wins = !r.best.four_mode;
  return r;
}

double parity_from_lambdas(const LambdaQuadruple& q) {
  q.validate();
  return q.lambda[0] * q.lambda[1] * q.lambda[2] * q.lambda[3];
}

double parity_fidelity_bound(const LambdaQuadruple& q) {
  const double p = parity_from_lambdas(q);
  if (p < 0) throw ValidationError("parity bound needs a nonnegative parity expectation");
  return 0.5 * (1.0 + std::sqrt(p));
}

void QubitChannelAffine::validate(int samples) const {
  if (!Lambda.allFinite() || !b.allFinite()) throw ValidationError("qubit channel has non-finite entries");
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(Lambda);
  if (svd.singularValues().maxCoeff() > 1.0 + 1e-9)
    throw ValidationError("qubit channel: singular value of Lambda exceeds 1");
  // Fibonacci sphere points.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < samples; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / samples;
    const double r = std::sqrt(1.0 - z * z);
    const Eigen::Vector3d n(r * std::cos(golden * k), r * std::sin(golden * k), z);
    if ((Lambda * n + b).norm() > 1.0 + 1e-9)
      throw ValidationError("qubit channel maps a pure state outside the Bloch ball");
  }
}

QubitRecovery qubit_recovery_optimum(const QubitChannelAffine& ch) {
  ch.validate();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(ch.Lambda, Eigen::ComputeFullU | Eigen::ComputeFullV);
  QubitRecovery r;
  for (int i = 0; i < 3; ++i) r.upsilon[static_cast<std::size_t>(i)] = svd.singularValues()(i);
  r.fidelity = triple_fidelity(r.upsilon);
  r.R = svd.matrixU() * svd.matrixV().transpose();
  r.improper = r.R.determinant() < 0;
  return r;
}

double fopt_from_trace_norm(double trace_norm) { return 2.0 / 3.0 + trace_norm * trace_norm / 12.0; }

std::vector<double> theta1_from_lambda(const std::vector<double>& lambda) {
  std::vector<double> out(lambda.size());
  std::transform(lambda.begin(), lambda.end(), out.begin(), [](double l) { return l * l; });
  return out;
}

SignMatrixReport recovery_sign_matrices(const LogicalSet& logical, const std::array<Matrix, 3>& evolved,
                                        double t) {
  const FockSystem& sys = *logical.system;
  const auto d = static_cast<Eigen::Index>(sys.dim());
  for (const auto& X : evolved)
    if (X.rows() != d || X.cols() != d) throw ValidationError("evolved logical operator has wrong dimension");

  SignMatrixReport rep;
  rep.t = t;
  for (std::size_t i = 0; i < 3; ++i) {
    const Matrix herm = 0.5 * (evolved[i] + evolved[i].adjoint());
    rep.H[i] = hermitian_sign(herm);
    rep.traces[i] = (rep.H[i] * herm).trace().real();
  }
  rep.fidelity = 0.5 + (rep.traces[0] + rep.traces[1] + rep.traces[2]) / 12.0;
  rep.sigma3_trace_norm = trace_norm(0.5 * (evolved[2] + evolved[2].adjoint()));

  const Matrix S = rep.H[2] * rep.H[2];
  double dev = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Matrix target = Matrix::Zero(d, d);
      if (j == k) {
        target = S;
      } else {
        const int l = 3 - j - k;
        const double eps = ((k - j + 3) % 3 == 1) ? 1.0 : -1.0;  // cyclic (0,1,2)
        target = (I * eps) * rep.H[static_cast<std::size_t>(l)];
      }
      const Matrix diff = S * (rep.H[static_cast<std::size_t>(j)] * rep.H[static_cast<std::size_t>(k)] - target) * S;
      dev = std::max(dev, diff.cwiseAbs().maxCoeff());
    }
  rep.pauli_deviation = dev;

  const ChainOperators& ca = sys.chain(0);
  const ChainOperators& cb = sys.chain(1);
  const FockOperator& Id = sys.identity();
  const FockOperator pa = I * -1.0 * (ca.m1 * ca.m2);  // -i m1 m2
  const FockOperator pb = I * -1.0 * (cb.m1 * cb.m2);
  const FockOperator pa_plus = ca.Pi_G() * (Id + pa) * 0.5, pa_minus = ca.Pi_G() * (Id - pa) * 0.5;
  const FockOperator pb_plus = cb.Pi_G() * (Id + pb) * 0.5, pb_minus = cb.Pi_G() * (Id - pb) * 0.5;
  const Matrix hz_target = (pa_plus * pb_plus - pa_minus * pb_minus).dense();
  rep.hz_parity_deviation = (S * (rep.H[2] - hz_target) * S).cwiseAbs().maxCoeff();
  return rep;
}

SignMatrixReport recovery_sign_matrices(const LindbladSet& set, const LogicalSet& logical, double t,
                                        double dt) {
  if (set.system != logical.system)
    throw ValidationError("Lindblad set and logical operators must share one Fock system");
  const FockSystem& sys = *logical.system;
  if (sys.n_chains() != 2 || sys.chain(0).spec.L != sys.chain(1).spec.L || sys.chain(0).spec.L > 5)
    throw ValidationError("sign-matrix recovery needs two chains with L_a = L_b <= 5");
  EvolveOptions opt;
  opt.dt = dt;
  opt.t_max = t;
  opt.sample_every = std::max(1, static_cast<int>(std::llround(t / dt)));
  std::array<Matrix, 3> evolved;
  for (std::size_t i = 0; i < 3; ++i)
    evolved[i] = evolve(set, logical.sigma[i + 1].dense(), Direction::forward, opt, {}).final_operator;
  return recovery_sign_matrices(logical, evolved, t);
}

}  // namespace mml
