#include "mml/linalg.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>
#include <random>

namespace mml {

RealMatrix expm(const RealMatrix& A) {
  if (A.rows() != A.cols()) throw ValidationError("expm needs a square matrix");
  if (!A.allFinite()) throw ValidationError("expm argument is not finite");
  const Eigen::Index n = A.rows();
  // Higham (2005), degree 13.
  static constexpr double b[] = {64764752532480000.0,
                                 32382376266240000.0,
                                 7771770303897600.0,
                                 1187353796428800.0,
                                 129060195264000.0,
                                 10559470521600.0,
                                 670442572800.0,
                                 33522128640.0,
                                 1323241920.0,
                                 40840800.0,
                                 960960.0,
                                 16380.0,
                                 182.0,
                                 1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  const RealMatrix X = A / std::ldexp(1.0, s);

  const RealMatrix Id = RealMatrix::Identity(n, n);
  const RealMatrix X2 = X * X;
  const RealMatrix X4 = X2 * X2;
  const RealMatrix X6 = X4 * X2;
  const RealMatrix U =
      X * (X6 * (b[13] * X6 + b[11] * X4 + b[9] * X2) + b[7] * X6 + b[5] * X4 + b[3] * X2 + b[1] * Id);
  const RealMatrix V =
      X6 * (b[12] * X6 + b[10] * X4 + b[8] * X2) + b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * Id;
  RealMatrix R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) R = R * R;
  return R;
}

double trace_norm(const Matrix& H) {
  if (H.rows() != H.cols()) throw ValidationError("trace_norm needs a square matrix");
  const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
  const double anti = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (anti > 1e-9 * scale)
    throw ValidationError("trace_norm expects a Hermitian operator (anti-Hermitian residual " +
                          std::to_string(anti / scale) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_norm_parity(const Matrix& H) {
  const Eigen::Index n = H.rows();
  if (n != H.cols()) throw ValidationError("trace_norm needs a square matrix");
  std::vector<Eigen::Index> even, odd;
  for (Eigen::Index i = 0; i < n; ++i)
    (std::popcount(static_cast<std::uint64_t>(i)) % 2 == 0 ? even : odd).push_back(i);
  if (even.empty() || odd.empty()) return trace_norm(H);
  const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
  const double anti = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (anti > 1e-9 * scale)
    throw ValidationError("trace_norm expects a Hermitian operator (anti-Hermitian residual " +
                          std::to_string(anti / scale) + ")");
  const Matrix ee = H(even, even), oo = H(odd, odd), eo = H(even, odd);
  const double diag_blocks = std::max(ee.cwiseAbs().maxCoeff(), oo.cwiseAbs().maxCoeff());
  const double off_block = eo.cwiseAbs().maxCoeff();
  const double tiny = 1e-14 * scale;
  if (diag_blocks <= tiny) return 2.0 * trace_norm_general(eo);
  if (off_block <= tiny) return trace_norm(ee) + trace_norm(oo);
  return trace_norm(H);
}

double trace_norm_general(const Matrix& X) {
  if (X.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(X);
  return svd.singularValues().sum();
}

Matrix hermitian_sign(const Matrix& H, double rel_zero) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  const RealVector& e = es.eigenvalues();
  const double cut = rel_zero * std::max(e.cwiseAbs().maxCoeff(), 1e-300);
  RealVector sg(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) sg(i) = std::abs(e(i)) <= cut ? 0.0 : (e(i) > 0 ? 1.0 : -1.0);
  return es.eigenvectors() * sg.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_radius_hermitian(const SparseMatrix& H, int iterations) {
  const Eigen::Index n = H.rows();
  if (n == 0) return 0.0;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
  v.normalize();
  double est = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Vector w = H * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    est = nw;
    v = w / nw;
  }
  // Power iteration approaches from below; pad slightly.
  return est * 1.01;
}

double antisymmetry_residual(const RealMatrix& A) { return (A + A.transpose()).cwiseAbs().maxCoeff(); }

cplx trace_product(const Matrix& X, const SparseMatrix& Y) {
  cplx acc = 0.0;
  for (Eigen::Index r = 0; r < Y.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(Y, r); it; ++it) acc += it.value() * X(it.col(), r);
  return acc;
}

}  // namespace mml
