#include "mml/kernels.hpp"

#include <cmath>

#include "mml/linalg.hpp"

namespace mml {

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::reference: return "reference";
    case KernelKind::sparse: return "sparse";
    case KernelKind::monomial: return "monomial";
    case KernelKind::automatic: return "automatic";
  }
  return "automatic";
}

KernelKind kernel_from_string(const std::string& s) {
  if (s == "reference") return KernelKind::reference;
  if (s == "sparse") return KernelKind::sparse;
  if (s == "monomial") return KernelKind::monomial;
  if (s == "automatic" || s == "auto") return KernelKind::automatic;
  throw ValidationError("unknown kernel '" + s + "'");
}

MonomialMatrix MonomialMatrix::adjoint() const {
  MonomialMatrix a;
  const std::size_t n = row.size();
  a.row.assign(n, -1);
  a.val.assign(n, 0.0);
  a.col_of_row.assign(n, -1);
  for (std::size_t c = 0; c < n; ++c) {
    if (row[c] < 0) continue;
    const auto r = static_cast<std::size_t>(row[c]);
    a.row[r] = static_cast<int>(c);
    a.val[r] = std::conj(val[c]);
    a.col_of_row[c] = static_cast<int>(r);
  }
  return a;
}

std::optional<MonomialMatrix> to_monomial(const SparseMatrix& m, double tol) {
  const auto n = static_cast<std::size_t>(m.cols());
  MonomialMatrix mm;
  mm.row.assign(n, -1);
  mm.val.assign(n, 0.0);
  mm.col_of_row.assign(n, -1);
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (std::abs(it.value()) <= tol) continue;
      const auto c = static_cast<std::size_t>(it.col());
      if (mm.row[c] >= 0 || mm.col_of_row[static_cast<std::size_t>(r)] >= 0) return std::nullopt;
      mm.row[c] = static_cast<int>(r);
      mm.val[c] = it.value();
      mm.col_of_row[static_cast<std::size_t>(r)] = static_cast<int>(c);
    }
  return mm;
}

std::optional<RealVector> real_diagonal(const SparseMatrix& m, double tol) {
  RealVector d = RealVector::Zero(m.rows());
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (std::abs(it.value()) <= tol) continue;
      if (it.col() != r || std::abs(it.value().imag()) > tol) return std::nullopt;
      d(r) = it.value().real();
    }
  return d;
}

LindbladKernel::LindbladKernel(const FockOperator& H, const std::vector<FockOperator>& jumps)
    : dim_(H.dim()), H_(H.sparse()) {
  if (!H.is_hermitian(1e-12)) throw ValidationError("Lindblad Hamiltonian is not Hermitian");
  K_.resize(H_.rows(), H_.cols());
  for (const auto& j : jumps) {
    if (j.dim() != dim_) throw ValidationError("jump operator dimension mismatch");
    J_.push_back(j.sparse());
    Jadj_.emplace_back(j.sparse().adjoint());
    JT_.emplace_back(j.sparse().transpose());
    K_ = SparseMatrix(K_ + SparseMatrix(Jadj_.back() * J_.back()));
  }
  K_.prune(cplx(0.0), 1e-300);
  K_.makeCompressed();

  auto hd = real_diagonal(H_);
  auto kd = real_diagonal(K_);
  monomial_ = hd.has_value() && kd.has_value();
  if (monomial_) {
    for (const auto& j : J_) {
      auto mm = to_monomial(j);
      if (!mm) {
        monomial_ = false;
        break;
      }
      Jm_adj_.push_back(mm->adjoint());
      Jm_.push_back(std::move(*mm));
    }
  }
  if (monomial_) {
    h_diag_ = *hd;
    k_diag_ = *kd;
    max_rate_ = k_diag_.maxCoeff() + (h_diag_.maxCoeff() - h_diag_.minCoeff());
  } else {
    Jm_.clear();
    Jm_adj_.clear();
    const double k_norm = spectral_radius_hermitian(K_);
    const cplx shift = H.trace() / static_cast<double>(dim_);
    SparseMatrix Hs = H_;
    for (Eigen::Index i = 0; i < Hs.rows(); ++i) Hs.coeffRef(i, i) -= shift;
    max_rate_ = k_norm + 2.0 * spectral_radius_hermitian(Hs);
  }
}

KernelKind LindbladKernel::resolve(KernelKind k) const {
  if (k == KernelKind::automatic) return monomial_ ? KernelKind::monomial : KernelKind::sparse;
  if (k == KernelKind::monomial && !monomial_)
    throw ValidationError("monomial kernel requested but the Lindblad set is not diagonal/monomial");
  return k;
}

void LindbladKernel::apply(const Matrix& X, Matrix& Y, Direction dir, KernelKind kind) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  if (X.rows() != d || X.cols() != d) throw ValidationError("operator dimension mismatch");
  if (&X == &Y) throw ValidationError("Lindbladian output must not alias its input");
  switch (resolve(kind)) {
    case KernelKind::reference: apply_reference(X, Y, dir); break;
    case KernelKind::sparse: apply_sparse(X, Y, dir); break;
    default: apply_monomial(X, Y, dir); break;
  }
}

void LindbladKernel::apply_reference(const Matrix& X, Matrix& Y, Direction dir) const {
  const Matrix H = Matrix(H_);
  const Matrix K = Matrix(K_);
  const cplx s = dir == Direction::forward ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
  Y = s * (H * X - X * H) - 0.5 * (K * X + X * K);
  for (const auto& js : J_) {
    const Matrix J = Matrix(js);
    if (dir == Direction::forward)
      Y += J * X * J.adjoint();
    else
      Y += J.adjoint() * X * J;
  }
}

namespace {

// y += alpha * A x for CSR A.
inline void csr_matvec(const SparseMatrix& A, const cplx* x, cplx* y, cplx alpha) {
  const auto* outer = A.outerIndexPtr();
  const auto* inner = A.innerIndexPtr();
  const cplx* val = A.valuePtr();
  for (Eigen::Index r = 0; r < A.outerSize(); ++r) {
    cplx acc = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += val[k] * x[inner[k]];
    y[r] += alpha * acc;
  }
}

// y += alpha * sum_k X(:,k) * f(B(j,k)) over row j of CSR B, f = conj or identity.
inline void csr_row_combination(const SparseMatrix& B, Eigen::Index j, bool conj, const Matrix& X,
                                cplx* y, cplx alpha) {
  const auto* outer = B.outerIndexPtr();
  const auto* inner = B.innerIndexPtr();
  const cplx* val = B.valuePtr();
  const Eigen::Index n = X.rows();
  for (auto k = outer[j]; k < outer[j + 1]; ++k) {
    const cplx w = alpha * (conj ? std::conj(val[k]) : val[k]);
    const cplx* xc = X.col(inner[k]).data();
    for (Eigen::Index i = 0; i < n; ++i) y[i] += w * xc[i];
  }
}

}  // namespace

void LindbladKernel::apply_sparse(const Matrix& X, Matrix& Y, Direction dir) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Y.resize(n, n);
  const bool fwd = dir == Direction::forward;
  const cplx s = fwd ? cplx(0.0, -1.0) : cplx(0.0, 1.0);

#pragma omp parallel
  {
    Vector t(n);
#pragma omp for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx* y = Y.col(j).data();
      std::fill(y, y + n, cplx(0.0));
      const cplx* xj = X.col(j).data();
      // s (H X - X H) - (K X + X K) / 2; H and K are Hermitian.
      csr_matvec(H_, xj, y, s);
      csr_row_combination(H_, j, true, X, y, -s);
      csr_matvec(K_, xj, y, -0.5);
      csr_row_combination(K_, j, true, X, y, -0.5);
      for (std::size_t q = 0; q < J_.size(); ++q) {
        t.setZero();
        if (fwd) {
          // (J X J^dagger)(:,j) = J * sum_k X(:,k) conj(J(j,k))
          csr_row_combination(J_[q], j, true, X, t.data(), 1.0);
          csr_matvec(J_[q], t.data(), y, 1.0);
        } else {
          // (J^dagger X J)(:,j) = J^dagger * sum_k X(:,k) J(k,j)
          csr_row_combination(JT_[q], j, false, X, t.data(), 1.0);
          csr_matvec(Jadj_[q], t.data(), y, 1.0);
        }
      }
    }
  }
}

void LindbladKernel::apply_monomial(const Matrix& X, Matrix& Y, Direction dir) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Y.resize(n, n);
  const bool fwd = dir == Direction::forward;
  const double hs = fwd ? -1.0 : 1.0;
  const std::vector<MonomialMatrix>& jumps = fwd ? Jm_ : Jm_adj_;
  const double* h = h_diag_.data();
  const double* kd = k_diag_.data();

#pragma omp parallel for schedule(static)
  for (Eigen::Index oc = 0; oc < n; ++oc) {
    cplx* y = Y.col(oc).data();
    const cplx* x = X.col(oc).data();
    for (Eigen::Index r = 0; r < n; ++r)
      y[r] = cplx(-0.5 * (kd[r] + kd[oc]), hs * (h[r] - h[oc])) * x[r];
    // Forward: J X J^dagger. Adjoint: J^dagger X J, i.e. the same sandwich
    // with the adjoint monomial matrix.
    for (const auto& J : jumps) {
      const int c = J.col_of_row[static_cast<std::size_t>(oc)];
      if (c < 0) continue;
      const cplx vc = std::conj(J.val[static_cast<std::size_t>(c)]);
      const cplx* xc = X.col(c).data();
      for (Eigen::Index r = 0; r < n; ++r) {
        const int rr = J.row[static_cast<std::size_t>(r)];
        if (rr < 0) continue;
        y[rr] += J.val[static_cast<std::size_t>(r)] * vc * xc[r];
      }
    }
  }
}

}  // namespace mml
