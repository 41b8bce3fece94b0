#pragma once

#include <optional>
#include <vector>

#include "mml/clifford_fock.hpp"

namespace mml {

enum class Direction { forward, adjoint };

/// Which implementation applies a Lindbladian to a dense operator.
///
/// `reference`: dense matrix products, serial; kept as the test oracle.
/// `sparse`: CSR kernels, OpenMP-parallel over output columns.
/// `monomial`: element-wise kernel for diagonal H, K and jump operators with
/// at most one entry per row and column; OpenMP-parallel over output columns.
/// `automatic`: `monomial` when available, otherwise `sparse`.
enum class KernelKind { reference, sparse, monomial, automatic };

std::string to_string(KernelKind k);
KernelKind kernel_from_string(const std::string& s);

/// A generalized permutation matrix: column c has its only entry at
/// row[c] (or no entry when row[c] < 0), and no two columns share a row.
struct MonomialMatrix {
  std::vector<int> row;
  std::vector<cplx> val;
  std::vector<int> col_of_row;  // inverse map, -1 for empty rows

  MonomialMatrix adjoint() const;
};

std::optional<MonomialMatrix> to_monomial(const SparseMatrix& m, double tol = 1e-15);
std::optional<RealVector> real_diagonal(const SparseMatrix& m, double tol = 1e-15);

/// Compiled form of L(X) = -i[H, X] + sum_k (J_k X J_k^dagger - {K, X}/2),
/// K = sum_k J_k^dagger J_k, and of its adjoint. Jump operators carry their
/// rates already.
class LindbladKernel {
 public:
  LindbladKernel(const FockOperator& H, const std::vector<FockOperator>& jumps);

  std::size_t dim() const { return dim_; }
  bool monomial_available() const { return monomial_; }
  KernelKind resolve(KernelKind k) const;

  /// Y = L(X) or L*(X). Y is resized as needed and must not alias X.
  void apply(const Matrix& X, Matrix& Y, Direction dir, KernelKind kind = KernelKind::automatic) const;

  /// ||K||_2 plus the spread of H's spectrum: bounds the generator's rate.
  double max_rate() const { return max_rate_; }

 private:
  void apply_reference(const Matrix& X, Matrix& Y, Direction dir) const;
  void apply_sparse(const Matrix& X, Matrix& Y, Direction dir) const;
  void apply_monomial(const Matrix& X, Matrix& Y, Direction dir) const;

  std::size_t dim_ = 0;
  SparseMatrix H_, K_;
  std::vector<SparseMatrix> J_, Jadj_, JT_;
  bool monomial_ = false;
  RealVector h_diag_, k_diag_;
  std::vector<MonomialMatrix> Jm_, Jm_adj_;
  double max_rate_ = 0.0;
};

}  // namespace mml
