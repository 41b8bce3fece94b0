#pragma once

#include "mml/common.hpp"

namespace mml {

/// exp(A) by scaling and squaring with the degree-13 Pade approximant.
RealMatrix expm(const RealMatrix& A);

/// Sum of |eigenvalues| of a Hermitian matrix. Rejects inputs whose
/// anti-Hermitian part exceeds 1e-9 relative to the largest entry.
double trace_norm(const Matrix& H);

/// Trace norm of a Hermitian operator using the fermion-parity block
/// structure of the Fock basis (parity of a basis state = popcount parity).
/// A parity-odd X = [[0, B], [B^dagger, 0]] has ||X||_1 = 2 ||B||_1; a
/// parity-even X splits into two independent blocks. Falls back to
/// trace_norm when X mixes both.
double trace_norm_parity(const Matrix& H);

/// Trace norm of an arbitrary square matrix via singular values.
double trace_norm_general(const Matrix& X);

/// sign(H) from the Hermitian eigendecomposition. Eigenvalues with
/// |e| <= rel_zero * max|e| are mapped to 0.
Matrix hermitian_sign(const Matrix& H, double rel_zero = 1e-10);

/// Largest |eigenvalue| of a Hermitian sparse matrix by power iteration.
double spectral_radius_hermitian(const SparseMatrix& H, int iterations = 200);

/// max|A + A^T|; zero for an antisymmetric matrix.
double antisymmetry_residual(const RealMatrix& A);

/// sum_{ij} X(i,j) * Y(j,i) with Y sparse: tr[X Y].
cplx trace_product(const Matrix& X, const SparseMatrix& Y);

}  // namespace mml
