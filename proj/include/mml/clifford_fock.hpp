#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mml/common.hpp"

namespace mml {

/// Largest total number of fermionic modes the dense backend accepts.
inline constexpr int kDenseModeLimit = 14;

struct ChainSpec {
  int L = 2;
  char label = 'a';

  /// Throws ValidationError unless L >= 2 and label is 'a' or 'b'.
  void validate() const;
};

/// Which fermionic modes the Jordan-Wigner construction uses as its basis.
///
/// `site`: mode i is the physical site fermion a_i; chains are concatenated
/// left to right. `bond`: mode 0 of each chain is the zero-mode fermion
/// (m1 + i m2)/2 and mode j is the bond fermion b_j. Both realize the same
/// Majorana algebra; in the bond basis the sweet-point Hamiltonian, the
/// ground projector and all bosonic jump operators are diagonal or
/// permutation-like.
enum class Representation { site, bond };

std::string to_string(Representation rep);
Representation representation_from_string(const std::string& s);

/// A sparse operator on a Fock space of dimension 2^N.
class FockOperator {
 public:
  FockOperator() = default;
  explicit FockOperator(SparseMatrix m, std::optional<bool> hermitian_hint = std::nullopt);

  static FockOperator identity(std::size_t dim);
  static FockOperator zero(std::size_t dim);
  static FockOperator from_dense(const Matrix& m, double drop_tol = 0.0);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const SparseMatrix& sparse() const { return m_; }
  Matrix dense() const { return Matrix(m_); }
  std::optional<bool> hermitian_hint() const { return hint_; }

  FockOperator adjoint() const;
  cplx trace() const;
  double max_abs() const;
  /// max|O - O^dagger| <= tol * max|O|.
  bool is_hermitian(double tol = 1e-12) const;

  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator-(const FockOperator& o) const;
  FockOperator operator*(const FockOperator& o) const;
  FockOperator operator*(cplx s) const;
  friend FockOperator operator*(cplx s, const FockOperator& o) { return o * s; }

 private:
  SparseMatrix m_;
  std::optional<bool> hint_;
};

/// Position of a Majorana operator in the Jordan-Wigner construction:
/// x_p = a_p + a_p^dagger or y_p = -i(a_p - a_p^dagger) of mode p.
struct MajoranaSlot {
  int mode = 0;
  bool y = false;
};

/// Acts with the Majorana product slots[0] * slots[1] * ... on basis state
/// `state`. Returns the image basis state and accumulates the phase.
std::uint64_t apply_majorana_string(const std::vector<MajoranaSlot>& slots, std::uint64_t state,
                                    cplx& phase);

/// Operators belonging to one chain, embedded in the full Fock space.
/// Indices are zero-based: a[i] is a_{i+1}, c[k] is c_{k+1}, b[j] is b_{j+1}.
struct ChainOperators {
  ChainSpec spec;
  std::vector<MajoranaSlot> slots;  // slot of c_{k+1}
  std::vector<FockOperator> a;
  std::vector<FockOperator> c;
  std::vector<FockOperator> b;
  FockOperator m1, m2;
  FockOperator P_f;  // parity of this chain, prod_i (-i c_{2i-1} c_{2i})

  /// gamma_{j,s} for bond j in 1..L-1 and s in {1,2}.
  const FockOperator& gamma(int j, int s) const;
  const MajoranaSlot& gamma_slot(int j, int s) const;
  /// b_j^dagger b_j for bond j in 1..L-1.
  FockOperator bond_number(int j) const;
  /// Ground projector prod_j b_j b_j^dagger; built on first use.
  const FockOperator& Pi_G() const;

 private:
  friend class FockSystem;
  struct Lazy {
    std::once_flag once;
    FockOperator value;
  };
  std::shared_ptr<Lazy> pi_g_ = std::make_shared<Lazy>();
};

/// Jordan-Wigner realization of one or two Kitaev chains.
class FockSystem {
 public:
  FockSystem(std::vector<ChainSpec> chains, Representation rep);

  Representation representation() const { return rep_; }
  int n_modes() const { return n_modes_; }
  std::size_t dim() const { return dim_; }
  std::size_t n_chains() const { return chains_.size(); }
  const ChainOperators& chain(std::size_t i) const { return chains_.at(i); }

  const FockOperator& identity() const { return identity_; }
  /// Total fermion parity.
  const FockOperator& P_f() const { return P_f_; }
  /// Ground-space parity prod over chains of (-i m1 m2); equals -m1 m2 m3 m4
  /// for two chains.
  const FockOperator& P_f_ground() const { return P_g_; }
  /// Product of the per-chain ground projectors.
  FockOperator Pi_G() const;

  FockOperator majorana(const MajoranaSlot& s) const;

 private:
  std::vector<ChainOperators> chains_;
  Representation rep_;
  int n_modes_ = 0;
  std::size_t dim_ = 0;
  FockOperator identity_, P_f_, P_g_;
};

/// Single-chain operator bundle.
FockSystem build_mode_operators(const ChainSpec& spec, Representation rep = Representation::site);

/// Two chains a and b sharing one global Jordan-Wigner ordering.
FockSystem build_two_chain(const ChainSpec& a, const ChainSpec& b,
                           Representation rep = Representation::site);

/// H = (i/4) sum_jk A_jk c_j c_k for a real antisymmetric A over one chain's
/// Majoranas c_1..c_{2L}.
FockOperator quadratic_hamiltonian(const FockSystem& sys, std::size_t chain, const RealMatrix& A);

// ---------------------------------------------------------------------------
// Majorana monomials

struct MajoranaMonomial {
  std::uint32_t alpha = 0;  // bits over zero modes (m1, m2[, m3, m4])
  std::uint64_t beta = 0;   // bits over gapped Majoranas, chain by chain
  cplx coefficient{0.0, 0.0};

  int degree() const;
};

/// Hilbert-Schmidt orthonormal monomial basis over the Majoranas of a
/// FockSystem. Canonical order: zero modes of every chain first, then the
/// bond Majoranas gamma_{1,1}, gamma_{1,2}, gamma_{2,1}, ... chain by chain.
/// Monomials are the plain ordered products; <A,B> = tr[A^dagger B] / 2^N.
class MonomialBasis {
 public:
  explicit MonomialBasis(const FockSystem& sys);

  int n_zero() const { return static_cast<int>(zero_.size()); }
  int n_gapped() const { return static_cast<int>(gapped_.size()); }
  std::size_t dim() const { return dim_; }

  FockOperator monomial(std::uint32_t alpha, std::uint64_t beta) const;
  cplx coefficient(const Matrix& O, std::uint32_t alpha, std::uint64_t beta) const;
  cplx coefficient(const FockOperator& O, std::uint32_t alpha, std::uint64_t beta) const;

  /// All monomials with |coefficient| > drop_tol. Enumerates 4^N monomials,
  /// intended for small systems (guard: N <= 6).
  std::vector<MajoranaMonomial> decompose(const FockOperator& O, double drop_tol = 1e-14) const;
  FockOperator reconstruct(const std::vector<MajoranaMonomial>& terms) const;

  /// Keeps the monomials without gapped Majoranas and rescales by
  /// 2^{N - n_chains}; the result lives on the zero-mode space of dimension
  /// 2^{n_chains} whose mode i is (m_{2i+1} + i m_{2i+2}) / 2.
  Matrix trace_out_gapped(const Matrix& O) const;
  Matrix trace_out_gapped(const FockOperator& O) const;

  /// The monomial M_{alpha,0} represented on the zero-mode space.
  Matrix zero_mode_monomial(std::uint32_t alpha) const;

 private:
  std::vector<MajoranaSlot> string_for(std::uint32_t alpha, std::uint64_t beta) const;

  std::vector<MajoranaSlot> zero_, gapped_;
  int n_modes_ = 0;
  std::size_t dim_ = 0;
};

// ---------------------------------------------------------------------------
// Logical qubit on two chains

struct LogicalSet {
  std::shared_ptr<const FockSystem> system;
  FockOperator sigma[4];
  FockOperator projector_plus;  // projector onto the even ground sector
};

LogicalSet logical_operators(const ChainSpec& a, const ChainSpec& b,
                             Representation rep = Representation::site);

enum class ParityKind { full, ground };

/// tr[P rho] for the total parity or the ground-space parity. Validates that
/// rho is a density operator (trace 1, Hermitian, positive semidefinite to
/// 1e-10) and throws ValidationError naming the violated property.
double parity_expectation(const FockSystem& sys, const Matrix& rho, ParityKind which);

}  // namespace mml
