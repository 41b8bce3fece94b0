#include "mml/clifford_fock.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace mml {

namespace {

SparseMatrix from_triplets(std::size_t dim, const std::vector<Eigen::Triplet<cplx>>& t) {
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseMatrix pruned(SparseMatrix m) {
  m.prune(cplx(0.0), 1e-300);
  m.makeCompressed();
  return m;
}

std::uint64_t apply_slot(const MajoranaSlot& s, std::uint64_t state, cplx& phase) {
  const std::uint64_t bit = std::uint64_t{1} << s.mode;
  const bool odd = std::popcount(state & (bit - 1)) & 1;
  const double sgn = odd ? -1.0 : 1.0;
  if (s.y) {
    phase *= (state & bit) ? cplx(0.0, -sgn) : cplx(0.0, sgn);
  } else {
    phase *= sgn;
  }
  return state ^ bit;
}

FockOperator majorana_matrix(const MajoranaSlot& s, std::size_t dim) {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(dim);
  for (std::uint64_t n = 0; n < dim; ++n) {
    cplx ph = 1.0;
    const std::uint64_t m = apply_slot(s, n, ph);
    t.emplace_back(static_cast<int>(m), static_cast<int>(n), ph);
  }
  return FockOperator(from_triplets(dim, t), true);
}

void check_mode_count(int n_modes) {
  if (n_modes > kDenseModeLimit) {
    std::ostringstream os;
    os << "dense backend limit exceeded: " << n_modes << " fermionic modes requested, at most "
       << kDenseModeLimit << " supported";
    throw DenseLimitError(os.str());
  }
}

}  // namespace

void ChainSpec::validate() const {
  if (L < 2) throw ValidationError("chain length L must be >= 2, got " + std::to_string(L));
  if (label != 'a' && label != 'b')
    throw ValidationError(std::string("chain label must be 'a' or 'b', got '") + label + "'");
}

std::string to_string(Representation rep) { return rep == Representation::site ? "site" : "bond"; }

Representation representation_from_string(const std::string& s) {
  if (s == "site") return Representation::site;
  if (s == "bond") return Representation::bond;
  throw ValidationError("unknown representation '" + s + "' (expected site or bond)");
}

// ---------------------------------------------------------------------------
// FockOperator

FockOperator::FockOperator(SparseMatrix m, std::optional<bool> hermitian_hint)
    : m_(std::move(m)), hint_(hermitian_hint) {
  if (m_.rows() != m_.cols()) throw ValidationError("FockOperator must be square");
  const auto d = static_cast<std::uint64_t>(m_.rows());
  if (d != 0 && !std::has_single_bit(d))
    throw ValidationError("FockOperator dimension must be a power of two");
  m_.makeCompressed();
}

FockOperator FockOperator::identity(std::size_t dim) {
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setIdentity();
  return FockOperator(std::move(m), true);
}

FockOperator FockOperator::zero(std::size_t dim) {
  return FockOperator(SparseMatrix(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)),
                      true);
}

FockOperator FockOperator::from_dense(const Matrix& m, double drop_tol) {
  SparseMatrix s = m.sparseView(1.0, drop_tol);
  return FockOperator(std::move(s));
}

FockOperator FockOperator::adjoint() const {
  SparseMatrix a = m_.adjoint();
  return FockOperator(std::move(a), hint_);
}

cplx FockOperator::trace() const {
  cplx t = 0.0;
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m_, r); it; ++it)
      if (it.col() == r) t += it.value();
  return t;
}

double FockOperator::max_abs() const {
  double mx = 0.0;
  for (Eigen::Index k = 0; k < m_.nonZeros(); ++k) mx = std::max(mx, std::abs(m_.valuePtr()[k]));
  return mx;
}

bool FockOperator::is_hermitian(double tol) const {
  SparseMatrix d = m_ - SparseMatrix(m_.adjoint());
  double mx = 0.0;
  for (Eigen::Index k = 0; k < d.nonZeros(); ++k) mx = std::max(mx, std::abs(d.valuePtr()[k]));
  return mx <= tol * std::max(max_abs(), 1e-300);
}

FockOperator FockOperator::operator+(const FockOperator& o) const {
  return FockOperator(pruned(m_ + o.m_));
}
FockOperator FockOperator::operator-(const FockOperator& o) const {
  return FockOperator(pruned(m_ - o.m_));
}
FockOperator FockOperator::operator*(const FockOperator& o) const {
  return FockOperator(pruned(m_ * o.m_));
}
FockOperator FockOperator::operator*(cplx s) const {
  SparseMatrix m = m_ * s;
  return FockOperator(pruned(std::move(m)));
}

std::uint64_t apply_majorana_string(const std::vector<MajoranaSlot>& slots, std::uint64_t state,
                                    cplx& phase) {
  for (auto it = slots.rbegin(); it != slots.rend(); ++it) state = apply_slot(*it, state, phase);
  return state;
}

// ---------------------------------------------------------------------------
// ChainOperators / FockSystem

const FockOperator& ChainOperators::gamma(int j, int s) const {
  if (j < 1 || j > spec.L - 1 || (s != 1 && s != 2))
    throw ValidationError("gamma index out of range");
  return c[static_cast<std::size_t>(2 * j + s - 2)];
}

const MajoranaSlot& ChainOperators::gamma_slot(int j, int s) const {
  if (j < 1 || j > spec.L - 1 || (s != 1 && s != 2))
    throw ValidationError("gamma index out of range");
  return slots[static_cast<std::size_t>(2 * j + s - 2)];
}

FockOperator ChainOperators::bond_number(int j) const {
  const FockOperator& bj = b.at(static_cast<std::size_t>(j - 1));
  return bj.adjoint() * bj;
}

const FockOperator& ChainOperators::Pi_G() const {
  std::call_once(pi_g_->once, [this] {
    FockOperator p = FockOperator::identity(m1.dim());
    for (const auto& bj : b) p = p * (bj * bj.adjoint());
    pi_g_->value = FockOperator(p.sparse(), true);
  });
  return pi_g_->value;
}

FockSystem::FockSystem(std::vector<ChainSpec> chains, Representation rep) : rep_(rep) {
  if (chains.empty() || chains.size() > 2)
    throw ValidationError("a Fock system holds one or two chains");
  for (const auto& c : chains) {
    c.validate();
    n_modes_ += c.L;
  }
  check_mode_count(n_modes_);
  dim_ = std::size_t{1} << n_modes_;
  identity_ = FockOperator::identity(dim_);

  int offset = 0;
  for (const auto& spec : chains) {
    ChainOperators ch;
    ch.spec = spec;
    const int L = spec.L;
    ch.slots.resize(static_cast<std::size_t>(2 * L));
    if (rep == Representation::site) {
      for (int i = 1; i <= L; ++i) {
        ch.slots[2 * i - 2] = {offset + i - 1, false};
        ch.slots[2 * i - 1] = {offset + i - 1, true};
      }
    } else {
      ch.slots[0] = {offset, false};
      ch.slots[2 * L - 1] = {offset, true};
      for (int j = 1; j <= L - 1; ++j) {
        ch.slots[2 * j - 1] = {offset + j, false};
        ch.slots[2 * j] = {offset + j, true};
      }
    }
    for (const auto& s : ch.slots) ch.c.push_back(majorana_matrix(s, dim_));
    for (int i = 1; i <= L; ++i)
      ch.a.push_back((ch.c[2 * i - 2] + ch.c[2 * i - 1] * I) * 0.5);
    for (int j = 1; j <= L - 1; ++j)
      ch.b.push_back((ch.gamma(j, 1) + ch.gamma(j, 2) * I) * 0.5);
    ch.m1 = ch.c.front();
    ch.m2 = ch.c.back();
    FockOperator pf = identity_;
    for (int i = 1; i <= L; ++i) pf = pf * (ch.c[2 * i - 2] * ch.c[2 * i - 1] * cplx(0.0, -1.0));
    ch.P_f = FockOperator(pf.sparse(), true);
    chains_.push_back(std::move(ch));
    offset += L;
  }

  FockOperator pf = identity_, pg = identity_;
  for (const auto& ch : chains_) {
    pf = pf * ch.P_f;
    pg = pg * (ch.m1 * ch.m2 * cplx(0.0, -1.0));
  }
  P_f_ = FockOperator(pf.sparse(), true);
  P_g_ = FockOperator(pg.sparse(), true);
}

FockOperator FockSystem::Pi_G() const {
  FockOperator p = identity_;
  for (const auto& ch : chains_) p = p * ch.Pi_G();
  return FockOperator(p.sparse(), true);
}

FockOperator FockSystem::majorana(const MajoranaSlot& s) const { return majorana_matrix(s, dim_); }

FockSystem build_mode_operators(const ChainSpec& spec, Representation rep) {
  return FockSystem({spec}, rep);
}

FockSystem build_two_chain(const ChainSpec& a, const ChainSpec& b, Representation rep) {
  ChainSpec aa = a, bb = b;
  aa.label = 'a';
  bb.label = 'b';
  return FockSystem({aa, bb}, rep);
}

FockOperator quadratic_hamiltonian(const FockSystem& sys, std::size_t chain, const RealMatrix& A) {
  const ChainOperators& ch = sys.chain(chain);
  const auto n = static_cast<Eigen::Index>(ch.c.size());
  if (A.rows() != n || A.cols() != n)
    throw ValidationError("generator size does not match the chain's Majorana count");
  SparseMatrix h(static_cast<Eigen::Index>(sys.dim()), static_cast<Eigen::Index>(sys.dim()));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double ajk = A(j, k);
      if (ajk == 0.0) continue;
      h += (ch.c[j] * ch.c[k]).sparse() * cplx(0.0, 0.5 * ajk);
    }
  return FockOperator(pruned(std::move(h)), true);
}

// ---------------------------------------------------------------------------
// Monomials

int MajoranaMonomial::degree() const { return std::popcount(alpha) + std::popcount(beta); }

MonomialBasis::MonomialBasis(const FockSystem& sys) : n_modes_(sys.n_modes()), dim_(sys.dim()) {
  for (std::size_t k = 0; k < sys.n_chains(); ++k) {
    const auto& ch = sys.chain(k);
    zero_.push_back(ch.slots.front());
    zero_.push_back(ch.slots.back());
  }
  for (std::size_t k = 0; k < sys.n_chains(); ++k) {
    const auto& ch = sys.chain(k);
    for (int j = 1; j <= ch.spec.L - 1; ++j) {
      gapped_.push_back(ch.gamma_slot(j, 1));
      gapped_.push_back(ch.gamma_slot(j, 2));
    }
  }
}

std::vector<MajoranaSlot> MonomialBasis::string_for(std::uint32_t alpha, std::uint64_t beta) const {
  if (alpha >> zero_.size() || (gapped_.size() < 64 && (beta >> gapped_.size())))
    throw ValidationError("monomial mask exceeds the number of Majoranas");
  std::vector<MajoranaSlot> s;
  for (std::size_t i = 0; i < zero_.size(); ++i)
    if (alpha >> i & 1u) s.push_back(zero_[i]);
  for (std::size_t i = 0; i < gapped_.size(); ++i)
    if (beta >> i & 1u) s.push_back(gapped_[i]);
  return s;
}

FockOperator MonomialBasis::monomial(std::uint32_t alpha, std::uint64_t beta) const {
  const auto s = string_for(alpha, beta);
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(dim_);
  for (std::uint64_t n = 0; n < dim_; ++n) {
    cplx ph = 1.0;
    const std::uint64_t m = apply_majorana_string(s, n, ph);
    t.emplace_back(static_cast<int>(m), static_cast<int>(n), ph);
  }
  return FockOperator(from_triplets(dim_, t));
}

cplx MonomialBasis::coefficient(const Matrix& O, std::uint32_t alpha, std::uint64_t beta) const {
  if (static_cast<std::size_t>(O.rows()) != dim_ || static_cast<std::size_t>(O.cols()) != dim_)
    throw ValidationError("operator dimension does not match the monomial basis");
  const auto s = string_for(alpha, beta);
  cplx acc = 0.0;
  for (std::uint64_t n = 0; n < dim_; ++n) {
    cplx ph = 1.0;
    const std::uint64_t m = apply_majorana_string(s, n, ph);
    acc += std::conj(ph) * O(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  }
  return acc / static_cast<double>(dim_);
}

cplx MonomialBasis::coefficient(const FockOperator& O, std::uint32_t alpha,
                                std::uint64_t beta) const {
  if (O.dim() != dim_) throw ValidationError("operator dimension does not match the monomial basis");
  const auto s = string_for(alpha, beta);
  const SparseMatrix& sp = O.sparse();
  cplx acc = 0.0;
  for (std::uint64_t n = 0; n < dim_; ++n) {
    cplx ph = 1.0;
    const std::uint64_t m = apply_majorana_string(s, n, ph);
    acc += std::conj(ph) * sp.coeff(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  }
  return acc / static_cast<double>(dim_);
}

std::vector<MajoranaMonomial> MonomialBasis::decompose(const FockOperator& O,
                                                       double drop_tol) const {
  if (n_modes_ > 6)
    throw DenseLimitError("monomial_decompose enumerates 4^N monomials; limited to N <= 6");
  const Matrix d = O.dense();
  std::vector<MajoranaMonomial> out;
  const std::uint64_t nb = std::uint64_t{1} << gapped_.size();
  const std::uint32_t na = 1u << zero_.size();
  for (std::uint64_t beta = 0; beta < nb; ++beta)
    for (std::uint32_t alpha = 0; alpha < na; ++alpha) {
      const cplx c = coefficient(d, alpha, beta);
      if (std::abs(c) > drop_tol) out.push_back({alpha, beta, c});
    }
  return out;
}

FockOperator MonomialBasis::reconstruct(const std::vector<MajoranaMonomial>& terms) const {
  Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (const auto& t : terms) {
    const auto s = string_for(t.alpha, t.beta);
    for (std::uint64_t n = 0; n < dim_; ++n) {
      cplx ph = 1.0;
      const std::uint64_t m = apply_majorana_string(s, n, ph);
      acc(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) += t.coefficient * ph;
    }
  }
  return FockOperator::from_dense(acc);
}

Matrix MonomialBasis::zero_mode_monomial(std::uint32_t alpha) const {
  const std::size_t nz = zero_.size();
  const std::size_t small = std::size_t{1} << (nz / 2);
  std::vector<MajoranaSlot> s;
  for (std::size_t i = 0; i < nz; ++i)
    if (alpha >> i & 1u) s.push_back({static_cast<int>(i / 2), (i % 2) == 1});
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(small), static_cast<Eigen::Index>(small));
  for (std::uint64_t n = 0; n < small; ++n) {
    cplx ph = 1.0;
    const std::uint64_t k = apply_majorana_string(s, n, ph);
    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = ph;
  }
  return m;
}

Matrix MonomialBasis::trace_out_gapped(const Matrix& O) const {
  const std::size_t nz = zero_.size();
  const std::size_t small = std::size_t{1} << (nz / 2);
  const double scale = std::ldexp(1.0, n_modes_ - static_cast<int>(nz / 2));
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(small), static_cast<Eigen::Index>(small));
  for (std::uint32_t alpha = 0; alpha < (1u << nz); ++alpha) {
    const cplx c = coefficient(O, alpha, 0);
    if (c != cplx(0.0)) out += (c * scale) * zero_mode_monomial(alpha);
  }
  return out;
}

Matrix MonomialBasis::trace_out_gapped(const FockOperator& O) const {
  const std::size_t nz = zero_.size();
  const std::size_t small = std::size_t{1} << (nz / 2);
  const double scale = std::ldexp(1.0, n_modes_ - static_cast<int>(nz / 2));
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(small), static_cast<Eigen::Index>(small));
  for (std::uint32_t alpha = 0; alpha < (1u << nz); ++alpha) {
    const cplx c = coefficient(O, alpha, 0);
    if (c != cplx(0.0)) out += (c * scale) * zero_mode_monomial(alpha);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Logical operators and parity

LogicalSet logical_operators(const ChainSpec& a, const ChainSpec& b, Representation rep) {
  auto sys = std::make_shared<const FockSystem>(build_two_chain(a, b, rep));
  const auto& ca = sys->chain(0);
  const auto& cb = sys->chain(1);
  const FockOperator& m1 = ca.m1;
  const FockOperator& m2 = ca.m2;
  const FockOperator& m3 = cb.m1;
  const FockOperator& m4 = cb.m2;
  const FockOperator pi = ca.Pi_G() * cb.Pi_G();
  const FockOperator one = sys->identity();
  const cplx half_i(0.0, 0.5);

  LogicalSet ls;
  ls.system = sys;
  ls.sigma[0] = FockOperator(((one - m1 * m2 * m3 * m4) * pi * 0.5).sparse(), true);
  ls.sigma[1] = FockOperator(((m2 * m3 + m1 * m4) * pi * half_i).sparse(), true);
  ls.sigma[2] = FockOperator(((m1 * m3 - m2 * m4) * pi * (-half_i)).sparse(), true);
  ls.sigma[3] = FockOperator(((m1 * m2 + m3 * m4) * pi * (-half_i)).sparse(), true);
  ls.projector_plus = ls.sigma[0];
  return ls;
}

double parity_expectation(const FockSystem& sys, const Matrix& rho, ParityKind which) {
  const auto d = static_cast<Eigen::Index>(sys.dim());
  if (rho.rows() != d || rho.cols() != d)
    throw ValidationError("density operator dimension does not match the Fock system");
  std::vector<std::string> bad;
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-10) bad.push_back("trace != 1");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) bad.push_back("not Hermitian");
  if (bad.empty()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in parity check");
    if (es.eigenvalues().minCoeff() < -1e-10) bad.push_back("not positive semidefinite");
  }
  if (!bad.empty()) {
    std::string msg = "invalid density operator:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw ValidationError(msg);
  }
  const SparseMatrix& P = (which == ParityKind::full ? sys.P_f() : sys.P_f_ground()).sparse();
  cplx acc = 0.0;
  for (Eigen::Index r = 0; r < P.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(P, r); it; ++it) acc += it.value() * rho(it.col(), r);
  return acc.real();
}

}  // namespace mml
