#include "mml/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mml/linalg.hpp"

namespace mml {

std::string to_string(EnergyTag tag) {
  switch (tag) {
    case EnergyTag::zero: return "0";
    case EnergyTag::plus_delta: return "+delta";
    case EnergyTag::minus_delta: return "-delta";
    case EnergyTag::plus_2delta: return "+2delta";
    case EnergyTag::minus_2delta: return "-2delta";
    case EnergyTag::injected: return "injected";
  }
  return "?";
}

bool is_bosonic(const FockSystem& sys, const FockOperator& O, double tol) {
  const FockOperator comm = sys.P_f() * O - O * sys.P_f();
  return comm.max_abs() <= tol * std::max(O.max_abs(), 1e-300);
}

namespace {

std::shared_ptr<const LindbladKernel> compile(const LindbladSet& set) {
  std::vector<FockOperator> ops;
  ops.reserve(set.jumps.size());
  for (const auto& j : set.jumps) ops.push_back(j.op);
  return std::make_shared<const LindbladKernel>(set.hamiltonian, ops);
}

void add_jump(std::vector<JumpOperator>& out, const FockOperator& shape, double rate, EnergyTag tag,
              std::string label) {
  if (!(rate > 0)) return;
  out.push_back({shape * cplx(std::sqrt(rate)), tag, rate, std::move(label)});
}

}  // namespace

LindbladSet build_lindblad_set(std::shared_ptr<const FockSystem> sys, const SpectralDensity& bath,
                               bool include_lamb_shift) {
  if (!sys) throw ValidationError("Lindblad set needs a Fock system");
  bath.validate();
  LindbladSet set;
  set.system = sys;
  set.bath = bath;
  set.lamb_shift = include_lamb_shift;
  if (include_lamb_shift) set.lamb_shift_coefficients = lamb_shift_coefficients(bath);

  const double d = bath.delta;
  const double r0 = 2.0 * phi(0.0, bath);
  const double rp = phi(d, bath), rm = phi(-d, bath);
  const double r2p = phi(2 * d, bath), r2m = phi(-2 * d, bath);

  FockOperator H = FockOperator::zero(sys->dim());
  for (std::size_t ci = 0; ci < sys->n_chains(); ++ci) {
    const ChainOperators& ch = sys->chain(ci);
    const int L = ch.spec.L;
    if (L < 3) throw ValidationError("Lindblad backend needs L >= 3, got " + std::to_string(L));
    if (L > kLindbladMaxL)
      throw DenseLimitError("dense backend limit: Lindblad evolution supports L <= " +
                            std::to_string(kLindbladMaxL) + ", got L = " + std::to_string(L));
    const std::string tag(1, ch.spec.label);
    auto b = [&](int j) -> const FockOperator& { return ch.b.at(static_cast<std::size_t>(j - 1)); };
    auto n = [&](int j) { return ch.bond_number(j); };

    for (int j = 1; j <= L - 1; ++j) H = H + cplx(d) * n(j);

    for (int i = 2; i <= L - 1; ++i) {
      const FockOperator hop = b(i).adjoint() * b(i - 1) + b(i - 1).adjoint() * b(i);
      add_jump(set.jumps, hop, r0, EnergyTag::zero, tag + ":L0_" + std::to_string(i));
    }
    const FockOperator im1 = I * ch.m1, im2 = I * ch.m2;
    add_jump(set.jumps, im1 * b(1), rp, EnergyTag::plus_delta, tag + ":L1+");
    add_jump(set.jumps, im1 * b(1).adjoint(), rm, EnergyTag::minus_delta, tag + ":L1-");
    add_jump(set.jumps, im2 * b(L - 1), rp, EnergyTag::plus_delta, tag + ":L2+");
    add_jump(set.jumps, im2 * b(L - 1).adjoint(), rm, EnergyTag::minus_delta, tag + ":L2-");
    for (int i = 2; i <= L - 1; ++i) {
      add_jump(set.jumps, b(i - 1) * b(i), r2p, EnergyTag::plus_2delta,
               tag + ":L2D+_" + std::to_string(i));
      add_jump(set.jumps, b(i).adjoint() * b(i - 1).adjoint(), r2m, EnergyTag::minus_2delta,
               tag + ":L2D-_" + std::to_string(i));
    }

    if (include_lamb_shift) {
      const auto& c = set.lamb_shift_coefficients;
      H = H + cplx(c.edge) * (n(1) + n(L - 1));
      for (int i = 2; i <= L - 2; ++i) H = H + cplx(c.bulk) * n(i);
      if (c.quartic != 0.0)
        for (int i = 2; i <= L - 1; ++i) H = H + cplx(c.quartic) * (n(i - 1) * n(i));
    }
  }
  set.hamiltonian = FockOperator(H.sparse(), true);
  if (!set.hamiltonian.is_hermitian(1e-12)) throw NumericalError("Lindblad Hamiltonian is not Hermitian");
  for (const auto& j : set.jumps)
    if (!is_bosonic(*sys, j.op)) throw NumericalError("jump operator " + j.label + " is not bosonic");
  set.kernel = compile(set);
  return set;
}

LindbladSet build_lindblad_set(const ChainSpec& chain, const SpectralDensity& bath,
                               bool include_lamb_shift, Representation rep) {
  chain.validate();
  if (chain.L > kLindbladMaxL)
    throw DenseLimitError("dense backend limit: Lindblad evolution supports L <= " +
                          std::to_string(kLindbladMaxL) + ", got L = " + std::to_string(chain.L));
  auto sys = std::make_shared<const FockSystem>(build_mode_operators(chain, rep));
  return build_lindblad_set(sys, bath, include_lamb_shift);
}

LindbladSet with_extra_jumps(const LindbladSet& set, const std::vector<JumpOperator>& extra) {
  LindbladSet out = set;
  for (const auto& j : extra) {
    if (j.op.dim() != set.system->dim()) throw ValidationError("extra jump has the wrong dimension");
    out.jumps.push_back(j);
  }
  out.kernel = compile(out);
  return out;
}

Matrix apply_lindbladian(const LindbladSet& set, const Matrix& O, Direction dir, KernelKind kind) {
  const auto d = static_cast<Eigen::Index>(set.kernel->dim());
  if (O.rows() != d || O.cols() != d) throw ValidationError("operator dimension does not match the Lindblad set");
  Matrix Y;
  set.kernel->apply(O, Y, dir, kind);
  return Y;
}

EvolutionResult evolve(const LindbladSet& set, const Matrix& O0, Direction dir,
                       const EvolveOptions& opt, const std::vector<Observable>& observables,
                       const StopPredicate& stop) {
  if (!(opt.dt > 0) || !std::isfinite(opt.dt)) throw ValidationError("evolve: dt must be > 0");
  if (!(opt.t_max >= 0) || !std::isfinite(opt.t_max)) throw ValidationError("evolve: t_max must be >= 0");
  if (opt.sample_every < 1) throw ValidationError("evolve: sample_every must be >= 1");
  const LindbladKernel& K = *set.kernel;
  const auto d = static_cast<Eigen::Index>(K.dim());
  if (O0.rows() != d || O0.cols() != d) throw ValidationError("evolve: operator dimension mismatch");

  const double rate = K.max_rate();
  if (opt.dt * rate > opt.stability_limit) {
    std::ostringstream os;
    os << "RK4 step too large: dt * max_rate = " << opt.dt * rate << " exceeds " << opt.stability_limit
       << "; use dt <= " << opt.stability_limit / rate;
    throw StabilityError(os.str());
  }

  const auto nsteps = static_cast<std::size_t>(std::llround(opt.t_max / opt.dt));
  const std::size_t error_every =
      opt.error_every > 0 ? static_cast<std::size_t>(opt.error_every) : std::max<std::size_t>(1, nsteps / 16);
  const KernelKind kind = K.resolve(opt.kernel);

  Matrix k(d, d), acc(d, d), tmp(d, d);
  auto rk4 = [&](const Matrix& X, double h, Matrix& out) {
    K.apply(X, k, dir, kind);
    acc = k;
    tmp = X + (0.5 * h) * k;
    K.apply(tmp, k, dir, kind);
    acc += 2.0 * k;
    tmp = X + (0.5 * h) * k;
    K.apply(tmp, k, dir, kind);
    acc += 2.0 * k;
    tmp = X + h * k;
    K.apply(tmp, k, dir, kind);
    acc += k;
    out = X + (h / 6.0) * acc;
  };

  EvolutionResult res;
  res.values.assign(observables.size(), {});
  std::vector<double> sample(observables.size());
  auto record = [&](double t, const Matrix& X) {
    res.times.push_back(t);
    for (std::size_t o = 0; o < observables.size(); ++o) {
      sample[o] = observables[o](X);
      res.values[o].push_back(sample[o]);
    }
    if (opt.keep_operators) res.operators.push_back(X);
    return stop && stop(t, sample);
  };

  Matrix X = O0, Xn(d, d), half(d, d), half2(d, d);
  if (record(0.0, X)) {
    res.stopped = true;
    res.final_operator = X;
    return res;
  }
  for (std::size_t s = 1; s <= nsteps; ++s) {
    rk4(X, opt.dt, Xn);
    if ((s - 1) % error_every == 0) {
      rk4(X, 0.5 * opt.dt, half);
      rk4(half, 0.5 * opt.dt, half2);
      const double scale = std::max(X.cwiseAbs().maxCoeff(), 1e-300);
      const double err = (half2 - Xn).cwiseAbs().maxCoeff() / 15.0 / scale;
      res.max_local_error = std::max(res.max_local_error, err);
    }
    X.swap(Xn);
    res.steps = s;
    if (s % static_cast<std::size_t>(opt.sample_every) == 0 || s == nsteps) {
      if (record(static_cast<double>(s) * opt.dt, X)) {
        res.stopped = true;
        break;
      }
    }
  }
  res.final_operator = std::move(X);
  return res;
}

namespace {

void require_single_chain(const LindbladSet& set, const char* what) {
  if (set.system->n_chains() != 1)
    throw ValidationError(std::string(what) + " needs a single-chain Lindblad set");
}

ThermalSeries to_series(EvolutionResult&& r) {
  ThermalSeries s;
  s.times = std::move(r.times);
  s.values = std::move(r.values.at(0));
  s.max_local_error = r.max_local_error;
  s.stopped = r.stopped;
  return s;
}

}  // namespace

ThermalSeries lambda_thermal(const LindbladSet& set, const EvolveOptions& opt) {
  const ChainOperators& ch = set.system->chain(0);
  const FockOperator& PiG = ch.Pi_G();
  const SparseMatrix probe = (ch.m1 * PiG).sparse();
  const double norm = PiG.trace().real();
  Observable lam = [&](const Matrix& X) { return trace_product(X, probe).real() / norm; };
  return to_series(evolve(set, ch.m1.dense(), Direction::adjoint, opt, {lam}));
}

ThermalSeries fopt_global(const LindbladSet& set, const EvolveOptions& opt,
                          std::optional<double> stop_below) {
  require_single_chain(set, "fopt_global");
  const ChainOperators& ch = set.system->chain(0);
  const Matrix X0 = (ch.m1 * ch.Pi_G()).dense();
  Observable f = [](const Matrix& X) {
    const double tn = trace_norm_parity(0.5 * (X + X.adjoint()));
    return 2.0 / 3.0 + tn * tn / 12.0;
  };
  StopPredicate stop;
  if (stop_below) {
    const double thr = *stop_below;
    stop = [thr](double, const std::vector<double>& v) { return v[0] < thr; };
  }
  return to_series(evolve(set, X0, Direction::forward, opt, {f}, stop));
}

ThermalSeries theta1_direct(const LindbladSet& set, const EvolveOptions& opt) {
  const ChainOperators& ch = set.system->chain(0);
  const FockOperator im1m2 = I * (ch.m1 * ch.m2);
  const FockOperator& PiG = ch.Pi_G();
  const FockOperator Id = set.system->identity();
  const double norm = PiG.trace().real();
  const Matrix rho0 = ((Id + im1m2) * PiG).dense() / norm;
  const SparseMatrix probe = im1m2.sparse();
  Observable th = [&](const Matrix& X) { return trace_product(X, probe).real(); };
  return to_series(evolve(set, rho0, Direction::forward, opt, {th}));
}

ThermalSeries theta2_thermal(const LindbladSet& set, const EvolveOptions& opt) {
  const ChainOperators& ch = set.system->chain(0);
  const FockOperator im1m2 = I * (ch.m1 * ch.m2);
  const FockOperator& PiG = ch.Pi_G();
  const FockOperator Id = set.system->identity();
  // tr[(1 - i m1 m2) i m1 m2 X Pi_G] = tr[X Pi_G (1 - i m1 m2) i m1 m2]
  const SparseMatrix probe = (PiG * (Id - im1m2) * im1m2).sparse();
  Observable th = [&](const Matrix& X) { return std::abs(trace_product(X, probe)) / 2.0; };
  return to_series(evolve(set, im1m2.dense(), Direction::adjoint, opt, {th}));
}

}  // namespace mml
