#include "amice/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace amice {

namespace {

// Precision used for constants constructed from known small integers. Honest
// at any size (an exact integer is known to every digit); min-rules against
// operand precisions keep results truthful.
constexpr long kExactIntPrec = 64;

constexpr long kKappaSearchCap = 64;

long ilog(long base, long x) {  // floor(log_base(x)), x >= 1
  long r = 0;
  while (x >= base) {
    x /= base;
    ++r;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// LaurentWindow

LaurentWindow::LaurentWindow(long prime, long i_min, long i_max)
    : prime_(prime), i_min_(i_min), i_max_(i_max), norm_faithful_(false), truncated_(false) {
  if (i_min > i_max) throw PreconditionViolated("window bounds out of order");
}

LaurentWindow LaurentWindow::constant(const PAdic& c) {
  LaurentWindow w(c.prime(), 0, 0);
  w.set(0, c);
  return w;
}

LaurentWindow LaurentWindow::monomial(const PAdic& c, long i) {
  LaurentWindow w(c.prime(), std::min(i, 0L), std::max(i, 0L));
  w.set(i, c);
  return w;
}

void LaurentWindow::set(long i, const PAdic& c, bool store_zero) {
  if (c.prime() != prime_) throw PreconditionViolated("mixed primes in window");
  if (c.is_exact_zero() && !store_zero) {
    coeffs_.erase(i);
    return;
  }
  i_min_ = std::min(i_min_, i);
  i_max_ = std::max(i_max_, i);
  coeffs_.insert_or_assign(i, c);
}

PAdic LaurentWindow::get(long i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? PAdic::zero(prime_) : it->second;
}

LaurentWindow LaurentWindow::add(const LaurentWindow& o) const {
  if (o.prime_ != prime_) throw PreconditionViolated("mixed primes in window add");
  LaurentWindow r(prime_, std::min(i_min_, o.i_min_), std::max(i_max_, o.i_max_));
  r.truncated_ = truncated_ || o.truncated_;
  for (const auto& [i, c] : coeffs_) {
    auto it = o.coeffs_.find(i);
    r.set(i, it == o.coeffs_.end() ? c : c.add(it->second));
  }
  for (const auto& [i, c] : o.coeffs_)
    if (coeffs_.find(i) == coeffs_.end()) r.set(i, c);
  return r;
}

LaurentWindow LaurentWindow::neg() const {
  LaurentWindow r = *this;
  for (auto& [i, c] : r.coeffs_) c = c.neg();
  return r;
}

LaurentWindow LaurentWindow::sub(const LaurentWindow& o) const { return add(o.neg()); }

LaurentWindow LaurentWindow::mul(const LaurentWindow& o) const {
  if (o.prime_ != prime_) throw PreconditionViolated("mixed primes in window mul");
  LaurentWindow r(prime_, i_min_ + o.i_min_, i_max_ + o.i_max_);
  r.truncated_ = truncated_ || o.truncated_;
  std::map<long, PAdic> acc;
  for (const auto& [i, ci] : coeffs_) {
    for (const auto& [j, cj] : o.coeffs_) {
      PAdic t = ci.mul(cj);
      if (t.is_exact_zero()) continue;
      auto it = acc.find(i + j);
      if (it == acc.end())
        acc.emplace(i + j, std::move(t));
      else
        it->second = it->second.add(t);
    }
  }
  for (const auto& [i, c] : acc) r.set(i, c);
  return r;
}

LaurentWindow LaurentWindow::shifted(long k) const {
  LaurentWindow r(prime_, i_min_ + k, i_max_ + k);
  r.norm_faithful_ = norm_faithful_;
  r.truncated_ = truncated_;
  for (const auto& [i, c] : coeffs_) r.coeffs_.emplace(i + k, c);
  return r;
}

LaurentWindow LaurentWindow::scaled(const PAdic& c) const {
  LaurentWindow r(prime_, i_min_, i_max_);
  r.truncated_ = truncated_;
  if (c.is_exact_zero()) return r;
  for (const auto& [i, ci] : coeffs_) r.set(i, ci.mul(c));
  return r;
}

LaurentWindow LaurentWindow::scaled_rat(const mpq_class& c) const {
  LaurentWindow r(prime_, i_min_, i_max_);
  r.truncated_ = truncated_;
  if (c == 0) return r;
  for (const auto& [i, ci] : coeffs_) r.set(i, ci.mul_rat(c));
  return r;
}

LaurentWindow LaurentWindow::truncate_to(long lo, long hi) const {
  if (lo > hi) throw PreconditionViolated("truncation bounds out of order");
  LaurentWindow r(prime_, lo, hi);
  r.truncated_ = truncated_;
  for (const auto& [i, c] : coeffs_) {
    if (i < lo || i > hi)
      r.truncated_ = true;
    else
      r.coeffs_.emplace(i, c);
  }
  return r;
}

LaurentWindow LaurentWindow::prune_below(long floor_exponent) const {
  // Dropping tails of size <= |p|^floor changes the value at that scale, so
  // surviving coefficients cannot claim absolute precision past the floor.
  std::map<long, PAdic> kept;
  for (const auto& [i, c] : coeffs_) {
    if (c.is_exact_zero()) continue;
    if (c.is_regular()) {
      if (c.valuation() >= floor_exponent) continue;
      long prec = std::min(c.prec(), floor_exponent - c.valuation());
      kept.emplace(i, PAdic::make(prime_, c.valuation(), c.unit(), prec));
    } else {
      if (c.zero_mod_bound() >= floor_exponent) continue;
      kept.emplace(i, c);
    }
  }
  long lo = kept.empty() ? 0 : kept.begin()->first;
  long hi = kept.empty() ? 0 : kept.rbegin()->first;
  LaurentWindow r(prime_, lo, hi);
  r.truncated_ = truncated_;
  r.coeffs_ = std::move(kept);
  return r;
}

bool LaurentWindow::eq_within_prec(const LaurentWindow& o) const {
  LaurentWindow d = sub(o);
  for (const auto& [i, c] : d.coeffs())
    if (c.is_regular()) return false;
  return true;
}

std::string LaurentWindow::str() const {
  std::ostringstream os;
  if (coeffs_.empty()) {
    os << "0";
  } else {
    bool first = true;
    for (const auto& [i, c] : coeffs_) {
      if (!first) os << " + ";
      os << "(" << c.str() << ")";
      if (i != 0) os << "*T^" << i;
      first = false;
    }
  }
  os << "  [window " << i_min_ << ".." << i_max_ << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Gauss norms

NormValue gauss_norm(const LaurentWindow& f, const NormValue& rho) {
  if (rho.is_zero()) throw PreconditionViolated("gauss norm needs rho > 0");
  const mpq_class& re = rho.exponent();
  bool have_best = false;
  mpq_class best_e;
  bool have_zm = false;
  mpq_class zm_min;
  for (const auto& [i, c] : f.coeffs()) {
    if (c.is_exact_zero()) continue;
    mpq_class e = (c.is_regular() ? mpq_class(c.valuation()) : mpq_class(c.zero_mod_bound())) +
                  re * i;
    if (c.is_regular()) {
      if (!have_best || e < best_e) {
        best_e = e;
        have_best = true;
      }
    } else {
      if (!have_zm || e < zm_min) {
        zm_min = e;
        have_zm = true;
      }
    }
  }
  if (!have_best && !have_zm) return NormValue::zero(f.prime());
  if (have_zm && (!have_best || zm_min < best_e)) {
    // an indeterminate coefficient could dominate the sup
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), zm_min.get_num().get_mpz_t(), zm_min.get_den().get_mpz_t());
    throw IndeterminateValuation(f.prime(), fl.get_si());
  }
  return NormValue::from_exponent(f.prime(), best_e);
}

NormValue gauss_norm1(const LaurentWindow& f) {
  return gauss_norm(f, NormValue::one(f.prime()));
}

NormValue gauss_norm_upper(const LaurentWindow& f, const NormValue& rho) {
  if (rho.is_zero()) throw PreconditionViolated("gauss norm needs rho > 0");
  bool have = false;
  mpq_class best;
  for (const auto& [i, c] : f.coeffs()) {
    if (c.is_exact_zero()) continue;
    mpq_class e = (c.is_regular() ? mpq_class(c.valuation()) : mpq_class(c.zero_mod_bound())) +
                  rho.exponent() * i;
    if (!have || e < best) {
      best = e;
      have = true;
    }
  }
  return have ? NormValue::from_exponent(f.prime(), best) : NormValue::zero(f.prime());
}

namespace {

Tri sup_vs_bound(const LaurentWindow& f, const NormValue& rho, const NormValue& bound,
                 bool strict) {
  // the sup over a finite window is attained, so compare coefficientwise
  bool unknown = false;
  const long p = f.prime();
  for (const auto& [i, c] : f.coeffs()) {
    if (c.is_exact_zero()) continue;
    mpq_class e = (c.is_regular() ? mpq_class(c.valuation()) : mpq_class(c.zero_mod_bound())) +
                  rho.exponent() * i;
    NormValue term = NormValue::from_exponent(p, e);
    bool ok = strict ? term < bound : term <= bound;
    if (c.is_regular()) {
      if (!ok) return Tri::No;
    } else if (!ok) {
      unknown = true;  // only an upper bound is known for this coefficient
    }
  }
  return unknown ? Tri::Unknown : Tri::Yes;
}

}  // namespace

Tri gauss_norm_lt(const LaurentWindow& f, const NormValue& rho, const NormValue& bound) {
  if (bound.is_zero()) {
    for (const auto& [i, c] : f.coeffs())
      if (!c.is_exact_zero()) return c.is_regular() ? Tri::No : Tri::Unknown;
    return Tri::No;  // 0 < 0 fails
  }
  return sup_vs_bound(f, rho, bound, true);
}

Tri gauss_norm_le(const LaurentWindow& f, const NormValue& rho, const NormValue& bound) {
  if (bound.is_zero()) {
    for (const auto& [i, c] : f.coeffs())
      if (!c.is_exact_zero()) return c.is_regular() ? Tri::No : Tri::Unknown;
    return Tri::Yes;
  }
  return sup_vs_bound(f, rho, bound, false);
}

Tripartite tripartite(const LaurentWindow& f) {
  LaurentWindow minus(f.prime(), std::min(f.i_min(), -1L), -1);
  LaurentWindow plus(f.prime(), 1, std::max(f.i_max(), 1L));
  PAdic a0 = PAdic::zero(f.prime());
  for (const auto& [i, c] : f.coeffs()) {
    if (i <= -1)
      minus.set(i, c, true);
    else if (i >= 1)
      plus.set(i, c, true);
    else
      a0 = c;
  }
  minus.set_norm_faithful(f.norm_faithful());
  plus.set_norm_faithful(f.norm_faithful());
  return {std::move(minus), std::move(a0), std::move(plus)};
}

// ---------------------------------------------------------------------------
// QParam

QParam::QParam(PAdic q, long v_q1, long kappa, NormValue omega_q)
    : q_(std::move(q)), v_q1_(v_q1), kappa_(kappa), omega_q_(std::move(omega_q)) {}

QParam QParam::make(const PAdic& q) {
  const long p = q.prime();
  if (!q.is_regular() || q.valuation() != 0)
    throw HypothesisViolated("q must be a unit with |q - 1| < 1");
  PAdic one = PAdic::one(p, q.prec());
  PAdic d = q.sub(one);
  if (d.is_zero_mod())
    throw HypothesisViolated("q is 1 to working precision; q - 1 must be determinate");
  if (!d.is_regular() || d.valuation() < 1) throw HypothesisViolated("|q - 1| >= 1");
  long v1 = d.valuation();

  const mpq_class omega_e(1, p - 1);
  long kappa = 0;
  long v_qk = 0;
  for (long k = 1; k <= kKappaSearchCap; ++k) {
    PAdic t = q.pow(k).sub(one);
    if (t.is_regular()) {
      if (mpq_class(t.valuation()) > omega_e) {
        kappa = k;
        v_qk = t.valuation();
        break;
      }
    } else if (t.is_zero_mod()) {
      if (mpq_class(t.zero_mod_bound()) > omega_e) {
        // |q^k - 1| < omega holds but the exact value sits below precision;
        // kappa = 1 needs no value, larger kappa does.
        if (k == 1) {
          kappa = 1;
          break;
        }
        throw IndeterminateValuation(p, t.zero_mod_bound());
      }
    }
  }
  if (kappa == 0)
    throw Error("kappa search exceeded its cap of " + std::to_string(kKappaSearchCap));

  NormValue omega_q = NormValue::omega(p);
  if (kappa >= 2) {
    // (|(q^kappa - 1)/(q - 1)| * omega)^{1/kappa}
    mpq_class e = (mpq_class(v_qk - v1) + omega_e) / kappa;
    omega_q = NormValue::from_exponent(p, e);
  }
  return QParam(q, v1, kappa, omega_q);
}

NormValue QParam::q_minus_1_norm() const {
  return NormValue::from_exponent(prime(), v_q1_);
}

bool QParam::strong() const { return mpq_class(v_q1_) > mpq_class(1, prime() - 1); }

// ---------------------------------------------------------------------------
// Coefficientwise operators and q-numerics

PAdic q_int(const QParam& q, long i) {
  const long p = q.prime();
  if (i == 0) return PAdic::zero(p);
  PAdic one = PAdic::one(p, q.q().prec());
  PAdic num = q.q().pow(i).sub(one);
  PAdic den = q.q().sub(one);
  return num.div(den);
}

LaurentWindow apply(SeriesOp op, const LaurentWindow& f, const QParam* q) {
  const bool needs_q = op == SeriesOp::SigmaQ || op == SeriesOp::Dq || op == SeriesOp::DeltaQ;
  if (needs_q && q == nullptr) throw PreconditionViolated("operator needs a q parameter");
  if (needs_q && q->prime() != f.prime())
    throw PreconditionViolated("q and series have different primes");
  long shift = (op == SeriesOp::DdT || op == SeriesOp::Dq) ? -1 : 0;
  LaurentWindow r(f.prime(), f.i_min() + shift, f.i_max() + shift);
  if (f.truncated()) r.mark_truncated();
  for (const auto& [i, c] : f.coeffs()) {
    PAdic nc = c;
    switch (op) {
      case SeriesOp::DdT:
      case SeriesOp::Theta:
        nc = c.mul_int(i);
        break;
      case SeriesOp::SigmaQ:
        nc = c.mul(q->q().pow(i));
        break;
      case SeriesOp::Dq:
      case SeriesOp::DeltaQ:
        nc = c.mul(q_int(*q, i));
        break;
    }
    if (!nc.is_exact_zero()) r.set(i + shift, nc);
  }
  return r;
}

PAdic q_factorial(const QParam& q, long n) {
  if (n < 0) throw PreconditionViolated("q-factorial of a negative integer");
  PAdic acc = PAdic::one(q.prime(), q.q().prec());
  for (long i = 1; i <= n; ++i) acc = acc.mul(q_int(q, i));
  return acc;
}

PAdic q_binomial(const QParam& q, long n, long j) {
  if (j < 0 || j > n) throw PreconditionViolated("q-binomial out of range");
  return q_factorial(q, n).div(q_factorial(q, j).mul(q_factorial(q, n - j)));
}

PAdic q_power(const QParam& q, const PAdic& alpha, long terms) {
  const long p = q.prime();
  if (alpha.is_exact_zero()) return PAdic::one(p, q.q().prec());
  mpq_class s_exp(0);  // max(|alpha|, 1) = p^{s_exp} with s_exp = max(-v, 0)
  if (alpha.is_regular()) {
    s_exp = std::max(-alpha.valuation(), 0L);
  } else if (alpha.zero_mod_bound() < 0) {
    throw IndeterminateValuation(p, alpha.zero_mod_bound());
  }
  // convergence domain |q - 1| < omega / max(|alpha|, 1)
  mpq_class gamma = mpq_class(q.v_q_minus_1()) - mpq_class(1, p - 1) - s_exp;
  if (gamma <= 0)
    throw OutOfConvergenceDomain("q^alpha needs |q - 1| < omega/max(|alpha|, 1)");
  if (terms <= 0) {
    // tail terms are bounded by (max(|alpha|,1) |q-1| / omega)^k; run until
    // they drop below the working precision
    mpq_class kq = mpq_class(q.q().prec() + 4) / gamma;
    mpz_class kz;
    mpz_cdiv_q(kz.get_mpz_t(), kq.get_num().get_mpz_t(), kq.get_den().get_mpz_t());
    terms = kz.get_si() + 1;
  }

  PAdic qm1 = q.q().sub(PAdic::one(p, q.q().prec()));
  PAdic acc = PAdic::one(p, q.q().prec());
  PAdic binom = PAdic::one(p, kExactIntPrec);
  PAdic qm1_pow = PAdic::one(p, q.q().prec());
  for (long k = 1; k <= terms; ++k) {
    // binom(alpha, k) = binom(alpha, k-1) * (alpha - k + 1) / k
    PAdic step = alpha.sub(PAdic::from_int(p, k - 1, kExactIntPrec));
    if (step.is_exact_zero()) break;  // integer alpha: the series terminates
    binom = binom.mul(step).div_int(mpz_class(k));
    qm1_pow = qm1_pow.mul(qm1);
    acc = acc.add(binom.mul(qm1_pow));
  }
  return acc;
}

PAdic padic_log1p_unit(const PAdic& x_minus_1, long extra_digits) {
  const PAdic& u = x_minus_1;
  const long p = u.prime();
  if (u.is_exact_zero()) return PAdic::zero(p);
  if (!u.is_regular() || u.valuation() < 1)
    throw LogDomain("log needs |x - 1| < 1 with a determinate valuation");
  const long c = u.valuation();
  const long target = u.abs_prec() + extra_digits;
  PAdic acc = PAdic::zero(p);
  PAdic pw = PAdic::one(p, u.prec());
  for (long k = 1;; ++k) {
    if (k > 1 && k * c - ilog(p, k) > target) break;
    pw = pw.mul(u);
    PAdic term = pw.div_int(mpz_class(k));
    acc = (k % 2 == 1) ? acc.add(term) : acc.sub(term);
    if (k > 8 * (target + 8)) throw Error("log series failed to terminate");
  }
  return acc;
}

// ---------------------------------------------------------------------------
// One-sided formal exp / log and window inversion

namespace {

enum class Side { Plus, Minus };

Side side_of(const LaurentWindow& w) {
  bool has_pos = false, has_neg = false;
  for (const auto& [i, c] : w.coeffs()) {
    if (i >= 1) has_pos = true;
    if (i <= -1) has_neg = true;
    if (i == 0 && !c.is_exact_zero())
      throw PreconditionViolated("one-sided window has a constant term");
  }
  if (has_pos && has_neg) throw PreconditionViolated("window is not one-sided");
  return has_neg ? Side::Minus : Side::Plus;
}

LaurentWindow mirror(const LaurentWindow& w) {
  LaurentWindow r(w.prime(), -w.i_max(), -w.i_min());
  for (const auto& [i, c] : w.coeffs()) r.set(-i, c);
  if (w.truncated()) r.mark_truncated();
  return r;
}

// exp of a series supported in [1, degree]: j e_j = sum_i (i s_i) e_{j-i}.
// Degree-local, so this is exact formal algebra rather than a limit.
LaurentWindow exp_plus(const LaurentWindow& s, long degree) {
  const long p = s.prime();
  std::vector<PAdic> e(static_cast<std::size_t>(degree) + 1, PAdic::zero(p));
  e[0] = PAdic::one(p, kExactIntPrec);
  for (long j = 1; j <= degree; ++j) {
    PAdic acc = PAdic::zero(p);
    for (const auto& [i, si] : s.coeffs()) {
      if (i < 1 || i > j) continue;
      const PAdic& prev = e[static_cast<std::size_t>(j - i)];
      if (prev.is_exact_zero()) continue;
      acc = acc.add(si.mul_int(i).mul(prev));
    }
    e[static_cast<std::size_t>(j)] = acc.div_int(mpz_class(j));
  }
  LaurentWindow r(p, 0, degree);
  for (long j = 0; j <= degree; ++j) r.set(j, e[static_cast<std::size_t>(j)]);
  if (s.truncated()) r.mark_truncated();
  return r;
}

// log(1 + h) for h supported in [1, degree], via (1 + h) L' = h'.
LaurentWindow log_plus(const LaurentWindow& h, long degree) {
  const long p = h.prime();
  std::vector<PAdic> L(static_cast<std::size_t>(degree) + 1, PAdic::zero(p));
  for (long j = 1; j <= degree; ++j) {
    PAdic acc = h.get(j).mul_int(j);
    for (const auto& [i, hi] : h.coeffs()) {
      if (i < 1 || i >= j) continue;
      const PAdic& Lk = L[static_cast<std::size_t>(j - i)];
      if (Lk.is_exact_zero()) continue;
      acc = acc.sub(hi.mul(Lk.mul_int(j - i)));
    }
    L[static_cast<std::size_t>(j)] = acc.div_int(mpz_class(j));
  }
  LaurentWindow r(p, 1, degree);
  for (long j = 1; j <= degree; ++j) r.set(j, L[static_cast<std::size_t>(j)]);
  if (h.truncated()) r.mark_truncated();
  return r;
}

}  // namespace

LaurentWindow window_exp(const LaurentWindow& s, long degree) {
  if (degree < 0) throw PreconditionViolated("exp degree must be >= 0");
  if (s.empty()) {
    LaurentWindow r(s.prime(), 0, degree == 0 ? 0 : degree);
    r.set(0, PAdic::one(s.prime(), kExactIntPrec));
    return r;
  }
  if (side_of(s) == Side::Plus) return exp_plus(s.truncate_to(1, degree), degree);
  return mirror(exp_plus(mirror(s).truncate_to(1, degree), degree));
}

LaurentWindow window_log1p(const LaurentWindow& h, long degree) {
  if (degree < 1) throw PreconditionViolated("log degree must be >= 1");
  if (h.empty()) return LaurentWindow(h.prime(), 1, degree);
  if (side_of(h) == Side::Plus) return log_plus(h.truncate_to(1, degree), degree);
  return mirror(log_plus(mirror(h).truncate_to(1, degree), degree));
}

LaurentWindow window_inv(const LaurentWindow& d, long floor_exponent, long budget) {
  const long p = d.prime();
  PAdic c = d.get(0);
  if (!c.is_regular()) throw NotAUnit("window constant term is not a unit");
  PAdic cinv = c.inv();
  LaurentWindow e(p, d.i_min(), d.i_max());
  for (const auto& [i, ci] : d.coeffs()) {
    if (i == 0) continue;
    e.set(i, ci.mul(cinv));
  }
  if (gauss_norm_lt(e, NormValue::one(p), NormValue::one(p)) != Tri::Yes)
    throw NotAUnit("window is not invertible at the Gauss point: |d/d0 - 1| >= 1");

  LaurentWindow acc(p, d.i_min(), d.i_max());
  acc.set(0, PAdic::one(p, kExactIntPrec));
  LaurentWindow pw = e;
  bool minus = true;
  for (long k = 1; !pw.empty(); ++k) {
    acc = minus ? acc.sub(pw) : acc.add(pw);
    minus = !minus;
    pw = pw.mul(e).prune_below(floor_exponent);
    if (static_cast<long>(pw.support_size()) > budget ||
        static_cast<long>(acc.support_size()) > budget)
      throw PreconditionViolated("window inversion exceeded its coefficient budget");
    if (k > 4 * floor_exponent + 64) throw Error("window inversion failed to terminate");
  }
  return acc.scaled(cinv);
}

}  // namespace amice
