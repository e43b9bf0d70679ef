#include "amice/padic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace amice {

long valuation_of(const mpz_class& n, long p) {
  if (n == 0) throw PreconditionViolated("valuation of zero integer");
  mpz_class tmp, pz(p);
  return static_cast<long>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

long valuation_of(const mpq_class& x, long p) {
  if (x == 0) throw PreconditionViolated("valuation of zero rational");
  return valuation_of(mpz_class(x.get_num()), p) - valuation_of(mpz_class(x.get_den()), p);
}

mpz_class p_pow(long p, long e) {
  if (e < 0) throw PreconditionViolated("negative power of p");
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

// ---------------------------------------------------------------------------
// NormValue

NormValue::NormValue(long prime, bool zero, mpq_class e)
    : prime_(prime), zero_(zero), e_(std::move(e)) {
  e_.canonicalize();
}

NormValue NormValue::zero(long prime) { return NormValue(prime, true, 0); }

NormValue NormValue::from_exponent(long prime, const mpq_class& e) {
  return NormValue(prime, false, e);
}

NormValue NormValue::one(long prime) { return from_exponent(prime, 0); }

NormValue NormValue::omega(long prime) {
  return from_exponent(prime, mpq_class(1, prime - 1));
}

const mpq_class& NormValue::exponent() const {
  if (zero_) throw PreconditionViolated("exponent of the zero norm");
  return e_;
}

NormValue NormValue::mul(const NormValue& o) const {
  if (zero_ || o.zero_) return zero(prime_);
  return from_exponent(prime_, e_ + o.e_);
}

NormValue NormValue::div(const NormValue& o) const {
  if (o.zero_) throw DivisionByZero("division by the zero norm");
  if (zero_) return zero(prime_);
  return from_exponent(prime_, e_ - o.e_);
}

NormValue NormValue::inv() const {
  if (zero_) throw DivisionByZero("inverse of the zero norm");
  return from_exponent(prime_, -e_);
}

NormValue NormValue::pow(const mpq_class& k) const {
  if (zero_) {
    if (k <= 0) throw PreconditionViolated("zero norm to a nonpositive power");
    return zero(prime_);
  }
  return from_exponent(prime_, e_ * k);
}

int NormValue::cmp(const NormValue& o) const {
  if (prime_ != o.prime_) throw PreconditionViolated("norms over different primes");
  if (zero_ && o.zero_) return 0;
  if (zero_) return -1;
  if (o.zero_) return 1;
  // |p|^a vs |p|^b: larger exponent means smaller value.
  return ::cmp(o.e_, e_);
}

std::string NormValue::str() const {
  if (zero_) return "0";
  std::ostringstream os;
  os << "|" << prime_ << "|^(" << e_.get_str() << ")";
  return os.str();
}

double NormValue::to_double() const {
  if (zero_) return 0.0;
  return std::pow(static_cast<double>(prime_), -e_.get_d());
}

// ---------------------------------------------------------------------------
// PAdic

PAdic::PAdic(long prime, State st, long v, mpz_class unit, long prec)
    : prime_(prime), state_(st), v_(v), unit_(std::move(unit)), prec_(prec) {}

PAdic PAdic::zero(long prime) { return PAdic(prime, State::ExactZero, 0, 0, 0); }

PAdic PAdic::zero_mod(long prime, long bound) {
  return PAdic(prime, State::ZeroMod, bound, 0, 0);
}

PAdic PAdic::make(long prime, long v, mpz_class unit, long prec) {
  if (prec < 1) throw PreconditionViolated("PAdic precision must be >= 1");
  mpz_class mod = p_pow(prime, prec);
  unit %= mod;
  if (unit < 0) unit += mod;
  if (unit == 0 || mpz_divisible_ui_p(unit.get_mpz_t(), static_cast<unsigned long>(prime)))
    throw PreconditionViolated("PAdic unit must be coprime to p");
  return PAdic(prime, State::Regular, v, std::move(unit), prec);
}

PAdic PAdic::from_mpz(long prime, const mpz_class& value, long prec) {
  if (prime < 2) throw PreconditionViolated("prime must be >= 2");
  if (value == 0) return zero(prime);
  mpz_class u;
  long v = static_cast<long>(
      mpz_remove(u.get_mpz_t(), value.get_mpz_t(), mpz_class(prime).get_mpz_t()));
  return make(prime, v, std::move(u), prec);
}

PAdic PAdic::from_int(long prime, long value, long prec) {
  return from_mpz(prime, mpz_class(value), prec);
}

PAdic PAdic::from_mpq(long prime, const mpq_class& value, long prec) {
  if (value == 0) return zero(prime);
  mpz_class num = value.get_num(), den = value.get_den();
  mpz_class nu, du;
  long vn = static_cast<long>(
      mpz_remove(nu.get_mpz_t(), num.get_mpz_t(), mpz_class(prime).get_mpz_t()));
  long vd = static_cast<long>(
      mpz_remove(du.get_mpz_t(), den.get_mpz_t(), mpz_class(prime).get_mpz_t()));
  mpz_class mod = p_pow(prime, prec), dinv;
  if (!mpz_invert(dinv.get_mpz_t(), du.get_mpz_t(), mod.get_mpz_t()))
    throw DivisionByZero("denominator not invertible mod p^N");
  return make(prime, vn - vd, nu * dinv, prec);
}

long PAdic::valuation() const {
  if (!is_regular()) throw PreconditionViolated("valuation of a non-regular PAdic");
  return v_;
}

long PAdic::zero_mod_bound() const {
  if (!is_zero_mod()) throw PreconditionViolated("zero_mod_bound of a non-ZeroMod PAdic");
  return v_;
}

const mpz_class& PAdic::unit() const {
  if (!is_regular()) throw PreconditionViolated("unit of a non-regular PAdic");
  return unit_;
}

long PAdic::prec() const {
  if (!is_regular()) throw PreconditionViolated("prec of a non-regular PAdic");
  return prec_;
}

long PAdic::abs_prec() const {
  if (is_regular()) return v_ + prec_;
  if (is_zero_mod()) return v_;
  throw PreconditionViolated("abs_prec of an exact zero");
}

void PAdic::require_same_prime(const PAdic& o) const {
  if (prime_ != o.prime_) throw PreconditionViolated("mixed primes in PAdic arithmetic");
}

PAdic PAdic::add(const PAdic& o) const {
  require_same_prime(o);
  if (is_exact_zero()) return o;
  if (o.is_exact_zero()) return *this;
  if (is_zero_mod() && o.is_zero_mod())
    return zero_mod(prime_, std::min(v_, o.v_));
  if (is_zero_mod() || o.is_zero_mod()) {
    const PAdic& z = is_zero_mod() ? *this : o;
    const PAdic& r = is_zero_mod() ? o : *this;
    if (r.v_ >= z.v_) return zero_mod(prime_, z.v_);
    long a = std::min(z.v_, r.v_ + r.prec_);
    return make(prime_, r.v_, r.unit_, a - r.v_);
  }
  long a = std::min(v_ + prec_, o.v_ + o.prec_);
  long v = std::min(v_, o.v_);
  long digits = a - v;  // >= 1 since a >= min(v_i) + 1
  mpz_class mod = p_pow(prime_, digits);
  mpz_class s = unit_ * p_pow(prime_, v_ - v) + o.unit_ * p_pow(prime_, o.v_ - v);
  s %= mod;
  if (s < 0) s += mod;
  if (s == 0) return zero_mod(prime_, a);
  mpz_class su;
  long w = static_cast<long>(
      mpz_remove(su.get_mpz_t(), s.get_mpz_t(), mpz_class(prime_).get_mpz_t()));
  return make(prime_, v + w, std::move(su), digits - w);
}

PAdic PAdic::neg() const {
  if (!is_regular()) return *this;
  mpz_class mod = p_pow(prime_, prec_);
  return make(prime_, v_, mod - unit_, prec_);
}

PAdic PAdic::sub(const PAdic& o) const { return add(o.neg()); }

PAdic PAdic::mul(const PAdic& o) const {
  require_same_prime(o);
  if (is_exact_zero() || o.is_exact_zero()) return zero(prime_);
  if (is_zero_mod() && o.is_zero_mod()) return zero_mod(prime_, v_ + o.v_);
  if (is_zero_mod() || o.is_zero_mod()) {
    const PAdic& z = is_zero_mod() ? *this : o;
    const PAdic& r = is_zero_mod() ? o : *this;
    return zero_mod(prime_, z.v_ + r.v_);
  }
  return make(prime_, v_ + o.v_, unit_ * o.unit_, std::min(prec_, o.prec_));
}

PAdic PAdic::inv() const {
  if (is_exact_zero()) throw DivisionByZero("inverse of exact zero");
  if (is_zero_mod())
    throw DivisionByZero("inverse of a value indistinguishable from 0 at its precision");
  mpz_class mod = p_pow(prime_, prec_), r;
  mpz_invert(r.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t());
  return make(prime_, -v_, std::move(r), prec_);
}

PAdic PAdic::div(const PAdic& o) const { return mul(o.inv()); }

PAdic PAdic::pow(long e) const {
  if (e == 0) {
    if (!is_regular()) throw PreconditionViolated("0^0 at working precision");
    return one(prime_, prec_);
  }
  if (e < 0) return inv().pow(-e);
  PAdic base = *this;
  PAdic acc = base;
  --e;
  while (e > 0) {
    if (e & 1) acc = acc.mul(base);
    base = base.mul(base);
    e >>= 1;
  }
  return acc;
}

PAdic PAdic::mul_int(const mpz_class& k) const {
  if (k == 0) return zero(prime_);
  mpz_class ku;
  long w = static_cast<long>(
      mpz_remove(ku.get_mpz_t(), k.get_mpz_t(), mpz_class(prime_).get_mpz_t()));
  if (is_exact_zero()) return *this;
  if (is_zero_mod()) return zero_mod(prime_, v_ + w);
  return make(prime_, v_ + w, unit_ * ku, prec_);
}

PAdic PAdic::div_int(const mpz_class& k) const {
  if (k == 0) throw DivisionByZero("division by integer zero");
  mpz_class ku;
  long w = static_cast<long>(
      mpz_remove(ku.get_mpz_t(), k.get_mpz_t(), mpz_class(prime_).get_mpz_t()));
  if (is_exact_zero()) return *this;
  if (is_zero_mod()) return zero_mod(prime_, v_ - w);
  mpz_class mod = p_pow(prime_, prec_), kinv;
  mpz_invert(kinv.get_mpz_t(), ku.get_mpz_t(), mod.get_mpz_t());
  return make(prime_, v_ - w, unit_ * kinv, prec_);
}

PAdic PAdic::mul_rat(const mpq_class& k) const {
  if (k == 0) return zero(prime_);
  return mul_int(mpz_class(k.get_num())).div_int(mpz_class(k.get_den()));
}

PAdic PAdic::mul_pow_p(long k) const {
  if (is_exact_zero()) return *this;
  PAdic r = *this;
  r.v_ += k;
  return r;
}

NormValue PAdic::norm() const {
  if (is_exact_zero()) return NormValue::zero(prime_);
  if (is_zero_mod()) throw IndeterminateValuation(prime_, v_);
  return NormValue::from_exponent(prime_, v_);
}

NormValue PAdic::norm_upper_bound() const {
  if (is_exact_zero()) return NormValue::zero(prime_);
  return NormValue::from_exponent(prime_, v_);
}

Tri PAdic::norm_le(const NormValue& bound) const {
  if (is_exact_zero()) return Tri::Yes;
  if (bound.is_zero()) return is_regular() ? Tri::No : Tri::Unknown;
  if (is_regular())
    return mpq_class(v_) >= bound.exponent() ? Tri::Yes : Tri::No;
  // ZeroMod: |x| <= p^{-v_}
  return mpq_class(v_) >= bound.exponent() ? Tri::Yes : Tri::Unknown;
}

Tri PAdic::norm_lt(const NormValue& bound) const {
  if (bound.is_zero()) return Tri::No;
  if (is_exact_zero()) return Tri::Yes;
  if (is_regular())
    return mpq_class(v_) > bound.exponent() ? Tri::Yes : Tri::No;
  return mpq_class(v_) > bound.exponent() ? Tri::Yes : Tri::Unknown;
}

Tri PAdic::norm_le_one() const { return norm_le(NormValue::one(prime_)); }
Tri PAdic::norm_lt_one() const { return norm_lt(NormValue::one(prime_)); }

bool PAdic::eq_within_prec(const PAdic& o) const { return !sub(o).is_regular(); }

bool PAdic::same_repr(const PAdic& o) const {
  return prime_ == o.prime_ && state_ == o.state_ && v_ == o.v_ &&
         unit_ == o.unit_ && prec_ == o.prec_;
}

std::string PAdic::str() const {
  std::ostringstream os;
  switch (state_) {
    case State::ExactZero:
      os << "0";
      break;
    case State::ZeroMod:
      os << "O(" << prime_ << "^" << v_ << ")";
      break;
    case State::Regular:
      os << prime_ << "^" << v_ << " * " << unit_.get_str() << " :: O(" << prime_
         << "^" << (v_ + prec_) << ")";
      break;
  }
  return os.str();
}

PAdic arith(ArithOp op, const PAdic& x, const PAdic& y) {
  switch (op) {
    case ArithOp::Add:
    case ArithOp::Sub: {
      PAdic r = (op == ArithOp::Add) ? x.add(y) : x.sub(y);
      if (r.is_zero_mod() && !x.is_zero_mod() && !y.is_zero_mod())
        throw PrecisionExhausted("cancellation down to the precision floor: result known to 0 digits");
      return r;
    }
    case ArithOp::Mul:
      return x.mul(y);
    case ArithOp::Inv:
      return x.inv();
    case ArithOp::Pow:
      throw PreconditionViolated("pow takes an integer exponent, use arith_pow");
  }
  throw PreconditionViolated("unknown arithmetic op");
}

PAdic arith_pow(const PAdic& x, long e) { return x.pow(e); }

}  // namespace amice
