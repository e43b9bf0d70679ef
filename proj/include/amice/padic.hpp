#pragma once

#include <gmpxx.h>

#include <string>

#include "amice/errors.hpp"

namespace amice {

// Three-valued verdict for comparisons that working precision may not settle.
enum class Tri { Yes, No, Unknown };

// v_p of a nonzero integer / rational.
long valuation_of(const mpz_class& n, long p);
long valuation_of(const mpq_class& x, long p);

mpz_class p_pow(long p, long e);  // p^e, e >= 0

// An exact multiplicative norm |p|^e with rational exponent e, plus a
// distinguished zero. All comparisons are exact comparisons of exponents
// (order reversed: larger exponent means smaller value).
class NormValue {
 public:
  static NormValue zero(long prime);
  static NormValue from_exponent(long prime, const mpq_class& e);
  static NormValue one(long prime);
  static NormValue omega(long prime);  // |p|^{1/(p-1)}

  long prime() const { return prime_; }
  bool is_zero() const { return zero_; }
  const mpq_class& exponent() const;  // throws on the zero element

  NormValue mul(const NormValue& o) const;
  NormValue div(const NormValue& o) const;
  NormValue inv() const;
  NormValue pow(const mpq_class& k) const;  // value^k, k > 0 when zero
  NormValue root(long k) const { return pow(mpq_class(1, k)); }

  int cmp(const NormValue& o) const;  // by real value: -1, 0, 1
  bool operator==(const NormValue& o) const { return cmp(o) == 0; }
  bool operator!=(const NormValue& o) const { return cmp(o) != 0; }
  bool operator<(const NormValue& o) const { return cmp(o) < 0; }
  bool operator<=(const NormValue& o) const { return cmp(o) <= 0; }
  bool operator>(const NormValue& o) const { return cmp(o) > 0; }
  bool operator>=(const NormValue& o) const { return cmp(o) >= 0; }

  std::string str() const;  // "0" or "|p|^(num/den)"
  double to_double() const;  // rendering only, never used in decisions

 private:
  NormValue(long prime, bool zero, mpq_class e);
  long prime_;
  bool zero_;
  mpq_class e_;
};

// Element of Q_p with capped precision: x = p^v * unit with unit coprime to p
// known modulo p^prec, so x is known modulo p^(v+prec). Exact zeros are
// flagged; full cancellation yields a ZeroMod state that remembers only
// "x == 0 mod p^bound".
class PAdic {
 public:
  enum class State { ExactZero, Regular, ZeroMod };

  static PAdic zero(long prime);
  static PAdic zero_mod(long prime, long bound);
  static PAdic from_int(long prime, long value, long prec);
  static PAdic from_mpz(long prime, const mpz_class& value, long prec);
  static PAdic from_mpq(long prime, const mpq_class& value, long prec);
  static PAdic one(long prime, long prec) { return from_int(prime, 1, prec); }
  // Raw constructor: reduces unit mod p^prec; unit must stay coprime to p.
  static PAdic make(long prime, long v, mpz_class unit, long prec);

  long prime() const { return prime_; }
  State state() const { return state_; }
  bool is_exact_zero() const { return state_ == State::ExactZero; }
  bool is_zero_mod() const { return state_ == State::ZeroMod; }
  bool is_regular() const { return state_ == State::Regular; }
  bool is_zeroish() const { return state_ != State::Regular; }

  long valuation() const;       // Regular only
  long zero_mod_bound() const;  // ZeroMod only
  const mpz_class& unit() const;
  long prec() const;      // digits of the unit known
  long abs_prec() const;  // Regular: v+prec; ZeroMod: bound

  PAdic add(const PAdic& o) const;
  PAdic sub(const PAdic& o) const;
  PAdic mul(const PAdic& o) const;
  PAdic neg() const;
  PAdic inv() const;  // DivisionByZero when indistinguishable from 0
  PAdic div(const PAdic& o) const;
  PAdic pow(long e) const;

  // Exact scalar operations: no precision loss beyond the valuation shift.
  PAdic mul_int(const mpz_class& k) const;
  PAdic div_int(const mpz_class& k) const;
  PAdic mul_rat(const mpq_class& k) const;
  PAdic mul_pow_p(long k) const;

  NormValue norm() const;  // IndeterminateValuation on ZeroMod
  NormValue norm_upper_bound() const;
  Tri norm_le(const NormValue& bound) const;
  Tri norm_lt(const NormValue& bound) const;
  Tri norm_le_one() const;
  Tri norm_lt_one() const;

  // True when this and o cannot be told apart at the joint precision.
  bool eq_within_prec(const PAdic& o) const;
  // Field-by-field identity of the representation (tests).
  bool same_repr(const PAdic& o) const;

  std::string str() const;

  PAdic operator+(const PAdic& o) const { return add(o); }
  PAdic operator-(const PAdic& o) const { return sub(o); }
  PAdic operator*(const PAdic& o) const { return mul(o); }
  PAdic operator/(const PAdic& o) const { return div(o); }
  PAdic operator-() const { return neg(); }

 private:
  PAdic(long prime, State st, long v, mpz_class unit, long prec);
  void require_same_prime(const PAdic& o) const;

  long prime_;
  State state_;
  long v_;          // Regular: exact valuation; ZeroMod: valuation lower bound
  mpz_class unit_;  // Regular only
  long prec_;       // Regular only
};

// Spec-level arithmetic entry point: add/sub cancellation down to the
// precision floor raises PrecisionExhausted instead of returning a ZeroMod.
enum class ArithOp { Add, Sub, Mul, Inv, Pow };
PAdic arith(ArithOp op, const PAdic& x, const PAdic& y);
PAdic arith_pow(const PAdic& x, long e);

}  // namespace amice
