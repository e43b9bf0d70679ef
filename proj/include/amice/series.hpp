#pragma once

#include <map>
#include <optional>
#include <vector>

#include "amice/padic.hpp"

namespace amice {

// Finitely supported Laurent series standing for a bounded Laurent series
// element. Declared support bounds [i_min, i_max] are a user contract;
// norm_faithful asserts that all coefficients of maximal Gauss norm lie
// inside the window. The truncated flag marks windows whose arithmetic
// history dropped coefficients.
class LaurentWindow {
 public:
  LaurentWindow(long prime, long i_min, long i_max);
  static LaurentWindow constant(const PAdic& c);
  static LaurentWindow monomial(const PAdic& c, long i);

  long prime() const { return prime_; }
  long i_min() const { return i_min_; }
  long i_max() const { return i_max_; }
  bool norm_faithful() const { return norm_faithful_; }
  void set_norm_faithful(bool b) { norm_faithful_ = b; }
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  bool empty() const { return coeffs_.empty(); }
  std::size_t support_size() const { return coeffs_.size(); }
  const std::map<long, PAdic>& coeffs() const { return coeffs_; }

  // Stores c at exponent i, widening the declared bounds if needed.
  // Exact zeros are kept only when store_zero is set.
  void set(long i, const PAdic& c, bool store_zero = false);
  PAdic get(long i) const;  // exact zero when absent

  LaurentWindow add(const LaurentWindow& o) const;
  LaurentWindow sub(const LaurentWindow& o) const;
  LaurentWindow mul(const LaurentWindow& o) const;
  LaurentWindow neg() const;
  LaurentWindow shifted(long k) const;          // * T^k
  LaurentWindow scaled(const PAdic& c) const;   // coefficientwise * c
  LaurentWindow scaled_rat(const mpq_class& c) const;

  // Drops coefficients outside [lo, hi]; marks truncation if any were nonzero.
  LaurentWindow truncate_to(long lo, long hi) const;
  // Drops coefficients with |c| <= |p|^floor_exponent (small at working scale).
  LaurentWindow prune_below(long floor_exponent) const;

  bool eq_within_prec(const LaurentWindow& o) const;

  std::string str() const;

 private:
  long prime_;
  std::map<long, PAdic> coeffs_;
  long i_min_, i_max_;
  bool norm_faithful_;
  bool truncated_;
};

// sup_i |a_i| rho^i over the window, exact in exponent arithmetic.
// Indeterminate coefficients that could raise the sup make it throw.
NormValue gauss_norm(const LaurentWindow& f, const NormValue& rho);
NormValue gauss_norm1(const LaurentWindow& f);

// Upper bound on the sup that is always available (uses valuation lower
// bounds for indeterminate coefficients).
NormValue gauss_norm_upper(const LaurentWindow& f, const NormValue& rho);

// sup_i |a_i| rho^i  vs  bound, decided coefficientwise.
Tri gauss_norm_lt(const LaurentWindow& f, const NormValue& rho, const NormValue& bound);
Tri gauss_norm_le(const LaurentWindow& f, const NormValue& rho, const NormValue& bound);

struct Tripartite {
  LaurentWindow minus;  // indices <= -1
  PAdic a0;
  LaurentWindow plus;  // indices >= 1
};
Tripartite tripartite(const LaurentWindow& f);

// q in Q_p with |q-1| < 1, along with the derived exact quantities: kappa is
// the smallest integer with |q^kappa - 1| < omega, and omega_q the limit of
// |[n]_q!|^{1/n}.
class QParam {
 public:
  static QParam make(const PAdic& q);

  const PAdic& q() const { return q_; }
  long prime() const { return q_.prime(); }
  long v_q_minus_1() const { return v_q1_; }
  NormValue q_minus_1_norm() const;
  long kappa() const { return kappa_; }
  NormValue omega_q() const { return omega_q_; }
  // |q - 1| < omega; stronger than |q - 1| < 1 and forces omega_q == omega.
  bool strong() const;

 private:
  QParam(PAdic q, long v_q1, long kappa, NormValue omega_q);
  PAdic q_;
  long v_q1_;
  long kappa_;
  NormValue omega_q_;
};

enum class SeriesOp { DdT, Theta, SigmaQ, Dq, DeltaQ };

// DdT: a_i T^i -> i a_i T^{i-1};  Theta = T d/dT;  SigmaQ: f(T) -> f(qT);
// Dq: a_i T^i -> a_i [i]_q T^{i-1};  DeltaQ: a_i T^i -> a_i [i]_q T^i.
LaurentWindow apply(SeriesOp op, const LaurentWindow& f, const QParam* q = nullptr);

// [i]_q = (q^i - 1)/(q - 1); exact zero for i = 0.
PAdic q_int(const QParam& q, long i);
PAdic q_factorial(const QParam& q, long n);
PAdic q_binomial(const QParam& q, long n, long j);

// q^alpha as the truncated binomial series; requires |q-1| < omega/max(|alpha|,1).
// When terms == 0 the cutoff is derived from the factorial tail bound so the
// truncation error stays below the working precision.
PAdic q_power(const QParam& q, const PAdic& alpha, long terms = 0);

// log of a 1-unit, |x - 1| < 1.
PAdic padic_log1p_unit(const PAdic& x_minus_1, long extra_digits = 4);

// One-sided window utilities (support entirely >= 1 or <= -1). These are
// exact formal operations: degree-d output coefficients depend only on
// degrees <= d of the input, so no convergence hypothesis is consumed here.
LaurentWindow window_exp(const LaurentWindow& s, long degree);
LaurentWindow window_log1p(const LaurentWindow& h, long degree);

// (1 + e)^{-1} via the geometric series for |e|_1 < 1 with e = d/d_0 - 1;
// coefficients below the floor are pruned, so the result carries at most
// budget coefficients.
LaurentWindow window_inv(const LaurentWindow& d, long floor_exponent, long budget);

}  // namespace amice
