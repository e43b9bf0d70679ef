#include <random>

#include "amice/series.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace amice;

namespace {

const long PREC = 32;

LaurentWindow random_window(std::mt19937_64& rng, long p, long lo, long hi,
                            long vmin = -2, long vmax = 4, long prec = PREC) {
  std::uniform_int_distribution<long> vd(vmin, vmax);
  std::uniform_int_distribution<long> ud(1, 1L << 16);
  std::uniform_int_distribution<int> keep(0, 2);
  LaurentWindow w(p, lo, hi);
  for (long i = lo; i <= hi; ++i) {
    if (keep(rng) == 0) continue;
    long u = ud(rng);
    while (u % p == 0) u = ud(rng);
    w.set(i, PAdic::make(p, vd(rng), mpz_class(u), prec));
  }
  return w;
}

}  // namespace

TEST_CASE("gauss norm examples") {
  long p = 3;
  LaurentWindow f(p, -1, 1);
  f.set(-1, PAdic::from_int(p, p, PREC));
  f.set(0, PAdic::from_int(p, p, PREC));
  f.set(1, PAdic::one(p, PREC));
  CHECK(gauss_norm1(f) == NormValue::one(p));

  LaurentWindow mono = LaurentWindow::monomial(PAdic::one(p, PREC), 5);
  NormValue rho = NormValue::from_exponent(p, -2);
  CHECK(gauss_norm(mono, rho) == rho.pow(5));

  LaurentWindow g(2, -2, 0);
  g.set(-2, PAdic::from_int(2, 2, PREC));
  g.set(0, PAdic::from_int(2, 4, PREC));
  CHECK(gauss_norm1(g) == NormValue::from_exponent(2, 1));

  CHECK(gauss_norm1(LaurentWindow(2, 0, 4)).is_zero());
}

TEST_CASE("gauss norm flags indeterminate dominating coefficients") {
  LaurentWindow f(2, 0, 1);
  f.set(0, PAdic::from_int(2, 2, PREC));
  f.set(1, PAdic::zero_mod(2, 0));  // could be a unit, could be smaller
  CHECK_THROWS_AS(gauss_norm1(f), IndeterminateValuation);
  // a dominated indeterminate coefficient is harmless
  LaurentWindow g(2, 0, 1);
  g.set(0, PAdic::one(2, PREC));
  g.set(1, PAdic::zero_mod(2, 3));
  CHECK(gauss_norm1(g) == NormValue::one(2));
}

TEST_CASE("tripartite split and recombination") {
  long p = 5;
  LaurentWindow f(p, -2, 5);
  f.set(-2, PAdic::from_int(p, p, PREC));
  f.set(0, PAdic::from_int(p, 3, PREC));
  f.set(5, PAdic::one(p, PREC));
  Tripartite t = tripartite(f);
  CHECK(t.minus.support_size() == 1);
  CHECK(t.minus.get(-2).unit() == 1);
  CHECK(t.a0.unit() == 3);
  CHECK(t.plus.support_size() == 1);
  LaurentWindow back = t.minus.add(LaurentWindow::constant(t.a0)).add(t.plus);
  CHECK(back.eq_within_prec(f));

  Tripartite c = tripartite(LaurentWindow::constant(PAdic::from_int(p, 7, PREC)));
  CHECK(c.minus.empty());
  CHECK(c.plus.empty());
  CHECK(c.a0.unit() == 7);

  LaurentWindow h(p, 1, 2);
  h.set(1, PAdic::one(p, PREC));
  h.set(2, PAdic::one(p, PREC));
  Tripartite u = tripartite(h);
  CHECK(u.minus.empty());
  CHECK(u.a0.is_exact_zero());
  CHECK(u.plus.support_size() == 2);
}

TEST_CASE("coefficientwise operators") {
  long p = 3;
  QParam q = QParam::make(PAdic::from_int(p, 4, PREC));  // |q-1| = 1/3 < omega

  LaurentWindow t3 = LaurentWindow::monomial(PAdic::one(p, PREC), 3);
  LaurentWindow th = apply(SeriesOp::Theta, t3);
  CHECK(th.get(3).eq_within_prec(PAdic::from_int(p, 3, PREC)));

  LaurentWindow t1 = LaurentWindow::monomial(PAdic::one(p, PREC), 1);
  LaurentWindow dq = apply(SeriesOp::Dq, t1, &q);
  CHECK(dq.support_size() == 1);
  CHECK(dq.get(0).eq_within_prec(PAdic::one(p, PREC)));

  LaurentWindow tm1 = LaurentWindow::monomial(PAdic::one(p, PREC), -1);
  LaurentWindow sq = apply(SeriesOp::SigmaQ, tm1, &q);
  CHECK(sq.get(-1).eq_within_prec(q.q().inv()));

  // ddT kills constants, Dq kills constants via [0]_q = 0
  LaurentWindow c = LaurentWindow::constant(PAdic::from_int(p, 8, PREC));
  CHECK(apply(SeriesOp::DdT, c).empty());
  CHECK(apply(SeriesOp::Dq, c, &q).empty());
}

TEST_CASE("Leibniz rules on random windows") {
  std::mt19937_64 rng(2024);
  long p = 2;
  QParam q = QParam::make(PAdic::from_int(p, 5, PREC));
  for (int t = 0; t < 25; ++t) {
    LaurentWindow f = random_window(rng, p, -3, 3);
    LaurentWindow g = random_window(rng, p, -2, 4);
    LaurentWindow lhs = apply(SeriesOp::DdT, f.mul(g));
    LaurentWindow rhs = apply(SeriesOp::DdT, f).mul(g).add(f.mul(apply(SeriesOp::DdT, g)));
    CHECK(lhs.eq_within_prec(rhs));

    LaurentWindow lq = apply(SeriesOp::Dq, f.mul(g), &q);
    LaurentWindow rq = apply(SeriesOp::Dq, f, &q)
                           .mul(apply(SeriesOp::SigmaQ, g, &q))
                           .add(f.mul(apply(SeriesOp::Dq, g, &q)));
    CHECK(lq.eq_within_prec(rq));
  }
}

TEST_CASE("gauss norm under products") {
  std::mt19937_64 rng(5150);
  long p = 5;
  NormValue rho = NormValue::from_exponent(p, mpq_class(1, 2));
  for (int t = 0; t < 40; ++t) {
    LaurentWindow f = random_window(rng, p, -3, 3);
    LaurentWindow g = random_window(rng, p, -1, 4);
    if (f.empty() || g.empty()) continue;
    NormValue nf = gauss_norm(f, rho), ng = gauss_norm(g, rho);
    LaurentWindow fg = f.mul(g);
    NormValue bound = nf.mul(ng);
    // submultiplicative, with equality against a monomial
    if (nf.is_zero() || ng.is_zero()) continue;
    NormValue nfg = gauss_norm(fg, rho);
    CHECK(nfg <= bound);
    LaurentWindow mono = LaurentWindow::monomial(PAdic::from_int(p, p * 7, PREC), 2);
    CHECK(gauss_norm(f.mul(mono), rho) == nf.mul(gauss_norm(mono, rho)));
  }
}

TEST_CASE("kappa and omega_q") {
  // p=2, q=5: |q-1| = 1/4 < omega = 1/2, kappa = 1, omega_q = omega
  QParam q5 = QParam::make(PAdic::from_int(2, 5, PREC));
  CHECK(q5.kappa() == 1);
  CHECK(q5.omega_q() == NormValue::omega(2));
  CHECK(q5.strong());

  // p=2, q=3: |q-1| = 1/2 = omega, kappa = 2, omega_q = (|(q^2-1)/(q-1)| omega)^{1/2}
  QParam q3 = QParam::make(PAdic::from_int(2, 3, PREC));
  CHECK(q3.kappa() == 2);
  CHECK_FALSE(q3.strong());
  CHECK(q3.omega_q().exponent() == mpq_class(3, 2));

  // p >= 3: |q-1| <= |p| < omega always, kappa = 1
  QParam q4 = QParam::make(PAdic::from_int(3, 4, PREC));
  CHECK(q4.kappa() == 1);
  CHECK(q4.strong());

  CHECK_THROWS_AS(QParam::make(PAdic::from_int(2, 2, PREC)), HypothesisViolated);
  CHECK_THROWS_AS(QParam::make(PAdic::one(2, PREC)), HypothesisViolated);
}

TEST_CASE("q-factorial examples") {
  QParam q = QParam::make(PAdic::from_int(3, 4, PREC));
  CHECK(q_factorial(q, 1).eq_within_prec(PAdic::one(3, PREC)));

  // [3]_q! = (q^2 + q + 1)(q + 1), checked by direct polynomial evaluation
  PAdic qq = q.q();
  PAdic poly = qq.pow(2).add(qq).add(PAdic::one(3, PREC)).mul(qq.add(PAdic::one(3, PREC)));
  CHECK(q_factorial(q, 3).eq_within_prec(poly));

  // q-binomials stay integral: |binom(n,j)_q| <= 1
  for (long n = 1; n <= 10; ++n)
    for (long j = 0; j <= n; ++j) CHECK(q_binomial(q, n, j).norm_le_one() == Tri::Yes);
}

TEST_CASE("q-factorial norm approaches omega_q") {
  // sanity version at n = 64; the 5%-at-200 gate lives in the acceptance suite
  QParam q = QParam::make(PAdic::from_int(2, 5, PREC));
  long n = 64;
  PAdic f = q_factorial(q, n);
  mpq_class ratio = f.norm().exponent() / n;
  mpq_class target = NormValue::omega(2).exponent();
  CHECK(ratio > target * mpq_class(9, 10));
  CHECK(ratio <= target);
}

TEST_CASE("q_power of integers matches exact powers and respects its domain") {
  long p = 2;
  QParam q = QParam::make(PAdic::from_int(p, 17, PREC));  // v(q-1) = 4
  for (long a : {1L, 2L, 5L, -3L}) {
    PAdic alpha = PAdic::from_int(p, a, PREC);
    CHECK(q_power(q, alpha).eq_within_prec(q.q().pow(a)));
  }
  // |alpha| > 1 shrinks the domain: alpha = 1/2 over Q_2 needs |q-1| < omega/2
  PAdic half = PAdic::from_mpq(p, mpq_class(1, 2), PREC);
  CHECK_NOTHROW(q_power(q, half));
  QParam qnear = QParam::make(PAdic::from_int(p, 5, PREC));  // v(q-1) = 2
  PAdic big = PAdic::from_mpq(p, mpq_class(1, 8), PREC);     // |alpha| = 8
  CHECK_THROWS_AS(q_power(qnear, big), OutOfConvergenceDomain);
}

TEST_CASE("q^alpha difference quotient approaches alpha") {
  // along |q-1| = |p|^k the distance |(q^alpha-1)/(q-1) - alpha| is bounded by
  // |binom(alpha,2)| |q-1| and decreases monotonically
  long p = 3;
  PAdic alpha = PAdic::from_int(p, 7, PREC);
  NormValue prev = NormValue::one(p);
  bool first = true;
  for (long k = 3; k <= 8; ++k) {
    PAdic q_val = PAdic::from_mpz(p, 1 + p_pow(p, k), PREC);
    QParam q = QParam::make(q_val);
    PAdic qm1 = q_val.sub(PAdic::one(p, PREC));
    PAdic quot = q_power(q, alpha).sub(PAdic::one(p, PREC)).div(qm1);
    PAdic dist = quot.sub(alpha);
    NormValue dn = dist.norm_upper_bound();
    // |binom(7,2)| = |21| = 1/3
    NormValue cap = NormValue::from_exponent(p, k).mul(NormValue::from_exponent(p, 1));
    CHECK(dn <= cap);
    if (!first) CHECK(dn <= prev);
    prev = dn;
    first = false;
  }
}

TEST_CASE("one-sided exp and log invert each other") {
  std::mt19937_64 rng(902);
  long p = 3, depth = 12;
  for (int t = 0; t < 20; ++t) {
    LaurentWindow s = random_window(rng, p, 1, 6, 1, 3);
    LaurentWindow e = window_exp(s, depth);
    CHECK(e.get(0).eq_within_prec(PAdic::one(p, PREC)));
    LaurentWindow h(p, 1, depth);
    for (const auto& [i, c] : e.coeffs())
      if (i >= 1) h.set(i, c);
    LaurentWindow back = window_log1p(h, depth);
    CHECK(back.truncate_to(1, 6).eq_within_prec(s));
    // the other composition
    LaurentWindow hh = random_window(rng, p, -5, -1, 1, 3);
    if (hh.empty()) continue;
    LaurentWindow lg = window_log1p(hh, 10);
    LaurentWindow ee = window_exp(lg, 10);
    LaurentWindow expect(p, -10, 0);
    expect.set(0, PAdic::one(p, PREC));
    for (const auto& [i, c] : hh.coeffs()) expect.set(i, c);
    CHECK(ee.eq_within_prec(expect));
  }
}

TEST_CASE("window inversion") {
  std::mt19937_64 rng(313);
  long p = 2;
  for (int t = 0; t < 15; ++t) {
    LaurentWindow d = random_window(rng, p, -3, 3, 1, 4);
    d.set(0, PAdic::from_int(p, 7, PREC));  // unit constant, rest strictly small
    LaurentWindow inv = window_inv(d, PREC, 4096);
    LaurentWindow prod = d.mul(inv);
    PAdic c0 = prod.get(0);
    REQUIRE(c0.is_regular());
    CHECK(c0.unit() == 1);
    for (const auto& [i, c] : prod.coeffs()) {
      if (i == 0) continue;
      CHECK(c.norm_upper_bound() <= NormValue::from_exponent(p, PREC));
    }
  }
  LaurentWindow bad(p, 0, 1);
  bad.set(0, PAdic::one(p, PREC));
  bad.set(1, PAdic::from_int(p, 3, PREC));  // |h|_1 = 1
  CHECK_THROWS_AS(window_inv(bad, PREC, 4096), NotAUnit);
}
