#include <random>

#include "amice/radius.hpp"
#include "doctest.h"

using namespace amice;

namespace {

const long PREC = 32;

LaurentWindow random_window(std::mt19937_64& rng, long p, long lo, long hi,
                            long vmin, long vmax, long prec = PREC) {
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

TEST_CASE("iterates of theta - T") {
  long p = 2;
  OperatorSpec op = OperatorSpec::diff(LaurentWindow::monomial(PAdic::one(p, PREC), 1));
  auto gs = iterates(op, 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(gs[k].support_size() == 1);
    CHECK(gs[k].get(0).eq_within_prec(PAdic::one(p, PREC)));
  }
}

TEST_CASE("iterates of theta - 1 vanish from the second step") {
  long p = 3;
  OperatorSpec op = OperatorSpec::diff(LaurentWindow::constant(PAdic::one(p, PREC)));
  auto gs = iterates(op, 4);
  CHECK(gs[0].get(-1).eq_within_prec(PAdic::one(p, PREC)));
  for (int k = 1; k < 4; ++k)
    for (const auto& [i, c] : gs[k].coeffs()) CHECK(!c.is_regular());
}

TEST_CASE("iterates of the trivial q-difference operator") {
  long p = 2;
  QParam q = QParam::make(PAdic::from_int(p, 5, PREC));
  OperatorSpec op =
      OperatorSpec::qdiff(LaurentWindow::constant(PAdic::one(p, PREC)), q);
  auto gs = iterates(op, 4);
  // a - 1 cancels to the precision floor, so every iterate is 0 within
  // precision (capped arithmetic cannot certify exact vanishing here)
  for (const auto& g : gs)
    for (const auto& [i, c] : g.coeffs()) CHECK(!c.is_regular());
}

TEST_CASE("small radius closed form for theta - T/2 over Q_2") {
  long p = 2;
  OperatorSpec op = OperatorSpec::diff(
      LaurentWindow::monomial(PAdic::from_mpq(p, mpq_class(1, 2), PREC), 1));
  RadiusReport rep = ray_estimate(op, NormValue::one(p), 16);
  REQUIRE(rep.exact.has_value());
  CHECK(rep.exact->tag == ExactTag::SmallRadius);
  CHECK_FALSE(rep.exact->strict_lower);
  CHECK(rep.exact->value == NormValue::from_exponent(p, 2));
  // every finite-k estimate already equals the closed form
  for (const auto& e : rep.estimates) CHECK(e == rep.exact->value);
}

TEST_CASE("trivial operator has Ray = rho by construction") {
  long p = 5;
  OperatorSpec op = OperatorSpec::diff(LaurentWindow(p, 0, 4));
  NormValue rho = NormValue::from_exponent(p, mpq_class(-1, 2));
  RadiusReport rep = ray_estimate(op, rho, 8);
  REQUIRE(rep.exact.has_value());
  CHECK(rep.exact->tag == ExactTag::ByConstruction);
  CHECK(rep.exact->value == rho);
}

TEST_CASE("q-difference small radius closed form") {
  long p = 2;
  QParam q = QParam::make(PAdic::from_int(p, 5, PREC));  // |q-1| = 1/4
  LaurentWindow a(p, 0, 1);
  a.set(0, PAdic::one(p, PREC));
  a.set(1, PAdic::from_int(p, 2, PREC));  // |a-1|_1 = 1/2 = |q-1| * |p|^{-1}
  OperatorSpec op = OperatorSpec::qdiff(a, q);
  RadiusReport rep = ray_estimate(op, NormValue::one(p), 16);
  REQUIRE(rep.exact.has_value());
  CHECK(rep.exact->tag == ExactTag::SmallRadius);
  // omega_q * rho * |q-1| / |a-1|_1 = |2|^(1 + 2 - 1) = |2|^2
  CHECK(rep.exact->value == NormValue::from_exponent(p, 2));
}

TEST_CASE("sharp test examples") {
  long p = 2;
  // g = pT: first iterate is already small
  OperatorSpec small = OperatorSpec::diff(
      LaurentWindow::monomial(PAdic::from_int(p, 2, PREC), 1));
  SharpResult r1 = sharp_test(small, 8);
  CHECK(r1.proven);
  CHECK(r1.witness_s == 1);

  // g = T keeps a unit leading coefficient in every iterate
  OperatorSpec unit = OperatorSpec::diff(LaurentWindow::monomial(PAdic::one(p, PREC), 1));
  SharpResult r2 = sharp_test(unit, 12);
  CHECK_FALSE(r2.proven);

  // trivial q-difference operator: witness at s = 1
  QParam q = QParam::make(PAdic::from_int(p, 5, PREC));
  OperatorSpec triv = OperatorSpec::qdiff(LaurentWindow::constant(PAdic::one(p, PREC)), q);
  SharpResult r3 = sharp_test(triv, 8);
  CHECK(r3.proven);
  CHECK(r3.witness_s == 1);

  // precondition |g|_1 <= 1
  OperatorSpec big = OperatorSpec::diff(
      LaurentWindow::monomial(PAdic::from_mpq(p, mpq_class(1, 2), PREC), 1));
  CHECK_THROWS_AS(sharp_test(big, 4), PreconditionViolated);
}

TEST_CASE("sharp test through ray_estimate sets a strict lower bound") {
  long p = 2;
  OperatorSpec small = OperatorSpec::diff(
      LaurentWindow::monomial(PAdic::from_int(p, 2, PREC), 1));
  RadiusReport rep = ray_estimate(small, NormValue::one(p), 8);
  REQUIRE(rep.exact.has_value());
  CHECK(rep.exact->tag == ExactTag::SharpTest);
  CHECK(rep.exact->strict_lower);
  CHECK(rep.exact->value == NormValue::omega(p));
}

TEST_CASE("constant q-difference profiles") {
  long p = 2;
  QParam q = QParam::make(PAdic::from_int(p, 5, PREC));

  // lambda = 1: sigma_q - 1 has constant solutions, profile degenerates
  auto prof1 = constant_qdiff_profile(PAdic::one(p, PREC), q, 6);
  for (const auto& e : prof1) CHECK((e.upper_bound_only || e.value.is_zero()));

  // lambda = q: solution T; n = 1 entry is |q-1|/|q-1| = 1, later ones vanish
  auto profq = constant_qdiff_profile(q.q(), q, 6);
  CHECK_FALSE(profq[0].upper_bound_only);
  CHECK(profq[0].value == NormValue::one(p));
  for (std::size_t n = 1; n < profq.size(); ++n) CHECK(profq[n].upper_bound_only);

  // |lambda - 1| > |q-1|: profile equals the small-radius slope at every n
  PAdic lam = PAdic::from_int(p, 3, PREC);  // |lam-1| = 1/2 > 1/4
  auto prof = constant_qdiff_profile(lam, q, 8);
  NormValue expect = NormValue::from_exponent(p, 1 - 2);  // |lam-1|/|q-1|
  for (const auto& e : prof) {
    CHECK_FALSE(e.upper_bound_only);
    CHECK(e.value == expect);
  }
}

TEST_CASE("profile agrees with iterate norms for constant operators") {
  long p = 3;
  QParam q = QParam::make(PAdic::from_int(p, 4, PREC));
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<long> ud(1, 200);
  for (int t = 0; t < 10; ++t) {
    long u = ud(rng);
    while (u % p == 0) u = ud(rng);
    PAdic lam = PAdic::from_int(p, u, PREC);
    OperatorSpec op = OperatorSpec::qdiff(LaurentWindow::constant(lam), q);
    long n_max = 8;
    auto prof = constant_qdiff_profile(lam, q, n_max);
    auto gs = iterates(op, n_max);
    for (long n = 1; n <= n_max; ++n) {
      const auto& entry = prof[static_cast<std::size_t>(n - 1)];
      const auto& g = gs[static_cast<std::size_t>(n - 1)];
      if (entry.upper_bound_only) continue;
      if (g.empty()) continue;
      bool all_regular = true;
      for (const auto& [i, c] : g.coeffs()) all_regular &= c.is_regular();
      if (!all_regular) continue;
      // profile entry is |g_{[n]}|_1^{1/n}
      CHECK(gauss_norm1(g).pow(mpq_class(1, n)) == entry.value);
    }
  }
}

TEST_CASE("iterated d_q over q-factorials obeys the norm bound") {
  long p = 2;
  QParam q = QParam::make(PAdic::from_int(p, 5, PREC));
  std::mt19937_64 rng(8080);
  std::vector<NormValue> rhos = {NormValue::from_exponent(p, -1), NormValue::one(p),
                                 NormValue::from_exponent(p, 1)};
  for (int t = 0; t < 12; ++t) {
    LaurentWindow f = random_window(rng, p, -4, 4, -2, 4);
    if (f.empty()) continue;
    LaurentWindow d = f;
    for (long k = 1; k <= 16; ++k) {
      d = apply(SeriesOp::Dq, d, &q);
      LaurentWindow scaled = d.scaled(q_factorial(q, k).inv());
      for (const NormValue& rho : rhos) {
        NormValue lhs = gauss_norm_upper(scaled, rho);
        NormValue rhs = gauss_norm(f, rho).mul(rho.pow(-k));
        CHECK(lhs <= rhs);
      }
    }
  }
}

TEST_CASE("small radius consistency across k for random operators") {
  std::mt19937_64 rng(2717);
  long p = 3;
  QParam q = QParam::make(PAdic::from_int(p, 4, PREC));
  for (int t = 0; t < 5; ++t) {
    // |g|_1 > 1: plant a negative-valuation coefficient
    LaurentWindow g = random_window(rng, p, -2, 3, 0, 3);
    g.set(2, PAdic::make(p, -1 - (t % 2), mpz_class(7), PREC));
    OperatorSpec op = OperatorSpec::diff(g);
    RadiusReport rep = ray_estimate(op, NormValue::one(p), 24);
    REQUIRE(rep.exact.has_value());
    REQUIRE(rep.exact->tag == ExactTag::SmallRadius);
    for (std::size_t k = 0; k < rep.estimates.size(); ++k) {
      CHECK_FALSE(rep.estimate_is_lower_bound[k]);
      CHECK(rep.estimates[k] == rep.exact->value);
    }

    const long units[] = {2, 4, 5, 7, 8};
    LaurentWindow a(p, 0, 2);
    a.set(0, PAdic::one(p, PREC));
    a.set(2, PAdic::make(p, 0, mpz_class(units[t]), PREC));  // |a-1|_1 = 1 > |q-1|
    OperatorSpec qop = OperatorSpec::qdiff(a, q);
    RadiusReport qrep = ray_estimate(qop, NormValue::one(p), 24);
    REQUIRE(qrep.exact.has_value());
    REQUIRE(qrep.exact->tag == ExactTag::SmallRadius);
    for (std::size_t k = 0; k < qrep.estimates.size(); ++k)
      CHECK(qrep.estimates[k] == qrep.exact->value);
  }
}
