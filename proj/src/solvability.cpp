#include "amice/solvability.hpp"

#include <algorithm>
#include <functional>

namespace amice {

namespace {

constexpr long kExactIntPrec = 64;

struct IndexSplit {
  long nu;  // signed, coprime to p
  long m;
};

IndexSplit split_index(long i, long p) {
  if (i == 0) throw PreconditionViolated("index 0 has no n p^m form");
  long m = 0;
  long n = i;
  while (n % p == 0) {
    n /= p;
    ++m;
  }
  return {n, m};
}

long slots_in_window(long nu, long p, long lo, long hi) {
  // number of m >= 0 with nu p^m inside [lo, hi]
  long count = 0;
  long idx = nu;
  while (idx >= lo && idx <= hi) {
    ++count;
    if (idx > (hi / p) + 1 && idx > 0) break;  // overflow guard
    if (idx < (lo / p) - 1 && idx < 0) break;
    idx *= p;
  }
  return count;
}

WittVector padded(const WittVector& w, std::size_t len) {
  WittVector r = w;
  while (r.comp.size() < len) r.comp.push_back(PAdic::zero(w.prime));
  return r;
}

void sort_witnesses(std::vector<SlotWitness>& v) {
  std::sort(v.begin(), v.end(), [](const SlotWitness& a, const SlotWitness& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.m != b.m) return a.m < b.m;
    return a.which < b.which;
  });
}

}  // namespace

WittFamily WittFamily::empty(long prime) {
  return WittFamily{prime, PAdic::zero(prime), {}, 0, 0};
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

// rebuild per-nu phantom columns from a one-sided coefficient map
std::map<long, WittVector> columns_from(
    const LaurentWindow& side, long p, long lo, long hi,
    const std::function<PAdic(long idx, const PAdic&)>& to_phi) {
  std::map<long, std::map<long, PAdic>> cols;
  long consumed = 0;
  for (const auto& [i, c] : side.coeffs()) {
    if (c.is_exact_zero()) {
      ++consumed;
      continue;
    }
    IndexSplit s = split_index(i, p);
    cols[s.nu][s.m] = to_phi(i, c);
    ++consumed;
  }
  // every stored coefficient sits at some nu p^m; this guards the indexing
  if (consumed != static_cast<long>(side.support_size()))
    throw Error("extraction failed to consume the window support");

  std::map<long, WittVector> out;
  for (auto& [nu, col] : cols) {
    long len = slots_in_window(nu, p, lo, hi);
    PhantomVector ph{p, std::vector<PAdic>(static_cast<std::size_t>(len), PAdic::zero(p))};
    for (auto& [m, phi] : col) {
      if (m >= len) throw Error("phantom slot outside the represented window");
      ph.comp[static_cast<std::size_t>(m)] = std::move(phi);
    }
    out.emplace(nu, unghost(ph));
  }
  return out;
}

struct QExtraction {
  WittFamily family;
  MotzkinFactors factors;
};

PAdic solve_exponent(const QParam& q, const PAdic& lambda) {
  const long p = q.prime();
  if (!lambda.is_regular() || lambda.valuation() != 0)
    throw ExponentSolveFailed("lambda is not a unit");
  PAdic lm1 = lambda.sub(PAdic::one(p, lambda.prec()));
  if (lm1.is_exact_zero()) return PAdic::zero(p);
  if (lm1.is_zero_mod()) {
    // lambda = 1 to working precision; a0 = log(lambda)/log(q) follows suit
    return PAdic::zero_mod(p, lm1.zero_mod_bound() - q.v_q_minus_1());
  }
  if (lm1.valuation() < 1)
    throw ExponentSolveFailed("|lambda - 1| >= 1: no exponent with q^{a0} = lambda");
  PAdic qm1 = q.q().sub(PAdic::one(p, q.q().prec()));
  PAdic a0 = padic_log1p_unit(lm1).div(padic_log1p_unit(qm1));
  // verification obligation: q^{a0} reproduces lambda within precision
  if (a0.is_regular()) {
    mpq_class gamma = mpq_class(q.v_q_minus_1()) - mpq_class(1, p - 1) -
                      std::max(-a0.valuation(), 0L);
    if (gamma > 0 && !q_power(q, a0).eq_within_prec(lambda))
      throw ExponentSolveFailed("q^{a0} does not reproduce lambda within precision");
  }
  return a0;
}

QExtraction extract_qdiff(const OperatorSpec& op, const CheckOptions& opts) {
  const long p = op.prime();
  const QParam& q = *op.q;
  MotzkinFactors f = decompose(op.coeff, opts.motzkin);

  NormValue omega = NormValue::omega(p);
  LaurentWindow hm(p, std::min(f.a_minus.i_min(), -1L), -1);
  for (const auto& [i, c] : f.a_minus.coeffs())
    if (i != 0) hm.set(i, c);
  LaurentWindow hp(p, 1, std::max(f.a_plus.i_max(), 1L));
  for (const auto& [i, c] : f.a_plus.coeffs())
    if (i != 0) hp.set(i, c);
  if (gauss_norm_lt(hm, NormValue::one(p), omega) != Tri::Yes ||
      gauss_norm_lt(hp, NormValue::one(p), omega) != Tri::Yes)
    throw LogDomain("|a_pm - 1|_1 >= omega: log/exp do not invert");

  long lo = std::min(hm.empty() ? -1 : hm.i_min(), -1L);
  long hi = std::max(hp.empty() ? 1 : hp.i_max(), 1L);
  LaurentWindow log_m = hm.empty() ? hm : window_log1p(hm, -lo);
  LaurentWindow log_p_side = hp.empty() ? hp : window_log1p(hp, hi);

  auto to_phi = [&](long idx, const PAdic& c) {
    IndexSplit s = split_index(idx, p);
    PAdic denom = q.q().pow(idx).sub(PAdic::one(p, q.q().prec()));
    return c.mul_pow_p(s.m).div(denom);
  };

  WittFamily fam = WittFamily::empty(p);
  auto neg = columns_from(log_m, p, lo, -1, to_phi);
  auto pos = columns_from(log_p_side, p, 1, hi, to_phi);
  fam.entries.insert(neg.begin(), neg.end());
  fam.entries.insert(pos.begin(), pos.end());
  fam.a0 = solve_exponent(q, f.lambda);
  fam.n_bound = std::max(std::abs(lo), std::abs(hi));
  for (const auto& [nu, w] : fam.entries)
    fam.witt_len = std::max(fam.witt_len, static_cast<long>(w.length()));
  return {std::move(fam), std::move(f)};
}

}  // namespace

WittFamily witt_extract(const OperatorSpec& op, const CheckOptions& opts) {
  const long p = op.prime();
  if (op.kind == OperatorSpec::Kind::QDiff) return extract_qdiff(op, opts).family;

  Tripartite parts = tripartite(op.coeff);
  long lo = std::min(op.coeff.i_min(), -1L), hi = std::max(op.coeff.i_max(), 1L);
  auto to_phi = [&](long idx, const PAdic& c) {
    IndexSplit s = split_index(idx, p);
    return c.div_int(mpz_class(s.nu));
  };
  WittFamily fam = WittFamily::empty(p);
  auto neg = columns_from(parts.minus, p, lo, -1, to_phi);
  auto pos = columns_from(parts.plus, p, 1, hi, to_phi);
  fam.entries.insert(neg.begin(), neg.end());
  fam.entries.insert(pos.begin(), pos.end());
  fam.a0 = parts.a0;
  fam.n_bound = std::max(std::abs(lo), std::abs(hi));
  for (const auto& [nu, w] : fam.entries)
    fam.witt_len = std::max(fam.witt_len, static_cast<long>(w.length()));
  return fam;
}

// ---------------------------------------------------------------------------
// Criterion

ConvVerdict conv_window(const WittFamily& family, const NormValue& decay_cut) {
  ConvVerdict v;
  NormValue one = NormValue::one(family.prime);
  long outer_from = (2 * family.n_bound) / 3;
  for (const auto& [nu, w] : family.entries) {
    if (nu >= 0) continue;
    for (std::size_t m = 0; m < w.length(); ++m) {
      Tri strict = w.comp[m].norm_lt(one);
      if (strict == Tri::No)
        v.strict_failures.push_back({nu, static_cast<long>(m), "strict-negative"});
      else if (strict == Tri::Unknown)
        v.indeterminate.push_back({nu, static_cast<long>(m), "strict-negative"});
      if (-nu > outer_from) {
        Tri decay = w.comp[m].norm_lt(decay_cut);
        if (decay == Tri::No)
          v.surrogate_failures.push_back({nu, static_cast<long>(m), "decay-surrogate"});
        else if (decay == Tri::Unknown)
          v.indeterminate.push_back({nu, static_cast<long>(m), "decay-surrogate"});
      }
    }
  }
  sort_witnesses(v.strict_failures);
  sort_witnesses(v.indeterminate);
  sort_witnesses(v.surrogate_failures);
  return v;
}

SolvabilityReport check(const OperatorSpec& op, const CheckOptions& opts) {
  const long p = op.prime();
  if (!op.coeff.norm_faithful())
    throw PreconditionViolated("check needs a norm-faithful window");
  SolvabilityReport rep{SolvabilityReport::Verdict::Pass,
                        WittFamily::empty(p),
                        {},
                        {},
                        "",
                        std::nullopt,
                        std::nullopt};
  std::vector<SlotWitness> indet;

  if (op.kind == OperatorSpec::Kind::QDiff) {
    if (!op.q->strong())
      throw PreconditionViolated("q-difference criterion needs |q - 1| < omega");
    MotzkinFactors f = decompose(op.coeff, opts.motzkin);
    rep.motzkin_N = f.N;
    rep.lambda = f.lambda;
    // solvability forces lambda into the open unit disk around 1
    Tri lam_ok = Tri::Unknown;
    if (f.lambda.is_regular()) {
      PAdic lm1 = f.lambda.sub(PAdic::one(p, f.lambda.prec()));
      lam_ok = f.lambda.valuation() != 0 ? Tri::No : lm1.norm_lt(NormValue::one(p));
      if (!lm1.is_regular()) lam_ok = Tri::Yes;  // lambda = 1 within precision
    }
    if (lam_ok == Tri::No) rep.failures.push_back({0, -1, "lambda"});
    if (lam_ok == Tri::Unknown) indet.push_back({0, -1, "lambda"});
    if (f.N != 0) rep.failures.push_back({0, -1, "motzkin-N"});
    if (!rep.failures.empty()) {
      rep.verdict = SolvabilityReport::Verdict::Fail;
      sort_witnesses(rep.failures);
      return rep;
    }
    if (lam_ok == Tri::Unknown) {
      rep.verdict = SolvabilityReport::Verdict::Indeterminate;
      rep.reason = "precision cannot settle: lambda";
      return rep;
    }
    rep.extracted = extract_qdiff(op, opts).family;
  } else {
    rep.extracted = witt_extract(op, opts);
  }

  // (a) a0 in the ring of integers
  Tri a0_ok = rep.extracted.a0.norm_le(NormValue::one(p));
  if (a0_ok == Tri::No) rep.failures.push_back({0, -1, "a0"});
  if (a0_ok == Tri::Unknown) indet.push_back({0, -1, "a0"});

  // (c) integrality of every represented slot, both families
  for (const auto& [nu, w] : rep.extracted.entries) {
    auto verdicts = integrality(w, false);
    for (const auto& sv : verdicts) {
      if (sv.result == SlotTest::Fail)
        rep.failures.push_back({nu, static_cast<long>(sv.slot), "integrality"});
      else if (sv.result == SlotTest::Indeterminate)
        indet.push_back({nu, static_cast<long>(sv.slot), "integrality"});
    }
  }

  // (d) negative family: strict bounds plus the decay surrogate
  NormValue cut = NormValue::from_exponent(p, opts.decay_cut_exponent);
  ConvVerdict conv = conv_window(rep.extracted, cut);
  for (const auto& wtn : conv.strict_failures) rep.failures.push_back(wtn);
  for (const auto& wtn : conv.indeterminate) indet.push_back(wtn);
  rep.surrogate_failures = conv.surrogate_failures;

  sort_witnesses(rep.failures);
  sort_witnesses(rep.surrogate_failures);
  if (!rep.failures.empty()) {
    rep.verdict = SolvabilityReport::Verdict::Fail;
  } else if (!indet.empty()) {
    rep.verdict = SolvabilityReport::Verdict::Indeterminate;
    rep.reason = "precision cannot settle: " + indet.front().which;
  } else if (!rep.surrogate_failures.empty()) {
    rep.verdict = SolvabilityReport::Verdict::Indeterminate;
    rep.reason = "decay surrogate failed on the outer window";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

LaurentWindow phi_side(const WittFamily& family, bool plus, long depth, const QParam* q) {
  // coefficients phi_{nu,m} T^{nu p^m} / p^m, optionally times (q^{nu p^m}-1)
  const long p = family.prime;
  LaurentWindow s(p, plus ? 1 : -depth, plus ? depth : -1);
  for (const auto& [nu, w] : family.entries) {
    if (plus != (nu > 0)) continue;
    if (std::abs(nu) > depth) continue;
    long len = slots_in_window(nu, p, plus ? 1 : -depth, plus ? depth : -1);
    PhantomVector ph = ghost(padded(w, static_cast<std::size_t>(len)));
    long idx = nu;
    for (long m = 0; m < len; ++m) {
      PAdic coeff = ph.comp[static_cast<std::size_t>(m)].mul_pow_p(-m);
      if (q != nullptr) {
        PAdic qfac = q->q().pow(idx).sub(PAdic::one(p, q->q().prec()));
        coeff = coeff.mul(qfac);
      }
      if (!coeff.is_exact_zero()) s.set(idx, coeff);
      idx *= p;
    }
  }
  return s;
}

}  // namespace

OperatorSpec generate(const WittFamily& family, OperatorSpec::Kind kind,
                      const std::optional<QParam>& q, long window_lo, long window_hi) {
  const long p = family.prime;
  if (window_lo > 0 || window_hi < 0)
    throw PreconditionViolated("window must contain 0");

  if (kind == OperatorSpec::Kind::Diff) {
    LaurentWindow g(p, window_lo, window_hi);
    if (!family.a0.is_exact_zero()) g.set(0, family.a0);
    for (const auto& [nu, w] : family.entries) {
      long len = slots_in_window(nu, p, window_lo, window_hi);
      if (len == 0) continue;
      PhantomVector ph = ghost(padded(w, static_cast<std::size_t>(len)));
      long idx = nu;
      for (long m = 0; m < len; ++m) {
        PAdic coeff = ph.comp[static_cast<std::size_t>(m)].mul_int(mpz_class(nu));
        if (!coeff.is_exact_zero()) g.set(idx, coeff);
        idx *= p;
      }
    }
    g.set_norm_faithful(true);
    return OperatorSpec::diff(std::move(g));
  }

  if (!q) throw PreconditionViolated("q-difference generation needs q");
  if (!q->strong())
    throw OutOfConvergenceDomain("q-difference generation needs |q - 1| < omega");
  NormValue omega = NormValue::omega(p);
  LaurentWindow phi_m = phi_side(family, false, -window_lo, &*q);
  LaurentWindow phi_p = phi_side(family, true, window_hi, &*q);
  if (gauss_norm_lt(phi_m, NormValue::one(p), omega) != Tri::Yes ||
      gauss_norm_lt(phi_p, NormValue::one(p), omega) != Tri::Yes)
    throw OutOfConvergenceDomain("exponential argument reaches omega at the Gauss point");
  LaurentWindow am =
      phi_m.empty() ? LaurentWindow::constant(PAdic::one(p, kExactIntPrec))
                    : window_exp(phi_m, -window_lo);
  LaurentWindow ap =
      phi_p.empty() ? LaurentWindow::constant(PAdic::one(p, kExactIntPrec))
                    : window_exp(phi_p, window_hi);
  PAdic scale = q_power(*q, family.a0);
  LaurentWindow a = am.mul(ap).scaled(scale);
  a.set_norm_faithful(true);
  return OperatorSpec::qdiff(std::move(a), *q);
}

LaurentWindow artin_hasse(const WittFamily& family, long degree, bool plus_direction) {
  if (degree < 1) throw PreconditionViolated("expansion degree must be >= 1");
  LaurentWindow s = phi_side(family, plus_direction, degree, nullptr);
  return window_exp(s, degree);
}

WittFamily exp_decompose(long prime, const std::map<long, PAdic>& b, long degree) {
  WittFamily fam = WittFamily::empty(prime);
  if (b.empty()) return fam;
  std::map<long, std::map<long, PAdic>> cols;
  long max_d = 0;
  for (const auto& [d, c] : b) {
    if (d < 1) throw PreconditionViolated("exponent degrees must be >= 1");
    IndexSplit s = split_index(d, prime);
    cols[s.nu][s.m] = c.div_int(mpz_class(s.nu));
    max_d = std::max(max_d, d);
  }
  if (degree <= 0) degree = max_d;
  if (degree < max_d) throw PreconditionViolated("degree bound below the largest key");
  for (auto& [nu, col] : cols) {
    long len = slots_in_window(nu, prime, 1, degree);
    PhantomVector ph{prime,
                     std::vector<PAdic>(static_cast<std::size_t>(len), PAdic::zero(prime))};
    for (auto& [m, phi] : col) ph.comp[static_cast<std::size_t>(m)] = std::move(phi);
    fam.entries.emplace(nu, unghost(ph));
    fam.witt_len = std::max(fam.witt_len, len);
  }
  fam.n_bound = degree;
  return fam;
}

// ---------------------------------------------------------------------------
// Canonical form and deformation

CanonicalResult canonical_form(const OperatorSpec& op, const CheckOptions& opts) {
  SolvabilityReport rep = check(op, opts);
  if (rep.verdict != SolvabilityReport::Verdict::Pass)
    throw NotSolvable(rep.verdict == SolvabilityReport::Verdict::Fail
                          ? "operator fails the solvability criterion"
                          : "solvability indeterminate: " + rep.reason);
  const long p = op.prime();
  WittFamily positive = WittFamily::empty(p);
  positive.n_bound = rep.extracted.n_bound;
  for (const auto& [nu, w] : rep.extracted.entries) {
    if (nu > 0) {
      positive.entries.emplace(nu, w);
      positive.witt_len = std::max(positive.witt_len, static_cast<long>(w.length()));
    }
  }
  long depth = std::max(op.coeff.i_max(), 1L);
  LaurentWindow gauge = artin_hasse(positive, depth, true);

  if (op.kind == OperatorSpec::Kind::Diff) {
    Tripartite parts = tripartite(op.coeff);
    LaurentWindow canon(p, std::min(op.coeff.i_min(), 0L), 0);
    if (!parts.a0.is_exact_zero()) canon.set(0, parts.a0);
    for (const auto& [i, c] : parts.minus.coeffs()) canon.set(i, c);
    canon.set_norm_faithful(true);
    return {OperatorSpec::diff(std::move(canon)), std::move(gauge)};
  }

  QExtraction ext = extract_qdiff(op, opts);
  PAdic scale = q_power(*op.q, ext.family.a0);
  LaurentWindow canon = ext.factors.a_minus.scaled(scale);
  canon.set_norm_faithful(true);
  return {OperatorSpec::qdiff(std::move(canon), *op.q), std::move(gauge)};
}

OperatorSpec q_deform(const OperatorSpec& diff, const QParam& q, const CheckOptions& opts) {
  if (diff.kind != OperatorSpec::Kind::Diff)
    throw PreconditionViolated("deformation starts from a differential operator");
  SolvabilityReport rep = check(diff, opts);
  if (rep.verdict == SolvabilityReport::Verdict::Fail)
    throw NotSolvable("operator fails the solvability criterion");
  return generate(rep.extracted, OperatorSpec::Kind::QDiff, q, diff.coeff.i_min(),
                  diff.coeff.i_max());
}

}  // namespace amice
