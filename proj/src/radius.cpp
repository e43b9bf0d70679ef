#include "amice/radius.hpp"

namespace amice {

OperatorSpec OperatorSpec::qdiff(LaurentWindow a, QParam q) {
  if (a.prime() != q.prime()) throw PreconditionViolated("operator and q prime mismatch");
  return {Kind::QDiff, std::move(a), std::move(q)};
}

LaurentWindow first_iterate(const OperatorSpec& op) {
  if (op.kind == OperatorSpec::Kind::Diff) return op.coeff.shifted(-1);
  const QParam& q = *op.q;
  PAdic one = PAdic::one(op.prime(), q.q().prec());
  LaurentWindow am1 = op.coeff.sub(LaurentWindow::constant(one));
  PAdic qm1 = q.q().sub(one);
  return am1.scaled(qm1.inv()).shifted(-1);
}

std::vector<LaurentWindow> iterates(const OperatorSpec& op, long k_max,
                                    const IterateOptions& opts) {
  if (k_max < 1) throw PreconditionViolated("k_max must be >= 1");
  std::vector<LaurentWindow> out;
  out.reserve(static_cast<std::size_t>(k_max));
  LaurentWindow g1 = first_iterate(op);
  out.push_back(g1);
  for (long k = 2; k <= k_max; ++k) {
    const LaurentWindow& prev = out.back();
    LaurentWindow next =
        op.kind == OperatorSpec::Kind::Diff
            ? apply(SeriesOp::DdT, prev).add(prev.mul(g1))
            : apply(SeriesOp::Dq, prev, &*op.q)
                  .add(apply(SeriesOp::SigmaQ, prev, &*op.q).mul(g1));
    if (static_cast<long>(next.support_size()) > opts.budget) {
      long lo = next.i_min(), hi = next.i_max();
      long width = opts.budget;
      next = next.truncate_to(std::max(lo, -width / 2), std::min(hi, width / 2));
      next.mark_truncated();
    }
    out.push_back(std::move(next));
  }
  return out;
}

namespace {

NormValue omega_prime_of(const OperatorSpec& op) {
  return op.kind == OperatorSpec::Kind::Diff ? NormValue::omega(op.prime())
                                             : op.q->omega_q();
}

}  // namespace

RadiusReport ray_estimate(const OperatorSpec& op, const NormValue& rho, long k_max,
                          const IterateOptions& opts) {
  const long p = op.prime();
  if (rho.is_zero()) throw PreconditionViolated("rho must be positive");
  NormValue omega_p = omega_prime_of(op);
  RadiusReport rep{rho, {}, {}, std::nullopt, std::nullopt, false, omega_p};

  std::vector<LaurentWindow> gs = iterates(op, k_max, opts);
  LaurentWindow& g1 = gs.front();

  // small-radius closed form: |g_{[1]}|_rho > rho^{-1} forces
  // |g_{[s]}|_rho = |g_{[1]}|^s and Ray = omega' |g_{[1]}|_rho^{-1}
  try {
    NormValue n1 = g1.empty() ? NormValue::zero(p) : gauss_norm(g1, rho);
    if (!n1.is_zero() && n1 > rho.inv())
      rep.exact = RadiusReport::Exact{omega_p.mul(n1.inv()), ExactTag::SmallRadius, false};
  } catch (const IndeterminateValuation&) {
    // no closed-form claim without a determinate |g_{[1]}|
  }

  for (long k = 1; k <= static_cast<long>(gs.size()); ++k) {
    const LaurentWindow& gk = gs[static_cast<std::size_t>(k - 1)];
    if (gk.truncated()) rep.tainted = true;
    if (gk.empty()) {
      // g_{[k]} = 0 identically: all later iterates vanish and Ray = rho
      if (!rep.exact)
        rep.exact = RadiusReport::Exact{rho, ExactTag::ByConstruction, false};
      rep.estimates.push_back(rho);
      rep.estimate_is_lower_bound.push_back(false);
      continue;
    }
    bool lower_only = false;
    NormValue nk = NormValue::zero(p);
    try {
      nk = gauss_norm(gk, rho);
    } catch (const IndeterminateValuation&) {
      nk = gauss_norm_upper(gk, rho);
      lower_only = true;
    }
    if (nk.is_zero()) {
      rep.estimates.push_back(rho);
      rep.estimate_is_lower_bound.push_back(lower_only);
      continue;
    }
    NormValue est = omega_p.mul(nk.pow(mpq_class(-1, k)));
    rep.estimates.push_back(est < rho ? est : rho);
    rep.estimate_is_lower_bound.push_back(lower_only);
  }

  if (!rep.exact && op.kind == OperatorSpec::Kind::QDiff &&
      rho == NormValue::one(p)) {
    // sharp scan over the already computed iterates
    Tri pre = gauss_norm_le(g1, rho, NormValue::one(p));
    if (pre == Tri::Yes) {
      for (long k = 1; k <= static_cast<long>(gs.size()); ++k) {
        const LaurentWindow& gk = gs[static_cast<std::size_t>(k - 1)];
        if (gk.empty()) break;  // handled above
        if (gauss_norm_lt(gk, rho, NormValue::one(p)) == Tri::Yes) {
          rep.exact = RadiusReport::Exact{omega_p, ExactTag::SharpTest, true};
          break;
        }
      }
    }
  } else if (!rep.exact && op.kind == OperatorSpec::Kind::Diff &&
             rho == NormValue::one(p)) {
    Tri pre = gauss_norm_le(op.coeff, rho, NormValue::one(p));
    if (pre == Tri::Yes) {
      for (const LaurentWindow& gk : gs) {
        if (gk.empty()) break;
        if (gauss_norm_lt(gk, rho, NormValue::one(p)) == Tri::Yes) {
          rep.exact = RadiusReport::Exact{omega_p, ExactTag::SharpTest, true};
          break;
        }
      }
    }
  }

  // final value of the running min over the determinate estimates
  bool have_min = false;
  NormValue m = rho;
  for (std::size_t i = 0; i < rep.estimates.size(); ++i) {
    if (rep.estimate_is_lower_bound[i]) continue;
    if (!have_min || rep.estimates[i] < m) {
      m = rep.estimates[i];
      have_min = true;
    }
  }
  if (have_min) rep.running_min_tail = m;
  return rep;
}

SharpResult sharp_test(const OperatorSpec& op, long s_max, const IterateOptions& opts) {
  const long p = op.prime();
  NormValue one = NormValue::one(p);
  if (op.kind == OperatorSpec::Kind::Diff) {
    if (gauss_norm_le(op.coeff, one, one) != Tri::Yes)
      throw PreconditionViolated("sharp test needs |g|_1 <= 1");
  } else {
    if (gauss_norm_le(first_iterate(op), one, one) != Tri::Yes)
      throw PreconditionViolated("sharp test needs |g_{[1]}|_1 <= 1");
  }
  std::vector<LaurentWindow> gs = iterates(op, s_max, opts);
  for (long s = 1; s <= static_cast<long>(gs.size()); ++s) {
    const LaurentWindow& g = gs[static_cast<std::size_t>(s - 1)];
    if (g.empty()) return {true, s};  // identically zero iterate
    if (gauss_norm_lt(g, one, one) == Tri::Yes) return {true, s};
  }
  return {false, 0};
}

std::vector<ProfileEntry> constant_qdiff_profile(const PAdic& lambda, const QParam& q,
                                                 long n_max) {
  const long p = q.prime();
  if (lambda.is_zeroish())
    throw PreconditionViolated("profile needs an invertible constant");
  QParam qinv = QParam::make(q.q().inv());
  std::vector<ProfileEntry> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (long n = 1; n <= n_max; ++n) {
    // sum_{j=0..n} (-1)^j binom(n,j)_{q^{-1}} q^{-j(j-1)/2} lambda^j
    PAdic acc = PAdic::zero(p);
    for (long j = 0; j <= n; ++j) {
      PAdic term = j == 0 ? PAdic::one(p, q.q().prec()) : q_binomial(qinv, n, j);
      term = term.mul(q.q().pow(-j * (j - 1) / 2));
      term = term.mul(lambda.pow(j));  // lambda^0 handled by j = 0 branch
      acc = (j % 2 == 0) ? acc.add(term) : acc.sub(term);
    }
    // value = |acc|^{1/n} / (|q-1| * rho) at rho = 1
    if (acc.is_exact_zero()) {
      out.push_back({NormValue::zero(p), false});
    } else if (acc.is_zero_mod()) {
      mpq_class e = mpq_class(acc.zero_mod_bound(), n) - q.v_q_minus_1();
      out.push_back({NormValue::from_exponent(p, e), true});
    } else {
      mpq_class e = mpq_class(acc.valuation(), n) - q.v_q_minus_1();
      out.push_back({NormValue::from_exponent(p, e), false});
    }
  }
  return out;
}

}  // namespace amice
