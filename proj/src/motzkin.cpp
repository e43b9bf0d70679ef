#include "amice/motzkin.hpp"

namespace amice {

namespace {

constexpr long kExactIntPrec = 64;
constexpr long kIterationCap = 64;

// least index attaining |a|_1 among the regular coefficients
long least_attaining_index(const LaurentWindow& a, const NormValue& sup) {
  for (const auto& [i, c] : a.coeffs()) {
    if (!c.is_regular()) continue;
    if (NormValue::from_exponent(a.prime(), c.valuation()) == sup) return i;
  }
  throw Error("norm not attained by a regular coefficient");
}

}  // namespace

MotzkinFactors decompose(const LaurentWindow& a, const MotzkinOptions& opts) {
  const long p = a.prime();
  if (!a.norm_faithful())
    throw PreconditionViolated("decompose needs a norm-faithful window");
  if (a.empty()) throw NotAUnit("the zero series is not a unit");

  NormValue sup = gauss_norm1(a);  // throws on indeterminate domination
  long N = least_attaining_index(a, sup);
  PAdic lambda0 = a.get(N);

  // u := a / (b_N T^N) has constant term exactly 1 at window precision
  LaurentWindow u = a.scaled(lambda0.inv()).shifted(-N);
  {
    PAdic c0 = u.get(0);
    if (!c0.is_regular() || c0.unit() != 1)
      throw Error("normalization did not produce a unit constant");
  }

  long floor = opts.floor_digits;
  if (floor <= 0) {
    floor = kExactIntPrec;
    for (const auto& [i, c] : a.coeffs())
      if (c.is_regular()) floor = std::min(floor, c.prec());
  }

  LaurentWindow h(p, u.i_min(), u.i_max());
  for (const auto& [i, c] : u.coeffs())
    if (i != 0) h.set(i, c);
  h = h.prune_below(floor);
  if (gauss_norm_lt(h, NormValue::one(p), NormValue::one(p)) != Tri::Yes)
    throw NotAUnit("normalized remainder has |h|_1 >= 1: zeros obstruct the factorization");

  MotzkinFactors out{lambda0, N, LaurentWindow(p, std::min(u.i_min(), -1L), 0),
                     LaurentWindow(p, 0, std::max(u.i_max(), 1L)), 0, std::nullopt};
  out.a_minus.set(0, PAdic::one(p, kExactIntPrec));
  out.a_plus.set(0, PAdic::one(p, kExactIntPrec));
  PAdic mu = PAdic::one(p, kExactIntPrec);

  auto has_regular = [](const LaurentWindow& w) {
    for (const auto& [i, c] : w.coeffs())
      if (c.is_regular()) return true;
    return false;
  };

  std::optional<mpq_class> prev_exponent;
  // an all-indeterminate residual is zero at working precision: converged
  while (!h.empty() && has_regular(h)) {
    if (out.iterations >= kIterationCap)
      throw Error("factorization fixed point failed to contract within its cap");
    NormValue hn = gauss_norm_upper(h, NormValue::one(p));
    if (prev_exponent && !(hn.exponent() > *prev_exponent))
      throw Error("factorization fixed point stopped contracting");
    prev_exponent = hn.exponent();

    Tripartite parts = tripartite(h);
    if (!parts.a0.is_exact_zero()) {
      PAdic dmu = PAdic::one(p, kExactIntPrec).add(parts.a0);
      mu = mu.mul(dmu);
    }
    if (!parts.minus.empty()) {
      LaurentWindow f(p, parts.minus.i_min(), 0);
      f.set(0, PAdic::one(p, kExactIntPrec));
      for (const auto& [i, c] : parts.minus.coeffs()) f.set(i, c);
      out.a_minus = out.a_minus.mul(f).prune_below(floor);
    }
    if (!parts.plus.empty()) {
      LaurentWindow f(p, 0, parts.plus.i_max());
      f.set(0, PAdic::one(p, kExactIntPrec));
      for (const auto& [i, c] : parts.plus.coeffs()) f.set(i, c);
      out.a_plus = out.a_plus.mul(f).prune_below(floor);
    }
    LaurentWindow denom = out.a_minus.mul(out.a_plus).scaled(mu);
    LaurentWindow w = u.mul(window_inv(denom, floor, opts.budget));
    h = LaurentWindow(p, w.i_min(), w.i_max());
    for (const auto& [i, c] : w.coeffs()) {
      if (i == 0) {
        PAdic c0m1 = c.sub(PAdic::one(p, kExactIntPrec));
        if (!c0m1.is_exact_zero()) h.set(0, c0m1);
      } else {
        h.set(i, c);
      }
    }
    h = h.prune_below(floor);
    ++out.iterations;
    if (static_cast<long>(out.a_minus.support_size() + out.a_plus.support_size()) >
        opts.budget) {
      out.a_minus.mark_truncated();
      break;
    }
  }
  if (!h.empty()) out.residual_exponent = gauss_norm_upper(h, NormValue::one(p)).exponent();

  out.lambda = lambda0.mul(mu);
  // move any unit constant drift of the factors into lambda
  for (LaurentWindow* f : {&out.a_minus, &out.a_plus}) {
    PAdic c0 = f->get(0);
    if (!c0.is_regular() || c0.unit() == 1) continue;
    out.lambda = out.lambda.mul(c0);
    *f = f->scaled(c0.inv());
  }
  out.a_minus.set_norm_faithful(true);
  out.a_plus.set_norm_faithful(true);
  return out;
}

LaurentWindow recompose(const MotzkinFactors& f) {
  LaurentWindow prod = f.a_minus.mul(f.a_plus).scaled(f.lambda).shifted(f.N);
  prod.set_norm_faithful(true);
  return prod;
}

FactorPredicateReport factor_predicates(const MotzkinFactors& f, const NormValue& rho) {
  const long p = f.a_minus.prime();
  FactorPredicateReport rep;
  NormValue one = NormValue::one(p);
  auto bounds_of = [&](const LaurentWindow& w, std::vector<CoefficientBound>& out) {
    for (const auto& [i, c] : w.coeffs()) {
      if (i == 0) continue;
      NormValue cap = one.div(rho.pow(i));  // |alpha_i| rho^i vs 1
      out.push_back({i, c.norm_lt(cap), c.norm_le(cap)});
    }
  };
  bounds_of(f.a_minus, rep.minus_bounds);
  bounds_of(f.a_plus, rep.plus_bounds);

  // |a_minus a_plus - 1|_rho via h_m + h_p + h_m h_p, avoiding the constant
  LaurentWindow hm(p, f.a_minus.i_min(), 0);
  for (const auto& [i, c] : f.a_minus.coeffs())
    if (i != 0) hm.set(i, c);
  LaurentWindow hp(p, 0, f.a_plus.i_max());
  for (const auto& [i, c] : f.a_plus.coeffs())
    if (i != 0) hp.set(i, c);
  LaurentWindow prod_m1 = hm.add(hp).add(hm.mul(hp));
  rep.product_bound = gauss_norm_lt(prod_m1, rho, one);
  return rep;
}

}  // namespace amice
