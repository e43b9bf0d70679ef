#pragma once

#include <optional>
#include <vector>

#include "amice/series.hpp"

namespace amice {

// a(T) = lambda * T^N * a_minus(T) * a_plus(T) with a_minus in
// 1 + T^{-1}[[T^{-1}]] and a_plus in 1 + T[[T]], both with constant term
// exactly 1 at window precision.
struct MotzkinFactors {
  PAdic lambda;
  long N = 0;
  LaurentWindow a_minus;
  LaurentWindow a_plus;

  long iterations = 0;
  // |h|_1 exponent at exit of the fixed point; absent when the residual
  // emptied out completely.
  std::optional<mpq_class> residual_exponent;
};

struct MotzkinOptions {
  long budget = 4096;
  // precision floor for the residual; <= 0 derives it from the coefficients
  long floor_digits = 0;
};

// Unit factorization at the Gauss point by a norm-contracting fixed point:
// normalize by b_N T^N, then repeatedly split the residual into negative /
// constant / positive parts and absorb them into the factors. Each pass
// multiplies |h|_1 by itself, so the residual exponent strictly increases.
MotzkinFactors decompose(const LaurentWindow& a, const MotzkinOptions& opts = {});

LaurentWindow recompose(const MotzkinFactors& f);

struct CoefficientBound {
  long index;
  Tri strict;  // |alpha_i| rho^i < 1
  Tri weak;    // |alpha_i| rho^i <= 1
};

struct FactorPredicateReport {
  std::vector<CoefficientBound> minus_bounds;
  std::vector<CoefficientBound> plus_bounds;
  Tri product_bound;  // |a_minus a_plus - 1|_rho < 1
};

FactorPredicateReport factor_predicates(const MotzkinFactors& f, const NormValue& rho);

}  // namespace amice
