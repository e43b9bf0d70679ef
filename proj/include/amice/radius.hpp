#pragma once

#include <optional>
#include <vector>

#include "amice/series.hpp"

namespace amice {

// A rank-one operator: theta - g for the differential kind, sigma_q - a for
// the q-difference kind (theta = T d/dT).
struct OperatorSpec {
  enum class Kind { Diff, QDiff };

  Kind kind;
  LaurentWindow coeff;  // g, respectively a
  std::optional<QParam> q;

  static OperatorSpec diff(LaurentWindow g) {
    return {Kind::Diff, std::move(g), std::nullopt};
  }
  static OperatorSpec qdiff(LaurentWindow a, QParam q);
  long prime() const { return coeff.prime(); }
};

struct IterateOptions {
  long budget = 4096;  // coefficient budget before truncation taints results
};

// First iterate: g/T for Diff, (a - 1)/((q-1)T) for QDiff.
LaurentWindow first_iterate(const OperatorSpec& op);

// g_{[1]}..g_{[k_max]} under
//   Diff:  g_{[k+1]} = d/dT(g_{[k]}) + g_{[k]} g_{[1]}
//   QDiff: g_{[s+1]} = d_q(g_{[s]}) + sigma_q(g_{[s]}) g_{[1]}
std::vector<LaurentWindow> iterates(const OperatorSpec& op, long k_max,
                                    const IterateOptions& opts = {});

enum class ExactTag { SmallRadius, SharpTest, ByConstruction };

struct RadiusReport {
  NormValue rho;
  // k-th entry: min(rho, omega' * |g_{[k]}|_rho^{-1/k})
  std::vector<NormValue> estimates;
  // set where the iterate's norm is only bounded above (cancellation below
  // precision); the stored value is then a lower bound for the candidate
  std::vector<bool> estimate_is_lower_bound;
  std::optional<NormValue> running_min_tail;
  struct Exact {
    NormValue value;
    ExactTag tag;
    // SharpTest proves Ray > value; the other tags give equality.
    bool strict_lower;
  };
  std::optional<Exact> exact;
  bool tainted = false;

  NormValue omega_prime;  // omega or omega_q, recorded for the report
};

// Finite-k radius-of-convergence data at rho. `exact` is set only when a
// closed form applies; otherwise the report is explicitly an estimate.
RadiusReport ray_estimate(const OperatorSpec& op, const NormValue& rho, long k_max,
                          const IterateOptions& opts = {});

struct SharpResult {
  bool proven;     // Ray > omega' certified
  long witness_s;  // first s with |g_{[s]}|_1 < 1 when proven
};

// Scan for |g_{[s]}|_1 < 1; requires |g_{[1]}|_1 <= 1 at the Gauss point.
SharpResult sharp_test(const OperatorSpec& op, long s_max, const IterateOptions& opts = {});

struct ProfileEntry {
  NormValue value;
  bool upper_bound_only;  // cancellation left only a bound at this n
};

// Per-n values of |g_{[n]}|^{1/n} for the constant operator sigma_q - lambda
// at rho = 1, from the q-binomial closed form.
std::vector<ProfileEntry> constant_qdiff_profile(const PAdic& lambda, const QParam& q,
                                                 long n_max);

}  // namespace amice
