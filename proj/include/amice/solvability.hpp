#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "amice/motzkin.hpp"
#include "amice/radius.hpp"
#include "amice/series.hpp"
#include "amice/witt.hpp"

namespace amice {

// Witt data indexed by signed n with |n| coprime to p plus the constant a0.
// n_bound is the window bound on |n p^m|; witt_len the longest stored vector.
struct WittFamily {
  long prime;
  PAdic a0;
  std::map<long, WittVector> entries;
  long n_bound = 0;
  long witt_len = 0;

  static WittFamily empty(long prime);
};

struct SlotWitness {
  long n;  // signed family index; 0 for the constant term
  long m;  // slot, -1 when not slot-indexed
  std::string which;
};

struct ConvVerdict {
  std::vector<SlotWitness> strict_failures;
  std::vector<SlotWitness> indeterminate;
  // decay surrogate misses, reported apart from hard criterion failures
  std::vector<SlotWitness> surrogate_failures;

  bool strict_pass() const { return strict_failures.empty() && indeterminate.empty(); }
  bool surrogate_pass() const { return surrogate_failures.empty(); }
};

// Strict per-slot bound |lambda_{-n,m}| < 1 plus the window-level decay
// surrogate: every slot norm over the outer third of represented n must lie
// below decay_cut.
ConvVerdict conv_window(const WittFamily& family, const NormValue& decay_cut);

struct SolvabilityReport {
  enum class Verdict { Pass, Fail, Indeterminate };
  Verdict verdict;
  WittFamily extracted;
  std::vector<SlotWitness> failures;            // hard criterion failures
  std::vector<SlotWitness> surrogate_failures;  // window-model decay misses
  std::string reason;                           // for Indeterminate
  std::optional<long> motzkin_N;                // QDiff
  std::optional<PAdic> lambda;                  // QDiff unit constant
};

struct CheckOptions {
  // decay cut |p|^e for the conv surrogate; e = 2 by default
  long decay_cut_exponent = 2;
  MotzkinOptions motzkin = {};
};

// Reads the Witt data off an operator's coefficients. Diff reads the series
// directly; QDiff goes through the Motzkin factors and their logarithms
// (requires |a_pm - 1|_1 < omega) and solves q^{a0} = lambda.
WittFamily witt_extract(const OperatorSpec& op, const CheckOptions& opts = {});

// The solvability criterion on the represented window: a0 integral, Motzkin
// N = 0 (QDiff), all Witt slots in the closed unit ball, strictly inside on
// the negative side, plus the decay surrogate. PASS is always
// window-qualified.
SolvabilityReport check(const OperatorSpec& op, const CheckOptions& opts = {});

// Coefficient series of the operator attached to a family, over the window:
//   Diff:  sum nu phi_{nu,m} T^{nu p^m} + a0
//   QDiff: q^{a0} exp(phi_q^-) exp(phi_q^+), phi-coefficients
//          phi_{nu,m} (q^{nu p^m} - 1)/p^m
// Phantom tails are extended with zero slots so the whole window is filled.
OperatorSpec generate(const WittFamily& family, OperatorSpec::Kind kind,
                      const std::optional<QParam>& q, long window_lo, long window_hi);

// Truncated exponential exp(sum_n sum_m phi_{n,m} T^{n p^m}/p^m) of the
// chosen sign of the family.
LaurentWindow artin_hasse(const WittFamily& family, long degree, bool plus_direction);

// Unique family with exp(sum b_d T^d / d) equal to the expansion above:
// phi_{n,m} = b_{n p^m}/n, columns closed by the triangular ghost inverse.
// Degrees up to `degree` count as represented (absent means zero); 0 uses
// the largest key of b.
WittFamily exp_decompose(long prime, const std::map<long, PAdic>& b, long degree = 0);

struct CanonicalResult {
  OperatorSpec op;
  // gauge h with theta(h) = g^+ h (Diff) resp. sigma_q(h) = a^+ h (QDiff),
  // to the represented depth
  LaurentWindow gauge;
};

// Basis in which the positive part drops: theta - (a0 + g^-), respectively
// sigma_q - q^{a0} a^-. Requires a passing check().
CanonicalResult canonical_form(const OperatorSpec& op, const CheckOptions& opts = {});

// Differential-to-q-difference deformation sharing the Witt data.
OperatorSpec q_deform(const OperatorSpec& diff, const QParam& q,
                      const CheckOptions& opts = {});

}  // namespace amice
