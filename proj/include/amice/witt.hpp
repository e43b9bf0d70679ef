#pragma once

#include <vector>

#include "amice/padic.hpp"

namespace amice {

// Finite-length p-typical Witt vector (lambda_0, ..., lambda_L).
struct WittVector {
  long prime;
  std::vector<PAdic> comp;

  std::size_t length() const { return comp.size(); }
  static WittVector zeros(long prime, std::size_t len);
  // Teichmueller-shaped vector (x, 0, 0, ...).
  static WittVector teichmueller(const PAdic& x, std::size_t len);
};

// Ghost components <phi_0, ..., phi_L> of a Witt vector.
struct PhantomVector {
  long prime;
  std::vector<PAdic> comp;

  std::size_t length() const { return comp.size(); }
};

// phi_m = lambda_0^{p^m} + p lambda_1^{p^{m-1}} + ... + p^m lambda_m.
PhantomVector ghost(const WittVector& w);

// Triangular inverse of ghost; slot m costs m digits of absolute precision.
// Throws PrecisionExhausted when a slot's remaining precision drops to 0.
WittVector unghost(const PhantomVector& ph);

// Ring operations computed through ghost coordinates (p invertible in Q_p).
WittVector witt_add(const WittVector& x, const WittVector& y);
WittVector witt_mul(const WittVector& x, const WittVector& y);

enum class SlotTest { Pass, Fail, Indeterminate };

struct SlotVerdict {
  std::size_t slot;
  SlotTest result;
};

// strict=false: |lambda_m| <= 1 per slot; strict=true: |lambda_m| < 1.
std::vector<SlotVerdict> integrality(const WittVector& w, bool strict);

bool all_pass(const std::vector<SlotVerdict>& v);

}  // namespace amice
