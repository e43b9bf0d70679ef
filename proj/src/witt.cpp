#include "amice/witt.hpp"

namespace amice {

WittVector WittVector::zeros(long prime, std::size_t len) {
  return WittVector{prime, std::vector<PAdic>(len, PAdic::zero(prime))};
}

WittVector WittVector::teichmueller(const PAdic& x, std::size_t len) {
  WittVector w = zeros(x.prime(), len);
  if (len > 0) w.comp[0] = x;
  return w;
}

namespace {

long pow_long(long b, long e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

PhantomVector ghost(const WittVector& w) {
  PhantomVector ph{w.prime, {}};
  ph.comp.reserve(w.length());
  for (std::size_t m = 0; m < w.length(); ++m) {
    PAdic acc = PAdic::zero(w.prime);
    for (std::size_t j = 0; j <= m; ++j) {
      const PAdic& c = w.comp[j];
      if (c.is_exact_zero()) continue;
      PAdic term = c.pow(pow_long(w.prime, static_cast<long>(m - j)));
      acc = acc.add(term.mul_pow_p(static_cast<long>(j)));
    }
    ph.comp.push_back(acc);
  }
  return ph;
}

WittVector unghost(const PhantomVector& ph) {
  WittVector w{ph.prime, {}};
  w.comp.reserve(ph.length());
  for (std::size_t m = 0; m < ph.length(); ++m) {
    PAdic acc = ph.comp[m];
    for (std::size_t j = 0; j < m; ++j) {
      const PAdic& c = w.comp[j];
      if (c.is_exact_zero()) continue;
      PAdic term = c.pow(pow_long(ph.prime, static_cast<long>(m - j)));
      acc = acc.sub(term.mul_pow_p(static_cast<long>(j)));
    }
    PAdic slot = acc.mul_pow_p(-static_cast<long>(m));
    if (slot.is_zero_mod() && slot.zero_mod_bound() <= 0)
      throw PrecisionExhausted("unghost: slot " + std::to_string(m) +
                               " has no remaining precision");
    w.comp.push_back(std::move(slot));
  }
  return w;
}

namespace {

WittVector witt_op(const WittVector& x, const WittVector& y, bool add) {
  if (x.prime != y.prime) throw PreconditionViolated("mixed primes in Witt arithmetic");
  if (x.length() != y.length())
    throw PreconditionViolated("mixed lengths in Witt arithmetic");
  PhantomVector a = ghost(x), b = ghost(y);
  PhantomVector r{x.prime, {}};
  r.comp.reserve(a.length());
  for (std::size_t m = 0; m < a.length(); ++m)
    r.comp.push_back(add ? a.comp[m].add(b.comp[m]) : a.comp[m].mul(b.comp[m]));
  return unghost(r);
}

}  // namespace

WittVector witt_add(const WittVector& x, const WittVector& y) {
  return witt_op(x, y, true);
}

WittVector witt_mul(const WittVector& x, const WittVector& y) {
  return witt_op(x, y, false);
}

std::vector<SlotVerdict> integrality(const WittVector& w, bool strict) {
  std::vector<SlotVerdict> out;
  out.reserve(w.length());
  NormValue one = NormValue::one(w.prime);
  for (std::size_t m = 0; m < w.length(); ++m) {
    Tri t = strict ? w.comp[m].norm_lt(one) : w.comp[m].norm_le(one);
    SlotTest st = t == Tri::Yes    ? SlotTest::Pass
                  : t == Tri::No   ? SlotTest::Fail
                                   : SlotTest::Indeterminate;
    out.push_back({m, st});
  }
  return out;
}

bool all_pass(const std::vector<SlotVerdict>& v) {
  for (const auto& s : v)
    if (s.result != SlotTest::Pass) return false;
  return true;
}

}  // namespace amice
