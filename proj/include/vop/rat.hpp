#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "vop/error.hpp"

namespace vop {

using Int = mpz_class;

/// Exact rational number. mpq_class keeps the canonical form the code relies
/// on everywhere: gcd(|num|, den) = 1, den > 0, zero stored as 0/1.
using Rat = mpq_class;

/// Parses "p", "-p" or "p/q" (q > 0 after reduction). Rejects anything else.
inline Rat rat_from_string(std::string_view s) {
  auto fail = [&] { throw SpecError("not a rational: '" + std::string(s) + "'"); };
  if (s.empty()) fail();
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) fail();
  bool saw_slash = false;
  std::size_t digits_before = 0, digits_after = 0;
  for (; i < s.size(); ++i) {
    if (s[i] == '/') {
      if (saw_slash || digits_before == 0) fail();
      saw_slash = true;
    } else if (s[i] >= '0' && s[i] <= '9') {
      (saw_slash ? digits_after : digits_before)++;
    } else {
      fail();
    }
  }
  if (digits_before == 0 || (saw_slash && digits_after == 0)) fail();
  Rat r(std::string(s), 10);
  if (r.get_den() == 0) fail();
  r.canonicalize();
  return r;
}

/// "p/q", or just "p" when the denominator is 1.
inline std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Int factorial(unsigned long n) {
  Int out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

inline Int binomial_int(unsigned long n, unsigned long k) {
  Int out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// top * (top-1) * ... * (top-count+1); empty product is 1.
inline Int falling_factorial(long top, unsigned count) {
  Int out = 1;
  for (unsigned i = 0; i < count; ++i) out *= Int(top - long(i));
  return out;
}

}  // namespace vop
