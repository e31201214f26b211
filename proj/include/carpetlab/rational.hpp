#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace carpetlab {

// Exact rational scalar. All identity checks run on this type; doubles are
// only used by the iterative solver and the report layer.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rat_pow(const Rat& base, long e) {
  if (e < 0) return rat(1) / rat_pow(base, -e);
  Rat acc(1), b = base;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

inline long long ipow(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// True if the denominator divides 2 * 3^a * 7^b, the shape every exact value
// produced by the triadic recursion must have.
inline bool is_triadic7(const Rat& r) {
  mpz_class d = r.get_den();
  for (int p : {2, 3, 7}) {
    while (mpz_divisible_ui_p(d.get_mpz_t(), p)) d /= p;
  }
  return d == 1;
}

}  // namespace carpetlab
