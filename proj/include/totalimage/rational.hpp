#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>

namespace totalimage {

using Integer = mpz_class;

// mpq_class keeps itself canonical after every arithmetic operation; values
// built from a numerator/denominator pair go through make_rational.
using Rational = mpq_class;

inline Rational make_rational(const Integer &num, const Integer &den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational &r) { return r.get_str(); }

inline bool is_integer(const Rational &r) { return r.get_den() == 1; }

// Deterministic integer in [lo, hi] from a 64-bit engine.
// Avoids std::uniform_int_distribution, whose output differs between
// standard libraries.
inline long uniform_int(std::mt19937_64 &rng, long lo, long hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng() % span);
}

inline Integer gcd(const Integer &a, const Integer &b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer &a, const Integer &b) {
  Integer g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

} // namespace totalimage
