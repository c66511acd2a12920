#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "totalimage/errors.hpp"

namespace totalimage {

using Exp = std::uint16_t;

// Exponent vector; its length is the arity of the ring it lives in.
struct Monomial {
  std::vector<Exp> exps;

  Monomial() = default;
  explicit Monomial(std::size_t n) : exps(n, 0) {}
  explicit Monomial(std::vector<Exp> e) : exps(std::move(e)) {}

  std::size_t size() const { return exps.size(); }
  Exp operator[](std::size_t i) const { return exps[i]; }
  Exp &operator[](std::size_t i) { return exps[i]; }

  unsigned degree() const {
    unsigned d = 0;
    for (Exp x : exps) d += x;
    return d;
  }
  bool is_one() const {
    return std::all_of(exps.begin(), exps.end(), [](Exp x) { return x == 0; });
  }
  bool operator==(const Monomial &o) const { return exps == o.exps; }
  bool operator!=(const Monomial &o) const { return exps != o.exps; }

  static Monomial variable(std::size_t n, std::size_t i, Exp power = 1) {
    Monomial m(n);
    m.exps[i] = power;
    return m;
  }
};

inline Monomial operator*(const Monomial &a, const Monomial &b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    unsigned s = unsigned(a[i]) + b[i];
    if (s > 0xFFFF) throw ComputationLimit("exponent overflow");
    r[i] = Exp(s);
  }
  return r;
}

inline bool divides(const Monomial &a, const Monomial &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// b / a, assuming a divides b.
inline Monomial quotient(const Monomial &b, const Monomial &a) {
  Monomial r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = Exp(b[i] - a[i]);
  return r;
}

inline Monomial lcm(const Monomial &a, const Monomial &b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline Monomial gcd(const Monomial &a, const Monomial &b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

inline bool coprime(const Monomial &a, const Monomial &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

// lex, grevlex, or block(k): grevlex on the first k variables, ties broken by
// grevlex on the rest. block(k) eliminates the first k variables.
struct MonomialOrder {
  enum class Kind { lex, grevlex, block };
  Kind kind = Kind::grevlex;
  std::size_t k = 0;
  // Degree weight of the variables after the first block. Only the pair
  // selection strategy looks at it; the order itself ignores it.
  unsigned tail_weight = 1;

  static MonomialOrder lex() { return {Kind::lex, 0}; }
  static MonomialOrder grevlex() { return {Kind::grevlex, 0}; }
  static MonomialOrder block(std::size_t k, unsigned tail_weight = 1) { return {Kind::block, k, tail_weight}; }

  bool operator==(const MonomialOrder &o) const {
    return kind == o.kind && (kind != Kind::block || (k == o.k && tail_weight == o.tail_weight));
  }
  bool operator<(const MonomialOrder &o) const {
    if (kind != o.kind) return int(kind) < int(o.kind);
    if (kind != Kind::block) return false;
    if (k != o.k) return k < o.k;
    return tail_weight < o.tail_weight;
  }

  unsigned weight(std::size_t i) const { return kind == Kind::block && i >= k ? tail_weight : 1; }

  std::string name() const {
    switch (kind) {
    case Kind::lex: return "lex";
    case Kind::grevlex: return "grevlex";
    default: return "block(" + std::to_string(k) + ")";
    }
  }

  // Three-way comparison on raw exponent arrays of length n.
  int compare(const Exp *a, const Exp *b, std::size_t n) const {
    switch (kind) {
    case Kind::lex:
      for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
      return 0;
    case Kind::grevlex: return grevlex_range(a, b, 0, n);
    default: {
      std::size_t kk = std::min(k, n);
      int c = grevlex_range(a, b, 0, kk);
      if (c) return c;
      return grevlex_range(a, b, kk, n);
    }
    }
  }
  int compare(const Monomial &a, const Monomial &b) const {
    return compare(a.exps.data(), b.exps.data(), a.size());
  }

  static int grevlex_range(const Exp *a, const Exp *b, std::size_t lo, std::size_t hi) {
    unsigned da = 0, db = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = hi; i-- > lo;)
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    return 0;
  }
};

} // namespace totalimage
