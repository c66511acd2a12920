#pragma once

// Test-side helpers: naive reference algorithms and point samplers. They
// avoid the engine wherever a short direct computation will do.

#include <random>
#include <string>
#include <vector>

#include "totalimage/ctree.hpp"
#include "totalimage/factor.hpp"
#include "totalimage/varmap.hpp"

namespace oracle {

using namespace totalimage;

inline Rational small_rational(std::mt19937_64 &rng, long lo = -5, long hi = 5) {
  return Rational(uniform_int(rng, lo, hi));
}

inline Polynomial random_poly(const RingPtr &R, std::mt19937_64 &rng, unsigned max_deg, int terms,
                              bool homogeneous = false) {
  Polynomial p(R);
  for (int t = 0; t < terms; ++t) {
    Monomial m(R->size());
    unsigned d = homogeneous ? max_deg : unsigned(uniform_int(rng, 0, long(max_deg)));
    for (unsigned k = 0; k < d; ++k) m[std::size_t(uniform_int(rng, 0, long(R->size()) - 1))] += 1;
    p = p + Polynomial::monomial(R, m, small_rational(rng, -7, 7));
  }
  return p;
}

// Leading term under ord, by direct scan.
inline Term lead(const Polynomial &p, const MonomialOrder &ord) {
  Term best = p.terms()[0];
  for (auto &t : p.terms())
    if (ord.compare(t.m, best.m) > 0) best = t;
  return best;
}

// Full multivariate division; returns the remainder.
inline Polynomial remainder(Polynomial f, const std::vector<Polynomial> &G, const MonomialOrder &ord) {
  Polynomial r(f.ring());
  while (!f.is_zero()) {
    Term lt = lead(f, ord);
    bool divided = false;
    for (auto &g : G) {
      Term lg = lead(g, ord);
      if (divides(lg.m, lt.m)) {
        f = f - g.mul_term(quotient(lt.m, lg.m), lt.c / lg.c);
        divided = true;
        break;
      }
    }
    if (!divided) {
      Polynomial t = Polynomial::monomial(f.ring(), lt.m, lt.c);
      r = r + t;
      f = f - t;
    }
  }
  return r;
}

inline Polynomial s_polynomial(const Polynomial &f, const Polynomial &g, const MonomialOrder &ord) {
  Term a = lead(f, ord), b = lead(g, ord);
  Monomial l = lcm(a.m, b.m);
  return f.mul_term(quotient(l, a.m), Rational(1) / a.c) - g.mul_term(quotient(l, b.m), Rational(1) / b.c);
}

inline bool vanishes_at(const Ideal &I, const std::vector<Rational> &q) {
  for (auto &g : I.gens())
    if (g.eval(q) != 0) return false;
  return true;
}

// Rational roots of a univariate polynomial in variable v.
inline std::vector<Rational> rational_roots(const Polynomial &p, std::size_t v) {
  std::vector<Rational> out;
  for (auto &fac : irreducible_factors(p)) {
    if (fac.total_degree() != 1) continue;
    Rational a = 0, b = 0;
    for (auto &t : fac.terms()) (t.m[v] == 1 ? a : b) = t.c;
    out.push_back(-b / a);
  }
  return out;
}

// A rational point on V(L): random small values on an independent set,
// then triangular solving through lex bases. Empty when the attempt fails.
inline std::vector<Rational> point_on(const Ideal &L, std::mt19937_64 &rng, bool projective) {
  const RingPtr &R = L.ring();
  const std::size_t n = R->size();
  std::vector<std::optional<Rational>> val(n);
  for (auto v : max_independent_set(L)) val[v] = uniform_int(rng, 0, 2) == 0 ? Rational(0) : small_rational(rng, -4, 4);
  for (;;) {
    std::vector<Polynomial> g = L.gens();
    for (std::size_t i = 0; i < n; ++i)
      if (val[i]) g.push_back(Polynomial::variable(R, i) - Polynomial::constant(R, *val[i]));
    Ideal J(R, std::move(g));
    const auto &gb = J.gb(MonomialOrder::lex());
    if (gb.size() == 1 && gb[0].is_constant()) return {};
    bool done = true;
    for (std::size_t i = 0; i < n; ++i) done = done && val[i].has_value();
    if (done) break;
    bool progressed = false;
    for (auto &p : gb) {
      auto sv = p.support_vars();
      if (sv.size() != 1 || val[sv[0]]) continue;
      auto roots = rational_roots(p, sv[0]);
      if (roots.empty()) return {};
      val[sv[0]] = roots[std::size_t(uniform_int(rng, 0, long(roots.size()) - 1))];
      progressed = true;
      break;
    }
    if (!progressed) {
      // Positive dimensional after the choices: pin one more variable.
      std::size_t free = n;
      for (std::size_t i = 0; i < n; ++i)
        if (!val[i]) free = i;
      val[free] = small_rational(rng, -3, 3);
    }
  }
  std::vector<Rational> q;
  for (auto &v : val) q.push_back(*v);
  if (projective) {
    bool zero = true;
    for (auto &c : q) zero = zero && c == 0;
    if (zero) return {};
  }
  if (!vanishes_at(L, q)) return {};
  return q;
}

// f(p) for a random domain point p of the (free) domain; empty if the
// projective image point is undefined.
inline std::vector<Rational> image_point(const RationalMap &f, std::mt19937_64 &rng) {
  std::vector<Rational> p;
  for (std::size_t i = 0; i < f.domain->size(); ++i) p.push_back(small_rational(rng, -6, 6));
  std::vector<Rational> q;
  bool zero = true;
  for (auto &c : f.coords) {
    q.push_back(c.eval(p));
    zero = zero && q.back() == 0;
  }
  if (f.flavor == Flavor::projective && zero) return {};
  return q;
}

inline void collect_labels(const CNode &n, std::vector<const Ideal *> &out) {
  out.push_back(&n.label);
  for (auto &c : n.children) collect_labels(c, out);
}

struct Agreement {
  int image_points = 0;
  int label_points = 0;
  int mismatches = 0;
  std::vector<std::string> details;
};

// Tree membership against the fiber oracle on image points and on points
// of the labels.
inline Agreement check_oracle(const RationalMap &f, const CTree &t, std::uint64_t seed, int n_image = 50,
                              int n_label = 50) {
  Agreement a;
  std::mt19937_64 rng(seed);
  ImageEngine eng(f, seed);
  auto check = [&](const std::vector<Rational> &q) {
    bool tree = member(t, q), fiber = eng.fiber_nonempty(q);
    if (tree != fiber) {
      ++a.mismatches;
      std::string s;
      for (auto &c : q) s += (s.empty() ? "" : ",") + c.get_str();
      a.details.push_back(s + (tree ? " tree:in fiber:out" : " tree:out fiber:in"));
    }
  };
  for (int tries = 0; a.image_points < n_image && tries < 20 * n_image; ++tries) {
    auto q = image_point(f, rng);
    if (q.empty()) continue;
    check(q);
    ++a.image_points;
  }
  std::vector<const Ideal *> labels;
  if (!t.empty()) collect_labels(t.root, labels);
  bool proj = f.flavor == Flavor::projective && t.flavor == Flavor::projective;
  for (int tries = 0; !labels.empty() && a.label_points < n_label && tries < 40 * n_label; ++tries) {
    // Round robin over the labels.
    const Ideal &L = *labels[std::size_t(tries) % labels.size()];
    auto q = point_on(L, rng, proj);
    if (q.empty()) continue;
    check(q);
    ++a.label_points;
  }
  return a;
}

} // namespace oracle
