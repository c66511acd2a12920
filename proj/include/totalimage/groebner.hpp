#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "totalimage/engine.hpp"
#include "totalimage/polynomial.hpp"

namespace totalimage {

enum class Flavor { affine, projective };

// Reduced Groebner basis of gens, monic, ascending by leading monomial.
inline std::vector<Polynomial> compute_gb(const RingPtr &ring, const std::vector<Polynomial> &gens,
                                          const MonomialOrder &ord,
                                          const GbLimits &lim = gb_limits()) {
  std::size_t nv = ring->size();
  std::vector<Polynomial> out;
  auto monic_of = [&](const Polynomial &p) { return p.monic(ord); };
  if (lim.characteristic == 0) {
    engine::Buchberger<engine::ZZ> bb(engine::ZZ{}, nv, ord, lim);
    std::vector<engine::EPoly<Integer>> in;
    for (auto &g : gens)
      if (!g.is_zero()) in.push_back(bb.from_poly(g));
    for (auto &p : bb.run(std::move(in))) out.push_back(monic_of(bb.to_poly(p, ring)));
  } else {
    engine::Fp k{lim.characteristic};
    engine::Buchberger<engine::Fp> bb(k, nv, ord, lim);
    std::vector<engine::EPoly<std::uint32_t>> in;
    for (auto &g : gens)
      if (!g.is_zero()) in.push_back(bb.from_poly(g));
    for (auto &p : bb.run(std::move(in))) out.push_back(bb.to_poly(p, ring));
  }
  return out;
}

class Ideal {
public:
  Ideal() = default;
  explicit Ideal(RingPtr ring) : ring_(std::move(ring)), cache_(std::make_shared<Cache>()) {}
  Ideal(RingPtr ring, std::vector<Polynomial> gens)
      : ring_(std::move(ring)), cache_(std::make_shared<Cache>()) {
    for (auto &g : gens) {
      if (g.is_zero()) continue;
      if (!same_ring(g.ring(), ring_)) throw StructuralError("ideal generator in wrong ring");
      gens_.push_back(std::move(g));
    }
  }
  static Ideal unit(const RingPtr &r) { return Ideal(r, {Polynomial::constant(r, 1)}); }

  const RingPtr &ring() const { return ring_; }
  const std::vector<Polynomial> &gens() const { return gens_; }
  std::size_t nvars() const { return ring_->size(); }

  const std::vector<Polynomial> &gb(const MonomialOrder &ord = MonomialOrder::grevlex()) const {
    const auto &lim = gb_limits();
    Key key{ord, lim.characteristic};
    {
      std::lock_guard<std::mutex> lk(cache_->mu);
      auto it = cache_->gbs.find(key);
      if (it != cache_->gbs.end()) return it->second;
    }
    auto g = compute_gb(ring_, gens_, ord, lim);
    std::lock_guard<std::mutex> lk(cache_->mu);
    return cache_->gbs.emplace(key, std::move(g)).first->second;
  }

  bool is_unit() const {
    auto &g = gb();
    return g.size() == 1 && g[0].is_constant();
  }
  bool is_zero() const { return gens_.empty(); }
  bool is_homogeneous() const {
    for (auto &g : gens_)
      if (!g.is_homogeneous()) return false;
    return true;
  }

  bool operator==(const Ideal &o) const {
    if (!same_ring(ring_, o.ring_)) return false;
    return gb() == o.gb();
  }
  bool operator!=(const Ideal &o) const { return !(*this == o); }

  // Generators of the reduced grevlex basis, printed in ascending order.
  std::string to_string() const {
    if (is_unit()) return "ideal(1)";
    auto &g = gb();
    if (g.empty()) return "ideal()";
    if (g.size() == 1) {
      auto &t = g[0].terms();
      if (t.size() == 1 && t[0].c == 1 && t[0].m.degree() == 1)
        return "ideal " + g[0].to_string();
    }
    std::string s = "ideal(";
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i) s += ",";
      s += g[i].to_string();
    }
    return s + ")";
  }
  std::vector<std::string> generator_strings() const {
    std::vector<std::string> out;
    if (is_unit()) return {"1"};
    for (auto &p : gb()) out.push_back(p.to_string());
    return out;
  }

  Ideal operator+(const Ideal &o) const {
    std::vector<Polynomial> g = gens_;
    g.insert(g.end(), o.gens_.begin(), o.gens_.end());
    return Ideal(ring_, std::move(g));
  }
  Ideal plus(const std::vector<Polynomial> &extra) const {
    std::vector<Polynomial> g = gens_;
    g.insert(g.end(), extra.begin(), extra.end());
    return Ideal(ring_, std::move(g));
  }
  // Same ideal with its reduced grevlex basis as generators.
  Ideal trimmed() const {
    Ideal r(ring_, gb());
    return r;
  }

private:
  struct Key {
    MonomialOrder ord;
    unsigned p;
    bool operator<(const Key &o) const {
      if (p != o.p) return p < o.p;
      return ord < o.ord;
    }
  };
  struct Cache {
    std::mutex mu;
    std::map<Key, std::vector<Polynomial>> gbs;
  };
  RingPtr ring_;
  std::vector<Polynomial> gens_;
  std::shared_ptr<Cache> cache_;
};

inline std::vector<Polynomial> groebner_basis(const Ideal &I, const MonomialOrder &ord) {
  return I.gb(ord);
}

// Rational normal form against a monic Groebner basis (exact, no scaling).
inline Polynomial reduce_by(const Polynomial &f, const std::vector<Polynomial> &gb,
                            const MonomialOrder &ord) {
  Polynomial p = f, r(f.ring());
  std::vector<Term> rest;
  while (!p.is_zero()) {
    const Term &lt = p.leading_term(ord);
    bool done = false;
    for (auto &g : gb) {
      const Term &gl = g.leading_term(ord);
      if (divides(gl.m, lt.m)) {
        Rational c = lt.c / gl.c;
        p = p - g.mul_term(quotient(lt.m, gl.m), c);
        done = true;
        break;
      }
    }
    if (!done) {
      Term t = lt;
      rest.push_back(t);
      p = p - Polynomial::monomial(p.ring(), t.m, t.c);
    }
  }
  return Polynomial(f.ring(), std::move(rest));
}

inline Polynomial normal_form(const Polynomial &f, const Ideal &I,
                              const MonomialOrder &ord = MonomialOrder::grevlex()) {
  Polynomial::check_rings(f, Polynomial(I.ring()));
  return reduce_by(f, I.gb(ord), ord);
}

inline bool ideal_contains(const Ideal &I, const Polynomial &f) {
  return normal_form(f, I).is_zero();
}

// Ideal containment I <= J.
inline bool ideal_subset(const Ideal &I, const Ideal &J) {
  for (auto &g : I.gens())
    if (!ideal_contains(J, g)) return false;
  return true;
}

// New ring with extra variable names placed first.
inline RingPtr ring_with_prefix(const RingPtr &r, const std::vector<std::string> &extra) {
  std::vector<std::string> v = extra;
  for (auto &n : r->vars) v.push_back(n);
  // Avoid collisions by priming names.
  for (std::size_t i = 0; i < extra.size(); ++i) {
    while (std::count(v.begin(), v.end(), v[i]) > 1) v[i] += "'";
  }
  return make_ring(std::move(v));
}

inline std::vector<int> shift_map(std::size_t n, std::size_t by) {
  std::vector<int> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = int(i + by);
  return m;
}

// I intersected with the subring of variables not in `vars`; generators stay
// in the original ring.
inline Ideal eliminate_vars(const Ideal &I, const std::vector<std::size_t> &vars) {
  const RingPtr &r = I.ring();
  std::size_t n = r->size(), k = vars.size();
  if (k == 0) return I;
  std::vector<int> fwd(n, -1), back(n, -1);
  std::size_t pos = 0;
  std::vector<bool> is_elim(n, false);
  for (auto v : vars) is_elim[v] = true;
  for (auto v : vars) fwd[v] = int(pos++);
  for (std::size_t i = 0; i < n; ++i)
    if (!is_elim[i]) fwd[i] = int(pos++);
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) {
    names[std::size_t(fwd[i])] = r->vars[i];
    back[std::size_t(fwd[i])] = int(i);
  }
  RingPtr pr = make_ring(names);
  std::vector<Polynomial> g;
  for (auto &p : I.gens()) g.push_back(p.change_ring(pr, fwd));
  Ideal P(pr, std::move(g));
  std::vector<Polynomial> out;
  for (auto &p : P.gb(MonomialOrder::block(k))) {
    bool free = true;
    for (std::size_t i = 0; i < k && free; ++i)
      if (p.involves(i)) free = false;
    if (free) out.push_back(p.change_ring(r, back));
  }
  return Ideal(r, std::move(out));
}

// I intersected with Q[x_{k+1}, ...] via block(k).
// `weight` is the degree of the kept variables for the pair strategy; use
// d when the ideal is homogeneous with those variables in degree d.
inline Ideal eliminate(const Ideal &I, std::size_t first_k, unsigned weight = 1) {
  std::vector<Polynomial> out;
  for (auto &p : I.gb(MonomialOrder::block(first_k, weight))) {
    bool free = true;
    for (std::size_t i = 0; i < first_k && free; ++i)
      if (p.involves(i)) free = false;
    if (free) out.push_back(p);
  }
  return Ideal(I.ring(), std::move(out));
}

// Moves generators that avoid `dropped` into ring `target` via map.
inline Ideal restrict_to_ring(const Ideal &I, const RingPtr &target, const std::vector<int> &map) {
  std::vector<Polynomial> out;
  for (auto &p : I.gens()) out.push_back(p.change_ring(target, map));
  return Ideal(target, std::move(out));
}

inline Ideal intersect(const Ideal &I, const Ideal &J) {
  if (!same_ring(I.ring(), J.ring())) throw StructuralError("intersect: ring mismatch");
  if (I.is_unit()) return J;
  if (J.is_unit()) return I;
  if (I.is_zero() || J.is_zero()) return Ideal(I.ring());
  RingPtr r = I.ring();
  RingPtr rt = ring_with_prefix(r, {"_t"});
  auto m = shift_map(r->size(), 1);
  Polynomial t = Polynomial::variable(rt, 0);
  Polynomial one_t = Polynomial::constant(rt, 1) - t;
  std::vector<Polynomial> g;
  for (auto &p : I.gb()) g.push_back(t * p.change_ring(rt, m));
  for (auto &p : J.gb()) g.push_back(one_t * p.change_ring(rt, m));
  Ideal T(rt, std::move(g));
  std::vector<Polynomial> out;
  std::vector<int> back(rt->size());
  back[0] = -1;
  for (std::size_t i = 0; i < r->size(); ++i) back[i + 1] = int(i);
  for (auto &p : T.gb(MonomialOrder::block(1)))
    if (!p.involves(0)) out.push_back(p.change_ring(r, back));
  return Ideal(r, std::move(out));
}

// Exact multivariate division; throws if g does not divide f.
inline Polynomial divide_exact(const Polynomial &f, const Polynomial &g) {
  if (g.is_zero()) throw PreconditionError("division by zero polynomial");
  Polynomial p = f, q(f.ring());
  const Term &gl = g.leading_term();
  while (!p.is_zero()) {
    const Term &lt = p.leading_term();
    if (!divides(gl.m, lt.m)) throw PreconditionError("inexact polynomial division");
    Monomial m = quotient(lt.m, gl.m);
    Rational c = lt.c / gl.c;
    q = q + Polynomial::monomial(f.ring(), m, c);
    p = p - g.mul_term(m, c);
  }
  return q;
}

inline Ideal quotient_by_poly(const Ideal &I, const Polynomial &g) {
  if (g.is_zero()) return Ideal::unit(I.ring());
  if (g.is_constant()) return I;
  Ideal G(I.ring(), {g});
  Ideal K = intersect(I, G);
  std::vector<Polynomial> out;
  for (auto &p : K.gb()) out.push_back(divide_exact(p, g));
  return Ideal(I.ring(), std::move(out));
}

inline Ideal ideal_quotient(const Ideal &I, const Ideal &J) {
  if (J.is_zero()) return Ideal::unit(I.ring());
  Ideal acc;
  bool first = true;
  for (auto &g : J.gb()) {
    Ideal q = quotient_by_poly(I, g);
    acc = first ? q : intersect(acc, q);
    first = false;
  }
  return acc;
}

// I : x_i^inf. Homogeneous ideals use a grevlex basis with x_i last.
inline Ideal saturate_var(const Ideal &I, std::size_t var) {
  const RingPtr &r = I.ring();
  std::size_t n = r->size();
  if (!I.is_homogeneous()) {
    RingPtr rz = ring_with_prefix(r, {"_z"});
    auto m = shift_map(n, 1);
    std::vector<Polynomial> g;
    for (auto &p : I.gens()) g.push_back(p.change_ring(rz, m));
    g.push_back(Polynomial::constant(rz, 1) -
                Polynomial::variable(rz, 0) * Polynomial::variable(rz, var + 1));
    Ideal Z(rz, std::move(g));
    std::vector<int> back(n + 1);
    back[0] = -1;
    for (std::size_t i = 0; i < n; ++i) back[i + 1] = int(i);
    std::vector<Polynomial> out;
    for (auto &p : Z.gb(MonomialOrder::block(1)))
      if (!p.involves(0)) out.push_back(p.change_ring(r, back));
    return Ideal(r, std::move(out));
  }
  std::vector<int> fwd(n), back(n);
  std::vector<std::string> names;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (i != var) fwd[i] = int(pos++);
  fwd[var] = int(n - 1);
  names.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    names[std::size_t(fwd[i])] = r->vars[i];
    back[std::size_t(fwd[i])] = int(i);
  }
  RingPtr pr = make_ring(names);
  std::vector<Polynomial> g;
  for (auto &p : I.gens()) g.push_back(p.change_ring(pr, fwd));
  Ideal P(pr, std::move(g));
  std::vector<Polynomial> out;
  for (auto &p : P.gb()) {
    unsigned e = p.degree_in(n - 1);
    unsigned mn = e;
    for (auto &t : p.terms()) mn = std::min<unsigned>(mn, t.m[n - 1]);
    Polynomial q = p;
    if (mn) q = p.divide_monomial(Monomial::variable(n, n - 1, Exp(mn)));
    out.push_back(q.change_ring(r, back));
  }
  return Ideal(r, std::move(out));
}

// I : g^inf.
inline Ideal saturate_poly(const Ideal &I, const Polynomial &g) {
  const RingPtr &r = I.ring();
  if (g.is_zero()) return Ideal::unit(r);
  if (g.is_constant()) return I;
  if (g.size() == 1 && I.is_homogeneous()) {
    Ideal acc = I;
    const Monomial &m = g.terms()[0].m;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) acc = saturate_var(acc, i);
    return acc;
  }
  std::size_t n = r->size();
  RingPtr rz = ring_with_prefix(r, {"_z"});
  auto m = shift_map(n, 1);
  std::vector<Polynomial> gens;
  for (auto &p : I.gens()) gens.push_back(p.change_ring(rz, m));
  gens.push_back(Polynomial::constant(rz, 1) - Polynomial::variable(rz, 0) * g.change_ring(rz, m));
  Ideal Z(rz, std::move(gens));
  std::vector<int> back(n + 1);
  back[0] = -1;
  for (std::size_t i = 0; i < n; ++i) back[i + 1] = int(i);
  std::vector<Polynomial> out;
  for (auto &p : Z.gb(MonomialOrder::block(1)))
    if (!p.involves(0)) out.push_back(p.change_ring(r, back));
  return Ideal(r, std::move(out));
}

// I : J^inf. Principal J goes through saturate_poly; otherwise the colon is
// iterated until it stabilises.
inline Ideal saturate(const Ideal &I, const Ideal &J) {
  if (J.is_unit()) return I;
  if (J.is_zero()) return Ideal::unit(I.ring());
  auto &jg = J.gb();
  if (jg.size() == 1) return saturate_poly(I, jg[0]);
  Ideal cur = I;
  for (;;) {
    Ideal next = ideal_quotient(cur, J);
    if (next == cur) return cur;
    cur = next;
  }
}

// f in sqrt(I) iff 1 in I + (1 - z f).
inline bool radical_membership(const Polynomial &f, const Ideal &I) {
  const RingPtr &r = I.ring();
  if (f.is_zero()) return true;
  if (ideal_contains(I, f)) return true;
  std::size_t n = r->size();
  RingPtr rz = ring_with_prefix(r, {"_z"});
  auto m = shift_map(n, 1);
  std::vector<Polynomial> gens;
  for (auto &p : I.gens()) gens.push_back(p.change_ring(rz, m));
  gens.push_back(Polynomial::constant(rz, 1) - Polynomial::variable(rz, 0) * f.change_ring(rz, m));
  return Ideal(rz, std::move(gens)).is_unit();
}

// Z(I) contains Z(J).
inline bool variety_contains(const Ideal &I, const Ideal &J) {
  if (J.is_unit()) return true;
  for (auto &g : I.gb())
    if (!radical_membership(g, J)) return false;
  return true;
}

inline bool variety_equal(const Ideal &I, const Ideal &J) {
  return variety_contains(I, J) && variety_contains(J, I);
}

// Largest set of variables containing no support of a leading monomial of
// the grevlex basis.
inline std::vector<std::size_t> max_independent_set(const std::vector<Monomial> &lead,
                                                    std::size_t n) {
  std::size_t w = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> sets;
  for (auto &m : lead) {
    std::vector<std::uint64_t> s(w, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (m[i]) s[i / 64] |= std::uint64_t(1) << (i % 64);
    sets.push_back(std::move(s));
  }
  std::vector<std::size_t> best, cur;
  std::vector<std::uint64_t> chosen(w, 0);
  auto ok = [&]() {
    for (auto &s : sets) {
      bool inside = true;
      for (std::size_t k = 0; k < w && inside; ++k)
        if (s[k] & ~chosen[k]) inside = false;
      if (inside) return false;
    }
    return true;
  };
  // Depth-first search, trying variables in increasing index order.
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (cur.size() + (n - i) <= best.size()) return;
    if (i == n) {
      if (cur.size() > best.size()) best = cur;
      return;
    }
    chosen[i / 64] |= std::uint64_t(1) << (i % 64);
    if (ok()) {
      cur.push_back(i);
      dfs(i + 1);
      cur.pop_back();
    }
    chosen[i / 64] &= ~(std::uint64_t(1) << (i % 64));
    dfs(i + 1);
  };
  dfs(0);
  return best;
}

inline std::vector<std::size_t> max_independent_set(const Ideal &I) {
  std::vector<Monomial> lead;
  for (auto &g : I.gb()) lead.push_back(g.leading_term().m);
  return max_independent_set(lead, I.nvars());
}

// Krull dimension of Z(I); -1 for the empty set.
inline int dimension(const Ideal &I, Flavor flavor = Flavor::affine) {
  if (I.is_unit()) return -1;
  int d = int(max_independent_set(I).size());
  return flavor == Flavor::projective ? d - 1 : d;
}

// True when Z(gens) in projective space is empty, decided modulo a prime.
// The zero set over Z[1/N] is proper, so a rational point would survive
// reduction; emptiness mod p is therefore a proof. False means unknown.
inline bool projectively_empty_mod_p(const RingPtr &ring, const std::vector<Polynomial> &gens,
                                     unsigned p = 32003) {
  GbLimits lim = gb_limits();
  lim.characteristic = p;
  std::vector<Monomial> lead;
  try {
    for (auto &g : compute_gb(ring, gens, MonomialOrder::grevlex(), lim)) lead.push_back(g.leading_term().m);
  } catch (const StructuralError &) {
    return false; // p divides a denominator
  }
  return max_independent_set(lead, ring->size()).empty();
}

} // namespace totalimage
