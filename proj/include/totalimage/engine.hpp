#pragma once

// Buchberger kernel on packed exponent arrays. Works over Z (fraction free,
// standing in for Q) or over a prime field.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "totalimage/errors.hpp"
#include "totalimage/monomial.hpp"
#include "totalimage/polynomial.hpp"
#include "totalimage/rational.hpp"

namespace totalimage {

struct GbLimits {
  std::size_t max_pairs = 5'000'000;
  unsigned max_degree = 400;
  // 0 means rational arithmetic; a prime selects the heuristic modular mode.
  unsigned characteristic = 0;
};

inline GbLimits &gb_limits() {
  static GbLimits l;
  return l;
}

namespace engine {

struct ZZ {
  using C = Integer;
  static bool is_zero(const C &c) { return sgn(c) == 0; }
  static bool is_one(const C &c) { return c == 1; }
  // a*cp - b*cg == 0 with a, b small.
  void multipliers(const C &cp, const C &cg, C &a, C &b) const {
    C g = totalimage::gcd(cp, cg);
    a = cg / g;
    b = cp / g;
  }
  C from_rational(const Rational &r) const { return r.get_num(); }
  Rational to_rational(const C &c) const { return Rational(c); }
};

struct Fp {
  using C = std::uint32_t;
  std::uint32_t p;
  static bool is_zero(C c) { return c == 0; }
  static bool is_one(C c) { return c == 1; }
  C mul(C a, C b) const { return C((std::uint64_t(a) * b) % p); }
  C sub(C a, C b) const { return a >= b ? a - b : C(a + std::uint64_t(p) - b); }
  C inv(C a) const {
    std::int64_t t = 0, nt = 1, r = p, nr = a;
    while (nr) {
      std::int64_t q = r / nr;
      std::swap(t, nt);
      nt -= q * t;
      std::swap(r, nr);
      nr -= q * r;
    }
    if (t < 0) t += p;
    return C(t);
  }
  void multipliers(C cp, C cg, C &a, C &b) const {
    a = 1;
    b = mul(cp, inv(cg));
  }
  C from_rational(const Rational &r) const {
    Integer n = r.get_num() % p, d = r.get_den() % p;
    if (n < 0) n += p;
    if (d == 0) throw StructuralError("denominator divisible by the characteristic");
    return mul(C(n.get_ui()), inv(C(d.get_ui())));
  }
  // Symmetric representative, so -1 prints as -1.
  Rational to_rational(C c) const {
    if (c > p / 2) return Rational(-static_cast<long>(p - c));
    return Rational(static_cast<unsigned long>(c));
  }
};

template <class C> struct EPoly {
  std::vector<Exp> ex; // nv exponents per term
  std::vector<C> c;
  unsigned sugar = 0;
  std::size_t len() const { return c.size(); }
};

inline std::uint64_t divmask(const Exp *e, std::size_t nv) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < nv; ++i)
    if (e[i]) m |= std::uint64_t(1) << (i & 63);
  return m;
}

template <class K> class Buchberger {
public:
  using C = typename K::C;
  using P = EPoly<C>;

  Buchberger(K k, std::size_t nv, MonomialOrder ord, GbLimits lim = gb_limits())
      : k_(k), nv_(nv), ord_(ord), lim_(lim) {}

  std::size_t nv() const { return nv_; }

  P from_poly(const Polynomial &f) const {
    P p;
    std::vector<const Term *> ts;
    for (auto &t : f.terms()) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [&](const Term *a, const Term *b) {
      return ord_.compare(a->m.exps.data(), b->m.exps.data(), nv_) > 0;
    });
    if constexpr (std::is_same_v<K, ZZ>) {
      Integer den = 1;
      for (auto *t : ts) den = totalimage::lcm(den, t->c.get_den());
      for (auto *t : ts) {
        p.ex.insert(p.ex.end(), t->m.exps.begin(), t->m.exps.end());
        p.c.push_back(t->c.get_num() * (den / t->c.get_den()));
      }
    } else {
      for (auto *t : ts) {
        C v = k_.from_rational(t->c);
        if (K::is_zero(v)) continue;
        p.ex.insert(p.ex.end(), t->m.exps.begin(), t->m.exps.end());
        p.c.push_back(v);
      }
    }
    p.sugar = 0;
    for (std::size_t i = 0; i < p.len(); ++i) p.sugar = std::max(p.sugar, deg(mon(p, i)));
    normalize(p);
    return p;
  }

  Polynomial to_poly(const P &p, const RingPtr &ring) const {
    std::vector<Term> ts;
    ts.reserve(p.len());
    for (std::size_t i = 0; i < p.len(); ++i) {
      Monomial m(std::vector<Exp>(mon(p, i), mon(p, i) + nv_));
      ts.push_back({std::move(m), k_.to_rational(p.c[i])});
    }
    return Polynomial(ring, std::move(ts));
  }

  // Reduced Groebner basis, each element primitive (Z) or monic (Fp),
  // sorted ascending by leading monomial.
  std::vector<P> run(std::vector<P> input) {
    basis_.clear();
    active_.clear();
    masks_.clear();
    pairs_.clear();
    pairs_done_ = 0;
    std::sort(input.begin(), input.end(), [&](const P &a, const P &b) {
      if (a.len() == 0 || b.len() == 0) return a.len() > b.len();
      return ord_.compare(mon(a, 0), mon(b, 0), nv_) < 0;
    });
    for (auto &f : input) {
      if (f.len() == 0) continue;
      P r = reduce(std::move(f), true);
      if (r.len() == 0) continue;
      if (is_constant(r)) return {unit_poly()};
      insert(std::move(r));
    }
    while (!pairs_.empty()) {
      auto it = pairs_.begin();
      Pair pr = *it;
      pairs_.erase(it);
      if (++pairs_done_ > lim_.max_pairs) throw ComputationLimit("Groebner pair limit exceeded");
      P s = spoly(pr.i, pr.j);
      s = reduce(std::move(s), true);
      if (s.len() == 0) continue;
      if (is_constant(s)) return {unit_poly()};
      if (deg(mon(s, 0)) > lim_.max_degree) throw ComputationLimit("Groebner degree limit exceeded");
      insert(std::move(s));
    }
    return finish();
  }

  // Full normal form of p modulo the given basis (not necessarily reduced).
  P normal_form(P p, const std::vector<P> &gb) {
    basis_ = gb;
    active_.assign(gb.size(), true);
    masks_.clear();
    for (auto &g : basis_) masks_.push_back(divmask(mon(g, 0), nv_));
    return reduce(std::move(p), true);
  }

  const Exp *mon(const P &p, std::size_t i) const { return p.ex.data() + i * nv_; }
  unsigned deg(const Exp *e) const {
    unsigned d = 0;
    for (std::size_t i = 0; i < nv_; ++i) d += e[i] * ord_.weight(i);
    return d;
  }

private:
  struct Pair {
    unsigned sugar;
    std::vector<Exp> lcm;
    std::size_t i, j;
  };
  struct PairCmp {
    const Buchberger *self;
    bool operator()(const Pair &a, const Pair &b) const {
      if (a.sugar != b.sugar) return a.sugar < b.sugar;
      int c = self->ord_.compare(a.lcm.data(), b.lcm.data(), self->nv_);
      if (c) return c < 0;
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    }
  };

  K k_;
  std::size_t nv_;
  MonomialOrder ord_;
  GbLimits lim_;
  std::vector<P> basis_;
  std::vector<bool> active_;
  std::vector<std::uint64_t> masks_;
  std::set<Pair, PairCmp> pairs_{PairCmp{this}};
  std::size_t pairs_done_ = 0;

  bool is_constant(const P &p) const { return p.len() == 1 && deg(mon(p, 0)) == 0; }
  P unit_poly() const {
    P u;
    u.ex.assign(nv_, 0);
    if constexpr (std::is_same_v<K, ZZ>) u.c.push_back(Integer(1));
    else u.c.push_back(C(1));
    return u;
  }

  void normalize(P &p) const {
    if (p.len() == 0) return;
    if constexpr (std::is_same_v<K, ZZ>) {
      Integer g = 0;
      for (auto &c : p.c) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
      }
      if (sgn(p.c[0]) < 0) g = -g;
      if (g != 1)
        for (auto &c : p.c) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    } else {
      if (p.c[0] != 1) {
        C inv = k_.inv(p.c[0]);
        for (auto &c : p.c) c = k_.mul(c, inv);
      }
    }
  }

  bool mon_divides(const Exp *a, const Exp *b) const {
    for (std::size_t i = 0; i < nv_; ++i)
      if (a[i] > b[i]) return false;
    return true;
  }

  // out = a*p[pf..] - b*m*g[gf..]
  void axpy(const C &a, const P &p, std::size_t pf, const C &b, const std::vector<Exp> &m,
            const P &g, std::size_t gf, P &out) const {
    out.ex.clear();
    out.c.clear();
    out.ex.reserve((p.len() + g.len()) * nv_);
    out.c.reserve(p.len() + g.len());
    std::vector<Exp> tmp(nv_);
    std::size_t i = pf, j = gf;
    bool a_one = K::is_one(a);
    auto load = [&](std::size_t jj) {
      const Exp *ge = mon(g, jj);
      for (std::size_t v = 0; v < nv_; ++v) tmp[v] = Exp(ge[v] + m[v]);
    };
    if (j < g.len()) load(j);
    while (i < p.len() || j < g.len()) {
      int c;
      if (i == p.len()) c = -1;
      else if (j == g.len()) c = 1;
      else c = ord_.compare(mon(p, i), tmp.data(), nv_);
      if (c > 0) {
        out.ex.insert(out.ex.end(), mon(p, i), mon(p, i) + nv_);
        if constexpr (std::is_same_v<K, ZZ>) out.c.push_back(a_one ? p.c[i] : C(a * p.c[i]));
        else out.c.push_back(a_one ? p.c[i] : k_.mul(a, p.c[i]));
        ++i;
      } else if (c < 0) {
        out.ex.insert(out.ex.end(), tmp.begin(), tmp.end());
        if constexpr (std::is_same_v<K, ZZ>) out.c.push_back(C(-(b * g.c[j])));
        else out.c.push_back(k_.sub(0, k_.mul(b, g.c[j])));
        if (++j < g.len()) load(j);
      } else {
        C v;
        if constexpr (std::is_same_v<K, ZZ>) {
          v = a_one ? C(p.c[i]) : C(a * p.c[i]);
          mpz_submul(v.get_mpz_t(), b.get_mpz_t(), g.c[j].get_mpz_t());
        } else {
          v = k_.sub(a_one ? p.c[i] : k_.mul(a, p.c[i]), k_.mul(b, g.c[j]));
        }
        if (!K::is_zero(v)) {
          out.ex.insert(out.ex.end(), mon(p, i), mon(p, i) + nv_);
          out.c.push_back(std::move(v));
        }
        ++i;
        if (++j < g.len()) load(j);
      }
    }
  }

  int find_reducer(const Exp *e) const {
    std::uint64_t m = divmask(e, nv_);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      if (!active_[k]) continue;
      if (masks_[k] & ~m) continue;
      if (mon_divides(mon(basis_[k], 0), e)) return int(k);
    }
    return -1;
  }

  // Top reduction, then (if full) tail reduction. Result normalized.
  P reduce(P p, bool full) {
    P res; // irreducible terms already moved out
    P tmp;
    std::size_t head = 0, steps = 0;
    std::vector<Exp> m(nv_);
    while (head < p.len()) {
      int k = find_reducer(mon(p, head));
      if (k < 0) {
        if (!full) break;
        res.ex.insert(res.ex.end(), mon(p, head), mon(p, head) + nv_);
        res.c.push_back(std::move(p.c[head]));
        ++head;
        continue;
      }
      const P &g = basis_[std::size_t(k)];
      const Exp *pe = mon(p, head), *ge = mon(g, 0);
      for (std::size_t v = 0; v < nv_; ++v) m[v] = Exp(pe[v] - ge[v]);
      C a, b;
      k_.multipliers(p.c[head], g.c[0], a, b);
      unsigned s = std::max(p.sugar, g.sugar + deg(m.data()));
      axpy(a, p, head + 1, b, m, g, 1, tmp);
      std::swap(p, tmp);
      head = 0;
      p.sugar = s;
      if (!K::is_one(a))
        for (auto &c : res.c) {
          if constexpr (std::is_same_v<K, ZZ>) c *= a;
          else c = k_.mul(c, a);
        }
      if constexpr (std::is_same_v<K, ZZ>) {
        if (++steps % 16 == 0) content_reduce(p, res);
      }
    }
    res.sugar = p.sugar;
    res.ex.insert(res.ex.end(), p.ex.begin() + long(head * nv_), p.ex.end());
    for (std::size_t i = head; i < p.len(); ++i) res.c.push_back(std::move(p.c[i]));
    normalize(res);
    return res;
  }

  void content_reduce(P &p, P &res) const {
    Integer g = 0;
    for (auto &c : res.c) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return;
    }
    for (auto &c : p.c) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return;
    }
    if (g == 0) return;
    for (auto &c : res.c) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    for (auto &c : p.c) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }

  P spoly(std::size_t i, std::size_t j) {
    const P &f = basis_[i], &g = basis_[j];
    std::vector<Exp> l(nv_), mf(nv_), mg(nv_);
    for (std::size_t v = 0; v < nv_; ++v) {
      l[v] = std::max(mon(f, 0)[v], mon(g, 0)[v]);
      mf[v] = Exp(l[v] - mon(f, 0)[v]);
      mg[v] = Exp(l[v] - mon(g, 0)[v]);
    }
    C a, b;
    k_.multipliers(f.c[0], g.c[0], a, b);
    // s = a*mf*f - b*mg*g; build mf*f first.
    P ff;
    ff.ex.reserve(f.len() * nv_);
    for (std::size_t t = 0; t < f.len(); ++t)
      for (std::size_t v = 0; v < nv_; ++v) ff.ex.push_back(Exp(mon(f, t)[v] + mf[v]));
    ff.c = f.c;
    P out;
    axpy(a, ff, 1, b, mg, g, 1, out);
    out.sugar = std::max(f.sugar + deg(mf.data()), g.sugar + deg(mg.data()));
    return out;
  }

  bool lcm_divides(const std::vector<Exp> &a, const std::vector<Exp> &b) const {
    return mon_divides(a.data(), b.data());
  }

  bool lcm_equals_with(const Exp *he, std::size_t g, const std::vector<Exp> &l) const {
    const Exp *ge = mon(basis_[g], 0);
    for (std::size_t v = 0; v < nv_; ++v)
      if (std::max(he[v], ge[v]) != l[v]) return false;
    return true;
  }

  // Gebauer-Moeller update with the new element h.
  void insert(P h) {
    std::size_t hi = basis_.size();
    const Exp *he = mon(h, 0);
    struct Cand {
      std::vector<Exp> lcm;
      std::size_t g;
      bool coprime;
      bool keep = true;
    };
    std::vector<Cand> cands;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!active_[g]) continue;
      const Exp *ge = mon(basis_[g], 0);
      Cand c;
      c.lcm.resize(nv_);
      c.coprime = true;
      for (std::size_t v = 0; v < nv_; ++v) {
        c.lcm[v] = std::max(he[v], ge[v]);
        if (he[v] && ge[v]) c.coprime = false;
      }
      c.g = g;
      cands.push_back(std::move(c));
    }
    // Chain criterion among the new pairs: drop (h,g) if some other new pair's
    // lcm properly divides it; among equal lcms keep one, preferring coprime.
    for (std::size_t a = 0; a < cands.size(); ++a) {
      for (std::size_t b = 0; b < cands.size() && cands[a].keep; ++b) {
        if (a == b || !cands[b].keep) continue;
        if (lcm_divides(cands[b].lcm, cands[a].lcm)) {
          bool equal = cands[b].lcm == cands[a].lcm;
          if (!equal) cands[a].keep = false;
          else if (cands[b].coprime || !cands[a].coprime) {
            if (cands[b].coprime && !cands[a].coprime) cands[a].keep = false;
            else if (b < a) cands[a].keep = false;
          }
        }
      }
    }
    // Old pairs (i,j) with lt(h) | lcm(i,j) and lcm differing from both new lcms.
    for (auto it = pairs_.begin(); it != pairs_.end();) {
      const auto &pr = *it;
      bool drop = false;
      if (mon_divides(he, pr.lcm.data()) && !lcm_equals_with(he, pr.i, pr.lcm) &&
          !lcm_equals_with(he, pr.j, pr.lcm))
        drop = true;
      if (drop) it = pairs_.erase(it);
      else ++it;
    }
    unsigned hs = h.sugar;
    for (auto &c : cands) {
      if (!c.keep || c.coprime) continue;
      const P &g = basis_[c.g];
      unsigned d = deg(c.lcm.data());
      unsigned s = std::max(hs + d - deg(he), g.sugar + d - deg(mon(g, 0)));
      pairs_.insert(Pair{s, c.lcm, c.g, hi});
    }
    // Elements whose leading term is divisible by lt(h) leave the pair
    // bookkeeping; pairs already queued with them stay valid.
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g] && mon_divides(he, mon(basis_[g], 0))) active_[g] = false;
    masks_.push_back(divmask(he, nv_));
    basis_.push_back(std::move(h));
    active_.push_back(true);
  }

  std::vector<P> finish() {
    std::vector<std::size_t> keep;
    for (std::size_t g = 0; g < basis_.size(); ++g)
      if (active_[g]) keep.push_back(g);
    // Minimal basis: remove elements whose lt is divisible by another's.
    std::vector<std::size_t> minimal;
    for (std::size_t a : keep) {
      bool red = false;
      for (std::size_t b : keep) {
        if (a == b) continue;
        if (mon_divides(mon(basis_[b], 0), mon(basis_[a], 0))) {
          bool eq = std::equal(mon(basis_[a], 0), mon(basis_[a], 0) + nv_, mon(basis_[b], 0));
          if (!eq || b < a) {
            red = true;
            break;
          }
        }
      }
      if (!red) minimal.push_back(a);
    }
    std::vector<P> mb;
    for (auto a : minimal) mb.push_back(basis_[a]);
    std::sort(mb.begin(), mb.end(),
              [&](const P &a, const P &b) { return ord_.compare(mon(a, 0), mon(b, 0), nv_) < 0; });
    // Tail-reduce each element by the others.
    std::vector<P> out;
    for (std::size_t a = 0; a < mb.size(); ++a) {
      basis_.clear();
      for (std::size_t b = 0; b < mb.size(); ++b)
        if (b != a) basis_.push_back(b < a ? out[b] : mb[b]);
      active_.assign(basis_.size(), true);
      masks_.clear();
      for (auto &g : basis_) masks_.push_back(divmask(mon(g, 0), nv_));
      // The leading term is irreducible by minimality.
      P head;
      head.ex.assign(mon(mb[a], 0), mon(mb[a], 0) + nv_);
      head.c.push_back(mb[a].c[0]);
      P tail;
      tail.ex.assign(mb[a].ex.begin() + long(nv_), mb[a].ex.end());
      tail.c.assign(mb[a].c.begin() + 1, mb[a].c.end());
      tail.sugar = mb[a].sugar;
      P r = reduce_tail_scaled(std::move(head), std::move(tail));
      out.push_back(std::move(r));
    }
    return out;
  }

  // head + tail where tail is fully reduced; scaling applied to head too.
  P reduce_tail_scaled(P head, P tail) {
    P res;
    P tmp;
    std::vector<Exp> m(nv_);
    std::size_t at = 0, steps = 0;
    while (at < tail.len()) {
      int k = find_reducer(mon(tail, at));
      if (k < 0) {
        res.ex.insert(res.ex.end(), mon(tail, at), mon(tail, at) + nv_);
        res.c.push_back(std::move(tail.c[at]));
        ++at;
        continue;
      }
      const P &g = basis_[std::size_t(k)];
      for (std::size_t v = 0; v < nv_; ++v) m[v] = Exp(mon(tail, at)[v] - mon(g, 0)[v]);
      C a, b;
      k_.multipliers(tail.c[at], g.c[0], a, b);
      axpy(a, tail, at + 1, b, m, g, 1, tmp);
      std::swap(tail, tmp);
      at = 0;
      if (!K::is_one(a)) {
        for (auto &c : res.c) {
          if constexpr (std::is_same_v<K, ZZ>) c *= a;
          else c = k_.mul(c, a);
        }
        if constexpr (std::is_same_v<K, ZZ>) head.c[0] *= a;
        else head.c[0] = k_.mul(head.c[0], a);
      }
      if constexpr (std::is_same_v<K, ZZ>) {
        if (++steps % 16 == 0) {
          Integer g0 = head.c[0];
          for (auto &c : res.c) mpz_gcd(g0.get_mpz_t(), g0.get_mpz_t(), c.get_mpz_t());
          for (auto &c : tail.c) mpz_gcd(g0.get_mpz_t(), g0.get_mpz_t(), c.get_mpz_t());
          if (abs(g0) > 1) {
            for (auto &c : head.c) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g0.get_mpz_t());
            for (auto &c : res.c) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g0.get_mpz_t());
            for (auto &c : tail.c) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g0.get_mpz_t());
          }
        }
      }
    }
    P out = std::move(head);
    out.ex.insert(out.ex.end(), res.ex.begin(), res.ex.end());
    for (auto &c : res.c) out.c.push_back(std::move(c));
    normalize(out);
    return out;
  }
};

} // namespace engine
} // namespace totalimage
