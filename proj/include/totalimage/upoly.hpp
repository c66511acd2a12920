#pragma once

// Dense univariate polynomials over Z and Z/p, and factorization over Z by
// Cantor-Zassenhaus modulo a prime, Hensel lifting and recombination.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "totalimage/errors.hpp"
#include "totalimage/rational.hpp"

namespace totalimage::upoly {

using ZPoly = std::vector<Integer>;       // coefficient i multiplies t^i
using MPoly = std::vector<std::uint64_t>; // same, reduced mod p

inline void trim(ZPoly &f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline void trim(MPoly &f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline int deg(const ZPoly &f) { return int(f.size()) - 1; }
inline int deg(const MPoly &f) { return int(f.size()) - 1; }

inline Integer content(const ZPoly &f) {
  Integer g = 0;
  for (auto &c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

// Content removed, positive leading coefficient.
inline ZPoly primitive(ZPoly f) {
  trim(f);
  if (f.empty()) return f;
  Integer g = content(f);
  if (f.back() < 0) g = -g;
  for (auto &c : f) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return f;
}

inline ZPoly zmul(const ZPoly &a, const ZPoly &b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  trim(r);
  return r;
}

inline ZPoly zsub(ZPoly a, const ZPoly &b) {
  if (a.size() < b.size()) a.resize(b.size(), Integer(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

inline ZPoly derivative(const ZPoly &f) {
  ZPoly r;
  for (std::size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * Integer(static_cast<unsigned long>(i)));
  trim(r);
  return r;
}

// Exact division over Z; returns false when b does not divide a.
inline bool zdivexact(const ZPoly &a, const ZPoly &b, ZPoly &q) {
  ZPoly r = a;
  trim(r);
  q.clear();
  if (b.empty()) return false;
  if (r.empty()) return true;
  if (r.size() < b.size()) return false;
  q.assign(r.size() - b.size() + 1, Integer(0));
  const Integer &lb = b.back();
  for (int i = deg(r); i >= deg(b); --i) {
    if (r[std::size_t(i)] == 0) continue;
    if (!mpz_divisible_p(r[std::size_t(i)].get_mpz_t(), lb.get_mpz_t())) return false;
    Integer c = r[std::size_t(i)] / lb;
    std::size_t sh = std::size_t(i - deg(b));
    q[sh] = c;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_submul(r[sh + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
  }
  trim(r);
  trim(q);
  return r.empty();
}

// Pseudo-remainder of a by b.
inline ZPoly prem(ZPoly a, const ZPoly &b) {
  trim(a);
  const Integer &lb = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    Integer la = a.back();
    std::size_t sh = a.size() - b.size();
    for (auto &c : a) c *= lb;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_submul(a[sh + j].get_mpz_t(), la.get_mpz_t(), b[j].get_mpz_t());
    trim(a);
  }
  return a;
}

// Primitive gcd over Z[t] (primitive remainder sequence).
inline ZPoly zgcd(ZPoly a, ZPoly b) {
  a = primitive(a);
  b = primitive(b);
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    ZPoly r = primitive(prem(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return primitive(a);
}

// ----- arithmetic mod p (p < 2^31) -----

struct ModP {
  std::uint64_t p;

  std::uint64_t mulm(std::uint64_t a, std::uint64_t b) const { return (a * b) % p; }
  std::uint64_t addm(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
  std::uint64_t subm(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
  std::uint64_t powm(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
      if (e & 1) r = mulm(r, a);
      a = mulm(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return powm(a, p - 2); }

  MPoly reduce(const ZPoly &f) const {
    MPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      Integer c = f[i] % Integer(static_cast<unsigned long>(p));
      if (c < 0) c += static_cast<unsigned long>(p);
      r[i] = c.get_ui();
    }
    trim(r);
    return r;
  }
  MPoly mul(const MPoly &a, const MPoly &b) const {
    if (a.empty() || b.empty()) return {};
    MPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
  }
  MPoly sub(MPoly a, const MPoly &b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = subm(a[i], b[i]);
    trim(a);
    return a;
  }
  MPoly add(MPoly a, const MPoly &b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = addm(a[i], b[i]);
    trim(a);
    return a;
  }
  MPoly scale(MPoly a, std::uint64_t c) const {
    for (auto &x : a) x = mulm(x, c);
    trim(a);
    return a;
  }
  void divrem(const MPoly &a, const MPoly &b, MPoly &q, MPoly &r) const {
    r = a;
    trim(r);
    q.clear();
    if (r.size() < b.size()) return;
    q.assign(r.size() - b.size() + 1, 0);
    std::uint64_t il = inv(b.back());
    for (int i = deg(r); i >= deg(b); --i) {
      std::uint64_t c = mulm(r[std::size_t(i)], il);
      if (!c) continue;
      std::size_t sh = std::size_t(i - deg(b));
      q[sh] = c;
      for (std::size_t j = 0; j < b.size(); ++j) r[sh + j] = subm(r[sh + j], mulm(c, b[j]));
    }
    trim(r);
    trim(q);
  }
  MPoly rem(const MPoly &a, const MPoly &b) const {
    MPoly q, r;
    divrem(a, b, q, r);
    return r;
  }
  MPoly monic(MPoly a) const {
    trim(a);
    if (a.empty()) return a;
    return scale(a, inv(a.back()));
  }
  MPoly gcd(MPoly a, MPoly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      MPoly r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  // s*a + t*b = g (monic gcd).
  MPoly xgcd(MPoly a, MPoly b, MPoly &s, MPoly &t) const {
    MPoly s0{1}, s1{}, t0{}, t1{1};
    trim(a);
    trim(b);
    while (!b.empty()) {
      MPoly q, r;
      divrem(a, b, q, r);
      MPoly s2 = sub(s0, mul(q, s1)), t2 = sub(t0, mul(q, t1));
      a = std::move(b);
      b = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    std::uint64_t il = inv(a.back());
    s = scale(s0, il);
    t = scale(t0, il);
    return scale(a, il);
  }
  MPoly powmod(MPoly base, Integer e, const MPoly &m) const {
    MPoly r{1};
    base = rem(base, m);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = rem(mul(r, base), m);
      e >>= 1;
      if (e > 0) base = rem(mul(base, base), m);
    }
    return r;
  }
  MPoly derivative(const MPoly &f) const {
    MPoly r;
    for (std::size_t i = 1; i < f.size(); ++i) r.push_back(mulm(f[i], i % p));
    trim(r);
    return r;
  }
};

// Irreducible monic factors of a squarefree monic f mod p (odd p).
inline std::vector<MPoly> factor_mod_p(const ModP &m, MPoly f, std::mt19937_64 &rng) {
  std::vector<MPoly> out;
  if (deg(f) <= 0) return out;
  // distinct degree
  std::vector<std::pair<MPoly, int>> dd;
  MPoly h{0, 1};
  MPoly x{0, 1};
  for (int d = 1; 2 * d <= deg(f); ++d) {
    h = m.powmod(h, Integer(static_cast<unsigned long>(m.p)), f);
    MPoly g = m.gcd(f, m.sub(h, x));
    if (deg(g) > 0) {
      dd.push_back({g, d});
      MPoly q, r;
      m.divrem(f, g, q, r);
      f = q;
      h = m.rem(h, f);
    }
  }
  if (deg(f) > 0) dd.push_back({m.monic(f), deg(f)});
  // equal degree
  Integer pd;
  for (auto &[g, d] : dd) {
    std::vector<MPoly> stack{g};
    while (!stack.empty()) {
      MPoly u = stack.back();
      stack.pop_back();
      if (deg(u) == d) {
        out.push_back(m.monic(u));
        continue;
      }
      mpz_ui_pow_ui(pd.get_mpz_t(), static_cast<unsigned long>(m.p), static_cast<unsigned long>(d));
      Integer e = (pd - 1) / 2;
      for (;;) {
        MPoly a(std::size_t(deg(u)), 0);
        for (auto &c : a) c = rng() % m.p;
        trim(a);
        if (deg(a) <= 0) continue;
        MPoly b = m.sub(m.powmod(a, e, u), MPoly{1});
        MPoly g1 = m.gcd(u, b);
        if (deg(g1) > 0 && deg(g1) < deg(u)) {
          MPoly q, r;
          m.divrem(u, g1, q, r);
          stack.push_back(g1);
          stack.push_back(m.monic(q));
          break;
        }
      }
    }
  }
  return out;
}

inline bool is_prime_u(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Symmetric residue of c mod M.
inline Integer symmetric(const Integer &c, const Integer &M) {
  Integer r = c % M;
  if (r < 0) r += M;
  if (2 * r > M) r -= M;
  return r;
}

inline ZPoly to_z(const MPoly &f) {
  ZPoly r;
  for (auto c : f) r.push_back(Integer(static_cast<unsigned long>(c)));
  return r;
}

inline ZPoly zmod(ZPoly f, const Integer &M) {
  for (auto &c : f) {
    c %= M;
    if (c < 0) c += M;
  }
  trim(f);
  return f;
}

// Lift f == g*h (mod p), g, h monic and coprime mod p, f monic mod p^k target,
// to a factorization modulo pk = p^k.
inline void hensel2(const ModP &m, const ZPoly &f, ZPoly &g, ZPoly &h, int k) {
  MPoly s, t;
  m.xgcd(m.reduce(g), m.reduce(h), s, t);
  Integer P = static_cast<unsigned long>(m.p);
  Integer pk = P;
  for (int step = 1; step < k; ++step) {
    // e = (f - g h) / p^step mod p
    ZPoly e = zsub(f, zmul(g, h));
    for (auto &c : e) {
      if (!mpz_divisible_p(c.get_mpz_t(), pk.get_mpz_t())) throw InternalError("hensel: inexact");
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
    }
    MPoly em = m.reduce(e);
    MPoly gm = m.reduce(g), hm = m.reduce(h);
    MPoly q, sigma;
    m.divrem(m.mul(s, em), hm, q, sigma);
    MPoly tau = m.add(m.mul(t, em), m.mul(q, gm));
    ZPoly st = to_z(sigma), tt = to_z(tau);
    for (auto &c : st) c *= pk;
    for (auto &c : tt) c *= pk;
    if (g.size() < tt.size()) g.resize(tt.size(), Integer(0));
    for (std::size_t i = 0; i < tt.size(); ++i) g[i] += tt[i];
    if (h.size() < st.size()) h.resize(st.size(), Integer(0));
    for (std::size_t i = 0; i < st.size(); ++i) h[i] += st[i];
    pk *= P;
    g = zmod(g, pk);
    h = zmod(h, pk);
  }
}

// Irreducible factors over Z of a primitive squarefree f with deg >= 1.
inline std::vector<ZPoly> zassenhaus(const ZPoly &f) {
  if (deg(f) <= 1) return {f};
  std::mt19937_64 rng(12345);
  Integer lc = f.back();
  // choose a prime keeping f squarefree of full degree; prefer few factors
  std::vector<MPoly> best;
  std::uint64_t bestp = 0;
  int tries = 0;
  for (std::uint64_t p = 10007; tries < 5; p += 2) {
    if (!is_prime_u(p)) continue;
    ModP m{p};
    if (mpz_divisible_ui_p(lc.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    MPoly fm = m.reduce(f);
    MPoly g = m.gcd(fm, m.derivative(fm));
    if (deg(g) > 0) continue;
    ++tries;
    auto fac = factor_mod_p(m, m.monic(fm), rng);
    if (fac.size() == 1) return {f};
    if (bestp == 0 || fac.size() < best.size()) {
      best = fac;
      bestp = p;
    }
  }
  if (best.size() > 24) throw ComputationLimit("univariate factorization: too many modular factors");
  ModP m{bestp};
  // Mignotte-type bound on factor coefficients: 2^d * ||f||_2 * |lc|
  Integer norm2 = 0;
  for (auto &c : f) norm2 += c * c;
  Integer nrm;
  mpz_sqrt(nrm.get_mpz_t(), norm2.get_mpz_t());
  nrm += 1;
  Integer bound = nrm * abs(lc);
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(deg(f)));
  bound = 2 * bound * abs(lc) + 1;
  int k = 1;
  Integer pk = static_cast<unsigned long>(bestp);
  while (pk <= bound) {
    pk *= static_cast<unsigned long>(bestp);
    ++k;
  }
  // Make f monic mod p^k and lift the factors one at a time.
  Integer lcinv;
  mpz_invert(lcinv.get_mpz_t(), lc.get_mpz_t(), pk.get_mpz_t());
  ZPoly F = f;
  for (auto &c : F) c *= lcinv;
  F = zmod(F, pk);
  std::vector<ZPoly> lifted;
  ZPoly rest = F;
  for (std::size_t i = 0; i + 1 < best.size(); ++i) {
    ZPoly g = to_z(best[i]);
    MPoly hm{1};
    for (std::size_t j = i + 1; j < best.size(); ++j) hm = m.mul(hm, best[j]);
    ZPoly h = to_z(hm);
    hensel2(m, rest, g, h, k);
    lifted.push_back(g);
    rest = h;
  }
  lifted.push_back(rest);

  // Recombination.
  std::vector<ZPoly> result;
  ZPoly cur = f;
  std::vector<bool> used(lifted.size(), false);
  std::size_t remaining = lifted.size();
  for (std::size_t s = 1; 2 * s <= remaining; ++s) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < lifted.size(); ++i)
      if (!used[i]) idx.push_back(i);
    std::vector<std::size_t> comb(s);
    for (std::size_t i = 0; i < s; ++i) comb[i] = i;
    bool found_any = false;
    while (true) {
      Integer clc = cur.back();
      ZPoly g{clc};
      for (auto c : comb) g = zmod(zmul(g, lifted[idx[c]]), pk);
      for (auto &c : g) c = symmetric(c, pk);
      trim(g);
      ZPoly gp = primitive(g), q;
      if (zdivexact(cur, gp, q)) {
        result.push_back(gp);
        cur = q;
        for (auto c : comb) used[idx[c]] = true;
        remaining -= s;
        found_any = true;
        break;
      }
      // next combination
      int i = int(s) - 1;
      while (i >= 0 && comb[std::size_t(i)] == idx.size() - s + std::size_t(i)) --i;
      if (i < 0) break;
      ++comb[std::size_t(i)];
      for (std::size_t j = std::size_t(i) + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
    }
    if (found_any) s = 0; // restart with the reduced set
  }
  cur = primitive(cur);
  if (deg(cur) > 0) result.push_back(cur);
  return result;
}

struct UFactor {
  ZPoly f;
  int mult;
};

// Irreducible factorization of a nonzero integer polynomial, up to a unit
// and content. Factors are primitive with positive leading coefficient.
inline std::vector<UFactor> factor_z(const ZPoly &in) {
  ZPoly f = primitive(in);
  std::vector<UFactor> out;
  if (deg(f) <= 0) return out;
  // Yun squarefree decomposition.
  ZPoly a = f, b = derivative(f);
  ZPoly c = zgcd(a, b);
  ZPoly w, y;
  zdivexact(a, c, w);
  zdivexact(b, c, y);
  int i = 1;
  ZPoly z = zsub(y, derivative(w));
  while (deg(w) > 0) {
    ZPoly g = zgcd(w, z);
    if (deg(g) > 0)
      for (auto &h : zassenhaus(primitive(g))) out.push_back({h, i});
    ZPoly nw, ny;
    zdivexact(w, g, nw);
    // y = z / g
    zdivexact(z, g, ny);
    w = primitive(nw);
    z = zsub(ny, derivative(w));
    ++i;
  }
  return out;
}

} // namespace totalimage::upoly
