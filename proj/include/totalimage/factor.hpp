#pragma once

// Multivariate factorization over Q: monomial content, squarefree split, a
// random shear making the polynomial monic in one variable, univariate
// factorization at a random point and Hensel lifting back.

#include <algorithm>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "totalimage/groebner.hpp"
#include "totalimage/polynomial.hpp"
#include "totalimage/upoly.hpp"

namespace totalimage {

struct FactorLimits {
  unsigned max_degree = 60;
  std::size_t max_vars = 16;
};

inline FactorLimits &factor_limits() {
  static FactorLimits l;
  return l;
}

struct Factorization {
  Rational unit = 1;
  std::vector<std::pair<Polynomial, int>> factors;
  // false when a size limit stopped the splitting; the unsplit remainder is
  // then listed as one factor.
  bool complete = true;
};

namespace detail {

using QPoly = std::vector<Rational>;

inline void qtrim(QPoly &f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline QPoly qmul(const QPoly &a, const QPoly &b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  qtrim(r);
  return r;
}
inline QPoly qsub(QPoly a, const QPoly &b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  qtrim(a);
  return a;
}
inline QPoly qadd(QPoly a, const QPoly &b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  qtrim(a);
  return a;
}
inline void qdivrem(const QPoly &a, const QPoly &b, QPoly &q, QPoly &r) {
  r = a;
  qtrim(r);
  q.clear();
  if (r.size() < b.size()) return;
  q.assign(r.size() - b.size() + 1, Rational(0));
  for (int i = int(r.size()) - 1; i >= int(b.size()) - 1; --i) {
    Rational c = r[std::size_t(i)] / b.back();
    if (c == 0) continue;
    std::size_t sh = std::size_t(i) - (b.size() - 1);
    q[sh] = c;
    for (std::size_t j = 0; j < b.size(); ++j) r[sh + j] -= c * b[j];
  }
  qtrim(r);
  qtrim(q);
}
inline QPoly qrem(const QPoly &a, const QPoly &b) {
  QPoly q, r;
  qdivrem(a, b, q, r);
  return r;
}
// Inverse of a modulo m (coprime).
inline QPoly qinvmod(const QPoly &a, const QPoly &m) {
  QPoly r0 = m, r1 = qrem(a, m), t0{}, t1{Rational(1)};
  while (!r1.empty()) {
    QPoly q, r;
    qdivrem(r0, r1, q, r);
    QPoly t2 = qsub(t0, qmul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.size() != 1) throw InternalError("qinvmod: not coprime");
  Rational c = 1 / r0[0];
  for (auto &x : t0) x *= c;
  return t0;
}

// Polynomial in variables y (shifted others) with coefficients in Q[v].
using YMap = std::map<std::vector<Exp>, QPoly>;

inline unsigned ydeg(const std::vector<Exp> &m) {
  unsigned d = 0;
  for (auto e : m) d += e;
  return d;
}

inline YMap ymul_trunc(const YMap &a, const YMap &b, unsigned maxdeg) {
  YMap r;
  for (auto &[ma, pa] : a)
    for (auto &[mb, pb] : b) {
      if (ydeg(ma) + ydeg(mb) > maxdeg) continue;
      std::vector<Exp> m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = Exp(ma[i] + mb[i]);
      auto &slot = r[m];
      slot = qadd(slot, qmul(pa, pb));
      if (slot.empty()) r.erase(m);
    }
  return r;
}

} // namespace detail

namespace detail {

// Coefficients of p as a polynomial in variable v.
inline std::vector<Polynomial> coeffs_in(const Polynomial &p, std::size_t v) {
  std::vector<std::vector<Term>> ts(p.degree_in(v) + 1);
  for (auto &t : p.terms()) {
    Term u = t;
    u.m[v] = 0;
    ts[t.m[v]].push_back(std::move(u));
  }
  std::vector<Polynomial> out;
  for (auto &x : ts) out.push_back(Polynomial(p.ring(), std::move(x)));
  return out;
}

inline Polynomial leading_coeff_in(const Polynomial &p, std::size_t v) {
  unsigned d = p.degree_in(v);
  std::vector<Term> ts;
  for (auto &t : p.terms())
    if (t.m[v] == d) {
      Term u = t;
      u.m[v] = 0;
      ts.push_back(std::move(u));
    }
  return Polynomial(p.ring(), std::move(ts));
}

// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, in variable v.
inline Polynomial prem_in(Polynomial a, const Polynomial &b, std::size_t v) {
  unsigned db = b.degree_in(v);
  Polynomial lb = leading_coeff_in(b, v);
  int steps = int(a.degree_in(v)) - int(db) + 1;
  while (!a.is_zero() && a.degree_in(v) >= db) {
    unsigned da = a.degree_in(v);
    Polynomial la = leading_coeff_in(a, v);
    a = lb * a - la * b.mul_term(Monomial::variable(a.ring()->size(), v, Exp(da - db)), Rational(1));
    --steps;
  }
  if (steps > 0 && !a.is_zero()) a = a * lb.pow(unsigned(steps));
  return a;
}

inline Polynomial gcd_rec(const Polynomial &a, const Polynomial &b);

// gcd of the coefficients of p in variable v.
inline Polynomial content_in(const Polynomial &p, std::size_t v) {
  Polynomial g(p.ring());
  for (auto &c : coeffs_in(p, v)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : gcd_rec(g, c);
    if (g.is_constant()) return Polynomial::constant(p.ring(), 1);
  }
  return g.primitive();
}

// Primitive gcd over Q, recursive in the variables with subresultant
// remainder sequences.
inline Polynomial gcd_rec(const Polynomial &a0, const Polynomial &b0) {
  const RingPtr &R = a0.ring();
  if (a0.is_zero()) return b0.primitive();
  if (b0.is_zero()) return a0.primitive();
  if (a0.is_constant() || b0.is_constant()) return Polynomial::constant(R, 1);
  std::size_t n = R->size();
  // A variable in only one argument: the gcd divides the other one's content.
  for (std::size_t i = 0; i < n; ++i) {
    bool ia = a0.involves(i), ib = b0.involves(i);
    if (ia && !ib) return gcd_rec(content_in(a0, i), b0);
    if (ib && !ia) return gcd_rec(a0, content_in(b0, i));
  }
  std::size_t v = n;
  for (std::size_t i = 0; i < n; ++i)
    if (a0.involves(i) &&
        (v == n || std::max(a0.degree_in(i), b0.degree_in(i)) < std::max(a0.degree_in(v), b0.degree_in(v))))
      v = i;
  Polynomial ca = content_in(a0, v), cb = content_in(b0, v);
  Polynomial d = gcd_rec(ca, cb);
  Polynomial a = divide_exact(a0, ca), b = divide_exact(b0, cb);
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  Polynomial g = Polynomial::constant(R, 1), h = Polynomial::constant(R, 1);
  for (;;) {
    unsigned delta = a.degree_in(v) - b.degree_in(v);
    Polynomial r = prem_in(a, b, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) return d.primitive();
    a = b;
    b = divide_exact(r, g * h.pow(delta));
    g = leading_coeff_in(a, v);
    if (delta == 0) continue;
    h = divide_exact(g.pow(delta), h.pow(delta - 1));
  }
  return (d * divide_exact(b, content_in(b, v))).primitive();
}

} // namespace detail

inline Polynomial poly_gcd(const Polynomial &a, const Polynomial &b) { return detail::gcd_rec(a, b); }

namespace detail {

// Factors a squarefree polynomial s in ring R, monic in variable v with a
// constant leading coefficient. Returns primitive factors.
inline std::vector<Polynomial> factor_monic_squarefree(const Polynomial &s, std::size_t v,
                                                       std::mt19937_64 &rng) {
  const RingPtr &R = s.ring();
  std::size_t n = R->size();
  unsigned D = s.degree_in(v);
  if (D <= 1) return {s.primitive()};
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i)
    if (i != v) others.push_back(i);
  if (others.empty() || s.support_vars().size() == 1) {
    upoly::ZPoly z(D + 1, Integer(0));
    Polynomial sp = s.primitive();
    for (auto &t : sp.terms()) z[t.m[v]] = t.c.get_num();
    std::vector<Polynomial> out;
    for (auto &uf : upoly::factor_z(z)) {
      Polynomial p(R);
      for (std::size_t i = 0; i < uf.f.size(); ++i)
        if (uf.f[i] != 0)
          p = p + Polynomial::monomial(R, Monomial::variable(n, v, Exp(i)), Rational(uf.f[i]));
      out.push_back(p);
    }
    return out;
  }
  // Evaluation point making the univariate image squarefree.
  std::vector<Rational> a(n, Rational(0));
  upoly::ZPoly img;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 60) throw ComputationLimit("factor: no squarefree evaluation point");
    long span = attempt < 5 ? 3 : (attempt < 20 ? 20 : 1000);
    for (auto i : others) a[i] = Rational(uniform_int(rng, -span, span));
    QPoly q(D + 1, Rational(0));
    for (auto &t : s.terms()) {
      Rational c = t.c;
      for (auto i : others)
        for (Exp e = 0; e < t.m[i]; ++e) c *= a[i];
      q[t.m[v]] += c;
    }
    qtrim(q);
    if (q.size() != D + 1) continue;
    Integer den = 1;
    for (auto &c : q) den = lcm(den, c.get_den());
    img.clear();
    for (auto &c : q) img.push_back(c.get_num() * (den / c.get_den()));
    upoly::ZPoly g = upoly::zgcd(img, upoly::derivative(img));
    if (upoly::deg(g) == 0) break;
  }
  auto ufs = upoly::factor_z(img);
  if (ufs.size() == 1) return {s.primitive()};
  // Lift s/lc = prod U_j in Q[v][[y]] with y_i = x_i - a_i.
  std::vector<QPoly> u;
  for (auto &uf : ufs) {
    QPoly q;
    for (auto &c : uf.f) q.push_back(Rational(c));
    Rational l = q.back();
    for (auto &c : q) c /= l;
    u.push_back(q);
  }
  std::size_t r = u.size();
  // Shifted s as a YMap over the `others` variables.
  std::vector<Polynomial> shift(n);
  for (std::size_t i = 0; i < n; ++i) {
    shift[i] = Polynomial::variable(R, i);
    if (i != v && a[i] != 0) shift[i] = shift[i] + Polynomial::constant(R, a[i]);
  }
  Polynomial ss = s.substitute(shift, R);
  Rational lc = 0;
  for (auto &t : ss.terms())
    if (t.m[v] == D) lc = t.c;
  YMap S;
  unsigned K = 0;
  for (auto &t : ss.terms()) {
    std::vector<Exp> m;
    for (auto i : others) m.push_back(t.m[i]);
    auto &slot = S[m];
    if (slot.size() <= t.m[v]) slot.resize(t.m[v] + 1, Rational(0));
    slot[t.m[v]] += t.c / lc;
    K = std::max(K, ydeg(m));
  }
  for (auto it = S.begin(); it != S.end();) {
    qtrim(it->second);
    if (it->second.empty()) it = S.erase(it);
    else ++it;
  }
  std::vector<YMap> U(r);
  std::vector<Exp> zero(others.size(), 0);
  for (std::size_t j = 0; j < r; ++j) U[j][zero] = u[j];
  // Partial-fraction multipliers.
  std::vector<QPoly> cof(r), inv(r);
  for (std::size_t j = 0; j < r; ++j) {
    QPoly c{Rational(1)};
    for (std::size_t i = 0; i < r; ++i)
      if (i != j) c = qmul(c, u[i]);
    cof[j] = c;
    inv[j] = qinvmod(c, u[j]);
  }
  for (unsigned k = 1; k <= K; ++k) {
    YMap prod = U[0];
    for (std::size_t j = 1; j < r; ++j) prod = ymul_trunc(prod, U[j], k);
    // degree-k part of S - prod
    std::map<std::vector<Exp>, QPoly> err;
    for (auto &[m, p] : S)
      if (ydeg(m) == k) err[m] = p;
    for (auto &[m, p] : prod)
      if (ydeg(m) == k) {
        err[m] = qsub(err[m], p);
      }
    for (auto &[m, e] : err) {
      if (e.empty()) continue;
      for (std::size_t j = 0; j < r; ++j) {
        QPoly d = qrem(qmul(e, inv[j]), u[j]);
        if (!d.empty()) U[j][m] = d;
      }
    }
  }
  // Back to polynomials in R (undo shift).
  std::vector<Polynomial> unshift(n);
  for (std::size_t i = 0; i < n; ++i) {
    unshift[i] = Polynomial::variable(R, i);
    if (i != v && a[i] != 0) unshift[i] = unshift[i] - Polynomial::constant(R, a[i]);
  }
  auto to_poly = [&](const YMap &Y) {
    Polynomial p(R);
    std::vector<Term> ts;
    for (auto &[m, q] : Y)
      for (std::size_t e = 0; e < q.size(); ++e) {
        if (q[e] == 0) continue;
        Monomial mm(n);
        for (std::size_t i = 0; i < others.size(); ++i) mm[others[i]] = m[i];
        mm[v] = Exp(e);
        ts.push_back({mm, q[e]});
      }
    return Polynomial(R, std::move(ts));
  };
  std::vector<Polynomial> lifted;
  for (auto &Y : U) lifted.push_back(to_poly(Y));
  // Recombination: subsets of lifted factors, truncated at y-degree K.
  std::vector<Polynomial> result;
  Polynomial cur = ss;
  std::vector<bool> used(r, false);
  std::size_t remaining = r;
  auto trunc = [&](const Polynomial &p) {
    std::vector<Term> ts;
    for (auto &t : p.terms()) {
      unsigned d = 0;
      for (auto i : others) d += t.m[i];
      if (d <= K) ts.push_back(t);
    }
    return Polynomial(R, std::move(ts));
  };
  for (std::size_t sz = 1; 2 * sz <= remaining; ++sz) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < r; ++i)
      if (!used[i]) idx.push_back(i);
    std::vector<std::size_t> comb(sz);
    for (std::size_t i = 0; i < sz; ++i) comb[i] = i;
    bool found = false;
    for (;;) {
      Polynomial cand = Polynomial::constant(R, 1);
      for (auto c : comb) cand = trunc(cand * lifted[idx[c]]);
      Polynomial q(R);
      bool ok = true;
      try {
        q = divide_exact(cur, cand);
      } catch (const PreconditionError &) {
        ok = false;
      }
      if (ok) {
        result.push_back(cand);
        cur = q;
        for (auto c : comb) used[idx[c]] = true;
        remaining -= sz;
        found = true;
        break;
      }
      int i = int(sz) - 1;
      while (i >= 0 && comb[std::size_t(i)] == idx.size() - sz + std::size_t(i)) --i;
      if (i < 0) break;
      ++comb[std::size_t(i)];
      for (std::size_t j = std::size_t(i) + 1; j < sz; ++j) comb[j] = comb[j - 1] + 1;
    }
    if (found) sz = 0;
  }
  if (!cur.is_constant()) result.push_back(cur);
  std::vector<Polynomial> out;
  for (auto &p : result) out.push_back(p.substitute(unshift, R).primitive());
  return out;
}

// f(p + s*u) as an integer polynomial in s.
inline upoly::ZPoly restrict_to_line(const Polynomial &f, const std::vector<Rational> &p,
                                     const std::vector<Rational> &u) {
  std::size_t n = p.size();
  unsigned D = f.total_degree();
  std::vector<std::vector<QPoly>> pw(n);
  for (std::size_t i = 0; i < n; ++i) {
    pw[i].push_back(QPoly{Rational(1)});
    QPoly lin{p[i], u[i]};
    qtrim(lin);
    for (unsigned e = 1; e <= D; ++e) pw[i].push_back(qmul(pw[i].back(), lin));
  }
  QPoly acc;
  for (auto &t : f.terms()) {
    QPoly m{t.c};
    for (std::size_t i = 0; i < n && !m.empty(); ++i)
      if (t.m[i]) m = qmul(m, pw[i][t.m[i]]);
    acc = qadd(acc, m);
  }
  Integer den = 1;
  for (auto &c : acc) den = lcm(den, c.get_den());
  upoly::ZPoly z;
  for (auto &c : acc) z.push_back(c.get_num() * (den / c.get_den()));
  return z;
}

// True when some restriction of f to a line keeps the degree and is
// irreducible; a factorization of f would restrict to one of the line.
inline bool irreducible_on_a_line(const Polynomial &f, std::mt19937_64 &rng, int tries = 3) {
  std::size_t n = f.ring()->size();
  unsigned D = f.total_degree();
  for (int k = 0; k < tries; ++k) {
    std::vector<Rational> p(n), u(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = Rational(uniform_int(rng, -5, 5));
      u[i] = Rational(uniform_int(rng, -5, 5));
    }
    auto z = restrict_to_line(f, p, u);
    if (upoly::deg(z) != int(D)) continue;
    auto fs = upoly::factor_z(z);
    if (fs.size() == 1 && fs[0].mult == 1) return true;
  }
  return false;
}

// Every factor of h involves v: a squarefree image in v of full degree
// means h is squarefree.
inline bool squarefree_by_evaluation(const Polynomial &h, std::size_t v, std::mt19937_64 &rng, int tries = 3) {
  std::size_t n = h.ring()->size();
  unsigned D = h.degree_in(v);
  for (int k = 0; k < tries; ++k) {
    std::vector<Rational> a(n), zero(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) a[i] = Rational(uniform_int(rng, -10, 10));
    zero[v] = 1;
    a[v] = 0;
    auto z = restrict_to_line(h, a, zero);
    if (upoly::deg(z) != int(D)) continue;
    if (upoly::deg(upoly::zgcd(z, upoly::derivative(z))) == 0) return true;
  }
  return false;
}

// Irreducible factors of a squarefree s, each appended with multiplicity mult.
// A shear x_i -> x_i + c_i v makes s monic in v first.
inline void factor_squarefree(const Polynomial &s, int mult, std::mt19937_64 &rng, Factorization &out) {
  const RingPtr &R = s.ring();
  std::size_t n = R->size();
  auto vars = s.support_vars();
  std::size_t v = vars[0];
  for (auto i : vars)
    if (s.degree_in(i) > s.degree_in(v)) v = i;
  unsigned D = s.total_degree();
  std::vector<Rational> c(n, Rational(0));
  Polynomial top = s.homogeneous_part(D);
  bool monic_in_v = top.degree_in(v) == D;
  if (!monic_in_v) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 50) throw ComputationLimit("factor: no shear found");
      std::vector<Rational> pt(n, Rational(0));
      for (auto i : vars)
        if (i != v) c[i] = Rational(uniform_int(rng, attempt < 10 ? -3 : -50, attempt < 10 ? 3 : 50));
      for (auto i : vars) pt[i] = i == v ? Rational(1) : c[i];
      if (top.eval(pt) != 0) break;
    }
  }
  std::vector<Polynomial> fwd(n), back(n);
  for (std::size_t i = 0; i < n; ++i) {
    fwd[i] = Polynomial::variable(R, i);
    back[i] = Polynomial::variable(R, i);
    if (c[i] != 0) {
      fwd[i] = fwd[i] + c[i] * Polynomial::variable(R, v);
      back[i] = back[i] - c[i] * Polynomial::variable(R, v);
    }
  }
  Polynomial h = monic_in_v ? s : s.substitute(fwd, R);
  for (auto &p : factor_monic_squarefree(h, v, rng)) {
    Polynomial orig = monic_in_v ? p : p.substitute(back, R);
    out.factors.push_back({orig.primitive(), mult});
  }
}

// Irreducible factors of p (primitive, no monomial content) with
// multiplicities scaled by mult. Contents in single variables are split off
// first; then a squarefree decomposition in a variable every factor involves.
inline void factor_rec(const Polynomial &p, int mult, std::mt19937_64 &rng, Factorization &out) {
  if (p.is_constant()) return;
  if (p.total_degree() == 1 || irreducible_on_a_line(p, rng)) {
    out.factors.push_back({p.primitive(), mult});
    return;
  }
  std::size_t v = p.ring()->size();
  for (auto i : p.support_vars())
    if (v == p.ring()->size() || p.degree_in(i) < p.degree_in(v)) v = i;
  Polynomial c = content_in(p, v);
  if (!c.is_constant()) {
    factor_rec(c, mult, rng, out);
    factor_rec(divide_exact(p, c).primitive(), mult, rng, out);
    return;
  }
  // Yun in v.
  Polynomial pv = p.derivative(v);
  Polynomial g = squarefree_by_evaluation(p, v, rng) ? Polynomial::constant(p.ring(), 1) : poly_gcd(p, pv);
  if (g.is_constant()) {
    factor_squarefree(p, mult, rng, out);
    return;
  }
  Polynomial w = divide_exact(p, g), y = divide_exact(pv, g);
  Polynomial z = y - w.derivative(v);
  for (int i = 1; !w.is_constant(); ++i) {
    Polynomial gg = poly_gcd(w, z);
    if (!gg.is_constant()) {
      if (gg.total_degree() == 1 || irreducible_on_a_line(gg, rng)) out.factors.push_back({gg, mult * i});
      else factor_squarefree(gg, mult * i, rng, out);
    }
    w = divide_exact(w, gg);
    z = divide_exact(z, gg) - w.derivative(v);
  }
}

} // namespace detail

// Factorization of a nonzero polynomial into irreducibles over Q.
inline Factorization factor(const Polynomial &f, std::uint64_t seed = 0x5eed) {
  if (f.is_zero()) throw PreconditionError("factor of zero");
  const RingPtr &R = f.ring();
  std::size_t n = R->size();
  Factorization out;
  std::mt19937_64 rng(seed);
  Monomial mc = f.monomial_content();
  for (std::size_t i = 0; i < n; ++i)
    if (mc[i]) out.factors.push_back({Polynomial::variable(R, i), int(mc[i])});
  Polynomial g = f.divide_monomial(mc);
  Polynomial gp = g.primitive();
  out.unit = g.terms()[0].c / gp.terms()[0].c;
  if (gp.is_constant()) return out;
  auto vars = gp.support_vars();
  if (gp.total_degree() > factor_limits().max_degree || vars.size() > factor_limits().max_vars) {
    out.factors.push_back({gp, 1});
    out.complete = false;
    return out;
  }
  detail::factor_rec(gp, 1, rng, out);
  std::stable_sort(out.factors.begin(), out.factors.end(), [](const auto &a, const auto &b) {
    if (a.first.total_degree() != b.first.total_degree())
      return a.first.total_degree() < b.first.total_degree();
    return a.first.to_string() < b.first.to_string();
  });
  // Fix the unit so the product matches exactly.
  Polynomial prod = Polynomial::constant(R, 1);
  for (auto &[p, e] : out.factors) prod = prod * p.pow(unsigned(e));
  out.unit = f.terms()[0].c / prod.terms()[0].c;
  if (Rational(out.unit) * prod != f) throw InternalError("factor: product check failed");
  return out;
}

// Distinct irreducible factors.
inline std::vector<Polynomial> irreducible_factors(const Polynomial &f) {
  std::vector<Polynomial> out;
  if (f.is_zero() || f.is_constant()) return out;
  for (auto &[p, e] : factor(f).factors) out.push_back(p);
  return out;
}

} // namespace totalimage
