#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "totalimage/errors.hpp"
#include "totalimage/monomial.hpp"
#include "totalimage/rational.hpp"

namespace totalimage {

struct Ring {
  std::vector<std::string> vars;

  std::size_t size() const { return vars.size(); }
  // -1 when absent.
  int index(const std::string &name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return int(i);
    return -1;
  }
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(std::vector<std::string> vars) {
  return std::make_shared<const Ring>(Ring{std::move(vars)});
}

inline bool same_ring(const RingPtr &a, const RingPtr &b) {
  return a == b || (a && b && a->vars == b->vars);
}

struct Term {
  Monomial m;
  Rational c;
};

// Sparse polynomial with rational coefficients. Terms are kept sorted
// descending in grevlex, which is also the printing order.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(RingPtr r) : ring_(std::move(r)) {}
  Polynomial(RingPtr r, std::vector<Term> terms) : ring_(std::move(r)), terms_(std::move(terms)) {
    normalize();
  }

  static Polynomial constant(RingPtr r, const Rational &c) {
    Polynomial p(r);
    if (c != 0) p.terms_.push_back({Monomial(r->size()), c});
    return p;
  }
  static Polynomial variable(RingPtr r, std::size_t i) {
    Polynomial p(r);
    p.terms_.push_back({Monomial::variable(r->size(), i), Rational(1)});
    return p;
  }
  static Polynomial monomial(RingPtr r, Monomial m, const Rational &c = 1) {
    Polynomial p(r);
    if (c != 0) p.terms_.push_back({std::move(m), c});
    return p;
  }

  const RingPtr &ring() const { return ring_; }
  std::size_t nvars() const { return ring_ ? ring_->size() : 0; }
  const std::vector<Term> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  Rational constant_term() const {
    if (!terms_.empty() && terms_.back().m.is_one()) return terms_.back().c;
    return 0;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (auto &t : terms_) d = std::max(d, t.m.degree());
    return d;
  }
  unsigned degree_in(std::size_t i) const {
    unsigned d = 0;
    for (auto &t : terms_) d = std::max<unsigned>(d, t.m[i]);
    return d;
  }
  bool involves(std::size_t i) const { return degree_in(i) > 0; }
  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    unsigned d = terms_[0].m.degree();
    for (auto &t : terms_)
      if (t.m.degree() != d) return false;
    return true;
  }
  bool is_linear() const {
    for (auto &t : terms_)
      if (t.m.degree() > 1) return false;
    return !terms_.empty();
  }

  const Term &leading_term(const MonomialOrder &ord) const {
    if (terms_.empty()) throw PreconditionError("leading term of zero polynomial");
    if (ord.kind == MonomialOrder::Kind::grevlex) return terms_[0];
    std::size_t best = 0;
    for (std::size_t i = 1; i < terms_.size(); ++i)
      if (ord.compare(terms_[i].m, terms_[best].m) > 0) best = i;
    return terms_[best];
  }
  const Term &leading_term() const { return leading_term(MonomialOrder::grevlex()); }

  bool operator==(const Polynomial &o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (terms_[i].m != o.terms_[i].m || terms_[i].c != o.terms_[i].c) return false;
    return true;
  }
  bool operator!=(const Polynomial &o) const { return !(*this == o); }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto &t : r.terms_) t.c = -t.c;
    return r;
  }

  friend Polynomial operator+(const Polynomial &a, const Polynomial &b) { return merge(a, b, 1); }
  friend Polynomial operator-(const Polynomial &a, const Polynomial &b) { return merge(a, b, -1); }
  friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
    check_rings(a, b);
    Polynomial r(a.ring_ ? a.ring_ : b.ring_);
    if (a.is_zero() || b.is_zero()) return r;
    r.terms_.reserve(a.size() * b.size());
    for (auto &s : a.terms_)
      for (auto &t : b.terms_) r.terms_.push_back({s.m * t.m, s.c * t.c});
    r.normalize();
    return r;
  }
  friend Polynomial operator*(const Rational &c, const Polynomial &a) {
    Polynomial r(a.ring_);
    if (c == 0) return r;
    r.terms_ = a.terms_;
    for (auto &t : r.terms_) t.c *= c;
    return r;
  }
  Polynomial &operator+=(const Polynomial &o) { return *this = *this + o; }
  Polynomial &operator-=(const Polynomial &o) { return *this = *this - o; }
  Polynomial &operator*=(const Polynomial &o) { return *this = *this * o; }

  Polynomial mul_term(const Monomial &m, const Rational &c) const {
    Polynomial r(ring_);
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    // Multiplying by a monomial preserves grevlex order.
    for (auto &t : terms_) r.terms_.push_back({t.m * m, t.c * c});
    return r;
  }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(ring_, 1), base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  Rational eval(const std::vector<Rational> &pt) const {
    Rational s = 0;
    std::vector<std::vector<Rational>> powers(pt.size());
    for (auto &t : terms_) {
      Rational v = t.c;
      for (std::size_t i = 0; i < t.m.size() && v != 0; ++i) {
        Exp e = t.m[i];
        if (!e) continue;
        auto &pw = powers[i];
        if (pw.empty()) pw.push_back(1);
        while (pw.size() <= e) pw.push_back(pw.back() * pt[i]);
        v *= pw[e];
      }
      s += v;
    }
    return s;
  }

  // Replaces variable i by images[i]; all images share one ring.
  Polynomial substitute(const std::vector<Polynomial> &images, const RingPtr &target) const {
    Polynomial s(target);
    std::vector<std::vector<Polynomial>> powers(images.size());
    for (auto &t : terms_) {
      Polynomial v = constant(target, t.c);
      for (std::size_t i = 0; i < t.m.size(); ++i) {
        Exp e = t.m[i];
        if (!e) continue;
        auto &pw = powers[i];
        if (pw.empty()) pw.push_back(constant(target, 1));
        while (pw.size() <= e) pw.push_back(pw.back() * images[i]);
        v = v * pw[e];
      }
      s += v;
    }
    return s;
  }

  // Moves the polynomial into another ring: variable i goes to index map[i]
  // (map[i] < 0 means the variable must not occur).
  Polynomial change_ring(const RingPtr &target, const std::vector<int> &map) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto &t : terms_) {
      Monomial m(target->size());
      for (std::size_t i = 0; i < t.m.size(); ++i) {
        if (!t.m[i]) continue;
        if (map[i] < 0) throw StructuralError("change_ring: dropped variable occurs");
        m[std::size_t(map[i])] = Exp(m[std::size_t(map[i])] + t.m[i]);
      }
      out.push_back({std::move(m), t.c});
    }
    return Polynomial(target, std::move(out));
  }

  Polynomial homogenize(std::size_t var) const {
    if (involves(var)) throw PreconditionError("homogenize: variable already present");
    unsigned d = total_degree();
    std::vector<Term> out = terms_;
    for (auto &t : out) t.m[var] = Exp(d - t.m.degree());
    return Polynomial(ring_, std::move(out));
  }

  Polynomial specialize(std::size_t var, const Rational &value) const {
    std::vector<Term> out = terms_;
    for (auto &t : out) {
      Exp e = t.m[var];
      t.m[var] = 0;
      if (e) {
        Rational v;
        mpz_pow_ui(v.get_num_mpz_t(), value.get_num_mpz_t(), e);
        mpz_pow_ui(v.get_den_mpz_t(), value.get_den_mpz_t(), e);
        v.canonicalize();
        t.c *= v;
      }
    }
    return Polynomial(ring_, std::move(out));
  }
  Polynomial dehomogenize(std::size_t var) const { return specialize(var, 1); }

  Polynomial derivative(std::size_t var) const {
    std::vector<Term> out;
    for (auto &t : terms_) {
      if (!t.m[var]) continue;
      Term u = t;
      u.c *= t.m[var];
      u.m[var] -= 1;
      out.push_back(std::move(u));
    }
    return Polynomial(ring_, std::move(out));
  }

  // Degree-d homogeneous part.
  Polynomial homogeneous_part(unsigned d) const {
    std::vector<Term> out;
    for (auto &t : terms_)
      if (t.m.degree() == d) out.push_back(t);
    return Polynomial(ring_, std::move(out));
  }

  // Scaled so the leading coefficient (in ord) is one.
  Polynomial monic(const MonomialOrder &ord = MonomialOrder::grevlex()) const {
    if (is_zero()) return *this;
    Rational lc = leading_term(ord).c;
    return Rational(1 / lc) * *this;
  }

  // Integer coefficients with gcd one and positive leading coefficient.
  Polynomial primitive() const {
    if (is_zero()) return *this;
    Integer den = 1, num = 0;
    for (auto &t : terms_) den = lcm(den, t.c.get_den());
    for (auto &t : terms_) num = gcd(num, Integer(t.c.get_num() * (den / t.c.get_den())));
    Rational s = make_rational(den, num);
    if (terms_[0].c < 0) s = -s;
    return s * *this;
  }

  Monomial monomial_content() const {
    Monomial g(nvars());
    if (terms_.empty()) return g;
    g = terms_[0].m;
    for (auto &t : terms_) g = gcd(g, t.m);
    return g;
  }

  // Exact division by a monomial that divides every term.
  Polynomial divide_monomial(const Monomial &m) const {
    std::vector<Term> out = terms_;
    for (auto &t : out) t.m = quotient(t.m, m);
    return Polynomial(ring_, std::move(out));
  }

  std::vector<std::size_t> support_vars() const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < nvars(); ++i)
      if (involves(i)) v.push_back(i);
    return v;
  }

  std::string to_string() const;

  static void check_rings(const Polynomial &a, const Polynomial &b) {
    if (a.ring_ && b.ring_ && !same_ring(a.ring_, b.ring_))
      throw StructuralError("polynomial ring mismatch");
  }

private:
  RingPtr ring_;
  std::vector<Term> terms_;

  void normalize() {
    auto cmp = [](const Term &a, const Term &b) {
      return MonomialOrder::grevlex().compare(a.m, b.m) > 0;
    };
    std::sort(terms_.begin(), terms_.end(), cmp);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto &t : terms_) {
      if (!out.empty() && out.back().m == t.m)
        out.back().c += t.c;
      else
        out.push_back(std::move(t));
      if (out.back().c == 0) out.pop_back();
    }
    terms_ = std::move(out);
  }

  static Polynomial merge(const Polynomial &a, const Polynomial &b, int sign) {
    check_rings(a, b);
    Polynomial r(a.ring_ ? a.ring_ : b.ring_);
    r.terms_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    const auto ord = MonomialOrder::grevlex();
    while (i < a.size() || j < b.size()) {
      int c;
      if (i == a.size()) c = -1;
      else if (j == b.size()) c = 1;
      else c = ord.compare(a.terms_[i].m, b.terms_[j].m);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        r.terms_.push_back(b.terms_[j++]);
        if (sign < 0) r.terms_.back().c = -r.terms_.back().c;
      } else {
        Rational s = sign > 0 ? Rational(a.terms_[i].c + b.terms_[j].c)
                              : Rational(a.terms_[i].c - b.terms_[j].c);
        if (s != 0) r.terms_.push_back({a.terms_[i].m, s});
        ++i;
        ++j;
      }
    }
    return r;
  }
};

inline std::string monomial_string(const Monomial &m, const Ring &r) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += "*";
    s += r.vars[i];
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s;
}

inline std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto &t : terms_) {
    Rational c = t.c;
    bool neg = c < 0;
    if (neg) c = -c;
    if (neg) s += "-";
    else if (!first) s += "+";
    std::string ms = monomial_string(t.m, *ring_);
    if (ms.empty()) s += c.get_str();
    else if (c == 1) s += ms;
    else s += c.get_str() + "*" + ms;
    first = false;
  }
  return s;
}

inline std::ostream &operator<<(std::ostream &os, const Polynomial &p) { return os << p.to_string(); }

} // namespace totalimage
