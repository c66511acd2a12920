#pragma once

// Rational maps, conversions between affine and projective maps, image
// closures, frames, preimages and the fiber membership oracle.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "totalimage/decompose.hpp"
#include "totalimage/groebner.hpp"
#include "totalimage/trace.hpp"

namespace totalimage {

// A map X -> target. Projective maps send [x] to [f_0 : ... : f_m]; affine
// maps send x to (f_1, ..., f_m). In both flavors coords.size() equals the
// number of target variables.
struct RationalMap {
  RingPtr domain;
  RingPtr target;
  Ideal domain_ideal;
  std::vector<Polynomial> coords;
  Flavor flavor = Flavor::projective;

  RationalMap() = default;
  RationalMap(RingPtr d, RingPtr t, Ideal ix, std::vector<Polynomial> c, Flavor fl)
      : domain(std::move(d)), target(std::move(t)), domain_ideal(std::move(ix)),
        coords(std::move(c)), flavor(fl) {
    validate();
  }

  unsigned degree() const {
    unsigned d = 0;
    for (auto &c : coords) d = std::max(d, c.total_degree());
    return d;
  }

  void validate() const {
    if (!domain || !target) throw StructuralError("map: missing ring");
    if (coords.size() != target->size())
      throw StructuralError("map: coordinate count differs from target arity");
    for (auto &c : coords)
      if (!same_ring(c.ring(), domain)) throw StructuralError("map: coordinate in wrong ring");
    if (!same_ring(domain_ideal.ring(), domain)) throw StructuralError("map: domain ideal in wrong ring");
    if (flavor == Flavor::projective) {
      long deg = -1;
      for (auto &c : coords) {
        if (c.is_zero()) continue;
        if (!c.is_homogeneous()) throw StructuralError("map: coordinate " + c.to_string() + " is not homogeneous");
        if (deg >= 0 && long(c.total_degree()) != deg)
          throw StructuralError("map: coordinates have different degrees");
        deg = long(c.total_degree());
      }
      for (auto &g : domain_ideal.gens())
        if (!g.is_homogeneous()) throw StructuralError("map: domain ideal is not homogeneous");
    }
    bool nonzero = false;
    for (auto &c : coords)
      if (!ideal_contains(domain_ideal, c)) nonzero = true;
    if (!nonzero) throw StructuralError("map: all coordinates vanish on the domain");
  }
};

struct Variety {
  Ideal ideal;
  int dim = -1;
  Flavor flavor = Flavor::projective;

  Variety() = default;
  Variety(Ideal I, Flavor fl) : ideal(std::move(I)), dim(dimension(ideal, fl)), flavor(fl) {}
};

// Fraction g/h of polynomials, for clear_denominators.
struct Fraction {
  Polynomial num;
  Polynomial den;
};

// Adds a homogenizing variable in front of the domain and target rings.
inline RationalMap affinize_to_projective(const RationalMap &f) {
  if (f.flavor != Flavor::affine) throw PreconditionError("affinize_to_projective: map is not affine");
  RingPtr dx = ring_with_prefix(f.domain, {"x_h"});
  RingPtr dy = ring_with_prefix(f.target, {"y_h"});
  auto sh = shift_map(f.domain->size(), 1);
  unsigned d = f.degree();
  std::vector<Polynomial> c;
  Polynomial x0 = Polynomial::variable(dx, 0);
  c.push_back(x0.pow(d));
  for (auto &p : f.coords) {
    if (p.is_zero()) {
      c.push_back(Polynomial(dx));
      continue;
    }
    Polynomial h = p.change_ring(dx, sh).homogenize(0);
    c.push_back(h * x0.pow(d - p.total_degree()));
  }
  std::vector<Polynomial> ig;
  for (auto &g : f.domain_ideal.gb()) ig.push_back(g.change_ring(dx, sh).homogenize(0));
  return RationalMap(dx, dy, Ideal(dx, std::move(ig)), std::move(c), Flavor::projective);
}

// H^2 g_i / h_i with H the product of the denominators.
inline RationalMap clear_denominators(const RingPtr &domain, const RingPtr &target, const Ideal &ix,
                                      const std::vector<Fraction> &coords) {
  Polynomial H = Polynomial::constant(domain, 1);
  for (auto &fr : coords) {
    if (ideal_contains(ix, fr.den)) throw StructuralError("clear_denominators: denominator vanishes on the domain");
    H = H * fr.den;
  }
  Polynomial H2 = H * H;
  std::vector<Polynomial> out;
  for (auto &fr : coords) out.push_back(divide_exact(H2 * fr.num, fr.den));
  // drop a common monomial factor
  Monomial common;
  bool first = true;
  for (auto &p : out) {
    if (p.is_zero()) continue;
    Monomial mc = p.monomial_content();
    common = first ? mc : gcd(common, mc);
    first = false;
  }
  if (!first && !common.is_one())
    for (auto &p : out)
      if (!p.is_zero()) p = p.divide_monomial(common);
  return RationalMap(domain, target, ix, std::move(out), Flavor::projective);
}

inline Ideal base_locus(const RationalMap &f) {
  if (f.flavor != Flavor::projective) throw PreconditionError("base_locus: projective map expected");
  return f.domain_ideal.plus(f.coords);
}

namespace detail {

// Product ring with the domain variables first; names are internal.
inline RingPtr product_ring(std::size_t nx, std::size_t ny) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < nx; ++i) v.push_back("x#" + std::to_string(i));
  for (std::size_t i = 0; i < ny; ++i) v.push_back("y#" + std::to_string(i));
  return make_ring(std::move(v));
}

// Removes variables pinned by linear forms in I. `avoid` lists variables that
// should stay free when possible.
struct LinearReduction {
  RingPtr ring;
  std::vector<Polynomial> images; // original variable -> polynomial in ring
  std::vector<int> kept;          // original index -> new index or -1
  Ideal ideal;
};

inline LinearReduction reduce_linear(const Ideal &I, const std::vector<std::size_t> &avoid) {
  const RingPtr &R = I.ring();
  std::size_t n = R->size();
  std::vector<std::vector<Rational>> rows; // column n holds the constant
  std::vector<Polynomial> rest;
  for (auto &g : I.gb()) {
    if (g.total_degree() == 1) {
      std::vector<Rational> row(n + 1, Rational(0));
      for (auto &t : g.terms()) {
        if (t.m.is_one()) row[n] = t.c;
        for (std::size_t i = 0; i < n; ++i)
          if (t.m[i]) row[i] = t.c;
      }
      rows.push_back(row);
    } else {
      rest.push_back(g);
    }
  }
  std::vector<bool> avoided(n, false);
  for (auto a : avoid) avoided[a] = true;
  std::vector<int> pivot_of_row;
  std::vector<bool> is_pivot(n, false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int p = -1;
    for (int pass = 0; pass < 2 && p < 0; ++pass)
      for (std::size_t i = n; i-- > 0;)
        if (rows[r][i] != 0 && !is_pivot[i] && (pass == 1 || !avoided[i])) {
          p = int(i);
          break;
        }
    if (p < 0) continue;
    Rational c = rows[r][std::size_t(p)];
    for (auto &x : rows[r]) x /= c;
    for (std::size_t s = 0; s < rows.size(); ++s)
      if (s != r && rows[s][std::size_t(p)] != 0) {
        Rational k = rows[s][std::size_t(p)];
        for (std::size_t i = 0; i <= n; ++i) rows[s][i] -= k * rows[r][i];
      }
    is_pivot[std::size_t(p)] = true;
    pivot_of_row.push_back(p);
  }
  LinearReduction out;
  std::vector<std::string> names;
  out.kept.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (!is_pivot[i]) {
      out.kept[i] = int(names.size());
      names.push_back(R->vars[i]);
    }
  out.ring = make_ring(names);
  out.images.assign(n, Polynomial(out.ring));
  for (std::size_t i = 0; i < n; ++i)
    if (!is_pivot[i]) out.images[i] = Polynomial::variable(out.ring, std::size_t(out.kept[i]));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    // find this row's pivot
    int p = -1;
    for (auto q : pivot_of_row)
      if (rows[r][std::size_t(q)] == 1) {
        bool unique = true;
        for (std::size_t s = 0; s < rows.size(); ++s)
          if (s != r && rows[s][std::size_t(q)] != 0) unique = false;
        if (unique) {
          p = q;
          break;
        }
      }
    if (p < 0) continue;
    Polynomial e = Polynomial::constant(out.ring, -rows[r][n]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != std::size_t(p) && rows[r][i] != 0)
        e = e - rows[r][i] * Polynomial::variable(out.ring, std::size_t(out.kept[i]));
    out.images[std::size_t(p)] = e;
  }
  std::vector<Polynomial> g;
  for (auto &p : rest) g.push_back(p.substitute(out.images, out.ring));
  out.ideal = Ideal(out.ring, std::move(g));
  return out;
}

inline std::size_t rational_rank(std::vector<std::vector<Rational>> m) {
  std::size_t rank = 0;
  std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r)
      if (m[r][c] != 0) {
        Rational k = m[r][c] / m[rank][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] -= k * m[rank][j];
      }
    ++rank;
  }
  return rank;
}

// Splits coordinates h_j into a linearly independent subset (together with
// 1) and relations y_k - sum c_j y_j - c for the others. `order` fixes the
// processing order; empty means 0, 1, ...
struct CoordinateBasis {
  std::vector<std::size_t> indep;
  std::vector<Polynomial> relations; // in target
};

inline CoordinateBasis coordinate_basis(const std::vector<Polynomial> &h, const RingPtr &target,
                                        std::vector<std::size_t> order = {}) {
  std::size_t ny = h.size();
  if (order.empty())
    for (std::size_t j = 0; j < ny; ++j) order.push_back(j);
  // combo holds the coefficients on (y_0, ..., y_{ny-1}, 1).
  struct Row {
    Polynomial p;
    std::vector<Rational> combo;
  };
  std::vector<Row> basis;
  auto reduce = [&](Row r) {
    bool changed = true;
    while (changed && !r.p.is_zero()) {
      changed = false;
      for (auto &b : basis) {
        const Term &lb = b.p.leading_term();
        for (auto &t : r.p.terms())
          if (t.m == lb.m) {
            Rational k = t.c / lb.c;
            r.p = r.p - k * b.p;
            for (std::size_t i = 0; i <= ny; ++i) r.combo[i] -= k * b.combo[i];
            changed = true;
            break;
          }
      }
    }
    return r;
  };
  CoordinateBasis out;
  if (h.empty()) return out;
  Row one{Polynomial::constant(h[0].ring(), 1), std::vector<Rational>(ny + 1, Rational(0))};
  one.combo[ny] = 1;
  basis.push_back(one);
  for (auto j : order) {
    Row r{h[j], std::vector<Rational>(ny + 1, Rational(0))};
    r.combo[j] = 1;
    r = reduce(std::move(r));
    if (r.p.is_zero()) {
      Polynomial e = Polynomial::constant(target, r.combo[ny]);
      for (std::size_t i = 0; i < ny; ++i)
        if (r.combo[i] != 0) e = e + r.combo[i] * Polynomial::variable(target, i);
      out.relations.push_back(e);
    } else {
      out.indep.push_back(j);
      basis.push_back(std::move(r));
    }
  }
  std::sort(out.indep.begin(), out.indep.end());
  return out;
}

// Kernel of k[y] -> k[x]/I, y_j -> f_j. Linear forms in I are substituted
// away first, and coordinates that are linear combinations of the others
// (and 1) modulo I become linear generators of the kernel.
inline Ideal kernel(const Ideal &I, const std::vector<Polynomial> &f, const RingPtr &target) {
  if (I.is_unit()) return Ideal::unit(target);
  LinearReduction lr = reduce_linear(I, {});
  const Ideal &J = lr.ideal;
  std::vector<Polynomial> h;
  for (auto &p : f) h.push_back(normal_form(p.substitute(lr.images, lr.ring), J));

  auto cb = coordinate_basis(h, target);
  std::vector<std::size_t> &indep = cb.indep;
  std::vector<Polynomial> &lin = cb.relations;

  std::size_t nx = lr.ring->size(), nb = indep.size();
  // On affine space, a full-rank Jacobian at one point means the remaining
  // coordinates are algebraically independent.
  if (J.is_zero() && nb > 0 && nb <= nx) {
    std::mt19937_64 rng(0x6a6);
    for (int attempt = 0; attempt < 3; ++attempt) {
      std::vector<Rational> pt;
      for (std::size_t i = 0; i < nx; ++i) pt.push_back(Rational(uniform_int(rng, -20, 20)));
      std::vector<std::vector<Rational>> jac;
      for (auto j : indep) {
        std::vector<Rational> row;
        for (std::size_t i = 0; i < nx; ++i) row.push_back(h[j].derivative(i).eval(pt));
        jac.push_back(std::move(row));
      }
      if (rational_rank(std::move(jac)) == nb) return Ideal(target, std::move(lin));
    }
  }
  RingPtr P = product_ring(nx, nb);
  auto emb = shift_map(nx, 0);
  std::vector<Polynomial> g;
  for (auto &p : J.gens()) g.push_back(p.change_ring(P, emb));
  for (std::size_t j = 0; j < nb; ++j)
    g.push_back(Polynomial::variable(P, nx + j) - h[indep[j]].change_ring(P, emb));
  unsigned weight = 1;
  if (J.is_homogeneous()) {
    unsigned d = 0;
    for (auto j : indep) {
      if (!h[j].is_homogeneous() || (d && h[j].total_degree() != d)) {
        d = 0;
        break;
      }
      d = h[j].total_degree();
    }
    if (d) weight = d;
  }
  Ideal E = eliminate(Ideal(P, std::move(g)), nx, weight);
  std::vector<int> back(nx + nb, -1);
  for (std::size_t j = 0; j < nb; ++j) back[nx + j] = int(indep[j]);
  for (auto &p : E.gb()) lin.push_back(p.change_ring(target, back));
  return Ideal(target, std::move(lin));
}

} // namespace detail

// Computes images, frames and preimages for one map. Labels on the target
// side live in f.target; on the domain side in f.domain. Affine maps use the
// projective closure internally for frames only.
class ImageEngine {
public:
  struct Options {
    int retries = 5;
    long coefficient_bound = 50;
    std::size_t coordinate_sections = 16; // coordinate subsets tried before random forms
  };

  ImageEngine(RationalMap f, std::uint64_t seed, Options opt)
      : f_(std::move(f)), rng_(seed), opt_(opt) {
    if (f_.flavor == Flavor::affine) proj_ = affinize_to_projective(f_);
  }
  ImageEngine(RationalMap f, std::uint64_t seed) : ImageEngine(std::move(f), seed, Options{}) {}

  const RationalMap &map() const { return f_; }
  Flavor flavor() const { return f_.flavor; }
  std::mt19937_64 &rng() { return rng_; }

  // Closure of f(W) in the target.
  Ideal image_closure(const Ideal &W) const {
    trace("image closure of " + W.to_string());
    Ideal z = detail::kernel(W, f_.coords, f_.target);
    trace("  -> " + z.to_string());
    return z;
  }

  // Components of closure(f^{-1}(Z(c)) \ Bs) inside Z(W).
  std::vector<Component> preimage(const Ideal &c, const Ideal &W) const {
    std::vector<Polynomial> g = W.gens();
    for (auto &p : c.gens()) g.push_back(p.substitute(f_.coords, f_.domain));
    trace("preimage of " + c.to_string());
    std::vector<Component> out;
    for (auto &comp : minimal_primes_ex(Ideal(f_.domain, std::move(g)))) {
      if (f_.flavor == Flavor::projective) {
        bool inside_base = true;
        for (auto &fi : f_.coords)
          if (!ideal_contains(comp.ideal, fi)) inside_base = false;
        if (inside_base) continue;
        if (comp.dim <= 0) continue; // only the irrelevant ideal
      }
      out.push_back(comp);
    }
    return out;
  }

  // Restriction of W to a section by delta random (affine) linear forms,
  // checked to keep the image closure.
  Ideal generic_section(const Ideal &W, const Ideal &zim, int delta) {
    if (delta <= 0) return W;
    int dimW = dimension(W, f_.flavor);
    const RingPtr &R = f_.domain;
    auto accept = [&](const std::vector<Polynomial> &lin, const std::string &what) -> std::optional<Ideal> {
      Ideal S = W.plus(lin).trimmed();
      trace("section " + what + ": " + S.to_string());
      if (dimension(S, f_.flavor) != dimW - delta) return std::nullopt;
      if (!ideal_subset(image_closure(S), zim)) return std::nullopt;
      return S;
    };
    // Coordinate hyperplanes first; they usually give the smallest frames.
    std::size_t n = R->size();
    std::vector<std::size_t> pick(static_cast<std::size_t>(delta));
    for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
    for (std::size_t tried = 0; std::size_t(delta) <= n && tried < opt_.coordinate_sections; ++tried) {
      std::vector<Polynomial> lin;
      for (auto i : pick) lin.push_back(Polynomial::variable(R, i));
      if (auto S = accept(lin, "coordinate")) return *S;
      // next subset in lexicographic order
      std::size_t k = pick.size();
      while (k > 0 && pick[k - 1] == n - pick.size() + k - 1) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t j = k; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
    }
    for (int attempt = 0; attempt < opt_.retries; ++attempt) {
      // Small coefficients first: sparse sections keep the frame cheap.
      static const long schedule[] = {1, 3, 10};
      long B = attempt < 3 ? std::min(schedule[attempt], opt_.coefficient_bound) : opt_.coefficient_bound;
      std::vector<Polynomial> lin;
      for (int k = 0; k < delta; ++k) {
        Polynomial l(R);
        for (std::size_t i = 0; i < n; ++i) l = l + Rational(uniform_int(rng_, -B, B)) * Polynomial::variable(R, i);
        if (f_.flavor == Flavor::affine) l = l + Polynomial::constant(R, uniform_int(rng_, -B, B));
        lin.push_back(l);
      }
      if (auto S = accept(lin, "attempt " + std::to_string(attempt))) return *S;
    }
    throw GenericityFailure("no generic linear section found after " + std::to_string(opt_.retries) +
                            " attempts");
  }

  // Irreducible components of a frame of f restricted to Z(W), W prime.
  std::vector<Component> frame(const Ideal &W, const Ideal &zim) {
    int dz = dimension(zim, f_.flavor);
    if (dz <= 0) return {};
    int delta = dimension(W, f_.flavor) - dz;
    return frame_of_section(generic_section(W, zim, delta));
  }

  // Frame of f restricted to Z(S), S already a generic section.
  std::vector<Component> frame_of_section(const Ideal &S) {
    if (f_.flavor == Flavor::affine) return frame_affine(S);
    return frame_projective(S, f_.coords, 0, false);
  }

  // q in f(X \ Bs)?
  bool fiber_nonempty(const std::vector<Rational> &q) const {
    return fiber_nonempty(f_.domain_ideal, q);
  }
  bool fiber_nonempty(const Ideal &X, const std::vector<Rational> &q) const {
    const RingPtr &R = f_.domain;
    if (q.size() != f_.coords.size()) throw PreconditionError("fiber_nonempty: point has wrong arity");
    std::vector<Polynomial> g = X.gens();
    if (f_.flavor == Flavor::affine) {
      for (std::size_t j = 0; j < q.size(); ++j) g.push_back(f_.coords[j] - Polynomial::constant(R, q[j]));
      return !Ideal(R, std::move(g)).is_unit();
    }
    std::size_t i = q.size();
    for (std::size_t j = 0; j < q.size(); ++j)
      if (q[j] != 0) {
        i = j;
        break;
      }
    if (i == q.size()) throw PreconditionError("fiber_nonempty: zero vector is not a projective point");
    RingPtr rz = ring_with_prefix(R, {"_z"});
    auto sh = shift_map(R->size(), 1);
    std::vector<Polynomial> gz;
    for (auto &p : g) gz.push_back(p.change_ring(rz, sh));
    Polynomial fi = f_.coords[i].change_ring(rz, sh);
    for (std::size_t j = 0; j < q.size(); ++j)
      if (j != i) gz.push_back(q[i] * f_.coords[j].change_ring(rz, sh) - q[j] * fi);
    gz.push_back(Polynomial::constant(rz, 1) - Polynomial::variable(rz, 0) * fi);
    return !Ideal(rz, std::move(gz)).is_unit();
  }

private:
  RationalMap f_;
  std::optional<RationalMap> proj_;
  std::mt19937_64 rng_;
  Options opt_;

  std::vector<Component> frame_affine(const Ideal &S) {
    const RationalMap &P = *proj_;
    auto sh = shift_map(f_.domain->size(), 1);
    std::vector<Polynomial> hg;
    for (auto &g : S.gb()) hg.push_back(g.change_ring(P.domain, sh).homogenize(0));
    Ideal Sh(P.domain, std::move(hg));
    // Components inside x_h = 0 were never there, so saturating by x_h^d
    // loses nothing.
    return frame_projective(Sh, P.coords, 0, true);
  }

  // X homogeneous in ring of coords; `sat` is the coordinate used to
  // saturate. Affine mode dehomogenizes the target by coordinate 0.
  std::vector<Component> frame_projective(const Ideal &X, const std::vector<Polynomial> &coords,
                                          std::size_t sat, bool affine) {
    if (!affine) {
      // A morphism on a projective variety has closed image.
      std::vector<Polynomial> bs = X.gens();
      bs.insert(bs.end(), coords.begin(), coords.end());
      for (auto &g : bs)
        if (!g.is_homogeneous()) throw InternalError("frame_projective: inhomogeneous input");
      if (projectively_empty_mod_p(X.ring(), bs)) {
        trace("base locus empty mod p, frame is empty");
        return {};
      }
      // Choose the saturating coordinate.
      sat = coords.size();
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (ideal_contains(X, coords[i])) continue;
        if (sat == coords.size() || coords[i].size() < coords[sat].size()) sat = i;
      }
    }
    std::vector<std::size_t> avoid = coords[sat].support_vars();
    auto lr = detail::reduce_linear(X, avoid);
    std::vector<Polynomial> fall;
    for (auto &c : coords) fall.push_back(normal_form(c.substitute(lr.images, lr.ring), lr.ideal));
    const RingPtr &tgt = affine ? proj_->target : f_.target;
    std::vector<std::size_t> order{sat};
    for (std::size_t j = 0; j < fall.size(); ++j)
      if (j != sat) order.push_back(j);
    auto cb = detail::coordinate_basis(fall, tgt, order);
    std::vector<Polynomial> fc;
    std::vector<int> back; // product ring index -> target index
    std::size_t nx = lr.ring->size();
    back.assign(nx, -1);
    for (auto j : cb.indep) {
      if (j == sat) sat = fc.size();
      fc.push_back(fall[j]);
      back.push_back(int(j));
    }
    std::size_t ny = fc.size();
    RingPtr Pr = detail::product_ring(nx, ny);
    auto emb = shift_map(nx, 0);
    std::vector<Polynomial> g;
    for (auto &p : lr.ideal.gens()) g.push_back(p.change_ring(Pr, emb));
    Polynomial fs = fc[sat].change_ring(Pr, emb);
    for (std::size_t j = 0; j < ny; ++j) {
      if (j == sat) continue;
      g.push_back(Polynomial::variable(Pr, nx + j) * fs -
                  Polynomial::variable(Pr, nx + sat) * fc[j].change_ring(Pr, emb));
    }
    Ideal pre(Pr, g);
    trace("graph saturation in " + std::to_string(nx) + "+" + std::to_string(ny) + " variables");
    Ideal G = saturate_poly(pre, fs);
    trace("  graph basis size " + std::to_string(G.gb().size()));
    if (!affine) {
      // If X has components on which fs vanishes, saturate by every coordinate.
      Ideal Xs = saturate_poly(lr.ideal, fc[sat]);
      if (!variety_contains(Xs, lr.ideal)) {
        Ideal acc = G;
        for (std::size_t j = 0; j < ny; ++j) {
          if (j == sat || ideal_contains(lr.ideal, fc[j])) continue;
          std::vector<Polynomial> gj;
          for (auto &p : lr.ideal.gens()) gj.push_back(p.change_ring(Pr, emb));
          Polynomial fj = fc[j].change_ring(Pr, emb);
          for (std::size_t k = 0; k < ny; ++k)
            if (k != j)
              gj.push_back(Polynomial::variable(Pr, nx + k) * fj -
                           Polynomial::variable(Pr, nx + j) * fc[k].change_ring(Pr, emb));
          acc = intersect(acc, saturate_poly(Ideal(Pr, std::move(gj)), fj));
        }
        G = acc;
      }
    }
    // The graph closure over each component of the base locus.
    std::vector<Polynomial> bg = lr.ideal.gens();
    bg.insert(bg.end(), fc.begin(), fc.end());
    auto base = minimal_primes_ex(Ideal(lr.ring, std::move(bg)));
    trace("  base locus has " + std::to_string(base.size()) + " components");
    std::vector<Component> all;
    for (auto &b : base)
      for (std::size_t k = 0; k < nx; ++k) {
        // One affine chart per remaining domain variable.
        if (affine && lr.kept[0] == int(k)) continue; // x_h = 1 has no base points
        if (ideal_contains(b.ideal, Polynomial::variable(lr.ring, k))) continue;
        std::vector<Polynomial> ck;
        for (auto &p : G.gb()) ck.push_back(p.specialize(k, 1));
        for (auto &p : b.ideal.gens()) ck.push_back(p.change_ring(Pr, emb).specialize(k, 1));
        trace("chart " + std::to_string(k) + " over " + b.ideal.to_string());
        Ideal J = eliminate(Ideal(Pr, std::move(ck)), nx);
        std::vector<Polynomial> yg = cb.relations;
        for (auto &p : J.gb()) yg.push_back(p.change_ring(tgt, back));
        Ideal Y(tgt, std::move(yg));
        if (Y.is_unit()) continue;
        if (affine) {
          Y = saturate_var(Y, 0);
          if (Y.is_unit()) continue;
          std::vector<int> drop(Y.nvars(), -1);
          for (std::size_t j = 1; j < Y.nvars(); ++j) drop[j] = int(j - 1);
          std::vector<Polynomial> dg;
          for (auto &p : Y.gens()) dg.push_back(p.dehomogenize(0).change_ring(f_.target, drop));
          Y = Ideal(f_.target, std::move(dg));
        }
        trace("  decompose " + Y.to_string());
        for (auto &c : minimal_primes_ex(Y)) {
          c.dim = dimension(c.ideal, f_.flavor);
          all.push_back(c);
        }
      }
    auto out = detail::Decomposer::minimize(std::move(all));
    return out;
  }
};

// Free-function forms.
inline Ideal graph_ideal(const RationalMap &f) {
  if (f.flavor != Flavor::projective) throw PreconditionError("graph_ideal: projective map expected");
  std::size_t nx = f.domain->size(), ny = f.coords.size();
  RingPtr Pr = detail::product_ring(nx, ny);
  auto emb = shift_map(nx, 0);
  std::vector<Polynomial> g;
  for (auto &p : f.domain_ideal.gens()) g.push_back(p.change_ring(Pr, emb));
  for (std::size_t i = 0; i < ny; ++i)
    for (std::size_t j = i + 1; j < ny; ++j)
      g.push_back(Polynomial::variable(Pr, nx + i) * f.coords[j].change_ring(Pr, emb) -
                  Polynomial::variable(Pr, nx + j) * f.coords[i].change_ring(Pr, emb));
  std::vector<Polynomial> fc;
  for (auto &c : f.coords) fc.push_back(c.change_ring(Pr, emb));
  return saturate(Ideal(Pr, std::move(g)), Ideal(Pr, std::move(fc)));
}

inline Variety image_closure(const RationalMap &f) {
  return Variety(detail::kernel(f.domain_ideal, f.coords, f.target), f.flavor);
}

inline std::vector<Variety> frame(const RationalMap &f, std::uint64_t seed = 0) {
  ImageEngine e(f, seed);
  Ideal z = e.image_closure(f.domain_ideal);
  std::vector<Variety> out;
  for (auto &c : e.frame(f.domain_ideal, z)) out.push_back(Variety(c.ideal, f.flavor));
  return out;
}

inline std::vector<Variety> preimage_components(const RationalMap &f, const Variety &W) {
  ImageEngine e(f, 0);
  std::vector<Variety> out;
  for (auto &c : e.preimage(W.ideal, f.domain_ideal)) out.push_back(Variety(c.ideal, f.flavor));
  return out;
}

inline bool fiber_nonempty(const RationalMap &f, const std::vector<Rational> &q) {
  return ImageEngine(f, 0).fiber_nonempty(q);
}

} // namespace totalimage
