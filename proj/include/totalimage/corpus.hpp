#pragma once

// Example maps and the tensor constructions around matrix product states.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "totalimage/factor.hpp"
#include "totalimage/parse.hpp"
#include "totalimage/varmap.hpp"

namespace totalimage {

using Index = std::vector<int>;

// Sparse tensor with rational entries.
struct Tensor {
  std::vector<int> shape;
  std::map<Index, Rational> entries;

  void add(const Index &i, const Rational &v) {
    if (v == 0) return;
    auto &slot = entries[i];
    slot += v;
    if (slot == 0) entries.erase(i);
  }
  Rational at(const Index &i) const {
    auto it = entries.find(i);
    return it == entries.end() ? Rational(0) : it->second;
  }
  bool operator==(const Tensor &o) const { return shape == o.shape && entries == o.entries; }
  bool is_zero() const { return entries.empty(); }
};

// Polynomial in one variable t, low degree first.
using TPoly = std::vector<Rational>;

// Tensor whose entries are polynomials in t.
struct TTensor {
  std::vector<int> shape;
  std::map<Index, TPoly> entries;

  void add(const Index &i, const TPoly &v) {
    auto &slot = entries[i];
    slot = detail::qadd(slot, v);
    if (slot.empty()) entries.erase(i);
  }
  // Coefficient of t^k.
  Tensor coefficient(std::size_t k) const {
    Tensor out{shape, {}};
    for (auto &[i, p] : entries)
      if (k < p.size()) out.add(i, p[k]);
    return out;
  }
  // Lowest power of t that occurs; -1 for the zero tensor.
  int order() const {
    int best = -1;
    for (auto &[i, p] : entries)
      for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] != 0) {
          if (best < 0 || int(k) < best) best = int(k);
          break;
        }
    return best;
  }
};

// Linear map K^cols -> K^rows with polynomial entries.
using TMatrix = std::vector<std::vector<TPoly>>;

using QMatrix = std::vector<std::vector<Rational>>;

// Rank over Q by fraction-free (Bareiss) elimination on an integer copy.
inline int matrix_rank(const QMatrix &m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size();
  std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    Integer den = 1;
    for (auto &x : m[i]) den = lcm(den, x.get_den());
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j].get_num() * (den / m[i][j].get_den());
  }
  int rank = 0;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
    ++rank;
  }
  return rank;
}

// Mode-j flattening: rows indexed by the j-th index, columns by the rest in
// cyclic order j+1, ..., j-1.
inline QMatrix flattening(const Tensor &T, std::size_t j) {
  std::size_t q = T.shape.size();
  std::size_t cols = 1;
  for (std::size_t s = 0; s < q; ++s)
    if (s != j) cols *= std::size_t(T.shape[s]);
  QMatrix m(std::size_t(T.shape[j]), std::vector<Rational>(cols, Rational(0)));
  for (auto &[i, v] : T.entries) {
    std::size_t c = 0;
    for (std::size_t s = 1; s < q; ++s) {
      std::size_t k = (j + s) % q;
      c = c * std::size_t(T.shape[k]) + std::size_t(i[k]);
    }
    m[std::size_t(i[j])][c] = v;
  }
  return m;
}

// Iterated matrix multiplication tensor, factor j living in
// K^{a_j x a_{j+1}} flattened row-major.
inline Tensor mm_tensor(const std::vector<int> &a) {
  std::size_t q = a.size();
  if (q < 2) throw PreconditionError("mm_tensor: need at least two factors");
  for (int x : a)
    if (x < 1) throw PreconditionError("mm_tensor: sizes must be positive");
  Tensor T;
  for (std::size_t j = 0; j < q; ++j) T.shape.push_back(a[j] * a[(j + 1) % q]);
  Index idx(q, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == q) {
      Index e(q);
      for (std::size_t s = 0; s < q; ++s) e[s] = idx[s] * a[(s + 1) % q] + idx[(s + 1) % q];
      T.add(e, 1);
      return;
    }
    for (int i = 0; i < a[j]; ++i) {
      idx[j] = i;
      rec(j + 1);
    }
  };
  rec(0);
  return T;
}

// (L_1 x ... x L_q)(T) for constant matrices.
inline Tensor apply_maps(const std::vector<QMatrix> &L, const Tensor &T) {
  std::size_t q = L.size();
  Tensor out;
  for (auto &m : L) out.shape.push_back(int(m.size()));
  for (auto &[i, v] : T.entries) {
    Index o(q);
    std::function<void(std::size_t, Rational)> rec = [&](std::size_t j, Rational acc) {
      if (j == q) {
        out.add(o, acc);
        return;
      }
      for (std::size_t r = 0; r < L[j].size(); ++r) {
        const Rational &x = L[j][r][std::size_t(i[j])];
        if (x == 0) continue;
        o[j] = int(r);
        rec(j + 1, acc * x);
      }
    };
    rec(0, v);
  }
  return out;
}

// Same with entries polynomial in t.
inline TTensor apply_maps(const std::vector<TMatrix> &L, const Tensor &T) {
  std::size_t q = L.size();
  TTensor out;
  for (auto &m : L) out.shape.push_back(int(m.size()));
  for (auto &[i, v] : T.entries) {
    Index o(q);
    std::function<void(std::size_t, TPoly)> rec = [&](std::size_t j, TPoly acc) {
      if (j == q) {
        out.add(o, acc);
        return;
      }
      for (std::size_t r = 0; r < L[j].size(); ++r) {
        const TPoly &x = L[j][r][std::size_t(i[j])];
        if (x.empty()) continue;
        o[j] = int(r);
        rec(j + 1, detail::qmul(acc, x));
      }
    };
    rec(0, TPoly{v});
  }
  return out;
}

using Matrix = QMatrix;

inline Matrix mat_mul(const Matrix &a, const Matrix &b) {
  Matrix c(a.size(), std::vector<Rational>(b[0].size(), Rational(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Rational trace(const Matrix &a) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i][i];
  return s;
}

// T[i_1..i_q] = tr(M_{i_1} ... M_{i_q}).
inline Tensor imps_tensor(const std::vector<Matrix> &M, int q) {
  int k = int(M.size());
  Tensor T;
  T.shape.assign(std::size_t(q), k);
  Index idx(std::size_t(q), 0);
  std::function<void(int, const Matrix &)> rec = [&](int j, const Matrix &acc) {
    if (j == q) {
      T.add(idx, trace(acc));
      return;
    }
    for (int i = 0; i < k; ++i) {
      idx[std::size_t(j)] = i;
      rec(j + 1, j == 0 ? M[std::size_t(i)] : mat_mul(acc, M[std::size_t(i)]));
    }
  };
  rec(0, Matrix{});
  return T;
}

// M[j][i] is the a_j x a_{j+1} matrix M_{i,j}.
inline Tensor mps_tensor(const std::vector<std::vector<Matrix>> &M) {
  std::size_t q = M.size();
  for (std::size_t j = 0; j < q; ++j)
    for (auto &m : M[j]) {
      const auto &next = M[(j + 1) % q];
      if (m.empty() || next.empty() || m[0].size() != next[0].size())
        throw StructuralError("mps_tensor: shape chain does not close");
    }
  Tensor T;
  for (auto &mj : M) T.shape.push_back(int(mj.size()));
  Index idx(q, 0);
  std::function<void(std::size_t, const Matrix &)> rec = [&](std::size_t j, const Matrix &acc) {
    if (j == q) {
      T.add(idx, trace(acc));
      return;
    }
    for (std::size_t i = 0; i < M[j].size(); ++i) {
      idx[j] = int(i);
      rec(j + 1, j == 0 ? M[j][i] : mat_mul(acc, M[j][i]));
    }
  };
  rec(0, Matrix{});
  return T;
}

// The k x (rows*cols) matrix sending e_{p,q} to (M_i[p][q])_i.
inline Matrix phi(const std::vector<Matrix> &M) {
  std::size_t k = M.size(), r = M[0].size(), c = M[0][0].size();
  Matrix out(k, std::vector<Rational>(r * c, Rational(0)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t p = 0; p < r; ++p)
      for (std::size_t s = 0; s < c; ++s) out[i][p * c + s] = M[i][p][s];
  return out;
}

// Index tuples of a k^q tensor: by index sum, then lexicographically
// descending. For k = 2, q = 3 this lists MMM, LMM, MLM, MML, LLM, LML, MLL, LLL.
inline std::vector<Index> imps_coordinate_order(int k, int q) {
  std::vector<Index> all;
  Index idx(std::size_t(q), 0);
  std::function<void(int)> rec = [&](int j) {
    if (j == q) {
      all.push_back(idx);
      return;
    }
    for (int i = 0; i < k; ++i) {
      idx[std::size_t(j)] = i;
      rec(j + 1);
    }
  };
  rec(0);
  std::stable_sort(all.begin(), all.end(), [](const Index &a, const Index &b) {
    int sa = 0, sb = 0;
    for (int x : a) sa += x;
    for (int x : b) sb += x;
    if (sa != sb) return sa < sb;
    return a > b;
  });
  return all;
}

inline std::vector<std::string> imps_domain_names(int r, int k) {
  std::vector<std::string> names;
  if (r == 2 && k == 2) return {"A", "B", "C", "D", "a", "b", "c", "d"};
  for (int i = 0; i < k; ++i)
    for (int p = 0; p < r; ++p)
      for (int s = 0; s < r; ++s)
        names.push_back("m" + std::to_string(i + 1) + "_" + std::to_string(p + 1) + std::to_string(s + 1));
  return names;
}

inline std::vector<std::string> numbered(const std::string &prefix, std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

// psi_{r,k,q}: k symbolic r x r matrices to their cyclic trace products.
inline RationalMap imps_map(int r, int k, int q) {
  if (r < 1 || k < 1 || q < 2) throw PreconditionError("imps_map: need r, k >= 1 and q >= 2");
  RingPtr X = make_ring(imps_domain_names(r, k));
  using PMat = std::vector<std::vector<Polynomial>>;
  const std::size_t rr = std::size_t(r);
  std::vector<PMat> M(std::size_t(k), PMat(rr, std::vector<Polynomial>(rr, Polynomial(X))));
  for (int i = 0; i < k; ++i) {
    for (int p = 0; p < r; ++p)
      for (int s = 0; s < r; ++s)
        M[std::size_t(i)][std::size_t(p)][std::size_t(s)] =
            Polynomial::variable(X, std::size_t(i * r * r + p * r + s));
  }
  auto mul = [&](const PMat &a, const PMat &b) {
    PMat c(rr, std::vector<Polynomial>(rr, Polynomial(X)));
    for (int i = 0; i < r; ++i)
      for (int l = 0; l < r; ++l)
        for (int j = 0; j < r; ++j)
          c[std::size_t(i)][std::size_t(j)] = c[std::size_t(i)][std::size_t(j)] + a[std::size_t(i)][std::size_t(l)] * b[std::size_t(l)][std::size_t(j)];
    return c;
  };
  auto order = imps_coordinate_order(k, q);
  std::vector<Polynomial> coords;
  for (auto &idx : order) {
    PMat acc = M[std::size_t(idx[0])];
    for (int j = 1; j < q; ++j) acc = mul(acc, M[std::size_t(idx[std::size_t(j)])]);
    Polynomial tr(X);
    for (int i = 0; i < r; ++i) tr = tr + acc[std::size_t(i)][std::size_t(i)];
    coords.push_back(tr);
  }
  RingPtr Y = make_ring(numbered("y", coords.size()));
  return RationalMap(X, Y, Ideal(X), std::move(coords), Flavor::affine);
}

// psi_{2,2,3} with M diagonal and L having equal off-diagonal entries.
inline RationalMap imps223_restricted() {
  RationalMap full = imps_map(2, 2, 3);
  RingPtr X = make_ring({"A", "D", "a", "b", "d"});
  auto v = [&](std::size_t i) { return Polynomial::variable(X, i); };
  std::vector<Polynomial> img{v(0), Polynomial(X), Polynomial(X), v(1), v(2), v(3), v(3), v(4)};
  std::vector<Polynomial> coords;
  for (auto &c : full.coords) coords.push_back(c.substitute(img, X));
  return RationalMap(X, full.target, Ideal(X), std::move(coords), Flavor::affine);
}

// Data of the explicit curve approaching the indeterminacy locus of
// psi_{2,4,q}.
struct CurveConstruction {
  int q = 3;
  TMatrix M;           // 4 x 4 constant part
  TMatrix gamma;       // M + t * flattening
  Tensor psi_M;        // psi(M)
  TTensor expansion;   // psi(gamma(t))
  int order = 0;       // ceil(q/2)
  Tensor D;            // coefficient of t^order
  std::vector<Index> rank_one_terms; // D as a sum of unit rank-one tensors
  std::vector<int> flattening_ranks;
};

inline CurveConstruction thm46_construction(int q) {
  if (q < 3 || q % 2 == 0) throw PreconditionError("thm46_construction: q must be odd and at least 3");
  CurveConstruction c;
  c.q = q;
  // Columns e11, e12, e21, e22; rows b1..b4.
  c.M.assign(4, std::vector<TPoly>(4));
  c.M[1][1] = TPoly{Rational(1)};
  c.gamma = c.M;
  for (int i = 0; i < 4; ++i) c.gamma[std::size_t(i)][std::size_t(i)] = detail::qadd(c.gamma[std::size_t(i)][std::size_t(i)], TPoly{Rational(0), Rational(1)});
  Tensor mm = mm_tensor(std::vector<int>(std::size_t(q), 2));
  std::vector<TMatrix> Ms(std::size_t(q), c.M), Gs(std::size_t(q), c.gamma);
  c.psi_M = apply_maps(Ms, mm).coefficient(0);
  c.expansion = apply_maps(Gs, mm);
  c.order = (q + 1) / 2;
  if (c.expansion.order() != c.order)
    throw InternalError("thm46_construction: expansion starts at t^" + std::to_string(c.expansion.order()));
  c.D = c.expansion.coefficient(std::size_t(c.order));
  for (auto &[i, v] : c.D.entries) {
    if (v != 1) throw InternalError("thm46_construction: D has a non-unit entry");
    c.rank_one_terms.push_back(i);
  }
  for (int j = 0; j < q; ++j) c.flattening_ranks.push_back(matrix_rank(flattening(c.D, std::size_t(j))));
  return c;
}

inline CurveConstruction thm45_construction() { return thm46_construction(3); }

// Sum of unit tensors b_{i_1} x ... x b_{i_q}.
inline Tensor sum_of_rank_one(const std::vector<Index> &terms, const std::vector<int> &shape) {
  Tensor T{shape, {}};
  for (auto &i : terms) T.add(i, 1);
  return T;
}

namespace corpus_detail {

inline RationalMap projective(const std::vector<std::string> &xs, const std::vector<std::string> &ys,
                              const std::vector<std::string> &fs) {
  RingPtr X = make_ring(xs), Y = make_ring(ys);
  std::vector<Polynomial> c;
  for (auto &s : fs) c.push_back(parse_polynomial(s, X));
  return RationalMap(X, Y, Ideal(X), std::move(c), Flavor::projective);
}

inline RationalMap affine(const std::vector<std::string> &xs, const std::vector<std::string> &ys,
                          const std::vector<std::string> &fs) {
  RingPtr X = make_ring(xs), Y = make_ring(ys);
  std::vector<Polynomial> c;
  for (auto &s : fs) c.push_back(parse_polynomial(s, X));
  return RationalMap(X, Y, Ideal(X), std::move(c), Flavor::affine);
}

inline std::vector<Monomial> monomials_of_degree(std::size_t n, unsigned d) {
  std::vector<Monomial> out;
  Monomial m(n);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == n) {
      m[i] = Exp(left);
      out.push_back(m);
      return;
    }
    for (unsigned e = left + 1; e-- > 0;) {
      m[i] = Exp(e);
      rec(i + 1, left - e);
    }
  };
  rec(0, d);
  return out;
}

// Three random ternary forms of degree d with coefficients in [-10, 10];
// with through_point they vanish at [1:1:1].
inline RationalMap random_forms(unsigned d, bool through_point, std::uint64_t seed) {
  RingPtr X = make_ring({"x", "y", "z"});
  RingPtr Y = make_ring({"y0", "y1", "y2"});
  std::mt19937_64 rng(seed);
  std::vector<Polynomial> c;
  for (int i = 0; i < 3; ++i) {
    Polynomial p(X);
    for (auto &m : monomials_of_degree(3, d)) p = p + Polynomial::monomial(X, m, Rational(uniform_int(rng, -10, 10)));
    if (through_point) {
      Rational v = p.eval({1, 1, 1});
      p = p - v * Polynomial::monomial(X, Monomial::variable(3, 0, Exp(d)), 1);
    }
    c.push_back(p);
  }
  return RationalMap(X, Y, Ideal(X), std::move(c), Flavor::projective);
}

} // namespace corpus_detail

constexpr std::uint64_t kBenchmarkSeed = 2019;

inline RationalMap cremona_map() {
  return corpus_detail::projective({"x0", "x1", "x2"}, {"y0", "y1", "y2"}, {"x1*x2", "x0*x2", "x0*x1"});
}

inline RationalMap whitney_map() {
  return corpus_detail::affine({"u", "v"}, {"x", "y", "z"}, {"u*v", "u", "v^2"});
}

inline RationalMap whitney_homogenized_map() {
  return corpus_detail::projective({"x", "y", "z"}, {"y0", "y1", "y2"}, {"x*y", "x*z", "y^2"});
}

inline RationalMap gradient_map() {
  return corpus_detail::projective({"x", "y", "z"}, {"y0", "y1", "y2"},
                                   {"2*x*y*z+y^2*z+y*z^2", "x^2*z+2*x*y*z+x*z^2", "x^2*y+x*y^2+2*x*y*z"});
}

inline RationalMap gradient_squared_map() {
  RationalMap g = gradient_map();
  std::vector<Polynomial> c;
  for (auto &p : g.coords) c.push_back(p.substitute(g.coords, g.domain));
  return RationalMap(g.domain, g.target, g.domain_ideal, std::move(c), Flavor::projective);
}

inline RationalMap cfn_map() {
  return corpus_detail::affine({"a", "b", "c", "d", "e", "f"}, numbered("y", 8),
                               {"a*c*e+b*d*f", "a*c*f+b*d*e", "a*d*e+b*c*f", "b*c*e+a*d*f", "b*d*e+a*c*f",
                                "b*c*f+a*d*e", "a*d*f+b*c*e", "b*d*f+a*c*e"});
}

struct NamedMap {
  std::string name;
  RationalMap map;
};

// The ten benchmark maps, in order.
inline std::vector<NamedMap> benchmark_maps() {
  return {
      {"whitney", whitney_map()},
      {"whitney-homogenized", whitney_homogenized_map()},
      {"gradient", gradient_map()},
      {"gradient-squared", gradient_squared_map()},
      {"random-cubics", corpus_detail::random_forms(3, false, kBenchmarkSeed)},
      {"random-sextics", corpus_detail::random_forms(6, false, kBenchmarkSeed + 1)},
      {"cubics-through-point", corpus_detail::random_forms(3, true, kBenchmarkSeed + 2)},
      {"quadrics-through-point", corpus_detail::random_forms(2, true, kBenchmarkSeed + 3)},
      {"cfn", cfn_map()},
      {"imps223", imps223_restricted()},
  };
}

// Everything `corpus list` knows about.
inline std::vector<NamedMap> corpus_maps() {
  auto v = benchmark_maps();
  v.insert(v.begin(), {"cremona", cremona_map()});
  return v;
}

inline RationalMap corpus_map(const std::string &name) {
  for (auto &nm : corpus_maps())
    if (nm.name == name) return nm.map;
  throw PreconditionError("unknown corpus map '" + name + "'");
}

} // namespace totalimage
