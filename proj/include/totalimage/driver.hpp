#pragma once

// The main loop: frames at odd depth, image closures of preimage components
// at even depth, then cleaning.

#include <deque>
#include <string>
#include <vector>

#include "totalimage/ctree.hpp"
#include "totalimage/varmap.hpp"

namespace totalimage {

struct DriverOptions {
  std::uint64_t seed = 0;
  int max_depth = -1; // frame levels; -1 means dim of the image closure + 1
  int retries = 5;
};

struct DriverReport {
  std::vector<std::string> notes;
  std::string partial_tree; // filled when the run throws
  std::size_t frames = 0;
  std::size_t preimages = 0;
};

namespace detail {

// A domain piece: an irreducible component on the domain side together with
// the closure of its image.
struct Piece {
  Component comp;
  Ideal image;
};

// Even nodes carry every preimage component whose image closure lies in
// their label; odd nodes carry none.
struct WorkNode {
  Ideal label;
  int dim = -1;
  bool certified = true;
  int depth = 0;
  std::vector<Piece> pieces;
  std::vector<std::size_t> children;
};

inline CNode to_cnode(const std::vector<WorkNode> &w, std::size_t i) {
  CNode n;
  n.label = w[i].label;
  n.dim = w[i].dim;
  n.certified = w[i].certified;
  for (auto c : w[i].children) n.children.push_back(to_cnode(w, c));
  return n;
}

} // namespace detail

inline bool is_homogeneous_affine(const RationalMap &f) {
  if (f.flavor != Flavor::affine) return false;
  long deg = -1;
  for (auto &c : f.coords) {
    if (c.is_zero()) continue;
    if (!c.is_homogeneous() || c.total_degree() == 0) return false;
    if (deg >= 0 && long(c.total_degree()) != deg) return false;
    deg = long(c.total_degree());
  }
  for (auto &g : f.domain_ideal.gens())
    if (!g.is_homogeneous()) return false;
  return true;
}

namespace detail {

inline void raise_dims(CNode &n) {
  ++n.dim;
  for (auto &c : n.children) raise_dims(c);
}

inline int tree_depth(const CNode &n) {
  int d = 0;
  for (auto &c : n.children) d = std::max(d, 1 + tree_depth(c));
  return d;
}

inline CNode *deepest_node(CNode &n, int depth) {
  if (depth == 0) return &n;
  for (auto &c : n.children)
    if (auto *r = deepest_node(c, depth - 1)) return r;
  return nullptr;
}

} // namespace detail

inline CTree total_image(const RationalMap &f, const DriverOptions &opt = {}, DriverReport *report = nullptr);

// Affine image of a homogeneous map: the cone over the projective image
// together with the origin, which lies on every label.
inline CTree cone_total_image(const RationalMap &f, const DriverOptions &opt, DriverReport *report) {
  RationalMap pf(f.domain, f.target, f.domain_ideal, f.coords, Flavor::projective);
  Ideal origin(f.target, [&] {
    std::vector<Polynomial> v;
    for (std::size_t j = 0; j < f.target->size(); ++j) v.push_back(Polynomial::variable(f.target, j));
    return v;
  }());
  if (dimension(f.domain_ideal, Flavor::projective) < 0) {
    CTree t;
    t.flavor = Flavor::affine;
    t.root = CNode{origin, 0, true, {}};
    return t;
  }
  CTree t = total_image(pf, opt, report);
  t.flavor = Flavor::affine;
  if (t.empty()) {
    t.root = CNode{origin, 0, true, {}};
    return t;
  }
  detail::raise_dims(t.root);
  int depth = detail::tree_depth(t.root);
  if (depth % 2 == 1) {
    detail::deepest_node(t.root, depth)->children.push_back(CNode{origin, 0, true, {}});
    if (report) report->notes.push_back("origin added below the deepest node");
  }
  return clean(t);
}

inline CTree total_image(const RationalMap &f, const DriverOptions &opt, DriverReport *report) {
  if (is_homogeneous_affine(f)) return cone_total_image(f, opt, report);
  ImageEngine::Options eo;
  eo.retries = opt.retries;
  ImageEngine eng(f, opt.seed, eo);
  const Flavor fl = f.flavor;
  std::vector<detail::WorkNode> w;
  DriverReport local;
  DriverReport &rep = report ? *report : local;

  auto note = [&](const std::string &s) { rep.notes.push_back(s); };
  auto build_tree = [&]() {
    CTree t;
    t.flavor = fl;
    if (w.empty() || w[0].label.is_unit()) return CTree::empty_tree(f.target, fl);
    t.root = detail::to_cnode(w, 0);
    return t;
  };
  auto make_piece = [&](Component c) {
    if (!c.certified) note("domain component not certified prime: " + c.ideal.to_string());
    Ideal z = eng.image_closure(c.ideal).trimmed();
    return detail::Piece{std::move(c), std::move(z)};
  };
  auto maps_to_zero = [&](const Ideal &P) {
    for (auto &c : f.coords)
      if (!ideal_contains(P, c)) return false;
    return true;
  };

  try {
    if (f.domain_ideal.is_unit()) throw PreconditionError("total_image: empty domain");
    w.push_back({});
    w[0].label = eng.image_closure(f.domain_ideal).trimmed();
    w[0].dim = dimension(w[0].label, fl);
    {
      auto comps = minimal_primes_ex(f.domain_ideal);
      if (comps.size() > 1) note("domain has " + std::to_string(comps.size()) + " components");
      for (auto &c : comps) {
        if (maps_to_zero(c.ideal)) {
          note("component inside the base locus skipped: " + c.ideal.to_string());
          continue;
        }
        w[0].pieces.push_back(make_piece(c));
      }
    }
    int limit = opt.max_depth < 0 ? w[0].dim + 1 : opt.max_depth;
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      std::size_t id = queue.front();
      queue.pop_front();
      if (w[id].depth / 2 + 1 > limit)
        throw ComputationLimit("total_image: depth guard exceeded at depth " + std::to_string(w[id].depth));
      // Frames of the pieces whose image closure is not inside another's.
      std::vector<Component> frame_all;
      const auto &pieces = w[id].pieces;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        bool inner = false;
        for (std::size_t j = 0; j < pieces.size() && !inner; ++j)
          if (j != i && ideal_subset(pieces[j].image, pieces[i].image) &&
              (pieces[i].image != pieces[j].image || j < i))
            inner = true;
        if (inner) continue;
        auto fr = eng.frame(pieces[i].comp.ideal, pieces[i].image);
        ++rep.frames;
        frame_all.insert(frame_all.end(), fr.begin(), fr.end());
      }
      frame_all = detail::Decomposer::minimize(std::move(frame_all));
      for (auto &a : frame_all) {
        int da = dimension(a.ideal, fl);
        if (da >= w[id].dim)
          throw InternalError("total_image: frame component " + a.ideal.to_string() + " is not smaller than its parent");
        if (!a.certified) note("frame component not certified prime: " + a.ideal.to_string());
        detail::WorkNode odd;
        odd.label = a.ideal;
        odd.dim = da;
        odd.certified = a.certified;
        odd.depth = w[id].depth + 1;
        std::size_t oid = w.size();
        w.push_back(odd);
        w[id].children.push_back(oid);
        // Preimage components in every piece, grouped by image closure.
        ++rep.preimages;
        std::vector<Component> comps;
        for (auto &p : w[id].pieces) {
          auto pc = eng.preimage(a.ideal, p.comp.ideal);
          comps.insert(comps.end(), pc.begin(), pc.end());
        }
        comps = detail::Decomposer::minimize(std::move(comps));
        std::vector<detail::Piece> made;
        for (auto &c : comps) made.push_back(make_piece(c));
        std::stable_sort(made.begin(), made.end(), [&](const detail::Piece &x, const detail::Piece &y) {
          return dimension(x.image, fl) > dimension(y.image, fl);
        });
        std::vector<std::size_t> groups;
        for (auto &p : made) {
          std::size_t into = 0;
          bool found = false;
          for (auto g : groups)
            if (ideal_subset(w[g].label, p.image)) {
              into = g;
              found = true;
              break;
            }
          if (!found) {
            detail::WorkNode even;
            even.label = p.image;
            even.dim = dimension(p.image, fl);
            even.certified = p.comp.certified;
            even.depth = w[oid].depth + 1;
            into = w.size();
            w.push_back(even);
            w[oid].children.push_back(into);
            groups.push_back(into);
            queue.push_back(into);
          }
          w[into].pieces.push_back(std::move(p));
        }
      }
    }
  } catch (...) {
    try {
      rep.partial_tree = serialize_text(build_tree());
    } catch (...) {
    }
    throw;
  }
  return clean(build_tree());
}

inline bool is_closed(const RationalMap &f, const DriverOptions &opt = {}) {
  return total_image(f, opt).size() == 1;
}

} // namespace totalimage
