#pragma once

// Constructible trees: labels are closed sets in the target, node signs
// alternate with depth.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "totalimage/groebner.hpp"
#include "totalimage/parse.hpp"

namespace totalimage {

struct CNode {
  Ideal label;
  int dim = -1;
  bool certified = true; // label proven prime
  std::vector<CNode> children;

  std::size_t size() const {
    std::size_t s = 1;
    for (auto &c : children) s += c.size();
    return s;
  }
};

struct CTree {
  CNode root;
  Flavor flavor = Flavor::projective;

  // An empty image has root (1).
  bool empty() const { return root.label.is_unit(); }
  std::size_t size() const { return empty() ? 0 : root.size(); }
  RingPtr ring() const { return root.label.ring(); }

  static CTree empty_tree(const RingPtr &r, Flavor fl) {
    CTree t;
    t.root.label = Ideal::unit(r);
    t.root.dim = -1;
    t.flavor = fl;
    return t;
  }
};

namespace detail {

inline bool label_contains(const CNode &big, const CNode &small) {
  // Z(big) contains Z(small)
  if (small.certified) return ideal_subset(big.label, small.label);
  return variety_contains(big.label, small.label);
}

inline bool label_equal(const CNode &a, const CNode &b) { return a.label == b.label; }

inline bool canonical_less(const CNode &a, const CNode &b) {
  if (a.dim != b.dim) return a.dim > b.dim;
  return a.label.generator_strings() < b.label.generator_strings();
}

inline void sort_tree(CNode &n) {
  for (auto &c : n.children) sort_tree(c);
  std::stable_sort(n.children.begin(), n.children.end(), canonical_less);
}

inline bool clean_pc_node(CNode &p) {
  bool changed = false;
  std::vector<CNode> work = std::move(p.children);
  std::vector<CNode> kept;
  while (!work.empty()) {
    CNode n = std::move(work.back());
    work.pop_back();
    const CNode *same = nullptr;
    for (auto &c : n.children)
      if (label_equal(n, c)) {
        same = &c;
        break;
      }
    if (same) {
      changed = true;
      std::vector<CNode> promoted = same->children;
      for (auto &g : promoted) work.push_back(std::move(g));
      continue;
    }
    kept.push_back(std::move(n));
  }
  p.children = std::move(kept);
  for (auto &c : p.children) changed = clean_pc_node(c) || changed;
  return changed;
}

inline bool clean_sib_node(CNode &p) {
  bool changed = false;
  std::stable_sort(p.children.begin(), p.children.end(), canonical_less);
  std::vector<CNode> kept;
  for (auto &c : p.children) {
    bool drop = false;
    for (auto &k : kept)
      if (label_contains(k, c)) {
        drop = true;
        break;
      }
    if (drop) {
      changed = true;
      continue;
    }
    // c may swallow earlier ones of equal or smaller dimension
    std::vector<CNode> next;
    for (auto &k : kept) {
      if (label_contains(c, k)) changed = true;
      else next.push_back(std::move(k));
    }
    next.push_back(std::move(c));
    kept = std::move(next);
  }
  p.children = std::move(kept);
  for (auto &c : p.children) changed = clean_sib_node(c) || changed;
  return changed;
}

inline bool contains_point(const Ideal &I, const std::vector<Rational> &q) {
  for (auto &g : I.gens())
    if (g.eval(q) != 0) return false;
  return true;
}

inline int longest_path(const CNode &n, const std::vector<Rational> &q) {
  if (!contains_point(n.label, q)) return 0;
  int best = 0;
  for (auto &c : n.children) best = std::max(best, longest_path(c, q));
  return best + 1;
}

inline bool recursive_member(const CNode &n, const std::vector<Rational> &q) {
  if (!contains_point(n.label, q)) return false;
  for (auto &c : n.children)
    if (recursive_member(c, q)) return false;
  return true;
}

} // namespace detail

// An edge n -> n' with equal labels: n and its other descendants go, the
// children of n' move up to the parent of n.
inline CTree clean_parent_child(CTree t) {
  while (detail::clean_pc_node(t.root)) {
  }
  detail::sort_tree(t.root);
  return t;
}

// Siblings with nested labels: the smaller one goes with its subtree.
inline CTree clean_sibling_containment(CTree t) {
  while (detail::clean_sib_node(t.root)) {
  }
  detail::sort_tree(t.root);
  return t;
}

inline CTree clean(CTree t) {
  for (;;) {
    bool a = detail::clean_pc_node(t.root);
    bool b = detail::clean_sib_node(t.root);
    if (!a && !b) break;
  }
  detail::sort_tree(t.root);
  return t;
}

// Parity of the longest root path through labels containing q.
inline bool member(const CTree &t, const std::vector<Rational> &q) {
  if (t.empty()) return false;
  return detail::longest_path(t.root, q) % 2 == 1;
}

// Recovery formula C(T) = V(root) minus the union of C(subtrees).
inline bool member_recursive(const CTree &t, const std::vector<Rational> &q) {
  if (t.empty()) return false;
  return detail::recursive_member(t.root, q);
}

// V_i = union of depth-i labels, as an intersection of ideals.
inline std::vector<Ideal> canonical_representation(const CTree &t) {
  std::vector<Ideal> out;
  if (t.empty()) return out;
  std::vector<const CNode *> level{&t.root};
  while (!level.empty()) {
    std::vector<Ideal> labels;
    std::vector<const CNode *> next;
    for (auto *n : level) {
      bool dup = false;
      for (auto &l : labels)
        if (l == n->label) dup = true;
      if (!dup) labels.push_back(n->label);
      for (auto &c : n->children) next.push_back(&c);
    }
    Ideal acc = labels[0];
    for (std::size_t i = 1; i < labels.size(); ++i) acc = intersect(acc, labels[i]);
    out.push_back(acc.trimmed());
    level = std::move(next);
  }
  return out;
}

struct CGraph {
  std::vector<Ideal> vertices;
  std::vector<int> dims;
  std::vector<int> parity; // depth mod 2
  std::set<std::pair<std::size_t, std::size_t>> edges;

  std::size_t count_parity(int p) const {
    return std::size_t(std::count(parity.begin(), parity.end(), p));
  }
};

inline CGraph to_graph(const CTree &t) {
  CGraph g;
  if (t.empty()) return g;
  auto find_or_add = [&](const CNode &n, int depth) {
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
      if (g.vertices[i] == n.label) {
        if (g.parity[i] != depth % 2) throw InternalError("to_graph: equal labels at depths of different parity");
        return i;
      }
    g.vertices.push_back(n.label);
    g.dims.push_back(n.dim);
    g.parity.push_back(depth % 2);
    return g.vertices.size() - 1;
  };
  std::function<void(const CNode &, int, std::size_t)> walk = [&](const CNode &n, int depth, std::size_t id) {
    for (auto &c : n.children) {
      std::size_t cid = find_or_add(c, depth + 1);
      g.edges.insert({id, cid});
      walk(c, depth + 1, cid);
    }
  };
  walk(t.root, 0, find_or_add(t.root, 0));
  return g;
}

// Text layout: root line indented by three spaces, then one line per node
// with sign, dimension and bars.
inline void serialize_text(const CNode &n, int depth, std::ostringstream &os) {
  if (depth == 0) os << "   ";
  else os << (depth % 2 ? " - " : " + ");
  os << "(" << n.dim << ") ";
  for (int i = 1; i < depth; ++i) os << "|    ";
  if (depth > 0) os << "|====";
  os << n.label.to_string() << "\n";
  for (auto &c : n.children) serialize_text(c, depth + 1, os);
}

inline std::string serialize_text(const CTree &t) {
  std::ostringstream os;
  if (t.empty()) {
    os << "(-1) ideal(1)\n";
    return os.str();
  }
  serialize_text(t.root, 0, os);
  return os.str();
}

inline nlohmann::ordered_json to_json(const CNode &n) {
  nlohmann::ordered_json j;
  j["dim"] = n.dim;
  j["ideal"] = n.label.generator_strings();
  auto ch = nlohmann::ordered_json::array();
  for (auto &c : n.children) ch.push_back(to_json(c));
  j["children"] = ch;
  return j;
}

inline std::string serialize_json(const CTree &t) {
  if (t.empty()) {
    nlohmann::ordered_json j;
    j["dim"] = -1;
    j["ideal"] = std::vector<std::string>{"1"};
    j["children"] = nlohmann::ordered_json::array();
    return j.dump(2) + "\n";
  }
  return to_json(t.root).dump(2) + "\n";
}

namespace detail {

inline std::vector<std::string> split_top_level(const std::string &s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline Ideal parse_ideal_text(const std::string &s, const RingPtr &ring, int line) {
  if (s.rfind("ideal", 0) != 0) throw ParseError(line, 1, "expected 'ideal'");
  std::string rest = s.substr(5);
  std::vector<Polynomial> gens;
  if (!rest.empty() && rest[0] == '(') {
    if (rest.back() != ')') throw ParseError(line, int(s.size()), "missing ')'");
    std::string inner = rest.substr(1, rest.size() - 2);
    for (auto &g : split_top_level(inner)) gens.push_back(PolyParser(g, ring, line).parse());
  } else {
    if (rest.empty() || rest[0] != ' ') throw ParseError(line, 6, "expected '(' or a space");
    gens.push_back(PolyParser(rest.substr(1), ring, line).parse());
  }
  return Ideal(ring, std::move(gens));
}

inline CNode node_from_json(const nlohmann::json &j, const RingPtr &ring) {
  CNode n;
  n.dim = j.at("dim").get<int>();
  std::vector<Polynomial> gens;
  for (auto &g : j.at("ideal")) gens.push_back(parse_polynomial(g.get<std::string>(), ring));
  n.label = Ideal(ring, std::move(gens));
  for (auto &c : j.at("children")) n.children.push_back(node_from_json(c, ring));
  return n;
}

} // namespace detail

inline CTree parse_text_tree(const std::string &text, const RingPtr &ring, Flavor fl) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::pair<int, CNode>> flat;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(' ') == std::string::npos) continue;
    std::size_t open = line.find('(');
    std::size_t close = line.find(')', open);
    if (open == std::string::npos || close == std::string::npos) throw ParseError(lineno, 1, "expected '(dim)'");
    CNode n;
    n.dim = std::stoi(line.substr(open + 1, close - open - 1));
    std::string rest = line.substr(close + 2 <= line.size() ? close + 2 : line.size());
    int depth = 0;
    std::size_t pos = 0;
    while (rest.compare(pos, 5, "|    ") == 0) {
      ++depth;
      pos += 5;
    }
    if (rest.compare(pos, 5, "|====") == 0) {
      ++depth;
      pos += 5;
    }
    n.label = detail::parse_ideal_text(rest.substr(pos), ring, lineno);
    flat.push_back({depth, std::move(n)});
  }
  if (flat.empty()) throw ParseError(1, 1, "empty tree");
  CTree t;
  t.flavor = fl;
  if (flat.size() == 1 && flat[0].second.label.is_unit()) return CTree::empty_tree(ring, fl);
  // Rebuild from the preorder listing.
  std::size_t idx = 0;
  std::function<CNode(int)> build = [&](int depth) {
    CNode n = std::move(flat[idx].second);
    ++idx;
    while (idx < flat.size() && flat[idx].first == depth + 1) n.children.push_back(build(depth + 1));
    return n;
  };
  if (flat[0].first != 0) throw ParseError(1, 1, "first line must be the root");
  t.root = build(0);
  if (idx != flat.size()) throw ParseError(int(idx + 1), 1, "bad nesting");
  return t;
}

inline CTree parse_json_tree(const std::string &text, const RingPtr &ring, Flavor fl) {
  CTree t;
  t.flavor = fl;
  t.root = detail::node_from_json(nlohmann::json::parse(text), ring);
  return t;
}

} // namespace totalimage
