#pragma once

// Line-oriented map files:
//   domain-vars: x0 x1 x2
//   target-vars: y0 y1 y2
//   domain-ideal: g1; g2        (optional)
//   flavor: projective|affine   (optional, projective by default)
//   map: y0 = x1*x2; y1 = x0*x2; y2 = x0*x1
// '#' starts a comment. Several map lines accumulate.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "totalimage/parse.hpp"
#include "totalimage/varmap.hpp"

namespace totalimage {

namespace detail {

struct Segment {
  std::string text;
  int col; // 1-based column of text[0]
};

inline Segment trim_segment(const std::string &s, int col) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return {s.substr(a, b - a), col + int(a)};
}

inline std::vector<Segment> split_segments(const Segment &s, char sep) {
  std::vector<Segment> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.text.size(); ++i)
    if (i == s.text.size() || s.text[i] == sep) {
      Segment t = trim_segment(s.text.substr(start, i - start), s.col + int(start));
      if (!t.text.empty()) out.push_back(t);
      start = i + 1;
    }
  return out;
}

inline bool valid_identifier(const std::string &v) {
  if (v.empty() || std::isdigit(static_cast<unsigned char>(v[0]))) return false;
  for (char c : v)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::vector<std::string> parse_names(const Segment &s, int line) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::size_t i = 0;
  while (i < s.text.size()) {
    while (i < s.text.size() && std::isspace(static_cast<unsigned char>(s.text[i]))) ++i;
    std::size_t j = i;
    while (j < s.text.size() && !std::isspace(static_cast<unsigned char>(s.text[j]))) ++j;
    if (j == i) break;
    std::string v = s.text.substr(i, j - i);
    if (!valid_identifier(v)) throw ParseError(line, s.col + int(i), "bad variable name '" + v + "'");
    if (!seen.insert(v).second) throw ParseError(line, s.col + int(i), "duplicate variable '" + v + "'");
    out.push_back(v);
    i = j;
  }
  if (out.empty()) throw ParseError(line, s.col, "empty variable list");
  return out;
}

} // namespace detail

inline RationalMap parse_map_file(const std::string &text) {
  using detail::Segment;
  std::optional<std::vector<std::string>> dvars, tvars;
  int dline = 0, tline = 0, map_line = 0;
  std::vector<std::pair<Segment, int>> ideal_parts, map_parts;
  Flavor flavor = Flavor::projective;
  bool have_flavor = false;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    Segment whole = detail::trim_segment(raw, 1);
    if (whole.text.empty()) continue;
    auto colon = raw.find(':');
    if (colon == std::string::npos) throw ParseError(line, whole.col, "expected 'key: value'");
    std::string key = detail::trim_segment(raw.substr(0, colon), 1).text;
    Segment value = detail::trim_segment(raw.substr(colon + 1), int(colon) + 2);
    if (key == "domain-vars") {
      if (dvars) throw ParseError(line, 1, "domain-vars given twice");
      dvars = detail::parse_names(value, line);
      dline = line;
    } else if (key == "target-vars") {
      if (tvars) throw ParseError(line, 1, "target-vars given twice");
      tvars = detail::parse_names(value, line);
      tline = line;
    } else if (key == "domain-ideal") {
      for (auto &s : detail::split_segments(value, ';')) ideal_parts.push_back({s, line});
    } else if (key == "flavor") {
      if (have_flavor) throw ParseError(line, 1, "flavor given twice");
      have_flavor = true;
      if (value.text == "projective") flavor = Flavor::projective;
      else if (value.text == "affine") flavor = Flavor::affine;
      else throw ParseError(line, value.col, "flavor must be 'projective' or 'affine'");
    } else if (key == "map") {
      if (!map_line) map_line = line;
      for (auto &s : detail::split_segments(value, ';')) map_parts.push_back({s, line});
    } else {
      throw ParseError(line, 1, "unknown key '" + key + "'");
    }
  }
  if (!dvars) throw ParseError(line + 1, 1, "missing domain-vars");
  if (!tvars) throw ParseError(line + 1, 1, "missing target-vars");
  if (map_parts.empty()) throw ParseError(line + 1, 1, "missing map");
  for (auto &v : *tvars)
    if (std::find(dvars->begin(), dvars->end(), v) != dvars->end())
      throw ParseError(tline, 1, "variable '" + v + "' is both a domain and a target variable");
  (void)dline;

  RingPtr dom = make_ring(*dvars);
  RingPtr tgt = make_ring(*tvars);
  std::vector<Polynomial> ig;
  for (auto &[s, l] : ideal_parts) ig.push_back(PolyParser(s.text, dom, l, s.col - 1).parse());

  std::vector<std::optional<Polynomial>> coords(tgt->size());
  for (auto &[s, l] : map_parts) {
    auto eq = s.text.find('=');
    if (eq == std::string::npos) throw ParseError(l, s.col, "expected 'name = polynomial'");
    Segment lhs = detail::trim_segment(s.text.substr(0, eq), s.col);
    Segment rhs = detail::trim_segment(s.text.substr(eq + 1), s.col + int(eq) + 1);
    int idx = tgt->index(lhs.text);
    if (idx < 0) throw ParseError(l, lhs.col, "'" + lhs.text + "' is not a target variable");
    if (coords[std::size_t(idx)]) throw ParseError(l, lhs.col, "coordinate '" + lhs.text + "' given twice");
    if (rhs.text.empty()) throw ParseError(l, rhs.col, "empty polynomial");
    coords[std::size_t(idx)] = PolyParser(rhs.text, dom, l, rhs.col - 1).parse();
  }
  std::vector<Polynomial> c;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (!coords[j]) throw ParseError(map_line, 1, "no coordinate for '" + tgt->vars[j] + "'");
    c.push_back(*coords[j]);
  }
  try {
    return RationalMap(dom, tgt, Ideal(dom, std::move(ig)), std::move(c), flavor);
  } catch (const StructuralError &e) {
    throw ParseError(map_line, 1, e.what());
  }
}

inline std::string emit_map_file(const RationalMap &f) {
  std::ostringstream os;
  os << "domain-vars:";
  for (auto &v : f.domain->vars) os << ' ' << v;
  os << "\ntarget-vars:";
  for (auto &v : f.target->vars) os << ' ' << v;
  os << '\n';
  if (!f.domain_ideal.is_zero()) {
    os << "domain-ideal: ";
    auto &g = f.domain_ideal.gens();
    for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "; " : "") << g[i].to_string();
    os << '\n';
  }
  os << "flavor: " << (f.flavor == Flavor::affine ? "affine" : "projective") << '\n';
  os << "map: ";
  for (std::size_t j = 0; j < f.coords.size(); ++j)
    os << (j ? "; " : "") << f.target->vars[j] << " = " << f.coords[j].to_string();
  os << '\n';
  return os.str();
}

} // namespace totalimage
