#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "totalimage/ctree.hpp"
#include "totalimage/parse.hpp"

using namespace totalimage;

namespace {

RingPtr ys() { return make_ring({"y0", "y1", "y2"}); }

Ideal ideal_of(const RingPtr &R, std::initializer_list<const char *> gens) {
  std::vector<Polynomial> g;
  for (auto *s : gens) g.push_back(parse_polynomial(s, R));
  return Ideal(R, std::move(g));
}

CNode node(const Ideal &I, int dim, std::vector<CNode> ch = {}) {
  CNode n;
  n.label = I;
  n.dim = dim;
  n.children = std::move(ch);
  return n;
}

// The expected Cremona tree, sibling order included.
const char *kCremonaFigure = "   (2) ideal()\n"
                             " - (1) |====ideal y2\n"
                             " + (0) |    |====ideal(y2,y0)\n"
                             " + (0) |    |====ideal(y2,y1)\n"
                             " - (1) |====ideal y1\n"
                             " + (0) |    |====ideal(y1,y0)\n"
                             " + (0) |    |====ideal(y2,y1)\n"
                             " - (1) |====ideal y0\n"
                             " + (0) |    |====ideal(y2,y0)\n"
                             " + (0) |    |====ideal(y1,y0)\n";

CTree cremona_tree() { return parse_text_tree(kCremonaFigure, ys(), Flavor::projective); }

} // namespace

TEST(TextFormat, ParsesTheFigure) {
  CTree t = cremona_tree();
  EXPECT_EQ(t.size(), 10u);
  EXPECT_EQ(t.root.children.size(), 3u);
  for (auto &c : t.root.children) {
    EXPECT_EQ(c.dim, 1);
    EXPECT_EQ(c.children.size(), 2u);
  }
}

TEST(TextFormat, RoundTrip) {
  CTree t = cremona_tree();
  std::string s = serialize_text(t);
  CTree u = parse_text_tree(s, ys(), Flavor::projective);
  EXPECT_EQ(serialize_text(u), s);
}

TEST(TextFormat, LineShapes) {
  CTree t;
  t.root = node(Ideal(ys()), 2, {node(ideal_of(ys(), {"y0"}), 1, {node(ideal_of(ys(), {"y0", "y1"}), 0)})});
  EXPECT_EQ(serialize_text(t), "   (2) ideal()\n"
                               " - (1) |====ideal y0\n"
                               " + (0) |    |====ideal(y1,y0)\n");
}

TEST(TextFormat, EmptyImage) {
  CTree t = CTree::empty_tree(ys(), Flavor::projective);
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(serialize_text(t), "(-1) ideal(1)\n");
}

TEST(JsonFormat, Schema) {
  CTree t = cremona_tree();
  auto j = nlohmann::json::parse(serialize_json(t));
  EXPECT_EQ(j["dim"], 2);
  EXPECT_TRUE(j["ideal"].is_array());
  EXPECT_TRUE(j["ideal"].empty());
  ASSERT_EQ(j["children"].size(), 3u);
  EXPECT_EQ(j["children"][0]["ideal"], nlohmann::json::array({"y2"}));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys.size(), 3u);
}

TEST(JsonFormat, RoundTrip) {
  CTree t = cremona_tree();
  CTree u = parse_json_tree(serialize_json(t), ys(), Flavor::projective);
  EXPECT_EQ(serialize_text(u), serialize_text(t));
}

TEST(Membership, CremonaFigureSemantics) {
  CTree t = cremona_tree();
  EXPECT_FALSE(member(t, {1, 1, 0}));
  EXPECT_TRUE(member(t, {1, 0, 0}));
  EXPECT_TRUE(member(t, {2, 3, 5}));
  EXPECT_FALSE(member(t, {0, 4, 1}));
  for (auto q : std::vector<std::vector<Rational>>{{1, 1, 0}, {1, 0, 0}, {2, 3, 5}, {0, 0, 1}, {0, 4, 1}})
    EXPECT_EQ(member(t, q), member_recursive(t, q));
}

TEST(Cleaning, ParentChildWithEqualLabels) {
  Ideal line = ideal_of(ys(), {"y0"}), pt = ideal_of(ys(), {"y0", "y1"});
  CTree t;
  // root -> line -> line -> pt: the middle pair collapses, pt moves up.
  t.root = node(Ideal(ys()), 2, {node(line, 1, {node(line, 1, {node(pt, 0)})})});
  CTree c = clean_parent_child(t);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.root.children[0].label, pt);
}

TEST(Cleaning, SiblingContainment) {
  Ideal line = ideal_of(ys(), {"y0"}), pt = ideal_of(ys(), {"y0", "y1"}), other = ideal_of(ys(), {"y2"});
  CTree t;
  t.root = node(Ideal(ys()), 2, {node(line, 1), node(pt, 0), node(other, 1)});
  CTree c = clean_sibling_containment(t);
  ASSERT_EQ(c.root.children.size(), 2u);
  for (auto &ch : c.root.children) EXPECT_EQ(ch.dim, 1);
}

TEST(Cleaning, IdempotentOnTheFigure) {
  CTree t = cremona_tree();
  CTree c = clean(t);
  EXPECT_EQ(c.size(), 10u);
  EXPECT_EQ(serialize_text(clean(c)), serialize_text(c));
}

TEST(Graph, CremonaQuotient) {
  CGraph g = to_graph(cremona_tree());
  EXPECT_EQ(g.vertices.size(), 7u);
  EXPECT_EQ(g.count_parity(1), 3u);
  EXPECT_EQ(g.count_parity(0), 4u);
  EXPECT_EQ(g.edges.size(), 9u);
}

TEST(Canonical, CremonaLevels) {
  auto v = canonical_representation(cremona_tree());
  ASSERT_EQ(v.size(), 3u);
  EXPECT_TRUE(v[0].is_zero());
  EXPECT_EQ(v[1], ideal_of(ys(), {"y0*y1*y2"}));
  EXPECT_EQ(dimension(v[2], Flavor::projective), 0);
}

TEST(TextFormat, RejectsGarbage) {
  EXPECT_THROW(parse_text_tree("no dimension here\n", ys(), Flavor::projective), ParseError);
  EXPECT_THROW(parse_text_tree(" - (1) |====ideal y0\n", ys(), Flavor::projective), ParseError);
}
