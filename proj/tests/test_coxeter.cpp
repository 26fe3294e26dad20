#include <deque>
#include <unordered_map>

#include "doctest.h"
#include "klcells/coxeter.hpp"
#include "oracle.hpp"

using namespace klcells;

namespace {

/// Coefficients of P_W(t) / prod (1 - t^{e_i}) up to degree n, where P_W is
/// the Poincare polynomial of the finite Weyl group with exponents e_i.
std::vector<long> bott_series(const std::vector<int>& exponents, int n) {
  std::vector<long> series(n + 1, 0);
  series[0] = 1;
  for (int e : exponents) {
    // times (1 + t + ... + t^e)
    std::vector<long> next(n + 1, 0);
    for (int k = 0; k <= n; ++k)
      for (int d = 0; d <= e && k + d <= n; ++d) next[k + d] += series[k];
    series = next;
  }
  for (int e : exponents) {
    // divided by (1 - t^e)
    for (int k = e; k <= n; ++k) series[k] += series[k - e];
  }
  return series;
}

std::vector<long> level_counts(const Group& g, int n) {
  std::vector<long> counts(n + 1, 0);
  for (const Element& w : g.ball(n)) ++counts[w.length()];
  return counts;
}

}  // namespace

TEST_CASE("G2 preset has the expected Coxeter matrix") {
  Group g(g2_preset());
  const auto& m = g.data().coxeter_matrix;
  CHECK(m[0][1] == 6);
  CHECK(m[1][2] == 3);
  CHECK(m[0][2] == 2);
  for (Generator s = 0; s < 3; ++s) {
    for (Generator t = 0; t < 3; ++t) {
      Element st = g.multiply(g.generator(s), g.generator(t));
      int order = s == t ? 1 : m[s][t];
      CHECK(g.power(st, order) == g.identity());
      for (int k = 1; k < order; ++k) CHECK_FALSE(g.power(st, k) == g.identity());
    }
  }
}

TEST_CASE("ball sizes follow the Bott formula") {
  CHECK(level_counts(Group(g2_preset()), 12) == bott_series({1, 5}, 12));
  CHECK(level_counts(Group(preset("A2")), 10) == bott_series({1, 2}, 10));
  CHECK(level_counts(Group(preset("B2")), 10) == bott_series({1, 3}, 10));
  CHECK(level_counts(Group(preset("A1")), 6) == bott_series({1}, 6));
  CHECK(Group(g2_preset()).ball(2).size() == 9);
}

TEST_CASE("words round-trip and reduced words are reduced") {
  Group g(g2_preset());
  for (const Element& w : g.ball(8)) {
    Word word = g.reduced_word(w);
    CHECK(static_cast<int>(word.size()) == w.length());
    CHECK(g.from_word(word) == w);
    CHECK(g.parse(g.to_string(w)) == w);
    CHECK(g.inverse(w).length() == w.length());
    CHECK(g.multiply(w, g.inverse(w)) == g.identity());
  }
  CHECK(g.parse("11") == g.identity());
  CHECK(g.parse("1212121212121") == g.generator(0));
  CHECK_THROWS_AS(g.parse("14"), Error);
  CHECK_THROWS_AS(g.parse("1x"), Error);
}

TEST_CASE("length: hyperplane count, reduced word and breadth-first level agree on ball(10)") {
  Group g(g2_preset());
  std::unordered_map<Element, int, ElementHash> level{{g.identity(), 0}};
  std::deque<Element> queue{g.identity()};
  while (!queue.empty()) {
    Element w = queue.front();
    queue.pop_front();
    if (level[w] == 10) continue;
    for (Generator s = 0; s < 3; ++s) {
      Element sw = g.left_multiply(s, w);
      if (level.emplace(sw, level[w] + 1).second) queue.push_back(sw);
    }
  }
  auto ball = g.ball(10);
  CHECK(ball.size() == level.size());
  for (const Element& w : ball) {
    CHECK(level.at(w) == w.length());
    CHECK(oracle::separating_hyperplanes(g, w) == w.length());
    CHECK(static_cast<int>(g.reduced_word(w).size()) == w.length());
  }
}

TEST_CASE("descents match length changes") {
  Group g(g2_preset());
  for (const Element& w : g.ball(7)) {
    for (Generator s = 0; s < 3; ++s) {
      bool left = g.left_multiply(s, w).length() < w.length();
      bool right = g.right_multiply(w, s).length() < w.length();
      CHECK(g.is_left_descent(s, w) == left);
      CHECK(((g.left_descents(w) >> s) & 1u) == static_cast<unsigned>(left));
      CHECK(((g.right_descents(w) >> s) & 1u) == static_cast<unsigned>(right));
    }
  }
}

TEST_CASE("Bruhat order matches the subword property on ball(6)") {
  Group g(g2_preset());
  auto ball = g.ball(6);
  for (const Element& w : ball) {
    ElementSet below = oracle::subword_products(g, w);
    for (const Element& y : ball) CHECK(g.bruhat_leq(y, w) == (below.count(y) > 0));
    CHECK(g.lower_cone(w) == below);
  }
}

TEST_CASE("intervals and coatoms") {
  Group g(g2_preset());
  Element w = g.parse("32121");
  auto co = g.coatoms(w);
  for (const Element& c : co) {
    CHECK(c.length() == 4);
    CHECK(g.bruhat_leq(c, w));
  }
  ElementSet I = g.interval(g.parse("2"), w);
  for (const Element& z : I) {
    CHECK(g.bruhat_leq(g.parse("2"), z));
    CHECK(g.bruhat_leq(z, w));
  }
  CHECK(g.interval(g.parse("3"), g.parse("121")).empty());
}

TEST_CASE("conjugacy classes of generators") {
  CHECK(Group(g2_preset()).conjugacy_classes() == std::vector<int>{0, 1, 1});
  CHECK(Group(preset("A2")).conjugacy_classes() == std::vector<int>{0, 0, 0});
  CHECK(Group(preset("B2")).conjugacy_classes().size() == 3);
}

TEST_CASE("group configuration errors") {
  CHECK_THROWS_AS(preset("E9"), Error);
  CHECK_THROWS_AS(make_group_data("bad", {{2, -4}, {-1, 2}}, 2, {}), Error);
  CHECK_THROWS_AS(make_group_data("bad", {{2, 1}, {1, 2}}, 2, {}), Error);
  CHECK_THROWS_AS(group_data_from_json(nlohmann::json{{"name", "x"}}), Error);
  nlohmann::json j = {{"name", "G2"}, {"cartan", g2_preset().cartan}, {"affine_node", 2}};
  GroupData d = group_data_from_json(j);
  CHECK(d.coxeter_matrix == g2_preset().coxeter_matrix);
  j["coxeter_matrix"] = {{1, 3, 2}, {3, 1, 3}, {2, 3, 1}};
  CHECK_THROWS_AS(group_data_from_json(j), Error);
}

TEST_CASE("translations have trivial linear part") {
  Group g(g2_preset());
  CHECK(g.has_trivial_linear_part(g.parse("1212312123")));
  CHECK(g.has_trivial_linear_part(g.parse("212123")));
  CHECK_FALSE(g.has_trivial_linear_part(g.parse("21212")));
  CHECK(g.parse("1212312123").length() == 10);
}
