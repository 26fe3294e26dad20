#include <memory>

#include "doctest.h"
#include "klcells/alcove.hpp"
#include "klcells/cells.hpp"

using namespace klcells;

namespace {

/// Whether the alcove of w lies on the side of the alcove of z of every
/// hyperplane separating A0 from the alcove of z.
bool beyond_separating_walls(const Group& g, const Element& z, const Element& w) {
  for (std::size_t k = 0; k < g.data().positive_roots.size(); ++k) {
    int root = static_cast<int>(k);
    Rational a = g.pairing(g.identity(), root), b = g.pairing(z, root), c = g.pairing(w, root);
    if (floor(b) > floor(a) && c < Rational(floor(b))) return false;
    if (floor(b) < floor(a) && c > Rational(floor(b) + 1)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("translations and their orbit") {
  Group g(g2_preset());
  Element u1 = g.parse("1212312123");
  REQUIRE(translation_vector(g, u1));
  CHECK_FALSE(translation_vector(g, g.parse("12")));
  CHECK_FALSE(translation_vector(g, g.identity()));
  OrbitData orbit = omega_orbit(g, u1);
  CHECK(orbit.size() == 6);
  CHECK(orbit.length == 10);
  CHECK(orbit.index_of(u1) == 0);
  for (int m = 0; m < orbit.size(); ++m) {
    CHECK(orbit.companions[m].length() == 10);
    CHECK(*translation_vector(g, orbit.companions[m]) == orbit.vectors[m]);
    CHECK(g.power(orbit.companions[m], 3).length() == 30);
  }
  CHECK_THROWS_AS(omega_orbit(g, g.parse("12")), Error);

  Fixtures fx = Fixtures::g2(g);
  OrbitData conj = conjugate_orbit(g, u1, fx.w1);
  for (int i = 0; i < 6; ++i) {
    Element expected = g.multiply(g.multiply(g.inverse(fx.w1[i]), u1), fx.w1[i]);
    CHECK(conj.companions[i] == expected);
  }
}

TEST_CASE("the alcove of a point") {
  Group g(g2_preset());
  for (const Element& w : g.ball(7)) {
    auto x = g.base_image(w);
    CHECK(alcove_of_point(g, x) == w);
  }
  std::vector<Rational> on_wall{Rational(0), Rational(1, 7)};
  CHECK_THROWS_AS(alcove_of_point(g, on_wall), Error);
}

TEST_CASE("h_region matches the separating walls") {
  Group g(g2_preset());
  auto ball = g.ball(8);
  for (const Element& z : g.ball(5)) {
    HalfspaceSet h = h_region(g, z);
    CHECK(h.is_everything() == (z.length() == 0));
    CHECK(h.contains_alcove(g, z));
    for (const Element& w : ball) CHECK(h.contains_alcove(g, w) == beyond_separating_walls(g, z, w));
  }
}

TEST_CASE("regions of translations: translate identity, nesting and disjointness") {
  Group g(g2_preset());
  OrbitData orbit = omega_orbit(g, g.parse("1212312123"));
  for (int m = 0; m < orbit.size(); ++m) {
    const Element& u = orbit.companions[m];
    for (int r = 1; r <= 3; ++r) {
      HalfspaceSet a = h_region(g, g.power(u, r));
      HalfspaceSet b = h_region(g, g.power(u, r + 1));
      CHECK(b == a.translated(g, orbit.vectors[m]));
      for (const Element& w : g.ball(10))
        if (b.contains_alcove(g, w)) CHECK(a.contains_alcove(g, w));
    }
  }
  for (int i = 0; i < orbit.size(); ++i)
    for (int j = 0; j < orbit.size(); ++j)
      if (i != j)
        for (int r1 = 1; r1 <= 3; ++r1)
          for (int r2 = 1; r2 <= 3; ++r2)
            CHECK(regions_disjoint(g, h_region(g, g.power(orbit.companions[i], r1)),
                                   h_region(g, g.power(orbit.companions[j], r2))));
  CHECK_FALSE(regions_disjoint(g, h_region(g, orbit.companions[0]), h_region(g, g.power(orbit.companions[0], 2))));
}

TEST_CASE("Fourier-Motzkin infeasibility") {
  auto ineq = [](std::vector<int> a, Rational b) {
    StrictInequality s;
    for (int x : a) s.coefficients.push_back(Rational(x));
    s.rhs = b;
    return s;
  };
  CHECK(strictly_infeasible({ineq({1}, 0), ineq({-1}, 0)}, 1));
  CHECK_FALSE(strictly_infeasible({ineq({1}, 0), ineq({-1}, -1)}, 1));
  CHECK(strictly_infeasible({ineq({1, 1}, 1), ineq({-1, 0}, 0), ineq({0, -1}, 0)}, 2));
  CHECK_FALSE(strictly_infeasible({ineq({1, 0}, 0), ineq({0, 1}, 0), ineq({-1, -1}, -1)}, 2));
  // the open half-planes x > 0 and x < 0 never meet
  CHECK(strictly_infeasible({ineq({1, 0}, 0), ineq({-1, 0}, 0), ineq({0, 1}, 0)}, 2));
  CHECK(strictly_infeasible({}, 2) == false);
}

TEST_CASE("hyperplane weights and special points") {
  Group g(g2_preset(5, 2));
  const GroupData& d = g.data();
  CHECK(hyperplane_weight(g, d.simple_root_of[0], 0) == 5);
  CHECK(hyperplane_weight(g, d.simple_root_of[1], 0) == 2);
  CHECK(hyperplane_weight(g, d.highest_coroot_root, 1) == 2);
  for (int k = 0; k < static_cast<int>(d.positive_roots.size()); ++k)
    for (int n = -3; n <= 3; ++n) CHECK(hyperplane_weight(g, k, n) == hyperplane_weight(g, k, 0));
  auto vertices = fundamental_vertices(g);
  CHECK(vertices.size() == 3);
  auto origin = is_special(g, vertices[0]);
  CHECK(origin.special);
  CHECK(origin.m_value == 3 * 5 + 3 * 2);
  CHECK_FALSE(is_special(g, vertices[1]).special);
  CHECK_FALSE(is_special(g, vertices[2]).special);
  std::vector<Rational> generic{Rational(1, 3), Rational(1, 5)};
  CHECK_THROWS_AS(is_special(g, generic), Error);
}

TEST_CASE("translation factors and interval shifts") {
  Group g(g2_preset());
  OrbitData orbit = omega_orbit(g, g.parse("1212312123"));
  const Element& u = orbit.companions[0];
  int checked = 0;
  for (const Element& z : g.ball(4)) {
    if (!g.is_reduced_product(z, u)) continue;
    Element y = g.multiply(z, g.power(u, 3));
    REQUIRE(y.length() == z.length() + 30);
    auto f = maximal_translation_factor(g, y, orbit);
    CHECK(f.exponent >= 3);
    CHECK(g.multiply(f.z, g.power(orbit.companions[f.index], f.exponent)) == y);
    auto exact = translation_factor(g, y, orbit, 5, 2);
    CHECK(exact.exponent == 3);
    ++checked;
  }
  CHECK(checked > 5);
  CHECK_THROWS_AS(translation_factor(g, u, orbit, 2, 2), Error);

  Element top = g.power(u, 2), bottom = g.coatoms(top).front();
  auto shift = interval_shift(g, {bottom, top}, orbit, 1);
  CHECK(shift.at(top) == g.power(u, 3));
  CHECK(shift.at(bottom).length() == bottom.length() + 10);
}

TEST_CASE("sampled shift intervals are reproducible") {
  Group g(g2_preset());
  OrbitData orbit = omega_orbit(g, g.parse("1212312123"));
  auto a = sample_shift_intervals(g, orbit, 4, 1, 5, 2, 4, 99);
  auto b = sample_shift_intervals(g, orbit, 4, 1, 5, 2, 4, 99);
  REQUIRE(a.size() == 5);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].top1 == b[k].top1);
    CHECK(a[k].bottom1 == b[k].bottom1);
    CHECK(a[k].top1.length() - a[k].bottom1.length() == a[k].gap);
    CHECK(a[k].top2.length() == a[k].top1.length() + 10);
    CHECK(g.bruhat_leq(a[k].bottom1, a[k].top1));
    CHECK(g.bruhat_leq(a[k].bottom2, a[k].top2));
  }
}

TEST_CASE("stability of a small shifted interval") {
  auto g = std::make_shared<const Group>(g2_preset());
  OrbitData orbit = omega_orbit(*g, g->parse("1212312123"));
  const Element& u = orbit.companions[0];
  Element z = g->parse("3");
  Element top1 = g->multiply(z, g->power(u, 3)), top2 = g->multiply(z, g->power(u, 4));
  Element bottom1 = g->power(u, 3), bottom2 = g->power(u, 4);
  KLContext ctx(g, OrderSpec::lex_Q());
  StabilityReport rep = verify_stability(ctx, bottom1, top1, bottom2, top2, orbit, 1);
  CHECK(rep.ok());
  CHECK(rep.size1 == 2);
  CHECK(rep.digest1 == rep.digest2);
}
