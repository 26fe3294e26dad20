#include "klcells/alcove.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <sstream>

namespace klcells {

namespace {

Rational pair_with(const GroupData& d, int root, std::span<const Rational> x) {
  Rational v(0);
  for (int i = 0; i < d.rank; ++i) v += Rational(d.coroot_rows[root][i]) * x[i];
  return v;
}

AffineMap translation_map(const Group& group, const IntVector& v, std::int64_t scale) {
  AffineMap m = group.identity().map();
  for (int i = 0; i < group.rank(); ++i) m.translation[i] = v[i] * scale;
  return m;
}

Element translation_power(const Group& group, const IntVector& v, std::int64_t exponent) {
  return group.from_map(translation_map(group, v, exponent));
}

IntVector apply_linear(const Group& group, const Element& w, const IntVector& v) {
  const int n = group.rank();
  IntVector out(n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) out[i] += w.map().linear[i * kMaxRank + k] * v[k];
  return out;
}

/// Solves a square system exactly; nullopt when singular.
std::optional<RationalVector> solve(std::vector<RationalVector> a, RationalVector b) {
  const int n = static_cast<int>(a.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[p][c].numerator() == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c].numerator() == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

int matrix_rank(std::vector<RationalVector> a, int cols) {
  int rank = 0;
  for (int c = 0; c < cols && rank < static_cast<int>(a.size()); ++c) {
    int p = rank;
    while (p < static_cast<int>(a.size()) && a[p][c].numerator() == 0) ++p;
    if (p == static_cast<int>(a.size())) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (static_cast<int>(r) == rank || a[r][c].numerator() == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::optional<IntVector> translation_vector(const Group& group, const Element& w) {
  if (!group.has_trivial_linear_part(w)) return std::nullopt;
  IntVector v(w.map().translation.begin(), w.map().translation.begin() + group.rank());
  if (std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; })) return std::nullopt;
  return v;
}

int OrbitData::index_of(const Element& u) const {
  for (int i = 0; i < size(); ++i)
    if (companions[i] == u) return i;
  return -1;
}

Element alcove_of_point(const Group& group, std::span<const Rational> point) {
  const GroupData& d = group.data();
  Element w = group.identity();
  Element w_inverse = group.identity();
  for (int step = 0;; ++step) {
    if (step > 100000) throw Error("alcove walk did not terminate");
    auto q = group.apply(w_inverse, point);
    Generator cross = -1;
    for (Generator s = 0; s < group.generator_count() && cross < 0; ++s) {
      int r = d.simple_root_of[s];
      Rational v = pair_with(d, r >= 0 ? r : d.highest_coroot_root, q);
      if (r >= 0 ? v.numerator() == 0 : v == Rational(1)) throw Error("point lies on a hyperplane");
      if (r >= 0 ? v < Rational(0) : v > Rational(1)) cross = s;
    }
    if (cross < 0) return w;
    w = group.right_multiply(w, cross);
    w_inverse = group.left_multiply(cross, w_inverse);
  }
}

OrbitData omega_orbit(const Group& group, const Element& u) {
  auto v = translation_vector(group, u);
  if (!v) throw Error(group.to_string(u) + " is not a translation");
  OrbitData out;
  std::set<IntVector> seen{*v};
  std::deque<IntVector> queue{*v};
  while (!queue.empty()) {
    IntVector x = queue.front();
    queue.pop_front();
    out.vectors.push_back(x);
    for (Generator s = 0; s < group.generator_count(); ++s) {
      if (group.data().simple_root_of[s] < 0) continue;
      IntVector y = apply_linear(group, group.generator(s), x);
      if (seen.insert(y).second) queue.push_back(y);
    }
  }
  const auto base = group.base_image(group.identity());
  for (const IntVector& x : out.vectors) {
    RationalVector target(base.begin(), base.end());
    for (int i = 0; i < group.rank(); ++i) target[i] += Rational(x[i]);
    Element c = alcove_of_point(group, target);
    if (!(c.map() == translation_map(group, x, 1))) throw Error("companion search failed");
    out.companions.push_back(c);
  }
  out.length = out.companions.front().length();
  for (const Element& c : out.companions)
    if (c.length() != out.length) throw Error("orbit companions differ in length");
  return out;
}

OrbitData conjugate_orbit(const Group& group, const Element& u, const std::vector<Element>& conjugators) {
  OrbitData all = omega_orbit(group, u);
  OrbitData out;
  out.length = all.length;
  for (const Element& w : conjugators) {
    Element c = group.multiply(group.multiply(group.inverse(w), u), w);
    int i = all.index_of(c);
    if (i < 0) throw Error("conjugate is not in the orbit");
    out.vectors.push_back(all.vectors[i]);
    out.companions.push_back(c);
  }
  return out;
}

HalfspaceSet::HalfspaceSet(std::vector<HalfspaceBound> bounds) : bounds_(std::move(bounds)) {
  std::sort(bounds_.begin(), bounds_.end(), [](const auto& a, const auto& b) { return a.root < b.root; });
  for (std::size_t i = 1; i < bounds_.size(); ++i)
    if (bounds_[i].root == bounds_[i - 1].root) throw Error("two bounds on one root");
}

bool HalfspaceSet::contains(const Group& group, std::span<const Rational> point) const {
  for (const auto& b : bounds_) {
    Rational v = pair_with(group.data(), b.root, point);
    if (b.lower ? !(v > Rational(b.bound)) : !(v < Rational(b.bound))) return false;
  }
  return true;
}

bool HalfspaceSet::contains_alcove(const Group& group, const Element& w) const {
  auto p = group.base_image(w);
  return contains(group, p);
}

HalfspaceSet HalfspaceSet::translated(const Group& group, const IntVector& v) const {
  std::vector<HalfspaceBound> out = bounds_;
  for (auto& b : out) {
    std::int64_t shift = 0;
    for (int i = 0; i < group.rank(); ++i) shift += group.data().coroot_rows[b.root][i] * v[i];
    b.bound += shift;
  }
  return HalfspaceSet(std::move(out));
}

HalfspaceSet h_region(const Group& group, const Element& z) {
  std::vector<HalfspaceBound> bounds;
  const int roots = static_cast<int>(group.data().positive_roots.size());
  for (int k = 0; k < roots; ++k) {
    Rational p = group.pairing(z, k);
    if (p > Rational(1)) {
      bounds.push_back({k, true, floor(p)});
    } else if (p < Rational(0)) {
      bounds.push_back({k, false, floor(p) + 1});
    }
  }
  return HalfspaceSet(std::move(bounds));
}

bool strictly_infeasible(std::vector<StrictInequality> system, int dimension) {
  for (int d = dimension - 1; d >= 0; --d) {
    std::vector<StrictInequality> pos, neg, next;
    for (auto& c : system) {
      const Rational& a = c.coefficients[d];
      if (a > Rational(0)) {
        pos.push_back(std::move(c));
      } else if (a < Rational(0)) {
        neg.push_back(std::move(c));
      } else {
        next.push_back(std::move(c));
      }
    }
    for (const auto& p : pos)
      for (const auto& n : neg) {
        Rational fp = -n.coefficients[d];
        Rational fn = p.coefficients[d];
        StrictInequality c;
        c.coefficients.resize(dimension);
        for (int i = 0; i < dimension; ++i) c.coefficients[i] = fp * p.coefficients[i] + fn * n.coefficients[i];
        c.rhs = fp * p.rhs + fn * n.rhs;
        next.push_back(std::move(c));
      }
    system = std::move(next);
  }
  // Only 0 > rhs remains.
  return std::any_of(system.begin(), system.end(), [](const auto& c) { return c.rhs >= Rational(0); });
}

bool regions_disjoint(const Group& group, const HalfspaceSet& a, const HalfspaceSet& b) {
  const int n = group.rank();
  std::vector<StrictInequality> system;
  for (const auto* set : {&a, &b}) {
    for (const auto& bound : set->bounds()) {
      StrictInequality c;
      int sign = bound.lower ? 1 : -1;
      for (int i = 0; i < n; ++i) c.coefficients.push_back(Rational(sign * group.data().coroot_rows[bound.root][i]));
      c.rhs = Rational(sign * bound.bound);
      system.push_back(std::move(c));
    }
  }
  return strictly_infeasible(std::move(system), n);
}

int hyperplane_weight(const Group& group, int root, std::int64_t n) {
  const GroupData& d = group.data();
  const int rank = d.rank;
  AffineMap m = group.identity().map();
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) m.linear[i * kMaxRank + j] -= d.positive_roots[root][i] * d.coroot_rows[root][j];
    m.translation[i] = n * d.positive_roots[root][i];
  }
  Element r = group.from_map(m);
  while (r.length() > 1) {
    bool reduced = false;
    GeneratorSet desc = group.left_descents(r);
    for (Generator t = 0; t < group.generator_count() && !reduced; ++t) {
      if (!((desc >> t) & 1u)) continue;
      Element c = group.right_multiply(group.left_multiply(t, r), t);
      if (c.length() < r.length()) {
        r = c;
        reduced = true;
      }
    }
    if (!reduced) throw Error("reflection did not reduce to a generator");
  }
  for (Generator s = 0; s < group.generator_count(); ++s)
    if (group.generator(s) == r) return d.weights[s];
  throw Error("reflection did not reduce to a generator");
}

std::vector<RationalVector> fundamental_vertices(const Group& group) {
  const GroupData& d = group.data();
  const int n = d.rank;
  std::vector<RationalVector> out{RationalVector(n, Rational(0))};
  for (int i = 0; i < n; ++i) {
    std::vector<RationalVector> a;
    RationalVector b;
    for (int j = 0; j < n; ++j) {
      int k = j == i ? d.highest_coroot_root : j;
      RationalVector row;
      for (int c = 0; c < n; ++c) row.push_back(Rational(d.coroot_rows[k][c]));
      a.push_back(row);
      b.push_back(Rational(j == i ? 1 : 0));
    }
    auto x = solve(a, b);
    if (!x) throw Error("degenerate fundamental alcove");
    out.push_back(*x);
  }
  return out;
}

SpecialPointResult is_special(const Group& group, std::span<const Rational> point) {
  const GroupData& d = group.data();
  auto m_value = [&](std::span<const Rational> v, bool check) {
    std::int64_t m = 0;
    std::vector<RationalVector> rows;
    for (int k = 0; k < static_cast<int>(d.positive_roots.size()); ++k) {
      Rational p = pair_with(d, k, v);
      if (p.denominator() != 1) continue;
      m += hyperplane_weight(group, k, p.numerator());
      RationalVector row;
      for (int c = 0; c < d.rank; ++c) row.push_back(Rational(d.coroot_rows[k][c]));
      rows.push_back(row);
    }
    if (check && matrix_rank(rows, d.rank) < d.rank) throw Error("point is not a vertex of the arrangement");
    return m;
  };
  SpecialPointResult out;
  out.m_value = m_value(point, true);
  for (const auto& v : fundamental_vertices(group)) out.max_value = std::max(out.max_value, m_value(v, false));
  out.special = out.m_value == out.max_value;
  return out;
}

std::optional<TranslationFactor> translation_factor(const Group& group, const Element& y, const OrbitData& orbit,
                                                    int exponent) {
  for (int m = 0; m < orbit.size(); ++m) {
    Element z = group.multiply(y, translation_power(group, orbit.vectors[m], -exponent));
    if (z.length() + exponent * orbit.length == y.length()) return TranslationFactor{z, m, exponent};
  }
  return std::nullopt;
}

TranslationFactor translation_factor(const Group& group, const Element& y, const OrbitData& orbit, int r, int n) {
  if (r <= n) throw Error("translation_factor requires r > N");
  auto f = translation_factor(group, y, orbit, r - n);
  if (!f) throw Error("no translation factor for " + group.to_string(y));
  return *f;
}

TranslationFactor maximal_translation_factor(const Group& group, const Element& y, const OrbitData& orbit) {
  for (int e = y.length() / std::max(orbit.length, 1); e >= 1; --e) {
    if (auto f = translation_factor(group, y, orbit, e)) return *f;
  }
  return TranslationFactor{y, 0, 0};
}

std::unordered_map<Element, Element, ElementHash> interval_shift(const Group& group,
                                                                 const std::vector<Element>& members,
                                                                 const OrbitData& orbit, int k) {
  std::unordered_map<Element, Element, ElementHash> phi;
  for (const Element& y : members) {
    TranslationFactor f = maximal_translation_factor(group, y, orbit);
    if (f.exponent == 0 && k != 0) throw Error("no translation factor for " + group.to_string(y));
    phi.emplace(y, group.multiply(f.z, translation_power(group, orbit.vectors[f.index], f.exponent + k)));
  }
  return phi;
}

std::vector<ShiftSample> sample_shift_intervals(const Group& group, const OrbitData& orbit, int r, int k,
                                               int count, int max_gap, int max_z_length, std::uint64_t seed) {
  const Element& u = orbit.companions.front();
  std::vector<Element> tops;
  for (const Element& z : group.ball(max_z_length))
    if (group.is_reduced_product(z, u)) tops.push_back(z);
  if (tops.empty()) throw Error("no element z with z . u reduced");
  Element ur = group.power(u, r);
  std::mt19937_64 rng(seed);
  std::vector<ShiftSample> out;
  while (static_cast<int>(out.size()) < count) {
    Element top = group.multiply(tops[rng() % tops.size()], ur);
    int gap = max_gap > 0 ? 1 + static_cast<int>(rng() % max_gap) : 0;
    Element bottom = top;
    for (int step = 0; step < gap; ++step) {
      std::vector<Element> down = group.coatoms(bottom);
      bottom = down[rng() % down.size()];
    }
    auto phi = interval_shift(group, {bottom, top}, orbit, k);
    out.push_back({bottom, top, phi.at(bottom), phi.at(top), gap});
  }
  return out;
}

StabilityReport verify_stability(KLContext& ctx, const Element& bottom1, const Element& top1,
                                 const Element& bottom2, const Element& top2, const OrbitData& orbit, int k) {
  const Group& g = ctx.group();
  StabilityReport rep;
  rep.bottom1 = bottom1;
  rep.top1 = top1;
  rep.bottom2 = bottom2;
  rep.top2 = top2;
  const IntervalPoset& I1 = ctx.interval(ctx.id(bottom1), ctx.id(top1));
  const IntervalPoset& I2 = ctx.interval(ctx.id(bottom2), ctx.id(top2));
  rep.size1 = I1.size();
  rep.size2 = I2.size();
  auto fail = [&](const std::string& what) {
    if (rep.counterexample.empty()) rep.counterexample = what;
  };
  if (I1.size() == 0 || I2.size() == 0) {
    fail("an endpoint pair is not comparable");
    return rep;
  }

  std::vector<Element> members;
  for (ElementId z : I1.members) members.push_back(ctx.pool().element(z));
  std::vector<int> image(I1.size(), -1);
  try {
    auto phi = interval_shift(g, members, orbit, k);
    std::vector<bool> hit(I2.size(), false);
    rep.bijection = I1.size() == I2.size();
    for (std::size_t p = 0; p < members.size(); ++p) {
      auto it = I2.position.find(ctx.id(phi.at(members[p])));
      if (it == I2.position.end() || hit[it->second]) {
        rep.bijection = false;
        fail("shift of " + g.to_string(members[p]) + " is not a new member of the second interval");
        break;
      }
      hit[it->second] = true;
      image[p] = it->second;
    }
  } catch (const Error& e) {
    fail(e.what());
  }
  if (!rep.bijection) return rep;

  const int n = static_cast<int>(I1.size());
  rep.order_preserved = true;
  for (int a = 0; a < n && rep.order_preserved; ++a)
    for (int b = 0; b < n; ++b)
      if (I1.leq(a, b) != I2.leq(image[a], image[b])) {
        rep.order_preserved = false;
        fail("order differs at " + g.to_string(members[a]) + ", " + g.to_string(members[b]));
        break;
      }

  for (Generator s = 0; s < g.generator_count(); ++s) {
    bool a1 = ctx.m_admissible(s, I1.bottom, I1.top);
    bool a2 = ctx.m_admissible(s, I2.bottom, I2.top);
    if (a1 && a2) rep.m_generators.push_back(s);
  }
  ctx.fill_p_tables(I1);
  ctx.fill_p_tables(I2);
  for (Generator s : rep.m_generators) {
    ctx.fill_m_tables(I1, s);
    ctx.fill_m_tables(I2, s);
  }

  std::ostringstream text1, text2;
  rep.r_equal = rep.p_equal = rep.m_equal = true;
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a <= b; ++a) {
      if (!I1.leq(a, b)) continue;
      ElementId x1 = I1.members[a], y1 = I1.members[b];
      ElementId x2 = I2.members[image[a]], y2 = I2.members[image[b]];
      const GammaPoly& r1 = ctx.r_poly(x1, y1);
      const GammaPoly& r2 = ctx.r_poly(x2, y2);
      const GammaPoly& p1 = ctx.p_poly(x1, y1);
      const GammaPoly& p2 = ctx.p_poly(x2, y2);
      text1 << a << ' ' << b << ' ' << r1.to_string() << ' ' << p1.to_string();
      text2 << a << ' ' << b << ' ' << r2.to_string() << ' ' << p2.to_string();
      std::string where = " at (" + g.to_string(members[a]) + ", " + g.to_string(members[b]) + ")";
      if (r1 != r2) {
        rep.r_equal = false;
        fail("r differs" + where);
      }
      if (p1 != p2) {
        rep.p_equal = false;
        fail("P differs" + where);
      }
      for (Generator s : rep.m_generators) {
        bool adm1 = ctx.m_admissible(s, x1, y1);
        bool adm2 = ctx.m_admissible(s, x2, y2);
        if (adm1 != adm2) {
          rep.m_equal = false;
          fail("M admissibility differs" + where);
          continue;
        }
        if (!adm1) continue;
        const GammaPoly& m1 = ctx.m_poly(s, x1, y1);
        const GammaPoly& m2 = ctx.m_poly(s, x2, y2);
        text1 << " M" << s << ' ' << m1.to_string();
        text2 << " M" << s << ' ' << m2.to_string();
        if (m1 != m2) {
          rep.m_equal = false;
          fail("M^s" + std::to_string(s + 1) + " differs" + where);
        }
      }
      text1 << '\n';
      text2 << '\n';
    }
  }
  rep.digest1 = fnv1a(text1.str());
  rep.digest2 = fnv1a(text2.str());
  return rep;
}

nlohmann::json to_json(const Group& group, const HalfspaceSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : set.bounds()) {
    out.push_back({{"root", b.root},
                   {"root_vector", group.data().positive_roots[b.root]},
                   {"kind", b.lower ? "lower" : "upper"},
                   {"bound", b.bound}});
  }
  return out;
}

nlohmann::json to_json(const Group& group, const OrbitData& orbit) {
  nlohmann::json out;
  out["length"] = orbit.length;
  out["vectors"] = orbit.vectors;
  nlohmann::json comps = nlohmann::json::array();
  for (const Element& c : orbit.companions) comps.push_back(group.to_string(c));
  out["companions"] = comps;
  return out;
}

nlohmann::json to_json(const Group& group, const StabilityReport& rep) {
  auto hex = [](std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << v;
    return s.str();
  };
  nlohmann::json out;
  out["first"] = {group.to_string(rep.bottom1), group.to_string(rep.top1)};
  out["second"] = {group.to_string(rep.bottom2), group.to_string(rep.top2)};
  out["sizes"] = {rep.size1, rep.size2};
  out["bijection"] = rep.bijection;
  out["order_preserved"] = rep.order_preserved;
  out["r_equal"] = rep.r_equal;
  out["p_equal"] = rep.p_equal;
  nlohmann::json gens = nlohmann::json::array();
  for (Generator s : rep.m_generators) gens.push_back(s + 1);
  out["m_generators"] = gens;
  out["m_equal"] = rep.m_equal;
  out["digests"] = {hex(rep.digest1), hex(rep.digest2)};
  out["verdict"] = rep.ok() ? "equal" : "unequal";
  if (!rep.counterexample.empty()) out["counterexample"] = rep.counterexample;
  return out;
}

}  // namespace klcells
