#ifndef KLCELLS_ALCOVE_HPP
#define KLCELLS_ALCOVE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "klcells/coxeter.hpp"
#include "klcells/hecke.hpp"
#include "klcells/rational.hpp"

namespace klcells {

using IntVector = std::vector<std::int64_t>;
using RationalVector = std::vector<Rational>;

/// The translation part of w when w acts on V as a nonzero translation.
std::optional<IntVector> translation_vector(const Group& group, const Element& w);

/// A translation u together with the orbit of its vector under the finite
/// Weyl group and one group element per orbit vector.
struct OrbitData {
  std::vector<IntVector> vectors;
  std::vector<Element> companions;
  int length = 0;  // common length of the companions

  int size() const { return static_cast<int>(vectors.size()); }
  /// Index of the companion equal to u, or -1.
  int index_of(const Element& u) const;
};

/// Orbit of the translation vector of u. The first entry is u itself; the
/// others follow in breadth-first order over the finite simple reflections.
/// Throws Error if u is not a translation.
OrbitData omega_orbit(const Group& group, const Element& u);

/// Orbit entries reordered so that entry i is w_i^-1 u w_i.
OrbitData conjugate_orbit(const Group& group, const Element& u, const std::vector<Element>& conjugators);

/// The element whose alcove contains the given point of V, found by
/// crossing one wall at a time. The point must not lie on a hyperplane.
Element alcove_of_point(const Group& group, std::span<const Rational> point);

/// One open half-space <x, beta_k^vee> > bound (lower) or < bound (upper).
struct HalfspaceBound {
  int root = 0;
  bool lower = true;
  std::int64_t bound = 0;
  bool operator==(const HalfspaceBound&) const = default;
};

/// Intersection of open half-spaces, at most one per positive root.
class HalfspaceSet {
 public:
  HalfspaceSet() = default;
  explicit HalfspaceSet(std::vector<HalfspaceBound> bounds);

  const std::vector<HalfspaceBound>& bounds() const { return bounds_; }
  bool is_everything() const { return bounds_.empty(); }
  /// Whether the point satisfies every bound.
  bool contains(const Group& group, std::span<const Rational> point) const;
  /// Whether the alcove of w lies in the set.
  bool contains_alcove(const Group& group, const Element& w) const;
  /// Translate of the set by a vector (simple-root coordinates).
  HalfspaceSet translated(const Group& group, const IntVector& v) const;

  bool operator==(const HalfspaceSet&) const = default;

 private:
  std::vector<HalfspaceBound> bounds_;  // sorted by root
};

/// The half-spaces bounded by the hyperplanes separating A0 from the alcove
/// of z, each taken on the side of that alcove; nested hyperplanes of one
/// root direction collapse to the outermost.
HalfspaceSet h_region(const Group& group, const Element& z);

/// Whether a set of strict linear inequalities sum_k a_k x_k > b has no
/// real solution, by Fourier-Motzkin elimination.
struct StrictInequality {
  RationalVector coefficients;
  Rational rhs;
};
bool strictly_infeasible(std::vector<StrictInequality> system, int dimension);

bool regions_disjoint(const Group& group, const HalfspaceSet& a, const HalfspaceSet& b);

/// Weight c_H of the hyperplane <x, beta_k^vee> = n, read off from the
/// generator its reflection is conjugate to.
int hyperplane_weight(const Group& group, int root, std::int64_t n);

/// Vertices of the fundamental alcove.
std::vector<RationalVector> fundamental_vertices(const Group& group);

struct SpecialPointResult {
  bool special = false;
  std::int64_t m_value = 0;
  std::int64_t max_value = 0;
};

/// m(v) = sum of c_H over hyperplanes through v, compared with the maximum
/// over vertex types. Throws Error if v is not a vertex of the arrangement.
SpecialPointResult is_special(const Group& group, std::span<const Rational> point);

struct TranslationFactor {
  Element z;
  int index = 0;     // orbit index m
  int exponent = 0;  // y = z . u_m^exponent
};

/// The factorization y = z . u_m^exponent with lengths adding, if any.
std::optional<TranslationFactor> translation_factor(const Group& group, const Element& y,
                                                    const OrbitData& orbit, int exponent);

/// translation_factor with exponent r - N. Throws Error when none exists.
TranslationFactor translation_factor(const Group& group, const Element& y, const OrbitData& orbit, int r, int n);

/// The factorization with the largest exponent; exponent 0 when no orbit
/// translation splits off on the right.
TranslationFactor maximal_translation_factor(const Group& group, const Element& y, const OrbitData& orbit);

/// y = z . u_m^e -> z . u_m^(e + k) on the members of an interval. Throws
/// Error when some member has no translation factor.
std::unordered_map<Element, Element, ElementHash> interval_shift(const Group& group,
                                                                 const std::vector<Element>& members,
                                                                 const OrbitData& orbit, int k);

/// Outcome of comparing the tables of two intervals matched by a bijection.
struct StabilityReport {
  Element bottom1, top1, bottom2, top2;
  std::size_t size1 = 0;
  std::size_t size2 = 0;
  bool bijection = false;
  bool order_preserved = false;
  bool r_equal = false;
  bool p_equal = false;
  /// Generators s with s bottom < bottom < top < s top; M^s compared for each.
  std::vector<Generator> m_generators;
  bool m_equal = true;
  std::uint64_t digest1 = 0;
  std::uint64_t digest2 = 0;
  std::string counterexample;

  bool ok() const { return bijection && order_preserved && r_equal && p_equal && m_equal; }
};

/// Computes both intervals independently and compares r, P and M tables
/// through the shift map.
StabilityReport verify_stability(KLContext& ctx, const Element& bottom1, const Element& top1,
                                 const Element& bottom2, const Element& top2, const OrbitData& orbit, int k);

/// A sampled interval [bottom, top] with top = z' . u^r and bottom reached
/// from top by `gap` coatom steps, plus its image under the shift by k.
struct ShiftSample {
  Element bottom1, top1, bottom2, top2;
  int gap = 0;
};

/// Random samples for checking stability under translation. z' ranges over
/// ball(max_z_length) with z' . u reduced; the generator is seeded.
std::vector<ShiftSample> sample_shift_intervals(const Group& group, const OrbitData& orbit, int r, int k,
                                               int count, int max_gap, int max_z_length, std::uint64_t seed);

nlohmann::json to_json(const Group& group, const HalfspaceSet& set);
nlohmann::json to_json(const Group& group, const OrbitData& orbit);
nlohmann::json to_json(const Group& group, const StabilityReport& report);

}  // namespace klcells

#endif
