#ifndef KLCELLS_HECKE_HPP
#define KLCELLS_HECKE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "klcells/coxeter.hpp"
#include "klcells/gamma.hpp"
#include "klcells/rational.hpp"

namespace klcells {

using ElementId = std::int32_t;

/// Interning table for the elements a KLContext touches. Left products and
/// descents are cached per id.
class ElementPool {
 public:
  explicit ElementPool(const Group& group) : group_(&group) {}

  ElementId intern(const Element& w);
  const Element& element(ElementId id) const { return elements_[id]; }
  int length(ElementId id) const { return elements_[id].length(); }
  GeneratorSet left_descents(ElementId id) const { return descents_[id]; }
  bool has_left_descent(ElementId id, Generator s) const { return (descents_[id] >> s) & 1u; }
  Generator first_left_descent(ElementId id) const;
  ElementId left_multiply(Generator s, ElementId id);
  std::size_t size() const { return elements_.size(); }

 private:
  const Group* group_;
  std::vector<Element> elements_;
  std::vector<GeneratorSet> descents_;
  std::vector<std::array<ElementId, kMaxGenerators>> left_products_;
  std::unordered_map<Element, ElementId, ElementHash> index_;
};

/// A Bruhat interval [bottom, top] with its order relation. Members are
/// sorted by length, then by reduced word.
struct IntervalPoset {
  ElementId bottom = 0;
  ElementId top = 0;
  std::vector<ElementId> members;
  std::unordered_map<ElementId, int> position;
  /// below[k] has bit p set iff members[p] <= members[k]; above likewise.
  std::vector<std::vector<std::uint64_t>> below;
  std::vector<std::vector<std::uint64_t>> above;

  std::size_t size() const { return members.size(); }
  bool leq(int p, int k) const { return (below[k][p / 64] >> (p % 64)) & 1u; }
};

/// Gamma_+^s(I) split by origin: P-entries (a), consecutive ratios of
/// ordered M-terms (b), and the defect polynomials (c).
struct GammaPlusSet {
  std::set<Monomial> a;
  std::set<Monomial> b;
  std::set<Monomial> c;

  std::set<Monomial> all() const;
  bool empty() const { return a.empty() && b.empty() && c.empty(); }
};

/// Memoized Kazhdan-Lusztig computation for one group, one total order on
/// Gamma and one choice of parameters v_s. Single writer: use one context
/// per thread.
class KLContext {
 public:
  /// Parameters v_s = Q on the conjugacy class of generator 0 and v_s = q on
  /// the other class (at most two classes).
  KLContext(std::shared_ptr<const Group> group, OrderSpec order);
  KLContext(std::shared_ptr<const Group> group, OrderSpec order, std::vector<Monomial> parameters);

  /// Single-parameter context: v_s = Q^{weights[s]} under the Q-order, so
  /// that every polynomial lives in Z[Q, Q^-1] = Z[v, v^-1].
  static KLContext weighted(std::shared_ptr<const Group> group, std::vector<int> weights);
  /// weighted() for G2 with L(s1) = a, L(s2) = L(s3) = b.
  static KLContext weighted(std::shared_ptr<const Group> group, const WeightFunction& wf);

  const Group& group() const { return *group_; }
  std::shared_ptr<const Group> group_ptr() const { return group_; }
  const OrderSpec& order() const { return order_; }
  Monomial parameter(Generator s) const { return parameters_[s]; }
  /// v_s - v_s^-1.
  GammaPoly xi(Generator s) const;

  ElementPool& pool() { return pool_; }
  ElementId id(const Element& w) { return pool_.intern(w); }

  bool bruhat_leq(ElementId y, ElementId w);
  bool bruhat_leq(const Element& y, const Element& w) { return bruhat_leq(id(y), id(w)); }

  const GammaPoly& r_poly(ElementId y, ElementId w);
  GammaPoly r_poly(const Element& y, const Element& w) { return r_poly(id(y), id(w)); }

  /// Kazhdan-Lusztig polynomial; computed on [y, w] only.
  const GammaPoly& p_poly(ElementId y, ElementId w);
  GammaPoly p_poly(const Element& y, const Element& w) { return p_poly(id(y), id(w)); }

  /// M^s_{y,w}; requires sy < y < w < sw.
  const GammaPoly& m_poly(Generator s, ElementId y, ElementId w);
  GammaPoly m_poly(Generator s, const Element& y, const Element& w) { return m_poly(s, id(y), id(w)); }

  /// sum_{y<=z<w, sz<z} P_{y,z} M^s_{z,w} - v_s P_{y,w}; requires sy < y < w < sw.
  const GammaPoly& mu_defect(Generator s, ElementId y, ElementId w);
  GammaPoly mu_defect(Generator s, const Element& y, const Element& w) { return mu_defect(s, id(y), id(w)); }

  /// The interval [y, w] (empty members when y is not below w).
  const IntervalPoset& interval(ElementId y, ElementId w);

  /// Fills P for every pair of the interval.
  void fill_p_tables(const IntervalPoset& I);
  /// Fills M^s and the defects for every admissible pair of the interval.
  void fill_m_tables(const IntervalPoset& I, Generator s);
  /// Fills M^s_{z,w} for every z < w with sz < z (nothing when sw < w).
  void fill_m_below(Generator s, ElementId w);

  GammaPlusSet gamma_plus_set(ElementId y, ElementId w, Generator s);
  GammaPlusSet gamma_plus_set(const Element& y, const Element& w, Generator s) {
    return gamma_plus_set(id(y), id(w), s);
  }

  /// True when sy < y < w < sw.
  bool m_admissible(Generator s, ElementId y, ElementId w);

  std::size_t r_table_size() const { return r_memo_.size(); }

 private:
  static std::uint64_t key(ElementId a, ElementId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }
  void fill_p_column(const IntervalPoset& I, int top);
  void fill_m_column(const IntervalPoset& I, int top, Generator s);

  std::shared_ptr<const Group> group_;
  OrderSpec order_;
  std::vector<Monomial> parameters_;
  ElementPool pool_;
  std::unordered_map<std::uint64_t, bool> leq_memo_;
  std::unordered_map<std::uint64_t, GammaPoly> r_memo_;
  std::unordered_map<std::uint64_t, GammaPoly> p_memo_;
  std::vector<std::unordered_map<std::uint64_t, GammaPoly>> m_memo_;
  std::vector<std::unordered_map<std::uint64_t, GammaPoly>> defect_memo_;
  std::map<std::pair<ElementId, ElementId>, std::unique_ptr<IntervalPoset>> intervals_;
};

/// Result of a containment check for condition (*).
struct StarCheck {
  bool ok = true;
  std::optional<Monomial> witness;
};

/// Variant 1: every (i, j) has i = 0 < j, or i > 0 and c i + d j >= 0.
/// Variant 2 (needs e > c/d): every (i, j) lies in one of
///   i = 0 < j;  i > 0, i + j >= 0;  j > -i > 0, -j/i >= e;  -j > i > 0, -j/i <= c/d.
/// A missing e (variant 2) drops the third region.
StarCheck check_star(const std::set<Monomial>& set, int variant, int c, int d,
                     std::optional<Rational> e = std::nullopt);

/// Q^i q^j -> q^i Q^j, used to run the b/a analysis with the same checks.
std::set<Monomial> mirror(const std::set<Monomial>& set);

/// Whether sigma_{a,b} maps every element of the set to a positive power of v.
StarCheck check_specialization(const std::set<Monomial>& set, const WeightFunction& wf);

/// {+-j/i > 0 : (i, j) in set, j < 0, i != 0}, descending.
std::vector<Rational> critical_ratios(const std::set<Monomial>& set);

/// Coefficients of C_s C_w in the C-basis. Throws Error when the supplied
/// ball misses part of [e, w] or sw.
std::map<ElementId, GammaPoly> c_product(KLContext& ctx, Generator s, const Element& w,
                                          const ElementSet& ball);

/// Interval summary: members, P-matrix, M-entries for s, Gamma_+^s(I).
struct IntervalReport {
  Element bottom;
  Element top;
  Generator s = 0;
  std::vector<Element> members;
  struct Entry {
    int row;
    int col;
    GammaPoly poly;
  };
  std::vector<Entry> p_entries;
  std::vector<Entry> m_entries;
  GammaPlusSet gamma_plus;
};

IntervalReport interval_report(KLContext& ctx, const Element& y, const Element& w, Generator s);
nlohmann::json to_json(const Group& group, const IntervalReport& report);
nlohmann::json to_json(const GammaPlusSet& set);

}  // namespace klcells

#endif
