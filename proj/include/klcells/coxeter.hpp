#ifndef KLCELLS_COXETER_HPP
#define KLCELLS_COXETER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "klcells/rational.hpp"

namespace klcells {

/// Largest supported rank of the finite root system (so at most
/// kMaxRank + 1 generators).
inline constexpr int kMaxRank = 4;
inline constexpr int kMaxGenerators = kMaxRank + 1;

using Generator = int;                // 0-based index into the generators
using Word = std::vector<Generator>;  // 0-based letters
using GeneratorSet = std::uint32_t;   // bit s set <=> generator s present

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An affine map x -> linear * x + translation on V, in simple-root
/// coordinates. Unused entries (beyond the rank) stay zero so that
/// whole-array comparison is exact.
struct AffineMap {
  std::array<std::int64_t, kMaxRank * kMaxRank> linear{};
  std::array<std::int64_t, kMaxRank> translation{};

  bool operator==(const AffineMap&) const = default;
};

/// A group element, realized through its action on V.
///
/// Under this realization the alcove of w is w(A0); s is a left descent
/// of w exactly when the wall of s separates A0 and w(A0).
class Element {
 public:
  Element() = default;
  Element(const AffineMap& map, int length) : map_(map), length_(length) {}

  const AffineMap& map() const { return map_; }
  int length() const { return length_; }

  bool operator==(const Element& other) const { return map_ == other.map_; }

 private:
  AffineMap map_{};
  int length_ = 0;
};

struct ElementHash {
  std::size_t operator()(const Element& w) const noexcept;
};

using ElementSet = std::unordered_set<Element, ElementHash>;

/// Crystallographic Cartan data of an affine Weyl group together with the
/// derived root-system geometry.
struct GroupData {
  std::string name;
  int rank = 0;  // rank of the finite root system
  /// cartan[i][j] = <alpha_j, alpha_i^vee>.
  std::vector<std::vector<int>> cartan;
  /// Coxeter matrix on the rank+1 generators; 0 encodes infinity.
  std::vector<std::vector<int>> coxeter_matrix;
  int affine_node = 0;
  /// Per-generator weights c_s.
  std::vector<int> weights;

  /// Symmetric form on simple-root coordinates: form[i][j] = B(alpha_i, alpha_j).
  std::vector<std::vector<std::int64_t>> form;
  /// Positive roots in simple-root coordinates, sorted by height.
  std::vector<std::vector<std::int64_t>> positive_roots;
  /// coroot_rows[k] . x = <x, beta_k^vee> for x in simple-root coordinates.
  std::vector<std::vector<std::int64_t>> coroot_rows;
  /// Index (into positive_roots) of the root whose coroot is highest.
  int highest_coroot_root = 0;
  /// Generator -> finite simple root index, or -1 for the affine node.
  std::vector<int> simple_root_of;

  /// Interior point of A0 (its barycenter) as base_point / denominator.
  std::vector<std::int64_t> base_point;
  std::int64_t denominator = 1;

  int generator_count() const { return rank + 1; }
};

/// Builds GroupData from a finite Cartan matrix. Throws Error on invalid
/// data (non-crystallographic, unsupported rank, inconsistent weights).
GroupData make_group_data(std::string name,
                          std::vector<std::vector<int>> cartan,
                          int affine_node, std::vector<int> weights);

/// Affine G2 with s1 on the long simple root, s2 on the short one and s3
/// the affine reflection: (s1 s2)^6 = (s2 s3)^3 = (s1 s3)^2 = 1.
GroupData g2_preset(int a = 1, int b = 1);

/// Named presets: "G2", "A2", "B2", "A1".
GroupData preset(const std::string& name);

/// Loads {"name", "cartan", "affine_node", "weights", optional
/// "coxeter_matrix" (validated)} from JSON.
GroupData group_data_from_json(const nlohmann::json& config);

/// Exact arithmetic and combinatorics of one affine Weyl group.
/// Immutable after construction; safe to share across threads.
class Group {
 public:
  explicit Group(GroupData data);

  const GroupData& data() const { return data_; }
  int rank() const { return data_.rank; }
  int generator_count() const { return data_.rank + 1; }

  Element identity() const;
  Element generator(Generator s) const;
  /// Product of the letters; the word need not be reduced.
  Element from_word(std::span<const Generator> word) const;
  /// Parses a digit string of 1-based generator indices ("" is e).
  Element parse(const std::string& digits) const;

  /// Element with the given affine map; the map must belong to the group.
  Element from_map(const AffineMap& map) const;

  Element multiply(const Element& x, const Element& y) const;
  Element left_multiply(Generator s, const Element& w) const;
  Element right_multiply(const Element& w, Generator s) const;
  Element inverse(const Element& w) const;
  Element power(const Element& w, int exponent) const;

  bool is_left_descent(Generator s, const Element& w) const;
  GeneratorSet left_descents(const Element& w) const;
  GeneratorSet right_descents(const Element& w) const;

  /// ShortLex-least reduced word.
  Word reduced_word(const Element& w) const;
  /// 1-based digit string of the ShortLex-least reduced word.
  std::string to_string(const Element& w) const;

  bool is_reduced_product(const Element& x, const Element& y) const;

  /// Bruhat order by the lifting recursion along left descents of w.
  bool bruhat_leq(const Element& y, const Element& w) const;

  /// Elements z <= w, by the subword closure over a reduced word of w.
  ElementSet lower_cone(const Element& w) const;
  /// {z : y <= z <= w}; empty when y is not below w.
  ElementSet interval(const Element& y, const Element& w) const;
  /// Elements of length exactly length(w) - 1 below w.
  std::vector<Element> coatoms(const Element& w) const;
  /// All w with length(w) <= max_length.
  std::vector<Element> ball(int max_length) const;

  /// Image of the base point, scaled by the denominator.
  std::vector<std::int64_t> scaled_image(const Element& w) const;
  /// <w(x0), beta_k^vee> as an exact rational.
  Rational pairing(const Element& w, int root_index) const;
  /// Exact image of the base point.
  std::vector<Rational> base_image(const Element& w) const;

  /// Applies the affine map of w to a rational point.
  std::vector<Rational> apply(const Element& w,
                              std::span<const Rational> point) const;

  /// True when the linear part of w is the identity.
  bool has_trivial_linear_part(const Element& w) const;

  /// Parameter class of each generator: generators joined by an odd
  /// Coxeter bond share a class. Classes are numbered from 0 in order of
  /// first appearance.
  std::vector<int> conjugacy_classes() const;

 private:
  AffineMap compose(const AffineMap& f, const AffineMap& g) const;
  int compute_length(const AffineMap& map) const;
  std::int64_t scaled_pairing(const AffineMap& map, int root_index) const;

  GroupData data_;
  std::vector<AffineMap> generators_;
};

nlohmann::json to_json(const Group& group, const Element& w);

}  // namespace klcells

#endif
