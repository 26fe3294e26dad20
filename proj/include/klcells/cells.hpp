#ifndef KLCELLS_CELLS_HPP
#define KLCELLS_CELLS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "klcells/alcove.hpp"
#include "klcells/coxeter.hpp"
#include "klcells/gamma.hpp"
#include "klcells/hecke.hpp"

namespace klcells {

/// The two translation families used for G2.
enum class Family {
  C,  // u1 = s1s2s1s2s3s1s2s1s2s3 with W1
  B,  // u = s2s1s2s1s2s3 with W2
};

/// Named elements and element sets for the G2 left-cell analysis.
struct Fixtures {
  Element u1;
  Element u;
  Element y;
  Element w0;
  std::vector<Element> pi;  // 12 elements
  std::vector<Element> w1;  // 6 elements
  std::vector<Element> w2;  // 6 elements

  static Fixtures g2(const Group& group);

  const Element& translation(Family f) const { return f == Family::C ? u1 : u; }
  const std::vector<Element>& coset(Family f) const { return f == Family::C ? w1 : w2; }
};

/// An interval together with the generator whose M-polynomial is studied.
struct IntervalSpec {
  std::string name;
  Element bottom;
  Element top;
  Generator s = 0;
};

/// z . u^r . w_i for the family's translation and coset representatives (i is 1-based).
Element family_element(const Group& group, const Fixtures& fx, Family f, const Element& z, int r, int i);

/// I^r_{k,i} of the family (k in {1, 2}, i in [1, 6]).
IntervalSpec family_interval(const Group& group, const Fixtures& fx, Family f, int k, int i, int r);

/// The three further B-family intervals relevant when a/b > 2 (index 1..3).
IntervalSpec extra_interval(const Group& group, const Fixtures& fx, int index, int i, int r);

/// Parses "I-k-i" / "C-k-i" (family C), "B-k-i", or "E-n-i" (extra intervals), at exponent r.
IntervalSpec named_interval(const Group& group, const Fixtures& fx, const std::string& name, int r);

/// Conjugated orbit u_i = w_i^-1 u w_i of a family.
OrbitData family_orbit(const Group& group, const Fixtures& fx, Family f);

/// y <-_L w: C_y occurs in C_s C_w with the given nonzero coefficient.
struct LeftEdge {
  Element source;  // w
  Element target;  // y
  Generator s = 0;
  GammaPoly coefficient;
};

/// Left-preorder edges out of w. Sets *truncated when some sw lies outside
/// the ball. Self-loops are dropped.
std::vector<LeftEdge> left_edges(KLContext& ctx, const Element& w, const ElementSet& ball, bool* truncated = nullptr);

/// Strongly connected components of the left-preorder graph on a ball.
struct CellDecomposition {
  int max_length = 0;
  std::vector<Element> vertices;  // ball order
  std::vector<int> cell_of;       // vertex -> cell
  std::vector<std::vector<int>> cells;
  std::vector<bool> boundary;     // vertex has edges leaving the ball
  std::vector<bool> provisional;  // per cell
  std::vector<LeftEdge> edges;
  /// Largest length drop along an M-edge.
  int span = 1;
};

CellDecomposition decompose(const std::shared_ptr<const Group>& group, const OrderSpec& order, int max_length);

/// Components are numbered in order of their smallest vertex.
std::vector<int> strongly_connected_components(int vertex_count, const std::vector<std::vector<int>>& adjacency);

/// Rows "word,cell,provisional" sorted by vertex order; the identity is "e".
std::string to_csv(const Group& group, const CellDecomposition& cells);

/// One open ratio interval of a sweep with its certificate.
struct SweepRegion {
  Rational lower;
  std::optional<Rational> upper;  // none = infinity
  OrderSpec order = OrderSpec::lex_Q();
  GammaPlusSet gamma_plus;
  StarCheck certificate;
  GammaPoly m;
  bool m_nonzero = false;
  std::vector<Rational> critical_set;
};

/// Direct single-parameter evaluation at a critical ratio.
struct SweepPoint {
  Rational ratio;
  WeightFunction weights;
  SingleLaurent m;
  bool nonzero = false;
};

struct SweepResult {
  bool mirrored = false;  // ratios are b/a instead of a/b
  std::vector<SweepRegion> regions;
  std::vector<SweepPoint> points;
  bool complete = false;
  std::string diagnostic;

  /// Critical ratios in descending order.
  std::vector<Rational> criticals() const;
  bool all_nonzero() const;
};

/// Descends from the Q-dominant order through ratio orders, as long as each
/// step certifies condition (*), until the ratio reaches 1.
SweepResult ratio_sweep(const std::shared_ptr<const Group>& group, const Element& bottom, const Element& top,
                        Generator s, bool mirrored = false, int iteration_cap = 64);

nlohmann::json to_json(const SweepResult& sweep);

/// Longest element of the finite parabolic subgroup.
Element longest_finite_element(const Group& group);

/// Whether w = z' . w0 . z for some z, z' with lengths adding.
bool lowest_cell_member(const Group& group, const Element& w);

/// Splits the lowest two-sided cell into the translated chambers attached
/// to the alcoves of w0 . b inside the box -1 < <x, alpha_i^vee> < 0.
class LowestCellClassifier {
 public:
  explicit LowestCellClassifier(const Group& group);

  /// The b's, sorted by length then word.
  const std::vector<Element>& box() const { return box_; }
  /// 0-based region index, from the position of the alcove of w^-1.
  std::optional<int> region(const Element& w) const;

 private:
  const Group* group_;
  Element w0_;
  std::vector<Element> box_;
};

/// Labels "A1".."A12" for the lowest cell; "B<i>", "C<i>" for members of
/// the translation strips (z . u^r . w_i with z in Pi, r >= 1); "rest"
/// otherwise.
std::map<std::string, std::string> classify_ball(const Group& group, int max_length);

struct ChainCertificate {
  Family family = Family::C;
  int index = 0;  // i
  WeightFunction weights;
  bool chained = false;
  /// Whether the named intervals alone chain the vertices.
  bool chained_by_named = false;
  std::vector<std::string> m_edges;  // "bottom <- top (s): value"
  /// Nonzero M^s between vertices found by the fallback pair search.
  std::vector<std::string> extra_edges;
};

/// Checks that z . u^r . w_i (z in Pi, r = 7, 8) fall into one strongly
/// connected component of the graph of left multiplications and the
/// nonzero M-edges of the family intervals (r = 6, 7, 8). When they do not,
/// and search_gap > 0, every admissible vertex pair (x, w) with
/// l(w) - l(x) <= search_gap is tried as well.
ChainCertificate chain_certificate(const std::shared_ptr<const Group>& group, const Fixtures& fx, Family f, int i,
                                   const WeightFunction& wf, int search_gap = 7);

struct Section6Options {
  bool stability = true;
  bool sweeps = true;
  bool chains = true;
  bool census = true;
  std::vector<WeightFunction> parameters{{1, 1}, {3, 1}, {1, 3}, {5, 2}};
  int census_length = 14;
  int search_gap = 7;
  std::vector<int> indices{1, 2, 3, 4, 5, 6};
  /// Worker threads for independent intervals; 0 = one per core.
  int threads = 0;
};

struct Section6Report {
  nlohmann::json json;
  std::vector<std::string> failures;
  std::string summary;

  bool ok() const { return failures.empty(); }
};

Section6Report verify_section6(const std::shared_ptr<const Group>& group, const Section6Options& options = {});

}  // namespace klcells

#endif
