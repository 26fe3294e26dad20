#ifndef KLCELLS_FIGURE_HPP
#define KLCELLS_FIGURE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klcells/coxeter.hpp"

namespace klcells {

/// A labeled ray drawn on the map; the ray is p + t d for t >= 0.
struct MapArrow {
  std::string label;
  std::vector<Rational> origin;
  std::vector<Rational> direction;
};

/// A labeled point inside an unbounded region, placed along a ray.
struct MapRegionLabel {
  std::string label;
  std::vector<Rational> origin;
  std::vector<Rational> direction;
};

struct FigureOptions {
  std::string title;
  /// Pixels per unit of length.
  double scale = 60.0;
  std::vector<MapArrow> arrows;
  std::vector<MapRegionLabel> region_labels;
  /// Highlights A0, the alcove of z and the half-space intersection of z.
  std::optional<Element> highlight;
};

/// SVG of the alcoves wA0 = w^-1 (A0) for w in ball(L), filled by label;
/// thick segments separate adjacent alcoves with different labels. The
/// classification maps reduced words to labels and must cover the ball.
/// Requires rank 2.
std::string render_alcove_map(const Group& group, const std::map<std::string, std::string>& classification,
                              int max_length, const FigureOptions& options = {});

/// Labels A1..A12 placed inside the chambers of the lowest two-sided cell.
std::vector<MapRegionLabel> lowest_cell_labels(const Group& group);

/// Arrows along the G2 translation strips, labeled B1..B6 and C1..C6.
std::vector<MapArrow> strip_arrows(const Group& group);

}  // namespace klcells

#endif
