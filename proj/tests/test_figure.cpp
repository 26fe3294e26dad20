#include <fstream>
#include <sstream>

#include "doctest.h"
#include "klcells/cells.hpp"
#include "klcells/figure.hpp"
#include "svg_check.hpp"

using namespace klcells;

namespace {

std::map<std::string, std::string> read_golden() {
  std::ifstream in(std::string(KLCELLS_SOURCE_DIR) + "/tests/golden/figure2_classification.csv");
  REQUIRE(in);
  std::map<std::string, std::string> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    std::string word = line.substr(0, comma);
    out[word == "e" ? "" : word] = line.substr(comma + 1);
  }
  return out;
}

std::map<std::string, std::string> uniform(const Group& g, int max_length) {
  std::map<std::string, std::string> out;
  for (const Element& w : g.ball(max_length)) out[g.to_string(w)] = "rest";
  return out;
}

}  // namespace

TEST_CASE("classification of ball(12) matches the frozen snapshot") {
  auto golden = read_golden();
  CHECK(golden.size() == 189);
  CHECK(classify_ball(Group(g2_preset(5, 1)), 12) == golden);
  CHECK(classify_ball(Group(g2_preset(1, 1)), 12) == golden);
}

TEST_CASE("the fundamental alcove alone") {
  Group g(g2_preset());
  std::string svg = render_alcove_map(g, uniform(g, 0), 0);
  CHECK(svgcheck::well_formed(svg).empty());
  CHECK(svgcheck::count(svg, "<polygon") == 1);
  CHECK(svgcheck::count(svg, "data-word=\"e\"") == 1);
}

TEST_CASE("alcove map structure") {
  Group g(g2_preset(5, 1));
  FigureOptions options;
  options.title = "test";
  options.region_labels = lowest_cell_labels(g);
  options.arrows = strip_arrows(g);
  std::string svg = render_alcove_map(g, classify_ball(g, 10), 10, options);
  CAPTURE(svgcheck::well_formed(svg));
  CHECK(svgcheck::well_formed(svg).empty());
  CHECK(svgcheck::count(svg, "<polygon") == g.ball(10).size());
  CHECK(svgcheck::count(svg, "data-label=") == g.ball(10).size());
  CHECK(svgcheck::count(svg, "class=\"region-label\"") == 12);
  CHECK(svgcheck::count(svg, "class=\"arrow\"") == 12);
  for (int i = 1; i <= 12; ++i) CHECK(svgcheck::count(svg, ">A" + std::to_string(i) + "<") == 1);
  for (int i = 1; i <= 6; ++i) {
    CHECK(svgcheck::count(svg, ">B" + std::to_string(i) + "<") == 1);
    CHECK(svgcheck::count(svg, ">C" + std::to_string(i) + "<") == 1);
  }
  CHECK(svgcheck::count(svg, "-0.000000") == 0);
  CHECK(render_alcove_map(g, classify_ball(g, 10), 10, options) == svg);
}

TEST_CASE("highlighted region") {
  Group g(g2_preset());
  FigureOptions options;
  options.highlight = g.parse("321212");
  std::string svg = render_alcove_map(g, uniform(g, 8), 8, options);
  CHECK(svgcheck::well_formed(svg).empty());
  CHECK(svgcheck::count(svg, "class=\"wall\"") > 0);
}

TEST_CASE("rendering rejects incomplete input") {
  Group g(g2_preset());
  auto partial = uniform(g, 3);
  CHECK_THROWS_AS(render_alcove_map(g, partial, 4), Error);
  Group a1(preset("A1"));
  CHECK_THROWS_AS(render_alcove_map(a1, uniform(a1, 2), 2), Error);
}

TEST_CASE("the well-formedness check itself") {
  CHECK(svgcheck::well_formed("<a><b/></a>").empty());
  CHECK_FALSE(svgcheck::well_formed("<a><b></a>").empty());
  CHECK_FALSE(svgcheck::well_formed("<a></a><a/>").empty());
  CHECK_FALSE(svgcheck::well_formed("<a x=\"1></a>").empty());
}
