#include "klcells/figure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "klcells/alcove.hpp"
#include "klcells/cells.hpp"

namespace klcells {

namespace {

using Point = std::array<double, 2>;

/// Euclidean images of the simple roots, from the Gram matrix.
struct Embedding {
  Point e0{};
  Point e1{};

  explicit Embedding(const Group& group) {
    const auto& f = group.data().form;
    double b00 = static_cast<double>(f[0][0]);
    double b01 = static_cast<double>(f[0][1]);
    double b11 = static_cast<double>(f[1][1]);
    e0 = {std::sqrt(b00), 0.0};
    e1 = {b01 / std::sqrt(b00), std::sqrt(b11 - b01 * b01 / b00)};
  }

  Point operator()(const std::vector<Rational>& x) const {
    double a = boost::rational_cast<double>(x[0]);
    double b = boost::rational_cast<double>(x[1]);
    return {a * e0[0] + b * e1[0], a * e0[1] + b * e1[1]};
  }
};

double norm(Point p) { return std::hypot(p[0], p[1]); }

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kPalette[] = {"#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4",
                          "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff",
                          "#9a6324", "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1"};

std::string fill_for(const std::string& label, std::map<std::string, int>& assigned) {
  if (label.empty() || label == "rest") return "#f2f2f2";
  auto [it, fresh] = assigned.emplace(label, static_cast<int>(assigned.size()));
  return kPalette[it->second % std::size(kPalette)];
}

std::vector<Rational> linear_image(const Group& group, const Element& w, const std::vector<Rational>& v) {
  std::vector<Rational> zero(group.rank(), Rational(0));
  std::vector<Rational> a = group.apply(w, v);
  std::vector<Rational> b = group.apply(w, zero);
  for (int c = 0; c < group.rank(); ++c) a[c] -= b[c];
  return a;
}

/// Point o + t d with |o + t d| = radius, t >= 0; o when no such t exists.
Point along(Point o, Point d, double radius) {
  double a = d[0] * d[0] + d[1] * d[1];
  double b = 2 * (o[0] * d[0] + o[1] * d[1]);
  double c = o[0] * o[0] + o[1] * o[1] - radius * radius;
  double disc = b * b - 4 * a * c;
  if (a == 0 || disc < 0) return o;
  double t = (-b + std::sqrt(disc)) / (2 * a);
  if (t < 0) return o;
  return {o[0] + t * d[0], o[1] + t * d[1]};
}

}  // namespace

std::string render_alcove_map(const Group& group, const std::map<std::string, std::string>& classification,
                              int max_length, const FigureOptions& options) {
  if (group.rank() != 2) throw Error("alcove maps need rank 2");
  Embedding embed(group);
  std::vector<Element> ball = group.ball(max_length);
  std::vector<RationalVector> a0 = fundamental_vertices(group);

  // walls of A0: the vertices fixed by each generator
  std::vector<std::vector<int>> wall(group.generator_count());
  for (Generator s = 0; s < group.generator_count(); ++s)
    for (int v = 0; v < static_cast<int>(a0.size()); ++v)
      if (group.apply(group.generator(s), a0[v]) == a0[v]) wall[s].push_back(v);

  struct Alcove {
    Element w;
    std::string word;
    std::string label;
    std::vector<Point> corners;
    Point center;
  };
  std::vector<Alcove> alcoves;
  std::unordered_map<Element, int, ElementHash> index;
  double radius = 0;
  for (const Element& w : ball) {
    Alcove a;
    a.w = w;
    a.word = group.to_string(w);
    auto it = classification.find(a.word);
    if (it == classification.end()) throw Error("classification misses " + (a.word.empty() ? "e" : a.word));
    a.label = it->second.empty() ? "rest" : it->second;
    Element inv = group.inverse(w);
    for (const auto& v : a0) {
      a.corners.push_back(embed(group.apply(inv, v)));
      radius = std::max(radius, norm(a.corners.back()));
    }
    a.center = embed(group.base_image(inv));
    index.emplace(w, static_cast<int>(alcoves.size()));
    alcoves.push_back(std::move(a));
  }
  radius *= 1.08;
  double s = options.scale;
  double half = radius * 1.25 * s;
  auto px = [&](Point p) { return num(p[0] * s) + "," + num(-p[1] * s); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(2 * half) << "\" height=\"" << num(2 * half)
     << "\" viewBox=\"" << num(-half) << " " << num(-half) << " " << num(2 * half) << " " << num(2 * half) << "\">\n";
  os << "<title>" << escape(options.title) << "</title>\n";
  os << "<defs><marker id=\"head\" markerWidth=\"10\" markerHeight=\"10\" refX=\"8\" refY=\"5\" orient=\"auto\">"
        "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#000000\"/></marker></defs>\n";

  std::map<std::string, int> assigned;
  os << "<g id=\"alcoves\" stroke=\"#999999\" stroke-width=\"0.5\">\n";
  for (const auto& a : alcoves) {
    os << "<polygon points=\"";
    for (std::size_t k = 0; k < a.corners.size(); ++k) os << (k ? " " : "") << px(a.corners[k]);
    os << "\" fill=\"" << fill_for(a.label, assigned) << "\" data-word=\"" << (a.word.empty() ? "e" : a.word)
       << "\" data-label=\"" << escape(a.label) << "\"/>\n";
  }
  os << "</g>\n";

  // hyperplanes meeting the disc
  const auto& d = group.data();
  os << "<g id=\"hyperplanes\" stroke=\"#555555\" stroke-width=\"0.6\">\n";
  for (std::size_t k = 0; k < d.positive_roots.size(); ++k) {
    std::vector<Rational> root{Rational(d.positive_roots[k][0]), Rational(d.positive_roots[k][1])};
    Point normal = embed(root);
    double len2 = normal[0] * normal[0] + normal[1] * normal[1];
    // <x, beta^vee> = 2 (x, beta) / (beta, beta)
    int bound = static_cast<int>(std::ceil(radius * std::sqrt(len2) * 2 / len2)) + 1;
    for (int n = -bound; n <= bound; ++n) {
      double offset = n * len2 / 2 / std::sqrt(len2);
      if (std::abs(offset) >= radius) continue;
      Point unit{normal[0] / std::sqrt(len2), normal[1] / std::sqrt(len2)};
      Point foot{unit[0] * offset, unit[1] * offset};
      double h = std::sqrt(radius * radius - offset * offset);
      Point p{foot[0] - unit[1] * h, foot[1] + unit[0] * h};
      Point q{foot[0] + unit[1] * h, foot[1] - unit[0] * h};
      os << "<line x1=\"" << num(p[0] * s) << "\" y1=\"" << num(-p[1] * s) << "\" x2=\"" << num(q[0] * s)
         << "\" y2=\"" << num(-q[1] * s) << "\"/>\n";
    }
  }
  os << "</g>\n";

  os << "<g id=\"boundaries\" stroke=\"#000000\" stroke-width=\"3\" stroke-linecap=\"round\">\n";
  for (const auto& a : alcoves) {
    Element inv = group.inverse(a.w);
    for (Generator g = 0; g < group.generator_count(); ++g) {
      Element next = group.left_multiply(g, a.w);
      if (next.length() < a.w.length()) continue;
      auto it = index.find(next);
      if (it == index.end() || alcoves[it->second].label == a.label) continue;
      Point p = embed(group.apply(inv, a0[wall[g][0]]));
      Point q = embed(group.apply(inv, a0[wall[g][1]]));
      os << "<line x1=\"" << num(p[0] * s) << "\" y1=\"" << num(-p[1] * s) << "\" x2=\"" << num(q[0] * s)
         << "\" y2=\"" << num(-q[1] * s) << "\"/>\n";
    }
  }
  os << "</g>\n";

  if (options.highlight) {
    const Element& z = *options.highlight;
    HalfspaceSet region = h_region(group, group.inverse(z));
    os << "<g id=\"highlight\">\n";
    for (const auto& a : alcoves) {
      if (!region.contains_alcove(group, group.inverse(a.w))) continue;
      os << "<polygon class=\"region\" points=\"";
      for (std::size_t k = 0; k < a.corners.size(); ++k) os << (k ? " " : "") << px(a.corners[k]);
      os << "\" fill=\"#6fa8dc\" fill-opacity=\"0.5\"/>\n";
    }
    for (const auto& b : region.bounds()) {
      std::vector<Rational> root{Rational(d.positive_roots[b.root][0]), Rational(d.positive_roots[b.root][1])};
      Point normal = embed(root);
      double len = norm(normal);
      double offset = static_cast<double>(b.bound) * len / 2;
      if (std::abs(offset) >= radius) continue;
      Point unit{normal[0] / len, normal[1] / len};
      Point foot{unit[0] * offset, unit[1] * offset};
      double h = std::sqrt(radius * radius - offset * offset);
      Point p{foot[0] - unit[1] * h, foot[1] + unit[0] * h};
      Point q{foot[0] + unit[1] * h, foot[1] - unit[0] * h};
      os << "<line class=\"wall\" x1=\"" << num(p[0] * s) << "\" y1=\"" << num(-p[1] * s) << "\" x2=\""
         << num(q[0] * s) << "\" y2=\"" << num(-q[1] * s)
         << "\" stroke=\"#0b5394\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
    }
    auto outline = [&](const Element& w, const char* cls, const char* fill) {
      Element inv = group.inverse(w);
      os << "<polygon class=\"" << cls << "\" points=\"";
      for (std::size_t k = 0; k < a0.size(); ++k) os << (k ? " " : "") << px(embed(group.apply(inv, a0[k])));
      os << "\" fill=\"" << fill << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
    };
    outline(group.identity(), "a0", "#38761d");
    outline(z, "z-alcove", "#cc0000");
    os << "</g>\n";
  }

  os << "<g id=\"regions\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">\n";
  for (const auto& r : options.region_labels) {
    Point p = along(embed(r.origin), embed(r.direction), radius * 0.8);
    os << "<text class=\"region-label\" x=\"" << num(p[0] * s) << "\" y=\"" << num(-p[1] * s) << "\">"
       << escape(r.label) << "</text>\n";
  }
  os << "</g>\n";

  os << "<g id=\"arrows\" stroke=\"#000000\" stroke-width=\"1.5\" font-family=\"sans-serif\" font-size=\"14\">\n";
  for (const auto& a : options.arrows) {
    Point o = embed(a.origin);
    Point dir = embed(a.direction);
    Point p = along(o, dir, radius * 0.5);
    Point q = along(o, dir, radius * 0.95);
    Point t = along(o, dir, radius * 1.05);
    os << "<line class=\"arrow\" x1=\"" << num(p[0] * s) << "\" y1=\"" << num(-p[1] * s) << "\" x2=\""
       << num(q[0] * s) << "\" y2=\"" << num(-q[1] * s) << "\" marker-end=\"url(#head)\"/>\n";
    os << "<text class=\"arrow-label\" stroke=\"none\" text-anchor=\"middle\" x=\"" << num(t[0] * s) << "\" y=\""
       << num(-t[1] * s) << "\">" << escape(a.label) << "</text>\n";
  }
  os << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

std::vector<MapRegionLabel> lowest_cell_labels(const Group& group) {
  LowestCellClassifier classifier(group);
  Element w0 = longest_finite_element(group);
  std::vector<Rational> inside = group.base_image(group.inverse(w0));
  std::vector<MapRegionLabel> out;
  for (std::size_t k = 0; k < classifier.box().size(); ++k) {
    const Element& b = classifier.box()[k];
    Element inv = group.inverse(b);
    MapRegionLabel label;
    label.label = "A" + std::to_string(k + 1);
    label.origin = group.base_image(group.inverse(group.multiply(w0, b)));
    label.direction = linear_image(group, inv, inside);
    out.push_back(std::move(label));
  }
  return out;
}

std::vector<MapArrow> strip_arrows(const Group& group) {
  Fixtures fx = Fixtures::g2(group);
  std::vector<MapArrow> out;
  for (Family f : {Family::B, Family::C}) {
    for (int i = 1; i <= 6; ++i) {
      auto at = [&](int r) {
        return group.base_image(group.inverse(family_element(group, fx, f, group.identity(), r, i)));
      };
      std::vector<Rational> p0 = at(0);
      std::vector<Rational> p1 = at(1);
      MapArrow a;
      a.label = (f == Family::B ? "B" : "C") + std::to_string(i);
      a.origin = p0;
      for (int c = 0; c < group.rank(); ++c) a.direction.push_back(p1[c] - p0[c]);
      out.push_back(std::move(a));
    }
  }
  return out;
}

}  // namespace klcells
