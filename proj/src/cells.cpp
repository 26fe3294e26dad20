#include "klcells/cells.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

namespace klcells {

namespace {

const char* kPi[] = {"",         "3",         "23",         "123",         "2123",         "32123",
                     "12123",    "312123",    "2312123",    "12312123",    "212312123",    "3212312123"};
const char* kW1[] = {"", "1", "12", "121", "1212", "12121"};
const char* kW2[] = {"", "2", "21", "212", "2121", "21212"};

std::string family_name(Family f) { return f == Family::C ? "C" : "B"; }

/// job(0), ..., job(n - 1) on up to `threads` workers (0 = one per core);
/// results come back in job order.
template <class T>
std::vector<T> run_parallel(std::size_t n, int threads, const std::function<T(std::size_t)>& job) {
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        slots[k].emplace(job(k));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::size_t count = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
  count = std::min(count, std::max<std::size_t>(n, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
  std::vector<T> out;
  out.reserve(n);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

int simple_root_index(const Group& group, int k) {
  const auto& roots = group.data().positive_roots;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    bool unit = true;
    for (int c = 0; c < group.rank(); ++c) unit = unit && roots[r][c] == (c == k ? 1 : 0);
    if (unit) return static_cast<int>(r);
  }
  throw Error("simple root missing");
}

Rational coroot_value(const Group& group, int root, const std::vector<Rational>& x) {
  Rational sum(0);
  const auto& row = group.data().coroot_rows[root];
  for (int c = 0; c < group.rank(); ++c) sum += Rational(row[c]) * x[c];
  return sum;
}

bool word_less(const Group& group, const Element& a, const Element& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  return group.reduced_word(a) < group.reduced_word(b);
}

}  // namespace

Fixtures Fixtures::g2(const Group& group) {
  if (group.generator_count() != 3 || group.data().coxeter_matrix[0][1] != 6)
    throw Error("the G2 fixtures need the G2 preset");
  Fixtures fx;
  fx.u1 = group.parse("1212312123");
  fx.u = group.parse("212123");
  fx.y = group.parse("3212312123");
  fx.w0 = group.parse("121212");
  for (const char* z : kPi) fx.pi.push_back(group.parse(z));
  for (const char* z : kW1) fx.w1.push_back(group.parse(z));
  for (const char* z : kW2) fx.w2.push_back(group.parse(z));
  return fx;
}

Element family_element(const Group& group, const Fixtures& fx, Family f, const Element& z, int r, int i) {
  if (i < 1 || i > 6) throw Error("coset index must be in 1..6");
  return group.multiply(group.multiply(z, group.power(fx.translation(f), r)), fx.coset(f)[i - 1]);
}

IntervalSpec family_interval(const Group& group, const Fixtures& fx, Family f, int k, int i, int r) {
  if (k != 1 && k != 2) throw Error("interval index k must be 1 or 2");
  IntervalSpec out;
  out.name = family_name(f) + "-" + std::to_string(k) + "-" + std::to_string(i);
  if (f == Family::C) {
    out.s = 0;
    if (k == 1) {
      out.bottom = family_element(group, fx, f, group.parse("3"), r, i);
      out.top = family_element(group, fx, f, fx.y, r, i);
    } else {
      out.bottom = family_element(group, fx, f, group.parse("312123"), r, i);
      out.top = family_element(group, fx, f, group.multiply(fx.y, group.parse("12123")), r, i);
    }
  } else {
    out.s = 1;
    if (k == 1) {
      out.bottom = family_element(group, fx, f, group.parse("23"), r, i);
      out.top = family_element(group, fx, f, fx.y, r, i);
    } else {
      out.bottom = family_element(group, fx, f, group.parse("32123"), r, i);
      out.top = family_element(group, fx, f, group.parse("3212123"), r + 1, i);
    }
  }
  return out;
}

IntervalSpec extra_interval(const Group& group, const Fixtures& fx, int index, int i, int r) {
  IntervalSpec out;
  out.name = "E-" + std::to_string(index) + "-" + std::to_string(i);
  auto at = [&](const char* z, int e) { return family_element(group, fx, Family::B, group.parse(z), e, i); };
  switch (index) {
    case 1:
      out = {out.name, at("123", r), at("23212123", r), 0};
      break;
    case 2:
      out = {out.name, at("23", r), at("3", r + 1), 1};
      break;
    case 3:
      out = {out.name, at("123", r), at("32123", r), 0};
      break;
    default:
      throw Error("extra interval index must be in 1..3");
  }
  return out;
}

IntervalSpec named_interval(const Group& group, const Fixtures& fx, const std::string& name, int r) {
  int a = 0;
  int b = 0;
  char tag = 0;
  char tail = 0;
  if (std::sscanf(name.c_str(), "%c-%d-%d%c", &tag, &a, &b, &tail) != 3)
    throw Error("interval name must look like I-1-1, B-2-3 or E-1-4: " + name);
  switch (tag) {
    case 'I':
    case 'C':
      return family_interval(group, fx, Family::C, a, b, r);
    case 'B':
      return family_interval(group, fx, Family::B, a, b, r);
    case 'E':
      return extra_interval(group, fx, a, b, r);
    default:
      throw Error("unknown interval family: " + name);
  }
}

OrbitData family_orbit(const Group& group, const Fixtures& fx, Family f) {
  return omega_orbit(group, fx.translation(f));
}

std::vector<LeftEdge> left_edges(KLContext& ctx, const Element& w, const ElementSet& ball, bool* truncated) {
  const Group& g = ctx.group();
  std::vector<LeftEdge> out;
  ElementId wid = ctx.id(w);
  for (Generator s = 0; s < g.generator_count(); ++s) {
    if (g.is_left_descent(s, w)) continue;
    Element sw = g.left_multiply(s, w);
    if (ball.contains(sw)) {
      out.push_back({w, sw, s, GammaPoly::constant(1)});
    } else if (truncated) {
      *truncated = true;
    }
    ctx.fill_m_below(s, wid);
    const IntervalPoset& I = ctx.interval(ctx.id(g.identity()), wid);
    std::vector<ElementId> members = I.members;
    for (ElementId z : members) {
      if (z == wid || !ctx.pool().has_left_descent(z, s)) continue;
      const GammaPoly& m = ctx.m_poly(s, z, wid);
      if (!m.is_zero()) out.push_back({w, ctx.pool().element(z), s, m});
    }
  }
  return out;
}

std::vector<int> strongly_connected_components(int n, const std::vector<std::vector<int>>& adjacency) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  Graph graph(n);
  for (int v = 0; v < n; ++v)
    for (int t : adjacency[v]) boost::add_edge(v, t, graph);
  std::vector<int> comp(n, -1);
  int components = n == 0 ? 0 : boost::strong_components(graph, comp.data());
  // renumber by smallest vertex
  std::vector<int> renumber(components, -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (renumber[comp[v]] < 0) renumber[comp[v]] = next++;
    comp[v] = renumber[comp[v]];
  }
  return comp;
}

CellDecomposition decompose(const std::shared_ptr<const Group>& group, const OrderSpec& order, int max_length) {
  const Group& g = *group;
  KLContext ctx(group, order);
  CellDecomposition out;
  out.max_length = max_length;
  out.vertices = g.ball(max_length);
  ElementSet ball(out.vertices.begin(), out.vertices.end());
  std::unordered_map<Element, int, ElementHash> index;
  for (std::size_t k = 0; k < out.vertices.size(); ++k) index.emplace(out.vertices[k], static_cast<int>(k));

  int n = static_cast<int>(out.vertices.size());
  std::vector<std::vector<int>> adjacency(n);
  out.boundary.assign(n, false);
  for (int k = 0; k < n; ++k) {
    bool truncated = false;
    for (auto& e : left_edges(ctx, out.vertices[k], ball, &truncated)) {
      adjacency[k].push_back(index.at(e.target));
      if (e.coefficient != GammaPoly::constant(1) || e.target.length() < e.source.length())
        out.span = std::max(out.span, e.source.length() - e.target.length());
      out.edges.push_back(std::move(e));
    }
    out.boundary[k] = truncated;
  }
  out.cell_of = strongly_connected_components(n, adjacency);
  int cells = n == 0 ? 0 : *std::max_element(out.cell_of.begin(), out.cell_of.end()) + 1;
  out.cells.assign(cells, {});
  out.provisional.assign(cells, false);
  for (int k = 0; k < n; ++k) {
    int c = out.cell_of[k];
    out.cells[c].push_back(k);
    // a path leaving the ball has to come back down through M-edges
    if (max_length - out.vertices[k].length() <= 2 * out.span) out.provisional[c] = true;
  }
  return out;
}

std::string to_csv(const Group& group, const CellDecomposition& cells) {
  std::ostringstream os;
  os << "word,cell,provisional\n";
  for (std::size_t k = 0; k < cells.vertices.size(); ++k) {
    int c = cells.cell_of[k];
    std::string word = group.to_string(cells.vertices[k]);
    os << (word.empty() ? "e" : word) << ',' << c << ',' << (cells.provisional[c] ? 1 : 0) << '\n';
  }
  return os.str();
}

std::vector<Rational> SweepResult::criticals() const {
  std::vector<Rational> out;
  for (const auto& p : points) out.push_back(p.ratio);
  return out;
}

bool SweepResult::all_nonzero() const {
  for (const auto& r : regions)
    if (!r.m_nonzero) return false;
  for (const auto& p : points)
    if (!p.nonzero) return false;
  return !regions.empty();
}

SweepResult ratio_sweep(const std::shared_ptr<const Group>& group, const Element& bottom, const Element& top,
                        Generator s, bool mirrored, int iteration_cap) {
  SweepResult out;
  out.mirrored = mirrored;
  auto run = [&](const OrderSpec& order, int variant, int c, int d, std::optional<Rational> e) {
    KLContext ctx(group, order);
    SweepRegion region;
    region.order = order;
    region.gamma_plus = ctx.gamma_plus_set(bottom, top, s);
    std::set<Monomial> all = region.gamma_plus.all();
    if (mirrored) all = mirror(all);
    region.certificate = check_star(all, variant, c, d, e);
    region.m = ctx.m_poly(s, bottom, top);
    region.m_nonzero = region.certificate.ok && !region.m.is_zero();
    region.critical_set = critical_ratios(all);
    return region;
  };

  // Q-dominant start: the smallest c/d for which the first variant holds
  SweepRegion first = run(mirrored ? OrderSpec::lex_q() : OrderSpec::lex_Q(), 1, 1, 1, std::nullopt);
  std::set<Monomial> all = first.gamma_plus.all();
  if (mirrored) all = mirror(all);
  Rational threshold(1);
  for (const auto& m : all)
    if (m.i > 0 && m.j < 0) threshold = std::max(threshold, Rational(-m.j, m.i));
  first.certificate = check_star(all, 1, static_cast<int>(threshold.numerator()),
                                 static_cast<int>(threshold.denominator()));
  first.m_nonzero = first.certificate.ok && !first.m.is_zero();
  first.lower = threshold;
  std::vector<Rational> critical{threshold};
  out.regions.push_back(std::move(first));
  if (!out.regions.back().certificate.ok) {
    out.diagnostic = "condition fails for the dominant order at " + to_string(*out.regions.back().certificate.witness);
  }

  Rational prev = threshold;
  int iterations = 0;
  while (out.diagnostic.empty() && prev > Rational(1)) {
    if (++iterations > iteration_cap) {
      out.diagnostic = "iteration cap reached at ratio " + to_string(prev);
      break;
    }
    Rational next(1);
    for (const Rational& e : out.regions.back().critical_set) {
      if (e < prev && e > next) next = e;
    }
    int c = static_cast<int>(next.numerator());
    int d = static_cast<int>(next.denominator());
    SweepRegion region = run(mirrored ? OrderSpec::ratio_mirror(c, d) : OrderSpec::ratio(c, d), 2, c, d, prev);
    region.lower = next;
    region.upper = prev;
    if (!region.certificate.ok)
      out.diagnostic = "condition fails on (" + to_string(next) + ", " + to_string(prev) + ") at " +
                       to_string(*region.certificate.witness);
    out.regions.push_back(std::move(region));
    critical.push_back(next);
    prev = next;
  }
  out.complete = out.diagnostic.empty() && prev == Rational(1);

  for (const Rational& x : critical) {
    WeightFunction wf = mirrored ? WeightFunction{static_cast<int>(x.denominator()), static_cast<int>(x.numerator())}
                                 : WeightFunction{static_cast<int>(x.numerator()), static_cast<int>(x.denominator())};
    KLContext ctx = KLContext::weighted(group, wf);
    SweepPoint p;
    p.ratio = x;
    p.weights = wf;
    p.m = as_single(ctx.m_poly(s, bottom, top));
    p.nonzero = !p.m.is_zero();
    out.points.push_back(std::move(p));
  }
  return out;
}

nlohmann::json to_json(const SweepResult& sweep) {
  nlohmann::json j;
  j["ratio"] = sweep.mirrored ? "b/a" : "a/b";
  j["complete"] = sweep.complete;
  j["all_nonzero"] = sweep.all_nonzero();
  if (!sweep.diagnostic.empty()) j["diagnostic"] = sweep.diagnostic;
  j["regions"] = nlohmann::json::array();
  for (const auto& r : sweep.regions) {
    nlohmann::json e;
    e["lower"] = to_string(r.lower);
    e["upper"] = r.upper ? nlohmann::json(to_string(*r.upper)) : nlohmann::json("inf");
    e["order"] = r.order.to_string();
    e["positive_cone"] = r.order.describe();
    e["certified"] = r.certificate.ok;
    if (r.certificate.witness) e["witness"] = to_string(*r.certificate.witness);
    e["m"] = to_json(r.m);
    e["m_nonzero"] = r.m_nonzero;
    e["gamma_plus"] = to_json(r.gamma_plus);
    e["critical_set"] = nlohmann::json::array();
    for (const auto& x : r.critical_set) e["critical_set"].push_back(to_string(x));
    j["regions"].push_back(e);
  }
  j["points"] = nlohmann::json::array();
  for (const auto& p : sweep.points) {
    j["points"].push_back({{"ratio", to_string(p.ratio)},
                           {"a", p.weights.a},
                           {"b", p.weights.b},
                           {"m", to_json(p.m)},
                           {"nonzero", p.nonzero}});
  }
  return j;
}

Element longest_finite_element(const Group& group) {
  Element w = group.identity();
  bool grew = true;
  while (grew) {
    grew = false;
    for (Generator s = 0; s < group.generator_count(); ++s) {
      if (group.data().simple_root_of[s] < 0 || group.is_left_descent(s, w)) continue;
      w = group.left_multiply(s, w);
      grew = true;
    }
  }
  return w;
}

bool lowest_cell_member(const Group& group, const Element& w) {
  GeneratorSet finite = 0;
  for (Generator s = 0; s < group.generator_count(); ++s)
    if (group.data().simple_root_of[s] >= 0) finite |= 1u << s;
  int floor_length = longest_finite_element(group).length();
  // search the prefixes x of w = x . z for one with every finite right descent
  ElementSet seen{w};
  std::vector<Element> stack{w};
  while (!stack.empty()) {
    Element x = stack.back();
    stack.pop_back();
    GeneratorSet rd = group.right_descents(x);
    if ((rd & finite) == finite) return true;
    for (Generator s = 0; s < group.generator_count(); ++s) {
      if (!((rd >> s) & 1u)) continue;
      Element y = group.right_multiply(x, s);
      if (y.length() >= floor_length && seen.insert(y).second) stack.push_back(y);
    }
  }
  return false;
}

LowestCellClassifier::LowestCellClassifier(const Group& group) : group_(&group) {
  w0_ = longest_finite_element(group);
  std::vector<int> simple;
  for (int k = 0; k < group.rank(); ++k) simple.push_back(simple_root_index(group, k));
  auto in_box = [&](const Element& v) {
    for (int r : simple) {
      Rational p = group.pairing(v, r);
      if (!(p > Rational(-1) && p < Rational(0))) return false;
    }
    return true;
  };
  if (!in_box(w0_)) throw Error("the alcove of w0 is not in the box");
  Element w0_inv = group.inverse(w0_);
  ElementSet seen{w0_};
  std::deque<Element> queue{w0_};
  while (!queue.empty()) {
    Element v = queue.front();
    queue.pop_front();
    Element b = group.multiply(w0_inv, v);
    if (!group.is_reduced_product(w0_, b)) throw Error("box element " + group.to_string(v) + " is not w0 . b");
    box_.push_back(b);
    for (Generator s = 0; s < group.generator_count(); ++s) {
      Element next = group.right_multiply(v, s);
      if (in_box(next) && seen.insert(next).second) queue.push_back(next);
    }
  }
  std::sort(box_.begin(), box_.end(), [&](const Element& a, const Element& b) { return word_less(group, a, b); });
}

std::optional<int> LowestCellClassifier::region(const Element& w) const {
  const Group& g = *group_;
  std::vector<Rational> p = g.base_image(g.inverse(w));
  std::optional<int> found;
  for (std::size_t k = 0; k < box_.size(); ++k) {
    std::vector<Rational> q = g.apply(box_[k], p);
    bool inside = true;
    for (int c = 0; c < g.rank() && inside; ++c)
      inside = coroot_value(g, simple_root_index(g, c), q) < Rational(0);
    if (!inside) continue;
    if (found) throw Error("overlapping chambers at " + g.to_string(w));
    found = static_cast<int>(k);
  }
  return found;
}

namespace {

/// w = z . u^r . w_i with z in Pi, r >= 1 and lengths adding.
std::optional<int> strip_index(const Group& g, const Fixtures& fx, Family f, const Element& w) {
  const Element& u = fx.translation(f);
  for (int i = 1; i <= 6; ++i) {
    for (int r = 1; r * u.length() <= w.length(); ++r) {
      Element tail = g.multiply(g.power(u, r), fx.coset(f)[i - 1]);
      Element z = g.multiply(w, g.inverse(tail));
      if (z.length() + tail.length() != w.length()) continue;
      if (std::find(fx.pi.begin(), fx.pi.end(), z) != fx.pi.end()) return i;
    }
  }
  return std::nullopt;
}

}  // namespace

std::map<std::string, std::string> classify_ball(const Group& group, int max_length) {
  LowestCellClassifier classifier(group);
  std::optional<Fixtures> fx;
  if (group.generator_count() == 3 && group.data().coxeter_matrix[0][1] == 6) fx = Fixtures::g2(group);
  std::map<std::string, std::string> out;
  for (const Element& w : group.ball(max_length)) {
    std::string label = "rest";
    if (lowest_cell_member(group, w)) {
      auto k = classifier.region(w);
      if (!k) throw Error("lowest-cell element outside every chamber: " + group.to_string(w));
      label = "A" + std::to_string(*k + 1);
    } else if (fx) {
      if (auto i = strip_index(group, *fx, Family::C, w)) {
        label = "C" + std::to_string(*i);
      } else if (auto i2 = strip_index(group, *fx, Family::B, w)) {
        label = "B" + std::to_string(*i2);
      }
    }
    out.emplace(group.to_string(w), label);
  }
  return out;
}

ChainCertificate chain_certificate(const std::shared_ptr<const Group>& group, const Fixtures& fx, Family f, int i,
                                   const WeightFunction& wf, int search_gap) {
  const Group& g = *group;
  ChainCertificate out;
  out.family = f;
  out.index = i;
  out.weights = wf;
  KLContext ctx = KLContext::weighted(group, wf);

  std::vector<std::pair<IntervalSpec, int>> candidates;
  for (int r = 6; r <= 8; ++r) {
    candidates.emplace_back(family_interval(g, fx, f, 1, i, r), r);
    if (r < 8) candidates.emplace_back(family_interval(g, fx, f, 2, i, r), r);
    if (f == Family::B) {
      candidates.emplace_back(extra_interval(g, fx, 1, i, r), r);
      candidates.emplace_back(extra_interval(g, fx, 3, i, r), r);
      if (r < 8) candidates.emplace_back(extra_interval(g, fx, 2, i, r), r);
    }
  }

  std::vector<Element> vertices;
  std::unordered_map<Element, int, ElementHash> index;
  auto vertex = [&](const Element& w) {
    auto [it, fresh] = index.emplace(w, static_cast<int>(vertices.size()));
    if (fresh) vertices.push_back(w);
    return it->second;
  };
  for (int r = 6; r <= 9; ++r)
    for (const Element& z : fx.pi) vertex(family_element(g, fx, f, z, r, i));

  std::vector<std::pair<int, int>> edges;
  auto describe = [&](const std::string& name, Generator s, const SingleLaurent& m) {
    return name + " (s" + std::to_string(s + 1) + "): " + m.to_string();
  };
  for (const auto& [spec, r] : candidates) {
    ElementId b = ctx.id(spec.bottom);
    ElementId t = ctx.id(spec.top);
    if (!ctx.m_admissible(spec.s, b, t)) continue;
    SingleLaurent m = as_single(ctx.m_poly(spec.s, b, t));
    if (m.is_zero()) continue;
    // the bottom occurs in C_s C_top
    edges.emplace_back(vertex(spec.top), vertex(spec.bottom));
    out.m_edges.push_back(describe(spec.name + " r=" + std::to_string(r), spec.s, m));
  }

  auto chained = [&]() {
    int n = static_cast<int>(vertices.size());
    std::vector<std::vector<int>> adjacency(n);
    for (auto [a, b] : edges) adjacency[a].push_back(b);
    for (int k = 0; k < n; ++k) {
      for (Generator s = 0; s < g.generator_count(); ++s) {
        if (g.is_left_descent(s, vertices[k])) continue;
        auto it = index.find(g.left_multiply(s, vertices[k]));
        if (it != index.end()) adjacency[k].push_back(it->second);
      }
    }
    std::vector<int> comp = strongly_connected_components(n, adjacency);
    int target = comp[index.at(family_element(g, fx, f, fx.pi.front(), 7, i))];
    for (int r = 7; r <= 8; ++r)
      for (const Element& z : fx.pi)
        if (comp[index.at(family_element(g, fx, f, z, r, i))] != target) return false;
    return true;
  };
  out.chained_by_named = out.chained = chained();
  if (out.chained || search_gap <= 0) return out;

  std::size_t n = vertices.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < n; ++k) {
      const Element& x = vertices[p];
      const Element& w = vertices[k];
      int gap = w.length() - x.length();
      if (gap < 1 || gap > search_gap) continue;
      for (Generator s = 0; s < g.generator_count(); ++s) {
        ElementId xi = ctx.id(x);
        ElementId wi = ctx.id(w);
        if (!ctx.m_admissible(s, xi, wi)) continue;
        SingleLaurent m = as_single(ctx.m_poly(s, xi, wi));
        if (m.is_zero()) continue;
        edges.emplace_back(static_cast<int>(k), static_cast<int>(p));
        out.extra_edges.push_back(describe(g.to_string(x) + " <- " + g.to_string(w), s, m));
      }
    }
  }
  out.chained = chained();
  return out;
}

Section6Report verify_section6(const std::shared_ptr<const Group>& group, const Section6Options& options) {
  const Group& g = *group;
  Fixtures fx = Fixtures::g2(g);
  Section6Report rep;
  std::ostringstream summary;
  auto fail = [&](const std::string& what) { rep.failures.push_back(what); };

  if (options.stability) {
    struct Job {
      Family f;
      int k;
      int i;
    };
    std::vector<Job> jobs;
    for (Family f : {Family::C, Family::B})
      for (int k = 1; k <= 2; ++k)
        for (int i : options.indices) jobs.push_back({f, k, i});
    std::vector<OrbitData> orbits{family_orbit(g, fx, Family::C), family_orbit(g, fx, Family::B)};
    auto results = run_parallel<StabilityReport>(jobs.size(), options.threads, [&](std::size_t n) {
      const Job& job = jobs[n];
      IntervalSpec a = family_interval(g, fx, job.f, job.k, job.i, 6);
      IntervalSpec b = family_interval(g, fx, job.f, job.k, job.i, 7);
      KLContext ctx(group, OrderSpec::lex_Q());
      return verify_stability(ctx, a.bottom, a.top, b.bottom, b.top, orbits[job.f == Family::C ? 0 : 1], 1);
    });
    nlohmann::json section = nlohmann::json::array();
    int passed = 0;
    for (std::size_t n = 0; n < jobs.size(); ++n) {
      const StabilityReport& sr = results[n];
      std::string name = family_interval(g, fx, jobs[n].f, jobs[n].k, jobs[n].i, 6).name;
      nlohmann::json j = to_json(g, sr);
      j["interval"] = name;
      section.push_back(j);
      if (sr.ok()) {
        ++passed;
      } else {
        fail("stability " + name + ": " + sr.counterexample);
      }
    }
    rep.json["stability"] = section;
    summary << "stability r=6 vs r=7: " << passed << "/" << jobs.size() << "\n";
  }

  if (options.sweeps) {
    struct Job {
      IntervalSpec spec;
      bool required;
      bool mirrored;
    };
    std::vector<Job> jobs;
    auto add = [&](const IntervalSpec& spec, bool required) {
      for (bool mirrored : {false, true}) jobs.push_back({spec, required, mirrored});
    };
    for (int k = 1; k <= 2; ++k)
      for (int i : options.indices) add(family_interval(g, fx, Family::C, k, i, 6), true);
    for (int k = 1; k <= 2; ++k)
      for (int i : options.indices) add(family_interval(g, fx, Family::B, k, i, 6), false);
    for (int n = 1; n <= 3; ++n)
      for (int i : options.indices) add(extra_interval(g, fx, n, i, 6), false);
    auto results = run_parallel<SweepResult>(jobs.size(), options.threads, [&](std::size_t n) {
      const Job& job = jobs[n];
      return ratio_sweep(group, job.spec.bottom, job.spec.top, job.spec.s, job.mirrored);
    });
    nlohmann::json section = nlohmann::json::array();
    int certified = 0;
    for (std::size_t n = 0; n < jobs.size(); ++n) {
      const Job& job = jobs[n];
      const SweepResult& sr = results[n];
      nlohmann::json j = to_json(sr);
      j["interval"] = job.spec.name;
      j["s"] = job.spec.s + 1;
      j["required"] = job.required;
      section.push_back(j);
      bool ok = sr.complete && sr.all_nonzero();
      if (ok) ++certified;
      if (job.required && !ok)
        fail("sweep " + job.spec.name + (job.mirrored ? " (b/a)" : " (a/b)") + ": " +
             (sr.diagnostic.empty() ? "M vanishes somewhere" : sr.diagnostic));
    }
    rep.json["sweeps"] = section;
    summary << "ratio sweeps certified nonzero on all of (0, inf): " << certified << "/" << jobs.size() << "\n";
  }

  if (options.chains) {
    struct Job {
      WeightFunction wf;
      Family f;
      int i;
    };
    std::vector<Job> jobs;
    for (const WeightFunction& wf : options.parameters)
      for (Family f : {Family::C, Family::B})
        for (int i : options.indices) jobs.push_back({wf, f, i});
    auto results = run_parallel<ChainCertificate>(jobs.size(), options.threads, [&](std::size_t n) {
      return chain_certificate(group, fx, jobs[n].f, jobs[n].i, jobs[n].wf, options.search_gap);
    });
    nlohmann::json section = nlohmann::json::array();
    int chained = 0;
    for (std::size_t n = 0; n < jobs.size(); ++n) {
      const Job& job = jobs[n];
      const ChainCertificate& cc = results[n];
      nlohmann::json j;
      j["family"] = family_name(job.f);
      j["i"] = job.i;
      j["a"] = job.wf.a;
      j["b"] = job.wf.b;
      j["chained"] = cc.chained;
      j["chained_by_named_intervals"] = cc.chained_by_named;
      j["m_edges"] = cc.m_edges;
      if (!cc.extra_edges.empty()) j["extra_edges"] = cc.extra_edges;
      section.push_back(j);
      if (cc.chained) {
        ++chained;
      } else {
        fail("chain " + family_name(job.f) + std::to_string(job.i) + " at (" + std::to_string(job.wf.a) + "," +
             std::to_string(job.wf.b) + ")");
      }
    }
    rep.json["chains"] = section;
    summary << "chain certificates: " << chained << "/" << jobs.size() << "\n";
  }

  if (options.census) {
    LowestCellClassifier classifier(g);
    std::vector<Element> ball = g.ball(options.census_length);
    ElementSet members;
    std::vector<int> counts(classifier.box().size(), 0);
    int mismatches = 0;
    std::unordered_map<Element, int, ElementHash> label;
    for (const Element& w : ball) {
      bool member = lowest_cell_member(g, w);
      auto k = classifier.region(w);
      if (member != k.has_value()) {
        ++mismatches;
        fail("census mismatch at " + g.to_string(w));
      }
      if (k) {
        ++counts[*k];
        label.emplace(w, *k);
      }
    }
    int crossings = 0;
    for (const auto& [w, k] : label) {
      for (Generator s = 0; s < g.generator_count(); ++s) {
        auto it = label.find(g.left_multiply(s, w));
        if (it != label.end() && it->second != k) ++crossings;
      }
    }
    if (crossings) fail("left multiplication crosses chambers " + std::to_string(crossings) + " times");
    nlohmann::json j;
    j["max_length"] = options.census_length;
    j["ball_size"] = ball.size();
    j["members"] = label.size();
    j["mismatches"] = mismatches;
    j["crossings"] = crossings;
    j["box"] = nlohmann::json::array();
    for (std::size_t k = 0; k < classifier.box().size(); ++k) {
      j["box"].push_back({{"label", "A" + std::to_string(k + 1)},
                          {"b", g.to_string(classifier.box()[k])},
                          {"count", counts[k]}});
      Element base = g.multiply(longest_finite_element(g), classifier.box()[k]);
      if (counts[k] == 0 && base.length() <= options.census_length) fail("empty chamber A" + std::to_string(k + 1));
    }
    rep.json["census"] = j;
    summary << "lowest cell census on ball(" << options.census_length << "): " << label.size() << " elements, "
            << classifier.box().size() << " chambers, " << mismatches << " mismatches\n";
  }
  rep.json["failures"] = rep.failures;
  summary << (rep.ok() ? "PASS" : "FAIL") << "\n";
  rep.summary = summary.str();
  return rep;
}

}  // namespace klcells
