// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "klcells/alcove.hpp"
#include "klcells/cells.hpp"
#include "klcells/hecke.hpp"
#include "oracle.hpp"
#include "svg_check.hpp"

using namespace klcells;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::shared_ptr<const Group> g2() { return std::make_shared<const Group>(g2_preset()); }

oracle::Hecke oracle_for(KLContext& ctx) {
  std::vector<Monomial> params;
  for (Generator s = 0; s < ctx.group().generator_count(); ++s) params.push_back(ctx.parameter(s));
  OrderSpec order = ctx.order();
  return oracle::Hecke(ctx.group(), params, [order](Monomial m) { return order.is_positive(m); });
}

bool negative(const OrderSpec& order, const GammaPoly& p) {
  for (const auto& t : p.terms())
    if (!order.is_positive(t.m.inverse())) return false;
  return true;
}

Outcome headline() {
  auto g = g2();
  Fixtures fx = Fixtures::g2(*g);
  IntervalSpec spec = family_interval(*g, fx, Family::C, 1, 1, 6);
  KLContext ctx(g, OrderSpec::lex_Q());
  GammaPoly m = ctx.m_poly(spec.s, spec.bottom, spec.top);
  GammaPlusSet plus = ctx.gamma_plus_set(spec.bottom, spec.top, spec.s);
  Outcome out;
  out.ok = m == GammaPoly::constant(1);
  std::ostringstream os;
  os << "M^s1 = " << m.to_string() << ", |Gamma_+| = " << plus.all().size();
  for (Monomial g : plus.all()) {
    bool inside = (g.i == 0 && g.j > 0) || 3 * g.i + g.j >= 0;
    if (!inside) {
      out.ok = false;
      os << ", outside: " << to_string(g);
    }
  }
  out.detail = os.str();
  return out;
}

Outcome critical_chain() {
  auto g = g2();
  Fixtures fx = Fixtures::g2(*g);
  IntervalSpec spec = family_interval(*g, fx, Family::C, 1, 1, 6);
  SweepResult sweep = ratio_sweep(g, spec.bottom, spec.top, spec.s);
  std::vector<Rational> expected{Rational(3), Rational(2), Rational(3, 2), Rational(4, 3), Rational(5, 4), Rational(1)};
  Outcome out;
  std::ostringstream os;
  os << "criticals";
  for (const auto& c : sweep.criticals()) os << ' ' << to_string(c);
  out.ok = sweep.complete && sweep.criticals() == expected && sweep.regions.size() == expected.size();
  if (out.ok) {
    for (std::size_t k = 0; k < sweep.regions.size(); ++k) {
      const SweepRegion& r = sweep.regions[k];
      bool upper_ok = k == 0 ? !r.upper : (r.upper && *r.upper == expected[k - 1]);
      out.ok = out.ok && upper_ok && r.lower == expected[k] && r.certificate.ok && r.m_nonzero;
    }
  }
  out.ok = out.ok && sweep.all_nonzero();
  os << (sweep.all_nonzero() ? ", M nonzero at every critical ratio" : ", M vanishes somewhere");
  out.detail = os.str();
  return out;
}

Outcome stability() {
  auto g = g2();
  Fixtures fx = Fixtures::g2(*g);
  OrbitData orbit = family_orbit(*g, fx, Family::C);
  int passed = 0;
  Outcome out;
  for (int k = 1; k <= 2; ++k) {
    for (int i = 1; i <= 6; ++i) {
      IntervalSpec a = family_interval(*g, fx, Family::C, k, i, 6);
      IntervalSpec b = family_interval(*g, fx, Family::C, k, i, 7);
      KLContext ctx(g, OrderSpec::lex_Q());
      StabilityReport rep = verify_stability(ctx, a.bottom, a.top, b.bottom, b.top, orbit, 1);
      if (rep.ok()) {
        ++passed;
      } else {
        out.ok = false;
        out.detail += a.name + ": " + rep.counterexample + "; ";
      }
    }
  }
  out.detail += std::to_string(passed) + "/12 families agree between r=6 and r=7";
  return out;
}

Outcome shifted_samples() {
  auto g = g2();
  Fixtures fx = Fixtures::g2(*g);
  OrbitData orbit = family_orbit(*g, fx, Family::C);
  int passed = 0, with_m = 0, total = 0;
  Outcome out;
  for (int k : {1, 2}) {
    for (const ShiftSample& s : sample_shift_intervals(*g, orbit, 23, k, 20, 2, 6, 20231 + k)) {
      KLContext ctx(g, OrderSpec::lex_Q());
      StabilityReport rep = verify_stability(ctx, s.bottom1, s.top1, s.bottom2, s.top2, orbit, k);
      ++total;
      with_m += !rep.m_generators.empty();
      if (rep.ok()) {
        ++passed;
      } else {
        out.ok = false;
        out.detail += rep.counterexample + "; ";
      }
    }
  }
  out.detail += std::to_string(passed) + "/" + std::to_string(total) + " samples at r=23, " + std::to_string(with_m) +
                " with M-tables";
  return out;
}

Outcome defining_relations() {
  auto g = g2();
  auto ball = g->ball(7);
  long checks = 0, failures = 0;
  std::string first;
  auto record = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  };
  for (OrderSpec order : {OrderSpec::lex_Q(), OrderSpec::ratio(1, 1), OrderSpec::ratio(2, 1), OrderSpec::lex_q()}) {
    KLContext ctx(g, order);
    auto h = oracle_for(ctx);
    std::string tag = order.to_string() + " ";
    for (const Element& w : ball) {
      std::vector<Element> below;
      for (const Element& y : ball)
        if (g->bruhat_leq(y, w)) below.push_back(y);
      for (const Element& x : below) {
        // (i) the r-matrix inverts its bar
        GammaPoly sum;
        for (const Element& y : below)
          if (g->bruhat_leq(x, y)) sum += ctx.r_poly(y, w) * bar(ctx.r_poly(x, y));
        record(sum == (x == w ? GammaPoly::constant(1) : GammaPoly{}), tag + "r-inversion");
        // (ii) P is negative and satisfies the bar relation
        if (x == w) continue;
        GammaPoly p = ctx.p_poly(x, w);
        record(negative(order, p), tag + "P negative");
        GammaPoly rhs;
        for (const Element& y : below)
          if (g->bruhat_leq(x, y)) rhs += ctx.r_poly(x, y) * ctx.p_poly(y, w);
        record(bar(p) == rhs, tag + "P bar relation");
      }
      // (iii) M is bar-invariant and the defect is negative
      for (Generator s = 0; s < 3; ++s) {
        if (g->is_left_descent(s, w)) continue;
        for (const Element& y : below) {
          if (y == w || !g->is_left_descent(s, y)) continue;
          GammaPoly m = ctx.m_poly(s, y, w);
          record(bar(m) == m, tag + "M bar-invariant");
          GammaPoly defect = -(GammaPoly(ctx.parameter(s)) * ctx.p_poly(y, w));
          for (const Element& z : below)
            if (z != w && g->is_left_descent(s, z) && g->bruhat_leq(y, z)) defect += ctx.p_poly(y, z) * ctx.m_poly(s, z, w);
          record(negative(order, defect), tag + "M defect");
        }
      }
      // (iv) C_w is bar-invariant
      oracle::Vec c;
      for (const Element& y : below) oracle::add_to(c, y, ctx.p_poly(y, w));
      record(h.bar(c) == c, tag + "C bar-invariant");
    }
  }
  Outcome out;
  out.ok = failures == 0;
  out.detail = std::to_string(checks) + " checks over 4 orders, " + std::to_string(failures) + " failures";
  if (failures) out.detail += " (first: " + first + ")";
  return out;
}

Outcome specialization() {
  auto g = g2();
  auto ball = g->ball(7);
  std::mt19937_64 rng(6);
  struct Sample {
    Element y, w;
    Generator s;
  };
  std::vector<Sample> samples;
  while (samples.size() < 50) {
    const Element& w = ball[rng() % ball.size()];
    const Element& y = ball[rng() % ball.size()];
    if (!g->bruhat_leq(y, w)) continue;
    std::vector<Generator> ascents;
    for (Generator s = 0; s < 3; ++s)
      if (!g->is_left_descent(s, w)) ascents.push_back(s);
    samples.push_back({y, w, ascents[rng() % ascents.size()]});
  }
  int certified = 0, compared = 0, mismatches = 0;
  for (WeightFunction wf : {WeightFunction{3, 1}, WeightFunction{2, 1}, WeightFunction{1, 1}, WeightFunction{1, 2}}) {
    KLContext ctx(g, OrderSpec::ratio(wf.a, wf.b));
    auto h = oracle::single_parameter(*g, {wf.a, wf.b, wf.b});
    for (const Sample& smp : samples) {
      if (!check_specialization(ctx.gamma_plus_set(smp.y, smp.w, smp.s).all(), wf).ok) continue;
      ++certified;
      const IntervalPoset& I = ctx.interval(ctx.id(smp.y), ctx.id(smp.w));
      for (std::size_t k = 0; k < I.size(); ++k) {
        const Element& z2 = ctx.pool().element(I.members[k]);
        for (std::size_t p = 0; p <= k; ++p) {
          if (!I.leq(static_cast<int>(p), static_cast<int>(k))) continue;
          const Element& z1 = ctx.pool().element(I.members[p]);
          ++compared;
          if (specialize(ctx.p_poly(z1, z2), wf) != as_single(h.p(z1, z2))) ++mismatches;
          if (z1 == z2 || !g->is_left_descent(smp.s, z1) || g->is_left_descent(smp.s, z2)) continue;
          ++compared;
          if (specialize(ctx.m_poly(smp.s, z1, z2), wf) != as_single(h.c_product(smp.s, z2, z1))) ++mismatches;
        }
      }
    }
  }
  Outcome out;
  out.ok = mismatches == 0 && certified > 0;
  out.detail = std::to_string(certified) + "/200 (interval, weight) pairs certified, " + std::to_string(compared) +
               " entries compared, " + std::to_string(mismatches) + " mismatches";
  return out;
}

/// a is contained in b when every bound of b is implied by a bound of a on the same root.
bool boundwise_subset(const HalfspaceSet& a, const HalfspaceSet& b) {
  for (const auto& hb : b.bounds()) {
    bool implied = false;
    for (const auto& ha : a.bounds()) {
      if (ha.root != hb.root || ha.lower != hb.lower) continue;
      implied = hb.lower ? ha.bound >= hb.bound : ha.bound <= hb.bound;
    }
    if (!implied) return false;
  }
  return true;
}

Outcome geometry() {
  Group g(g2_preset());
  OrbitData orbit = omega_orbit(g, g.parse("1212312123"));
  int disjoint = 0, pairs = 0, nested = 0, nested_total = 0, lengths = 0;
  // Regions are taken for the inverse translations: the alcove attached to
  // an element here is the image of A0 under the inverse of its map.
  auto region = [&](int m, int r) { return h_region(g, g.inverse(g.power(orbit.companions[m], r))); };
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j)
        for (int r1 = 1; r1 <= 3; ++r1)
          for (int r2 = 1; r2 <= 3; ++r2) {
            ++pairs;
            disjoint += regions_disjoint(g, region(i, r1), region(j, r2));
          }
  for (int m = 0; m < 6; ++m) {
    IntVector back = orbit.vectors[m];
    for (auto& x : back) x = -x;
    for (int r = 1; r <= 3; ++r) {
      ++nested_total;
      HalfspaceSet a = region(m, r), b = region(m, r + 1);
      nested += boundwise_subset(b, a) && b == a.translated(g, back);
    }
    lengths += orbit.companions[m].length() == 10;
  }
  Outcome out;
  out.ok = disjoint == pairs && nested == nested_total && lengths == 6 && orbit.size() == 6;
  out.detail = std::to_string(disjoint) + "/" + std::to_string(pairs) + " disjoint pairs, " + std::to_string(nested) +
               "/" + std::to_string(nested_total) + " nested translates, " + std::to_string(lengths) +
               "/6 companions of length 10";
  return out;
}

Outcome combinatorics() {
  Group g(g2_preset());
  auto ball8 = g.ball(8);
  long pairs = 0, agree = 0;
  for (const Element& w : ball8) {
    ElementSet below = oracle::subword_products(g, w);
    for (const Element& y : ball8) {
      ++pairs;
      agree += g.bruhat_leq(y, w) == (below.count(y) > 0);
    }
  }
  std::unordered_map<Element, int, ElementHash> level{{g.identity(), 0}};
  std::vector<Element> frontier{g.identity()};
  for (int l = 1; l <= 10; ++l) {
    std::vector<Element> next;
    for (const Element& w : frontier)
      for (Generator s = 0; s < 3; ++s) {
        Element sw = g.left_multiply(s, w);
        if (level.emplace(sw, l).second) next.push_back(sw);
      }
    frontier = std::move(next);
  }
  auto ball10 = g.ball(10);
  long lengths_ok = 0;
  for (const Element& w : ball10) {
    bool ok = level.count(w) && level.at(w) == w.length() &&
              static_cast<int>(g.reduced_word(w).size()) == w.length() &&
              oracle::separating_hyperplanes(g, w) == w.length();
    lengths_ok += ok;
  }
  Outcome out;
  out.ok = agree == pairs && lengths_ok == static_cast<long>(ball10.size()) && level.size() == ball10.size();
  out.detail = std::to_string(agree) + "/" + std::to_string(pairs) + " Bruhat pairs on ball(8), " +
               std::to_string(lengths_ok) + "/" + std::to_string(ball10.size()) + " lengths on ball(10)";
  return out;
}

Outcome dihedral() {
  auto g = g2();
  KLContext ctx = KLContext::weighted(g, WeightFunction{1, 1});
  auto h = oracle::single_parameter(*g, {1, 1, 1});
  std::vector<Element> elements;
  for (const Element& w : g->ball(6))
    if (g->to_string(w).find('3') == std::string::npos) elements.push_back(w);
  int pairs = 0, agree = 0;
  for (const Element& w : elements)
    for (const Element& y : elements) {
      if (!g->bruhat_leq(y, w)) continue;
      ++pairs;
      SingleLaurent expected = SingleLaurent::monomial(y.length() - w.length());
      agree += specialize(ctx.p_poly(y, w), {1, 1}) == expected && as_single(h.p(y, w)) == expected;
    }
  Outcome out;
  out.ok = elements.size() == 12 && pairs == agree;
  out.detail = std::to_string(agree) + "/" + std::to_string(pairs) + " pairs in the dihedral subgroup of order " +
               std::to_string(elements.size());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome figure(const std::string& cli) {
  fs::path dir = fs::temp_directory_path() / "klcells_acceptance";
  fs::create_directories(dir);
  std::string base = "\"" + cli + "\" figure --parameters 5 1 -L 12 --output-dir \"" + dir.string() + "\" -o ";
  int rc1 = std::system((base + "first.svg 2>/dev/null").c_str());
  int rc2 = std::system((base + "second.svg 2>/dev/null").c_str());
  std::string a = slurp(dir / "first.svg"), b = slurp(dir / "second.svg");
  std::string problem = svgcheck::well_formed(a);
  std::size_t regions = 0, arrows = 0;
  for (int i = 1; i <= 12; ++i) regions += svgcheck::count(a, ">A" + std::to_string(i) + "</text>") == 1;
  for (int i = 1; i <= 6; ++i) {
    arrows += svgcheck::count(a, ">B" + std::to_string(i) + "</text>") == 1;
    arrows += svgcheck::count(a, ">C" + std::to_string(i) + "</text>") == 1;
  }
  arrows = std::min(arrows, svgcheck::count(a, "class=\"arrow\""));
  Outcome out;
  out.ok = rc1 == 0 && rc2 == 0 && !a.empty() && problem.empty() && regions == 12 && arrows == 12 && a == b;
  out.detail = (problem.empty() ? std::string("well-formed") : problem) + ", " + std::to_string(regions) +
               " A-labels, " + std::to_string(arrows) + " arrows, " + (a == b ? "byte-identical" : "outputs differ");
  fs::remove_all(dir);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "klcells";
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "headline M-value and Gamma_+ containment", headline},
      {2, "critical-ratio chain", critical_chain},
      {3, "stability at r=6", stability},
      {4, "translation stability at r=23", shifted_samples},
      {5, "defining relations on ball(7)", defining_relations},
      {6, "specialization consistency", specialization},
      {7, "geometry of translation regions", geometry},
      {8, "Bruhat order and length cross-validation", combinatorics},
      {9, "dihedral subgroup at equal parameters", dihedral},
      {10, "figure output", [&] { return figure(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    failed += !o.ok;
    std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": " << o.detail << " ("
              << std::fixed << std::setprecision(1) << seconds << " s)" << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed;
}
