#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "klcells/alcove.hpp"
#include "klcells/cells.hpp"
#include "klcells/coxeter.hpp"
#include "klcells/figure.hpp"
#include "klcells/gamma.hpp"
#include "klcells/hecke.hpp"

namespace fs = std::filesystem;
using namespace klcells;

namespace {

constexpr int kVerificationFailed = 1;
constexpr int kUsageError = 2;

struct RunConfig {
  std::string preset = "G2";
  std::string group_file;
  std::string order = "lexQ";
  std::vector<int> parameters;
  int max_length = 4;
  std::string output_dir = ".";
  std::string out;
  std::uint64_t seed = 1;
};

struct IntervalArgs {
  std::string interval;
  std::string bottom;
  std::string top;
  int s = 0;  // 1-based, 0 = from the interval name
  int r = 6;
};

std::shared_ptr<const Group> make_group(const RunConfig& cfg) {
  if (!cfg.group_file.empty()) {
    std::ifstream in(cfg.group_file);
    if (!in) throw Error("cannot read " + cfg.group_file);
    return std::make_shared<const Group>(group_data_from_json(nlohmann::json::parse(in)));
  }
  if (cfg.preset == "G2" && cfg.parameters.size() == 2)
    return std::make_shared<const Group>(g2_preset(cfg.parameters[0], cfg.parameters[1]));
  return std::make_shared<const Group>(preset(cfg.preset));
}

std::optional<WeightFunction> weights_of(const RunConfig& cfg) {
  if (cfg.parameters.empty()) return std::nullopt;
  if (cfg.parameters.size() != 2 || cfg.parameters[0] < 1 || cfg.parameters[1] < 1)
    throw Error("--parameters takes two positive integers a b");
  return WeightFunction{cfg.parameters[0], cfg.parameters[1]};
}

Element parse_element(const Group& g, const std::string& text) {
  return text == "e" ? g.identity() : g.parse(text);
}

std::string word(const Group& g, const Element& w) {
  std::string s = g.to_string(w);
  return s.empty() ? "e" : s;
}

fs::path output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("KLCELLS_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

/// Writes to the named file under the output directory; "-" or an empty
/// name with no default goes to stdout.
void emit(const RunConfig& cfg, const std::string& fallback, const std::string& text) {
  std::string name = cfg.out.empty() ? fallback : cfg.out;
  if (name.empty() || name == "-") {
    std::cout << text;
    return;
  }
  fs::path path = fs::path(name).is_absolute() ? fs::path(name) : output_dir(cfg) / name;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  std::cerr << "wrote " << path.string() << "\n";
}

IntervalSpec resolve_interval(const Group& g, const IntervalArgs& args) {
  IntervalSpec spec;
  if (!args.interval.empty()) {
    spec = named_interval(g, Fixtures::g2(g), args.interval, args.r);
  } else {
    if (args.bottom.empty() || args.top.empty()) throw Error("give --interval or both --bottom and --top");
    spec.name = args.bottom + ".." + args.top;
    spec.bottom = parse_element(g, args.bottom);
    spec.top = parse_element(g, args.top);
  }
  if (args.s > 0) {
    if (args.s > g.generator_count()) throw Error("--s out of range");
    spec.s = args.s - 1;
  }
  return spec;
}

void add_interval_options(CLI::App* cmd, IntervalArgs& args) {
  cmd->add_option("--interval", args.interval, "Named interval: I-k-i or C-k-i, B-k-i, E-n-i");
  cmd->add_option("--bottom", args.bottom, "Bottom element as a digit word (e for identity)");
  cmd->add_option("--top", args.top, "Top element as a digit word");
  cmd->add_option("--s", args.s, "Generator (1-based)")->check(CLI::PositiveNumber);
  cmd->add_option("-r,--exponent", args.r, "Translation exponent for named intervals")->check(CLI::NonNegativeNumber);
}

KLContext make_context(const std::shared_ptr<const Group>& g, const RunConfig& cfg) {
  if (auto wf = weights_of(cfg)) {
    if (g->generator_count() == 3 && g->data().coxeter_matrix[0][1] == 6) return KLContext::weighted(g, *wf);
    return KLContext::weighted(g, g->data().weights);
  }
  return KLContext(g, OrderSpec::parse(cfg.order));
}

std::string poly_text(const RunConfig& cfg, const GammaPoly& p) {
  return weights_of(cfg) ? as_single(p).to_string() : p.to_string();
}

int run_ball(const RunConfig& cfg) {
  auto g = make_group(cfg);
  std::ostringstream os;
  for (const Element& w : g->ball(cfg.max_length)) os << word(*g, w) << "\n";
  emit(cfg, "", os.str());
  return 0;
}

int run_pq_table(const RunConfig& cfg, const IntervalArgs& args) {
  auto g = make_group(cfg);
  IntervalSpec spec = resolve_interval(*g, args);
  KLContext ctx = make_context(g, cfg);
  const IntervalPoset& I = ctx.interval(ctx.id(spec.bottom), ctx.id(spec.top));
  if (I.size() == 0) throw Error("bottom is not below top");
  ctx.fill_p_tables(I);
  std::ostringstream os;
  os << "y\tw\tr\tP\n";
  for (std::size_t k = 0; k < I.size(); ++k) {
    for (std::size_t p = 0; p < k; ++p) {
      if (!I.leq(static_cast<int>(p), static_cast<int>(k))) continue;
      ElementId y = I.members[p];
      ElementId w = I.members[k];
      os << word(*g, ctx.pool().element(y)) << '\t' << word(*g, ctx.pool().element(w)) << '\t'
         << poly_text(cfg, ctx.r_poly(y, w)) << '\t' << poly_text(cfg, ctx.p_poly(y, w)) << '\n';
    }
  }
  emit(cfg, "", os.str());
  return 0;
}

int run_m_table(const RunConfig& cfg, const IntervalArgs& args) {
  auto g = make_group(cfg);
  IntervalSpec spec = resolve_interval(*g, args);
  KLContext ctx = make_context(g, cfg);
  const IntervalPoset& I = ctx.interval(ctx.id(spec.bottom), ctx.id(spec.top));
  if (I.size() == 0) throw Error("bottom is not below top");
  ctx.fill_m_tables(I, spec.s);
  std::ostringstream os;
  os << "s\ty\tw\tM\n";
  for (std::size_t k = 0; k < I.size(); ++k) {
    for (std::size_t p = 0; p < k; ++p) {
      ElementId y = I.members[p];
      ElementId w = I.members[k];
      if (!ctx.m_admissible(spec.s, y, w)) continue;
      os << spec.s + 1 << '\t' << word(*g, ctx.pool().element(y)) << '\t' << word(*g, ctx.pool().element(w)) << '\t'
         << poly_text(cfg, ctx.m_poly(spec.s, y, w)) << '\n';
    }
  }
  emit(cfg, "", os.str());
  return 0;
}

int run_interval_report(const RunConfig& cfg, const IntervalArgs& args) {
  auto g = make_group(cfg);
  IntervalSpec spec = resolve_interval(*g, args);
  KLContext ctx(g, OrderSpec::parse(cfg.order));
  IntervalReport rep = interval_report(ctx, spec.bottom, spec.top, spec.s);
  nlohmann::json j = to_json(*g, rep);
  j["order"] = ctx.order().to_string();
  emit(cfg, "", j.dump(2) + "\n");
  return 0;
}

int run_sweep(const RunConfig& cfg, IntervalArgs args, bool mirrored) {
  if (args.interval.empty() && args.bottom.empty()) args.interval = "I-1-1";
  auto g = make_group(cfg);
  IntervalSpec spec = resolve_interval(*g, args);
  SweepResult sr = ratio_sweep(g, spec.bottom, spec.top, spec.s, mirrored);
  const char* ratio = mirrored ? "b/a" : "a/b";
  std::ostringstream os;
  os << "interval " << spec.name << " s" << spec.s + 1 << " (" << ratio << ")\n";
  os << std::left << std::setw(16) << "region" << std::setw(14) << "order" << std::setw(11) << "certified"
     << "M\n";
  for (const auto& r : sr.regions) {
    std::string region = "(" + to_string(r.lower) + ", " + (r.upper ? to_string(*r.upper) : "inf") + ")";
    os << std::setw(16) << region << std::setw(14) << r.order.to_string() << std::setw(11)
       << (r.certificate.ok ? "yes" : "no") << r.m.to_string() << (r.m_nonzero ? "" : "  [not certified nonzero]")
       << "\n";
  }
  os << "criticals:";
  for (const auto& p : sr.points) os << ' ' << to_string(p.ratio);
  os << "\n";
  for (const auto& p : sr.points)
    os << "  " << ratio << " = " << to_string(p.ratio) << " (a,b) = (" << p.weights.a << "," << p.weights.b
       << "): M = " << p.m.to_string() << "\n";
  if (!sr.diagnostic.empty()) os << "diagnostic: " << sr.diagnostic << "\n";
  os << (sr.complete && sr.all_nonzero() ? "M nonzero on every region and critical ratio\n"
                                         : "M not certified nonzero everywhere\n");
  std::cout << os.str();
  if (!cfg.out.empty()) emit(cfg, "", to_json(sr).dump(2) + "\n");
  return sr.complete ? 0 : kVerificationFailed;
}

int run_verify_stability(const RunConfig& cfg, const IntervalArgs& args, int shift, int random, int gap) {
  auto g = make_group(cfg);
  Fixtures fx = Fixtures::g2(*g);
  nlohmann::json out = nlohmann::json::array();
  bool ok = true;
  if (random > 0) {
    OrbitData orbit = family_orbit(*g, fx, Family::C);
    auto samples = sample_shift_intervals(*g, orbit, args.r, shift, random, gap, 6, cfg.seed);
    for (const auto& s : samples) {
      KLContext ctx(g, OrderSpec::parse(cfg.order));
      StabilityReport rep = verify_stability(ctx, s.bottom1, s.top1, s.bottom2, s.top2, orbit, shift);
      ok = ok && rep.ok();
      out.push_back(to_json(*g, rep));
      std::cout << "gap " << s.gap << " sizes " << rep.size1 << "/" << rep.size2 << " "
                << (rep.ok() ? "equal" : "DIFFER " + rep.counterexample) << "\n";
    }
  } else {
    IntervalArgs a = args;
    if (a.interval.empty()) a.interval = "I-1-1";
    IntervalSpec first = resolve_interval(*g, a);
    a.r += shift;
    IntervalSpec second = resolve_interval(*g, a);
    Family f = first.name[0] == 'C' ? Family::C : Family::B;
    OrbitData orbit = family_orbit(*g, fx, f);
    KLContext ctx(g, OrderSpec::parse(cfg.order));
    StabilityReport rep = verify_stability(ctx, first.bottom, first.top, second.bottom, second.top, orbit, shift);
    ok = rep.ok();
    out.push_back(to_json(*g, rep));
    std::cout << first.name << " r=" << args.r << " vs r=" << args.r + shift << ": sizes " << rep.size1 << "/"
              << rep.size2 << ", r " << (rep.r_equal ? "equal" : "differ") << ", P "
              << (rep.p_equal ? "equal" : "differ") << ", M " << (rep.m_equal ? "equal" : "differ") << "\n";
    if (!rep.ok()) std::cout << "counterexample: " << rep.counterexample << "\n";
  }
  if (!cfg.out.empty()) emit(cfg, "", out.dump(2) + "\n");
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : kVerificationFailed;
}

int run_cells(const RunConfig& cfg) {
  auto g = make_group(cfg);
  CellDecomposition cells = decompose(g, OrderSpec::parse(cfg.order), cfg.max_length);
  int provisional = 0;
  for (bool p : cells.provisional) provisional += p;
  std::cerr << cells.vertices.size() << " elements, " << cells.cells.size() << " cells, " << provisional
            << " provisional\n";
  emit(cfg, "", to_csv(*g, cells));
  return 0;
}

int run_verify_section6(const RunConfig& cfg, Section6Options options) {
  auto g = make_group(cfg);
  Section6Report rep = verify_section6(g, options);
  std::cout << rep.summary;
  for (const auto& f : rep.failures) std::cout << "failure: " << f << "\n";
  emit(cfg, "verify_section6.json", rep.json.dump(2) + "\n");
  return rep.ok() ? 0 : kVerificationFailed;
}

int run_figure(const RunConfig& cfg, bool figure1) {
  auto g = make_group(cfg);
  FigureOptions options;
  std::ostringstream title;
  title << g->data().name << " alcoves of length <= " << cfg.max_length;
  if (auto wf = weights_of(cfg)) title << ", L(s1) = " << wf->a << ", L(s2) = L(s3) = " << wf->b;
  options.title = title.str();
  std::map<std::string, std::string> classification;
  if (figure1) {
    for (const Element& w : g->ball(cfg.max_length)) classification[g->to_string(w)] = "rest";
    options.highlight = g->parse("321212");
  } else {
    classification = classify_ball(*g, cfg.max_length);
    options.region_labels = lowest_cell_labels(*g);
    options.arrows = strip_arrows(*g);
  }
  emit(cfg, figure1 ? "figure1.svg" : "figure2.svg", render_alcove_map(*g, classification, cfg.max_length, options));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kazhdan-Lusztig polynomials and left cells of affine Weyl groups with unequal parameters"};
  app.set_config("--config", "", "TOML or INI file with option values");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--preset", cfg.preset, "Group preset: G2, A2, B2, A1")->capture_default_str();
  app.add_option("--group-file", cfg.group_file, "JSON file with Cartan data")->check(CLI::ExistingFile);
  app.add_option("--order", cfg.order, "Order on Gamma: lexQ, lexq, ratio:c/d, mirror:c/d, weight:a,b")
      ->capture_default_str();
  app.add_option("--parameters", cfg.parameters, "Weights a b with L(s1) = a, L(s2) = L(s3) = b")->expected(2);
  app.add_option("-L,--max-length", cfg.max_length, "Length bound")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--output-dir", cfg.output_dir, "Directory for output files (KLCELLS_OUTPUT_DIR overrides)")
      ->capture_default_str();
  app.add_option("-o,--out", cfg.out, "Output file name, - for stdout");
  app.add_option("--seed", cfg.seed, "Seed for sampled checks")->capture_default_str();

  IntervalArgs interval;
  bool mirrored = false;
  bool figure1 = false;
  int shift = 1;
  int random = 0;
  int gap = 2;
  Section6Options s6;
  bool skip_stability = false;
  bool skip_sweeps = false;
  bool skip_chains = false;
  bool skip_census = false;

  auto* ball = app.add_subcommand("ball", "List the elements of length <= L");
  auto* pq = app.add_subcommand("pq-table", "r- and P-polynomials on an interval");
  add_interval_options(pq, interval);
  auto* mt = app.add_subcommand("m-table", "M-polynomials on an interval");
  add_interval_options(mt, interval);
  auto* report = app.add_subcommand("interval-report", "JSON summary of an interval");
  add_interval_options(report, interval);
  auto* sweep = app.add_subcommand("sweep", "Descending ratio sweep over a/b");
  add_interval_options(sweep, interval);
  sweep->add_flag("--mirror", mirrored, "Sweep b/a instead");
  auto* stab = app.add_subcommand("verify-stability", "Compare an interval with its translate");
  add_interval_options(stab, interval);
  stab->add_option("--shift", shift, "Exponent shift k")->check(CLI::PositiveNumber);
  stab->add_option("--random", random, "Number of sampled intervals instead of a named one");
  stab->add_option("--gap", gap, "Largest length gap for sampled intervals");
  auto* cells = app.add_subcommand("cells", "Left-cell decomposition of a ball, as CSV");
  auto* s6cmd = app.add_subcommand("verify-section6", "Stability, sweeps, chain certificates and census for G2");
  s6cmd->add_flag("--skip-stability", skip_stability);
  s6cmd->add_flag("--skip-sweeps", skip_sweeps);
  s6cmd->add_flag("--skip-chains", skip_chains);
  s6cmd->add_flag("--skip-census", skip_census);
  s6cmd->add_option("--census-length", s6.census_length)->capture_default_str();
  s6cmd->add_option("--threads", s6.threads, "Worker threads, 0 for one per core")->capture_default_str();
  s6cmd->add_option("--search-gap", s6.search_gap, "Fallback M-edge search bound, 0 to disable")
      ->capture_default_str();
  auto* figure = app.add_subcommand("figure", "SVG map of the alcoves with cell regions");
  figure->add_flag("--figure1", figure1, "Draw A0, zA0 and the region of z = s3s2s1s2s1s2 instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    OrderSpec::parse(cfg.order);
    weights_of(cfg);
    make_group(cfg);
    if (*ball) return run_ball(cfg);
    if (*pq) return run_pq_table(cfg, interval);
    if (*mt) return run_m_table(cfg, interval);
    if (*report) return run_interval_report(cfg, interval);
    if (*sweep) return run_sweep(cfg, interval, mirrored);
    if (*stab) return run_verify_stability(cfg, interval, shift, random, gap);
    if (*cells) return run_cells(cfg);
    if (*s6cmd) {
      s6.stability = !skip_stability;
      s6.sweeps = !skip_sweeps;
      s6.chains = !skip_chains;
      s6.census = !skip_census;
      return run_verify_section6(cfg, s6);
    }
    if (*figure) return run_figure(cfg, figure1);
  } catch (const OrderUndefined& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }
  return kUsageError;
}
