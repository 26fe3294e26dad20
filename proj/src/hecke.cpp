#include "klcells/hecke.hpp"

#include <algorithm>
#include <bit>
#include <deque>

namespace klcells {

ElementId ElementPool::intern(const Element& w) {
  auto it = index_.find(w);
  if (it != index_.end()) return it->second;
  auto id = static_cast<ElementId>(elements_.size());
  elements_.push_back(w);
  descents_.push_back(group_->left_descents(w));
  std::array<ElementId, kMaxGenerators> products;
  products.fill(-1);
  left_products_.push_back(products);
  index_.emplace(w, id);
  return id;
}

Generator ElementPool::first_left_descent(ElementId id) const {
  GeneratorSet d = descents_[id];
  if (d == 0) return -1;
  return std::countr_zero(d);
}

ElementId ElementPool::left_multiply(Generator s, ElementId id) {
  ElementId cached = left_products_[id][s];
  if (cached >= 0) return cached;
  ElementId result = intern(group_->left_multiply(s, elements_[id]));
  left_products_[id][s] = result;
  left_products_[result][s] = id;
  return result;
}

std::set<Monomial> GammaPlusSet::all() const {
  std::set<Monomial> out = a;
  out.insert(b.begin(), b.end());
  out.insert(c.begin(), c.end());
  return out;
}

namespace {

std::vector<Monomial> default_parameters(const Group& group) {
  auto classes = group.conjugacy_classes();
  std::vector<Monomial> params;
  for (int c : classes) {
    if (c > 1) throw Error("more than two parameter classes");
    params.push_back(c == 0 ? Monomial{1, 0} : Monomial{0, 1});
  }
  return params;
}

void set_bit(std::vector<std::uint64_t>& bits, int p) { bits[p / 64] |= std::uint64_t{1} << (p % 64); }

}  // namespace

KLContext::KLContext(std::shared_ptr<const Group> group, OrderSpec order)
    : KLContext(group, order, default_parameters(*group)) {}

KLContext::KLContext(std::shared_ptr<const Group> group, OrderSpec order, std::vector<Monomial> parameters)
    : group_(std::move(group)),
      order_(order),
      parameters_(std::move(parameters)),
      pool_(*group_),
      m_memo_(group_->generator_count()),
      defect_memo_(group_->generator_count()) {
  if (static_cast<int>(parameters_.size()) != group_->generator_count()) {
    throw Error("one parameter per generator required");
  }
  for (const auto& v : parameters_) {
    if (!order_.is_positive(v)) throw Error("parameter " + klcells::to_string(v) + " is not positive");
  }
  pool_.intern(group_->identity());
}

KLContext KLContext::weighted(std::shared_ptr<const Group> group, std::vector<int> weights) {
  std::vector<Monomial> params;
  for (int w : weights) {
    if (w < 1) throw Error("weights must be positive");
    params.push_back({w, 0});
  }
  return KLContext(std::move(group), OrderSpec::lex_Q(), std::move(params));
}

KLContext KLContext::weighted(std::shared_ptr<const Group> group, const WeightFunction& wf) {
  std::vector<int> weights;
  for (int c : group->conjugacy_classes()) weights.push_back(c == 0 ? wf.a : wf.b);
  return weighted(std::move(group), std::move(weights));
}

GammaPoly KLContext::xi(Generator s) const {
  return GammaPoly(parameters_[s]) - GammaPoly(parameters_[s].inverse());
}

bool KLContext::bruhat_leq(ElementId y, ElementId w) {
  int ly = pool_.length(y);
  int lw = pool_.length(w);
  if (ly > lw) return false;
  if (ly == lw) return y == w;
  if (ly == 0) return true;
  auto k = key(y, w);
  if (auto it = leq_memo_.find(k); it != leq_memo_.end()) return it->second;
  Generator s = pool_.first_left_descent(w);
  ElementId sw = pool_.left_multiply(s, w);
  bool result = pool_.has_left_descent(y, s) ? bruhat_leq(pool_.left_multiply(s, y), sw) : bruhat_leq(y, sw);
  leq_memo_.emplace(k, result);
  return result;
}

const GammaPoly& KLContext::r_poly(ElementId y, ElementId w) {
  static const GammaPoly zero;
  static const GammaPoly one = GammaPoly::constant(1);
  if (y == w) return one;
  if (!bruhat_leq(y, w)) return zero;
  auto k = key(y, w);
  if (auto it = r_memo_.find(k); it != r_memo_.end()) return it->second;
  Generator s = pool_.first_left_descent(w);
  ElementId sw = pool_.left_multiply(s, w);
  ElementId sy = pool_.left_multiply(s, y);
  GammaPoly result;
  if (pool_.has_left_descent(y, s)) {
    result = r_poly(sy, sw);
  } else {
    result = r_poly(sy, sw);
    const GammaPoly& tail = r_poly(y, sw);
    if (!tail.is_zero()) result += xi(s) * tail;
  }
  return r_memo_.emplace(k, std::move(result)).first->second;
}

const IntervalPoset& KLContext::interval(ElementId y, ElementId w) {
  auto found = intervals_.find({y, w});
  if (found != intervals_.end()) return *found->second;

  auto poset = std::make_unique<IntervalPoset>();
  poset->bottom = y;
  poset->top = w;
  if (!bruhat_leq(y, w)) return *intervals_.emplace(std::make_pair(y, w), std::move(poset)).first->second;

  std::unordered_map<ElementId, std::vector<ElementId>> coatoms;
  std::deque<ElementId> queue{w};
  coatoms[w];
  while (!queue.empty()) {
    ElementId z = queue.front();
    queue.pop_front();
    if (z == y) continue;
    std::vector<ElementId> below;
    for (const Element& c : group_->coatoms(pool_.element(z))) {
      ElementId cid = pool_.intern(c);
      if (!bruhat_leq(y, cid)) continue;
      below.push_back(cid);
      if (coatoms.emplace(cid, std::vector<ElementId>{}).second) queue.push_back(cid);
    }
    coatoms[z] = std::move(below);
  }

  std::vector<std::pair<Word, ElementId>> order;
  for (const auto& [z, _] : coatoms) order.emplace_back(group_->reduced_word(pool_.element(z)), z);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::size_t n = order.size();
  std::size_t words = (n + 63) / 64;
  for (std::size_t p = 0; p < n; ++p) {
    poset->members.push_back(order[p].second);
    poset->position.emplace(order[p].second, static_cast<int>(p));
  }
  poset->below.assign(n, std::vector<std::uint64_t>(words, 0));
  poset->above.assign(n, std::vector<std::uint64_t>(words, 0));
  for (std::size_t k = 0; k < n; ++k) {
    auto& bits = poset->below[k];
    set_bit(bits, static_cast<int>(k));
    for (ElementId c : coatoms[poset->members[k]]) {
      const auto& sub = poset->below[poset->position.at(c)];
      for (std::size_t t = 0; t < words; ++t) bits[t] |= sub[t];
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t p = 0; p <= k; ++p) {
      if (poset->leq(static_cast<int>(p), static_cast<int>(k))) set_bit(poset->above[p], static_cast<int>(k));
    }
  }
  return *intervals_.emplace(std::make_pair(y, w), std::move(poset)).first->second;
}

void KLContext::fill_p_column(const IntervalPoset& I, int top) {
  ElementId w = I.members[top];
  std::size_t words = I.below[top].size();
  std::vector<const GammaPoly*> column(I.size(), nullptr);
  static const GammaPoly one = GammaPoly::constant(1);
  column[top] = &one;
  for (int p = top - 1; p >= 0; --p) {
    if (!I.leq(p, top)) continue;
    ElementId z = I.members[p];
    auto k = key(z, w);
    if (auto it = p_memo_.find(k); it != p_memo_.end()) {
      column[p] = &it->second;
      continue;
    }
    GammaPoly f;
    for (std::size_t t = 0; t < words; ++t) {
      std::uint64_t bits = I.above[p][t] & I.below[top][t];
      while (bits) {
        int q = static_cast<int>(t * 64) + std::countr_zero(bits);
        bits &= bits - 1;
        if (q == p) continue;
        const GammaPoly& r = r_poly(z, I.members[q]);
        if (!r.is_zero()) f += r * *column[q];
      }
    }
    auto parts = split(f, order_);
    if (parts.unit != 0 || bar(f) != -f) {
      throw Error("P recursion inconsistent at " + group_->to_string(pool_.element(z)) + " <= " +
                  group_->to_string(pool_.element(w)));
    }
    column[p] = &p_memo_.emplace(k, -parts.negative).first->second;
  }
}

void KLContext::fill_p_tables(const IntervalPoset& I) {
  for (int k = 0; k < static_cast<int>(I.size()); ++k) fill_p_column(I, k);
}

bool KLContext::m_admissible(Generator s, ElementId y, ElementId w) {
  return pool_.has_left_descent(y, s) && !pool_.has_left_descent(w, s) && y != w && bruhat_leq(y, w);
}

void KLContext::fill_m_column(const IntervalPoset& I, int top, Generator s) {
  ElementId w = I.members[top];
  if (pool_.has_left_descent(w, s)) return;
  auto& mm = m_memo_[s];
  auto& dm = defect_memo_[s];
  std::size_t words = I.below[top].size();
  std::vector<const GammaPoly*> column(I.size(), nullptr);
  GammaPoly vs(parameters_[s]);
  for (int p = top - 1; p >= 0; --p) {
    ElementId z = I.members[p];
    if (!I.leq(p, top) || !pool_.has_left_descent(z, s)) continue;
    auto k = key(z, w);
    if (auto it = mm.find(k); it != mm.end()) {
      column[p] = &it->second;
      continue;
    }
    GammaPoly e = vs * p_memo_.at(k);
    for (std::size_t t = 0; t < words; ++t) {
      std::uint64_t bits = I.above[p][t] & I.below[top][t];
      while (bits) {
        int q = static_cast<int>(t * 64) + std::countr_zero(bits);
        bits &= bits - 1;
        if (q == p || q == top || !column[q] || column[q]->is_zero()) continue;
        e -= p_memo_.at(key(z, I.members[q])) * *column[q];
      }
    }
    auto parts = split(e, order_);
    GammaPoly m = parts.positive + GammaPoly::constant(parts.unit) + bar(parts.positive);
    dm.emplace(k, m - e);
    column[p] = &mm.emplace(k, std::move(m)).first->second;
  }
}

void KLContext::fill_m_tables(const IntervalPoset& I, Generator s) {
  fill_p_tables(I);
  for (int k = 0; k < static_cast<int>(I.size()); ++k) fill_m_column(I, k, s);
}

void KLContext::fill_m_below(Generator s, ElementId w) {
  if (pool_.has_left_descent(w, s)) return;
  const IntervalPoset& I = interval(pool_.intern(group_->identity()), w);
  fill_p_tables(I);
  fill_m_column(I, static_cast<int>(I.size()) - 1, s);
}

const GammaPoly& KLContext::p_poly(ElementId y, ElementId w) {
  static const GammaPoly zero;
  static const GammaPoly one = GammaPoly::constant(1);
  if (y == w) return one;
  if (!bruhat_leq(y, w)) return zero;
  auto k = key(y, w);
  if (auto it = p_memo_.find(k); it != p_memo_.end()) return it->second;
  const IntervalPoset& I = interval(y, w);
  fill_p_column(I, static_cast<int>(I.size()) - 1);
  return p_memo_.at(k);
}

const GammaPoly& KLContext::m_poly(Generator s, ElementId y, ElementId w) {
  if (!m_admissible(s, y, w)) throw Error("M requires sy < y < w < sw");
  auto k = key(y, w);
  if (auto it = m_memo_[s].find(k); it != m_memo_[s].end()) return it->second;
  const IntervalPoset& I = interval(y, w);
  fill_p_tables(I);
  fill_m_column(I, static_cast<int>(I.size()) - 1, s);
  return m_memo_[s].at(k);
}

const GammaPoly& KLContext::mu_defect(Generator s, ElementId y, ElementId w) {
  m_poly(s, y, w);
  return defect_memo_[s].at(key(y, w));
}

GammaPlusSet KLContext::gamma_plus_set(ElementId y, ElementId w, Generator s) {
  GammaPlusSet out;
  const IntervalPoset& I = interval(y, w);
  if (I.size() == 0) throw Error("gamma_plus_set requires y <= w");
  fill_m_tables(I, s);
  auto add_inverses = [&](const GammaPoly& poly, std::set<Monomial>& into) {
    for (const auto& t : poly.terms()) {
      Monomial g = t.m.inverse();
      if (order_.is_positive(g)) into.insert(g);
    }
  };
  for (int k = 0; k < static_cast<int>(I.size()); ++k) {
    ElementId z2 = I.members[k];
    bool m_column = !pool_.has_left_descent(z2, s);
    for (int p = 0; p < k; ++p) {
      if (!I.leq(p, k)) continue;
      ElementId z1 = I.members[p];
      auto key12 = key(z1, z2);
      add_inverses(p_memo_.at(key12), out.a);
      if (!m_column || !pool_.has_left_descent(z1, s)) continue;
      const GammaPoly& m = m_memo_[s].at(key12);
      std::vector<Monomial> support;
      for (const auto& t : m.terms()) support.push_back(t.m);
      std::sort(support.begin(), support.end(), [&](Monomial a, Monomial b) { return order_.less(a, b); });
      for (std::size_t i = 1; i < support.size(); ++i) {
        Monomial ratio = support[i - 1].inverse() * support[i];
        if (order_.is_positive(ratio)) out.b.insert(ratio);
      }
      add_inverses(defect_memo_[s].at(key12), out.c);
    }
  }
  return out;
}

StarCheck check_star(const std::set<Monomial>& set, int variant, int c, int d, std::optional<Rational> e) {
  if (variant != 1 && variant != 2) throw Error("variant must be 1 or 2");
  if (c < 1 || d < 1) throw Error("c and d must be positive");
  if (variant == 2 && e && *e <= Rational(c, d)) throw Error("variant 2 requires e > c/d");
  for (const Monomial& m : set) {
    std::int64_t i = m.i;
    std::int64_t j = m.j;
    bool ok = false;
    if (i == 0 && j > 0) {
      ok = true;
    } else if (variant == 1) {
      ok = i > 0 && c * i + d * j >= 0;
    } else {
      if (i > 0 && i + j >= 0) ok = true;
      // -j/i >= e with i < 0 < j, i.e. j >= e |i|
      if (e && j > -i && -i > 0 && j * e->denominator() >= e->numerator() * -i) ok = true;
      // -j/i <= c/d with i > 0
      if (-j > i && i > 0 && -j * d <= c * i) ok = true;
    }
    if (!ok) return {false, m};
  }
  return {};
}

std::set<Monomial> mirror(const std::set<Monomial>& set) {
  std::set<Monomial> out;
  for (const Monomial& m : set) out.insert({m.j, m.i});
  return out;
}

StarCheck check_specialization(const std::set<Monomial>& set, const WeightFunction& wf) {
  for (const Monomial& m : set) {
    if (static_cast<std::int64_t>(wf.a) * m.i + static_cast<std::int64_t>(wf.b) * m.j <= 0) return {false, m};
  }
  return {};
}

std::vector<Rational> critical_ratios(const std::set<Monomial>& set) {
  std::set<Rational> found;
  for (const Monomial& m : set) {
    if (m.j < 0 && m.i != 0) {
      Rational x(m.j, m.i);
      found.insert(boost::abs(x));
    }
  }
  return {found.rbegin(), found.rend()};
}

std::map<ElementId, GammaPoly> c_product(KLContext& ctx, Generator s, const Element& w, const ElementSet& ball) {
  const Group& g = ctx.group();
  Element sw = g.left_multiply(s, w);
  if (!ball.contains(sw)) throw Error("ball too small: missing " + g.to_string(sw));
  for (const Element& z : g.lower_cone(w)) {
    if (!ball.contains(z)) throw Error("ball too small: missing " + g.to_string(z));
  }
  std::map<ElementId, GammaPoly> out;
  ElementId wid = ctx.id(w);
  if (sw.length() < w.length()) {
    Monomial v = ctx.parameter(s);
    out.emplace(wid, GammaPoly(v) + GammaPoly(v.inverse()));
    return out;
  }
  out.emplace(ctx.id(sw), GammaPoly::constant(1));
  const IntervalPoset& I = ctx.interval(ctx.id(g.identity()), wid);
  for (ElementId z : I.members) {
    if (z == wid || !ctx.pool().has_left_descent(z, s)) continue;
    const GammaPoly& m = ctx.m_poly(s, z, wid);
    if (!m.is_zero()) out.emplace(z, m);
  }
  return out;
}

IntervalReport interval_report(KLContext& ctx, const Element& y, const Element& w, Generator s) {
  IntervalReport report;
  report.bottom = y;
  report.top = w;
  report.s = s;
  ElementId yid = ctx.id(y);
  ElementId wid = ctx.id(w);
  report.gamma_plus = ctx.gamma_plus_set(yid, wid, s);
  const IntervalPoset& I = ctx.interval(yid, wid);
  for (ElementId z : I.members) report.members.push_back(ctx.pool().element(z));
  for (int k = 0; k < static_cast<int>(I.size()); ++k) {
    for (int p = 0; p < k; ++p) {
      if (!I.leq(p, k)) continue;
      report.p_entries.push_back({p, k, ctx.p_poly(I.members[p], I.members[k])});
      if (ctx.m_admissible(s, I.members[p], I.members[k])) {
        const GammaPoly& m = ctx.m_poly(s, I.members[p], I.members[k]);
        if (!m.is_zero()) report.m_entries.push_back({p, k, m});
      }
    }
  }
  return report;
}

nlohmann::json to_json(const GammaPlusSet& set) {
  nlohmann::json out = nlohmann::json::array();
  auto emit = [&](const std::set<Monomial>& part, const char* tag) {
    for (const Monomial& m : part) out.push_back({{"Q", m.i}, {"q", m.j}, {"part", tag}});
  };
  emit(set.a, "a");
  emit(set.b, "b");
  emit(set.c, "c");
  return out;
}

nlohmann::json to_json(const Group& group, const IntervalReport& report) {
  nlohmann::json out;
  out["bottom"] = group.to_string(report.bottom);
  out["top"] = group.to_string(report.top);
  out["s"] = report.s + 1;
  nlohmann::json members = nlohmann::json::array();
  for (const Element& z : report.members) members.push_back(group.to_string(z));
  out["elements"] = members;
  auto entries = [](const std::vector<IntervalReport::Entry>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : list) arr.push_back({{"row", e.row}, {"col", e.col}, {"poly", to_json(e.poly)}});
    return arr;
  };
  out["P"] = entries(report.p_entries);
  out["M"] = entries(report.m_entries);
  out["gamma_plus"] = to_json(report.gamma_plus);
  return out;
}

}  // namespace klcells
