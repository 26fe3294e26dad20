#include "klcells/coxeter.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace klcells {

namespace {

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

void check(bool ok, const std::string& message) {
  if (!ok) throw Error(message);
}

// Reflection matrix x -> x - <x, beta^vee> beta.
std::array<std::int64_t, kMaxRank * kMaxRank> reflection_matrix(
    int n, const std::vector<std::int64_t>& root,
    const std::vector<std::int64_t>& coroot_row) {
  std::array<std::int64_t, kMaxRank * kMaxRank> m{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i * kMaxRank + j] = (i == j ? 1 : 0) - root[i] * coroot_row[j];
  return m;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error("malformed rational '" + text + "'");
  }
}

std::size_t ElementHash::operator()(const Element& w) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::int64_t v) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (auto v : w.map().linear) mix(v);
  for (auto v : w.map().translation) mix(v);
  return h;
}

GroupData make_group_data(std::string name, std::vector<std::vector<int>> cartan,
                          int affine_node, std::vector<int> weights) {
  const int n = static_cast<int>(cartan.size());
  check(n >= 1 && n <= kMaxRank, "rank must be between 1 and " + std::to_string(kMaxRank));
  for (const auto& row : cartan) check(static_cast<int>(row.size()) == n, "Cartan matrix must be square");
  for (int i = 0; i < n; ++i) {
    check(cartan[i][i] == 2, "Cartan matrix diagonal must be 2");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      check(cartan[i][j] <= 0, "off-diagonal Cartan entries must be <= 0");
      check((cartan[i][j] == 0) == (cartan[j][i] == 0), "Cartan matrix zero pattern must be symmetric");
      check(cartan[i][j] * cartan[j][i] <= 3, "Cartan matrix is not of finite type");
    }
  }
  check(affine_node >= 0 && affine_node <= n, "affine node out of range");

  GroupData d;
  d.name = std::move(name);
  d.rank = n;
  d.cartan = cartan;
  d.affine_node = affine_node;

  // Symmetrizer: B(alpha_i, alpha_i) = 2 sym_i with sym_i C_ij = sym_j C_ji.
  std::vector<Rational> sym(n, Rational(0));
  sym[0] = 1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j = 0; j < n; ++j) {
      if (j == i || cartan[i][j] == 0 || sym[j].numerator() != 0) continue;
      sym[j] = sym[i] * Rational(cartan[i][j], cartan[j][i]);
      queue.push_back(j);
    }
  }
  for (int i = 0; i < n; ++i) check(sym[i].numerator() != 0, "Dynkin diagram must be connected");
  std::int64_t scale = 1;
  for (const auto& s : sym) scale = lcm64(scale, s.denominator());
  d.form.assign(n, std::vector<std::int64_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational v = sym[i] * scale * cartan[i][j];
      d.form[i][j] = v.numerator();
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      check(d.form[i][j] == d.form[j][i], "Cartan matrix is not symmetrizable");

  // Positive roots by closing the simple roots under simple reflections.
  std::set<std::vector<std::int64_t>> roots;
  std::deque<std::vector<std::int64_t>> todo;
  for (int i = 0; i < n; ++i) {
    std::vector<std::int64_t> e(n, 0);
    e[i] = 1;
    roots.insert(e);
    todo.push_back(e);
  }
  while (!todo.empty()) {
    auto x = todo.front();
    todo.pop_front();
    for (int i = 0; i < n; ++i) {
      std::int64_t p = 0;
      for (int j = 0; j < n; ++j) p += x[j] * cartan[i][j];
      auto y = x;
      y[i] -= p;
      bool positive = std::all_of(y.begin(), y.end(), [](auto v) { return v >= 0; });
      if (!positive) continue;
      if (roots.insert(y).second) todo.push_back(y);
      check(roots.size() < 512, "root system is not finite");
    }
  }
  d.positive_roots.assign(roots.begin(), roots.end());
  std::sort(d.positive_roots.begin(), d.positive_roots.end(), [](const auto& a, const auto& b) {
    auto ha = std::accumulate(a.begin(), a.end(), std::int64_t{0});
    auto hb = std::accumulate(b.begin(), b.end(), std::int64_t{0});
    if (ha != hb) return ha < hb;
    return a > b;
  });

  auto form_apply = [&](const std::vector<std::int64_t>& x) {
    std::vector<std::int64_t> out(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i] += d.form[i][j] * x[j];
    return out;
  };
  int best_height = -1;
  for (std::size_t k = 0; k < d.positive_roots.size(); ++k) {
    const auto& beta = d.positive_roots[k];
    auto fb = form_apply(beta);
    std::int64_t norm = dot(beta, fb);
    std::vector<std::int64_t> row(n);
    for (int j = 0; j < n; ++j) {
      check((2 * fb[j]) % norm == 0, "coroot pairing is not integral");
      row[j] = 2 * fb[j] / norm;
    }
    d.coroot_rows.push_back(row);
    // Height of beta^vee in the simple coroot basis.
    Rational height = 0;
    for (int i = 0; i < n; ++i) height += Rational(beta[i] * d.form[i][i], norm);
    check(height.denominator() == 1, "coroot is not integral");
    if (height.numerator() > best_height) {
      best_height = static_cast<int>(height.numerator());
      d.highest_coroot_root = static_cast<int>(k);
    }
  }

  d.simple_root_of.resize(n + 1);
  for (int g = 0, r = 0; g <= n; ++g) d.simple_root_of[g] = (g == affine_node) ? -1 : r++;

  // Coxeter matrix from the wall normals a_g = alpha_r or -theta.
  auto normal = [&](int g) -> std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> {
    int r = d.simple_root_of[g];
    int k = r >= 0 ? r : d.highest_coroot_root;
    auto root = d.positive_roots[k];
    auto row = d.coroot_rows[k];
    if (r < 0) {
      for (auto& v : root) v = -v;
      for (auto& v : row) v = -v;
    }
    return {root, row};
  };
  d.coxeter_matrix.assign(n + 1, std::vector<int>(n + 1, 1));
  for (int g = 0; g <= n; ++g)
    for (int h = 0; h <= n; ++h) {
      if (g == h) continue;
      auto [rg, cg] = normal(g);
      auto [rh, ch] = normal(h);
      std::int64_t p = dot(rg, ch) * dot(rh, cg);
      static const int kOrders[] = {2, 3, 4, 6, 0};
      check(p >= 0 && p <= 4, "unexpected wall angle");
      d.coxeter_matrix[g][h] = kOrders[p];
    }

  // Barycenter of A0: vertices 0 and omega_i / m_i with theta^vee = sum m_i alpha_i^vee.
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  {
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] = cartan[i][j];
      a[i][n + i] = 1;
    }
    for (int c = 0; c < n; ++c) {
      int p = c;
      while (a[p][c].numerator() == 0) ++p;
      std::swap(a[p], a[c]);
      Rational pivot = a[c][c];
      for (auto& v : a[c]) v /= pivot;
      for (int r = 0; r < n; ++r) {
        if (r == c || a[r][c].numerator() == 0) continue;
        Rational f = a[r][c];
        for (int k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  }
  const auto& theta = d.positive_roots[d.highest_coroot_root];
  std::int64_t theta_norm = dot(theta, form_apply(theta));
  std::vector<Rational> x0(n, Rational(0));
  for (int i = 0; i < n; ++i) {
    Rational m(theta[i] * d.form[i][i], theta_norm);
    for (int j = 0; j < n; ++j) x0[j] += inv[j][i] / m;
  }
  for (auto& v : x0) v /= (n + 1);
  d.denominator = 1;
  for (const auto& v : x0) d.denominator = lcm64(d.denominator, v.denominator());
  for (const auto& v : x0) d.base_point.push_back((v * d.denominator).numerator());

  if (weights.empty()) weights.assign(n + 1, 1);
  check(static_cast<int>(weights.size()) == n + 1, "need one weight per generator");
  for (int w : weights) check(w >= 1, "weights must be positive");
  for (int g = 0; g <= n; ++g)
    for (int h = 0; h <= n; ++h)
      if (g != h && d.coxeter_matrix[g][h] % 2 == 1)
        check(weights[g] == weights[h], "weights must agree on conjugate generators");
  d.weights = std::move(weights);
  return d;
}

GroupData g2_preset(int a, int b) {
  // alpha_1 long, alpha_2 short: <alpha_2, alpha_1^vee> = -1, <alpha_1, alpha_2^vee> = -3.
  return make_group_data("G2", {{2, -1}, {-3, 2}}, 2, {a, b, b});
}

GroupData preset(const std::string& name) {
  if (name == "G2") return g2_preset();
  if (name == "A2") return make_group_data("A2", {{2, -1}, {-1, 2}}, 2, {});
  if (name == "B2") return make_group_data("B2", {{2, -2}, {-1, 2}}, 2, {});
  if (name == "A1") return make_group_data("A1", {{2}}, 1, {});
  throw Error("unknown group preset '" + name + "'");
}

GroupData group_data_from_json(const nlohmann::json& config) {
  try {
    auto data = make_group_data(config.value("name", std::string("custom")),
                                config.at("cartan").get<std::vector<std::vector<int>>>(),
                                config.at("affine_node").get<int>(),
                                config.value("weights", std::vector<int>{}));
    if (config.contains("coxeter_matrix")) {
      auto m = config.at("coxeter_matrix").get<std::vector<std::vector<int>>>();
      check(m == data.coxeter_matrix, "coxeter_matrix does not match the Cartan data");
    }
    return data;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed group config: ") + e.what());
  }
}

Group::Group(GroupData data) : data_(std::move(data)) {
  const int n = data_.rank;
  for (int g = 0; g <= n; ++g) {
    int r = data_.simple_root_of[g];
    int k = r >= 0 ? r : data_.highest_coroot_root;
    AffineMap m;
    m.linear = reflection_matrix(n, data_.positive_roots[k], data_.coroot_rows[k]);
    if (r < 0)
      for (int i = 0; i < n; ++i) m.translation[i] = data_.positive_roots[k][i];
    generators_.push_back(m);
  }
}

AffineMap Group::compose(const AffineMap& f, const AffineMap& g) const {
  const int n = data_.rank;
  AffineMap out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < n; ++k) s += f.linear[i * kMaxRank + k] * g.linear[k * kMaxRank + j];
      out.linear[i * kMaxRank + j] = s;
    }
    std::int64_t t = f.translation[i];
    for (int k = 0; k < n; ++k) t += f.linear[i * kMaxRank + k] * g.translation[k];
    out.translation[i] = t;
  }
  return out;
}

std::int64_t Group::scaled_pairing(const AffineMap& map, int root_index) const {
  const int n = data_.rank;
  const auto& row = data_.coroot_rows[root_index];
  std::int64_t s = 0;
  for (int i = 0; i < n; ++i) {
    std::int64_t p = data_.denominator * map.translation[i];
    for (int k = 0; k < n; ++k) p += map.linear[i * kMaxRank + k] * data_.base_point[k];
    s += row[i] * p;
  }
  return s;
}

int Group::compute_length(const AffineMap& map) const {
  int len = 0;
  for (int k = 0; k < static_cast<int>(data_.positive_roots.size()); ++k) {
    std::int64_t f = floor_div(scaled_pairing(map, k), data_.denominator);
    len += static_cast<int>(f < 0 ? -f : f);
  }
  return len;
}

Element Group::identity() const {
  AffineMap m;
  for (int i = 0; i < data_.rank; ++i) m.linear[i * kMaxRank + i] = 1;
  return Element(m, 0);
}

Element Group::generator(Generator s) const {
  if (s < 0 || s >= generator_count()) throw Error("generator index out of range");
  return Element(generators_[s], 1);
}

Element Group::from_word(std::span<const Generator> word) const {
  AffineMap m = identity().map();
  for (Generator s : word) {
    if (s < 0 || s >= generator_count()) throw Error("generator index out of range");
    m = compose(m, generators_[s]);
  }
  return Element(m, compute_length(m));
}

Element Group::parse(const std::string& digits) const {
  Word w;
  for (char c : digits) {
    if (c < '1' || c > '9') throw Error("malformed element string '" + digits + "'");
    w.push_back(c - '1');
  }
  return from_word(w);
}

Element Group::multiply(const Element& x, const Element& y) const {
  AffineMap m = compose(x.map(), y.map());
  return Element(m, compute_length(m));
}

Element Group::left_multiply(Generator s, const Element& w) const {
  AffineMap m = compose(generators_[s], w.map());
  return Element(m, compute_length(m));
}

Element Group::right_multiply(const Element& w, Generator s) const {
  AffineMap m = compose(w.map(), generators_[s]);
  return Element(m, compute_length(m));
}

Element Group::from_map(const AffineMap& map) const { return Element(map, compute_length(map)); }

Element Group::inverse(const Element& w) const {
  Word word = reduced_word(w);
  std::reverse(word.begin(), word.end());
  return from_word(word);
}

Element Group::power(const Element& w, int exponent) const {
  Element base = exponent < 0 ? inverse(w) : w;
  Element out = identity();
  for (int i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) out = multiply(out, base);
  return out;
}

bool Group::is_left_descent(Generator s, const Element& w) const {
  int r = data_.simple_root_of[s];
  if (r >= 0) return scaled_pairing(w.map(), r) < 0;
  return scaled_pairing(w.map(), data_.highest_coroot_root) > data_.denominator;
}

GeneratorSet Group::left_descents(const Element& w) const {
  GeneratorSet set = 0;
  for (Generator s = 0; s < generator_count(); ++s)
    if (is_left_descent(s, w)) set |= GeneratorSet{1} << s;
  return set;
}

GeneratorSet Group::right_descents(const Element& w) const {
  return left_descents(inverse(w));
}

Word Group::reduced_word(const Element& w) const {
  Word word;
  Element cur = w;
  while (cur.length() > 0) {
    Generator s = 0;
    while (!is_left_descent(s, cur)) ++s;
    word.push_back(s);
    cur = left_multiply(s, cur);
  }
  return word;
}

std::string Group::to_string(const Element& w) const {
  std::string out;
  for (Generator s : reduced_word(w)) out.push_back(static_cast<char>('1' + s));
  return out;
}

bool Group::is_reduced_product(const Element& x, const Element& y) const {
  return multiply(x, y).length() == x.length() + y.length();
}

bool Group::bruhat_leq(const Element& y, const Element& w) const {
  Element a = y, b = w;
  while (true) {
    if (a.length() > b.length()) return false;
    if (a.length() == b.length()) return a == b;
    if (a.length() == 0) return true;
    Generator s = 0;
    while (!is_left_descent(s, b)) ++s;
    if (is_left_descent(s, a)) a = left_multiply(s, a);
    b = left_multiply(s, b);
  }
}

ElementSet Group::lower_cone(const Element& w) const {
  ElementSet cone{identity()};
  for (Generator s : reduced_word(w)) {
    std::vector<Element> grown;
    grown.reserve(cone.size());
    for (const auto& z : cone) grown.push_back(right_multiply(z, s));
    cone.insert(grown.begin(), grown.end());
  }
  return cone;
}

ElementSet Group::interval(const Element& y, const Element& w) const {
  if (!bruhat_leq(y, w)) return {};
  Word word = reduced_word(w);
  const int m = static_cast<int>(word.size());
  ElementSet current{identity()};
  for (int k = 0; k < m; ++k) {
    ElementSet next;
    const int remaining = m - k - 1;
    for (const auto& z : current) {
      if (z.length() + remaining >= y.length()) next.insert(z);
      Element zs = right_multiply(z, word[k]);
      if (zs.length() + remaining >= y.length()) next.insert(zs);
    }
    current = std::move(next);
  }
  ElementSet out;
  for (const auto& z : current)
    if (bruhat_leq(y, z)) out.insert(z);
  return out;
}

std::vector<Element> Group::coatoms(const Element& w) const {
  Word word = reduced_word(w);
  const int m = static_cast<int>(word.size());
  std::vector<AffineMap> prefix(m + 1), suffix(m + 1);
  prefix[0] = identity().map();
  for (int k = 0; k < m; ++k) prefix[k + 1] = compose(prefix[k], generators_[word[k]]);
  suffix[m] = identity().map();
  for (int k = m - 1; k >= 0; --k) suffix[k] = compose(generators_[word[k]], suffix[k + 1]);
  std::vector<Element> out;
  for (int k = 0; k < m; ++k) {
    AffineMap map = compose(prefix[k], suffix[k + 1]);
    int len = compute_length(map);
    if (len != m - 1) continue;
    Element z(map, len);
    if (std::find(out.begin(), out.end(), z) == out.end()) out.push_back(z);
  }
  return out;
}

std::vector<Element> Group::ball(int max_length) const {
  std::vector<Element> out{identity()};
  std::vector<Element> level{identity()};
  for (int len = 1; len <= max_length; ++len) {
    ElementSet seen;
    std::vector<Element> next;
    for (const auto& z : level)
      for (Generator s = 0; s < generator_count(); ++s) {
        if (is_left_descent(s, z)) continue;
        Element sz = left_multiply(s, z);
        if (seen.insert(sz).second) next.push_back(sz);
      }
    std::sort(next.begin(), next.end(), [this](const Element& a, const Element& b) {
      return reduced_word(a) < reduced_word(b);
    });
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

std::vector<std::int64_t> Group::scaled_image(const Element& w) const {
  const int n = data_.rank;
  std::vector<std::int64_t> p(n);
  for (int i = 0; i < n; ++i) {
    std::int64_t v = data_.denominator * w.map().translation[i];
    for (int k = 0; k < n; ++k) v += w.map().linear[i * kMaxRank + k] * data_.base_point[k];
    p[i] = v;
  }
  return p;
}

Rational Group::pairing(const Element& w, int root_index) const {
  return Rational(scaled_pairing(w.map(), root_index), data_.denominator);
}

std::vector<Rational> Group::base_image(const Element& w) const {
  std::vector<Rational> out;
  for (auto v : scaled_image(w)) out.emplace_back(v, data_.denominator);
  return out;
}

std::vector<Rational> Group::apply(const Element& w, std::span<const Rational> point) const {
  const int n = data_.rank;
  std::vector<Rational> out(n);
  for (int i = 0; i < n; ++i) {
    Rational v = w.map().translation[i];
    for (int k = 0; k < n; ++k) v += Rational(w.map().linear[i * kMaxRank + k]) * point[k];
    out[i] = v;
  }
  return out;
}

bool Group::has_trivial_linear_part(const Element& w) const {
  return w.map().linear == identity().map().linear;
}

std::vector<int> Group::conjugacy_classes() const {
  const int g = generator_count();
  std::vector<int> parent(g);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b)
      if (a != b && data_.coxeter_matrix[a][b] % 2 == 1) parent[find(a)] = find(b);
  std::map<int, int> label;
  std::vector<int> out(g);
  for (int a = 0; a < g; ++a) {
    auto [it, inserted] = label.emplace(find(a), static_cast<int>(label.size()));
    out[a] = it->second;
  }
  return out;
}

nlohmann::json to_json(const Group& group, const Element& w) {
  nlohmann::json arr = nlohmann::json::array();
  for (Generator s : group.reduced_word(w)) arr.push_back(s + 1);
  return arr;
}

}  // namespace klcells
