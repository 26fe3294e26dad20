#ifndef KLCELLS_TESTS_ORACLE_HPP
#define KLCELLS_TESTS_ORACLE_HPP

// Reference implementations used only by the tests. They share the group
// arithmetic with the library but none of the Kazhdan-Lusztig machinery.

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "klcells/coxeter.hpp"
#include "klcells/gamma.hpp"

namespace oracle {

using namespace klcells;

/// Element of the Hecke algebra in the standard basis.
using Vec = std::unordered_map<Element, GammaPoly, ElementHash>;

inline void add_to(Vec& h, const Element& w, const GammaPoly& c) {
  if (c.is_zero()) return;
  auto& slot = h[w];
  slot += c;
  if (slot.is_zero()) h.erase(w);
}

inline GammaPoly coeff(const Vec& h, const Element& w) {
  auto it = h.find(w);
  return it == h.end() ? GammaPoly{} : it->second;
}

/// Elements sorted by decreasing length, ties by word.
inline std::vector<Element> descending(const Group& g, const Vec& h) {
  std::vector<Element> keys;
  for (const auto& [w, _] : h) keys.push_back(w);
  std::sort(keys.begin(), keys.end(), [&](const Element& a, const Element& b) {
    if (a.length() != b.length()) return a.length() > b.length();
    return g.reduced_word(a) < g.reduced_word(b);
  });
  return keys;
}

/// The Hecke algebra with T_s^2 = 1 + (v_s - v_s^-1) T_s, and its
/// canonical basis obtained by repeated left multiplication with C_s and
/// subtraction of lower basis elements until the coefficients are
/// negative, the positive cone being given by a predicate.
class Hecke {
 public:
  Hecke(const Group& g, std::vector<Monomial> params, std::function<bool(Monomial)> positive)
      : g_(&g), params_(std::move(params)), positive_(std::move(positive)) {}

  GammaPoly v(Generator s) const { return GammaPoly(params_[s]); }
  GammaPoly v_inv(Generator s) const { return GammaPoly(params_[s].inverse()); }
  GammaPoly xi(Generator s) const { return v(s) - v_inv(s); }

  Vec t(const Element& w) const { return Vec{{w, GammaPoly::constant(1)}}; }

  /// T_s h.
  Vec left_t(Generator s, const Vec& h) const {
    Vec out;
    for (const auto& [w, c] : h) {
      Element sw = g_->left_multiply(s, w);
      add_to(out, sw, c);
      if (sw.length() < w.length()) add_to(out, w, xi(s) * c);
    }
    return out;
  }

  Vec multiply(const Vec& a, const Vec& b) const {
    Vec out;
    for (const auto& [x, c] : a) {
      Vec h = b;
      Word word = g_->reduced_word(x);
      for (auto it = word.rbegin(); it != word.rend(); ++it) h = left_t(*it, h);
      for (const auto& [w, d] : h) add_to(out, w, c * d);
    }
    return out;
  }

  /// bar(T_s) = T_s - (v_s - v_s^-1), extended semilinearly.
  Vec bar_t(const Element& x) const {
    Vec h = t(g_->identity());
    Word word = g_->reduced_word(x);
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      Vec next = left_t(*it, h);
      for (const auto& [w, c] : h) add_to(next, w, -(xi(*it) * c));
      h = std::move(next);
    }
    return h;
  }

  Vec bar(const Vec& h) const {
    Vec out;
    for (const auto& [x, c] : h) {
      GammaPoly bc = klcells::bar(c);
      for (const auto& [w, d] : bar_t(x)) add_to(out, w, bc * d);
    }
    return out;
  }

  /// C_s h = (T_s + v_s^-1) h.
  Vec left_c(Generator s, const Vec& h) const {
    Vec out = left_t(s, h);
    for (const auto& [w, c] : h) add_to(out, w, v_inv(s) * c);
    return out;
  }

  const Vec& c(const Element& w) {
    if (auto it = c_.find(w); it != c_.end()) return it->second;
    Vec h;
    if (w.length() == 0) {
      h = t(w);
    } else {
      Generator s = first_descent(w);
      Element sw = g_->left_multiply(s, w);
      h = left_c(s, c(sw));
      for (const Element& y : descending(*g_, h)) {
        if (y == w) continue;
        GammaPoly m = nonnegative_symmetric(coeff(h, y));
        if (m.is_zero()) continue;
        for (const auto& [z, d] : c(y)) add_to(h, z, -(m * d));
      }
    }
    return c_.emplace(w, std::move(h)).first->second;
  }

  GammaPoly p(const Element& y, const Element& w) { return coeff(c(w), y); }

  /// Coordinates of a bar-invariant element in the canonical basis.
  std::map<std::vector<Generator>, GammaPoly> in_c_basis(Vec h) {
    std::map<std::vector<Generator>, GammaPoly> out;
    while (!h.empty()) {
      Element top = descending(*g_, h).front();
      GammaPoly a = coeff(h, top);
      out[g_->reduced_word(top)] = a;
      for (const auto& [z, d] : c(top)) add_to(h, z, -(a * d));
    }
    return out;
  }

  /// Coefficient of C_y in C_s C_w.
  GammaPoly c_product(Generator s, const Element& w, const Element& y) {
    auto coords = in_c_basis(left_c(s, c(w)));
    auto it = coords.find(g_->reduced_word(y));
    return it == coords.end() ? GammaPoly{} : it->second;
  }

  bool is_positive(Monomial m) const { return positive_(m); }

 private:
  Generator first_descent(const Element& w) const {
    for (Generator s = 0; s < g_->generator_count(); ++s)
      if (g_->is_left_descent(s, w)) return s;
    throw Error("identity has no descent");
  }

  /// The bar-invariant element agreeing with p on the monomials >= 1.
  GammaPoly nonnegative_symmetric(const GammaPoly& p) const {
    GammaPoly out;
    for (const auto& term : p.terms()) {
      if (term.m == Monomial{}) {
        out += GammaPoly::constant(term.c);
      } else if (positive_(term.m)) {
        out += GammaPoly(term.m, term.c);
        out += GammaPoly(term.m.inverse(), term.c);
      }
    }
    return out;
  }

  const Group* g_;
  std::vector<Monomial> params_;
  std::function<bool(Monomial)> positive_;
  std::unordered_map<Element, Vec, ElementHash> c_;
};

/// Lexicographic positivity with Q dominant.
inline bool lex_q_dominant(Monomial m) { return m.i > 0 || (m.i == 0 && m.j > 0); }

/// Single-parameter setting v_s = Q^{L(s)}, everything a Laurent polynomial in Q.
inline Hecke single_parameter(const Group& g, const std::vector<int>& weights) {
  std::vector<Monomial> params;
  for (int w : weights) params.push_back({w, 0});
  return Hecke(g, params, lex_q_dominant);
}

/// All products of subwords of a reduced word of w.
inline ElementSet subword_products(const Group& g, const Element& w) {
  Word word = g.reduced_word(w);
  ElementSet out;
  std::size_t n = word.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Element x = g.identity();
    for (std::size_t k = 0; k < n; ++k)
      if ((mask >> k) & 1u) x = g.right_multiply(x, word[k]);
    out.insert(x);
  }
  return out;
}

/// Number of hyperplanes <x, beta^vee> = n separating the base point from
/// its image under w.
inline int separating_hyperplanes(const Group& g, const Element& w) {
  int count = 0;
  for (std::size_t k = 0; k < g.data().positive_roots.size(); ++k) {
    Rational a = g.pairing(g.identity(), static_cast<int>(k));
    Rational b = g.pairing(w, static_cast<int>(k));
    if (b < a) std::swap(a, b);
    count += static_cast<int>(floor(b) - floor(a));
  }
  return count;
}

}  // namespace oracle

#endif
