#ifndef KLCELLS_GAMMA_HPP
#define KLCELLS_GAMMA_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "klcells/coxeter.hpp"

namespace klcells {

using Coeff = boost::multiprecision::cpp_int;

/// The monomial Q^i q^j of Gamma = Z^2.
struct Monomial {
  std::int32_t i = 0;  // Q-exponent
  std::int32_t j = 0;  // q-exponent

  auto operator<=>(const Monomial&) const = default;

  Monomial operator*(const Monomial& o) const { return {i + o.i, j + o.j}; }
  Monomial inverse() const { return {-i, -j}; }
};

/// Finitely supported integer function on Gamma, i.e. an element of Z[Gamma].
/// Terms are kept sorted by (i, j) with no zero coefficients.
class GammaPoly {
 public:
  struct Term {
    Monomial m;
    Coeff c;
    bool operator==(const Term&) const = default;
  };

  GammaPoly() = default;
  GammaPoly(Monomial m, Coeff c = 1);
  static GammaPoly constant(Coeff c) { return GammaPoly(Monomial{}, std::move(c)); }
  static GammaPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Coeff coefficient(Monomial m) const;

  GammaPoly& operator+=(const GammaPoly& o);
  GammaPoly& operator-=(const GammaPoly& o);
  friend GammaPoly operator+(GammaPoly a, const GammaPoly& b) { return a += b; }
  friend GammaPoly operator-(GammaPoly a, const GammaPoly& b) { return a -= b; }
  friend GammaPoly operator*(const GammaPoly& a, const GammaPoly& b);
  GammaPoly operator-() const;

  /// Multiplies by a single monomial (a shift of the support).
  GammaPoly shifted(Monomial m) const;

  bool operator==(const GammaPoly&) const = default;

  std::string to_string() const;

 private:
  void add_scaled(const GammaPoly& o, int sign);
  std::vector<Term> terms_;
};

/// Involution Q^i q^j -> Q^-i q^-j.
GammaPoly bar(const GammaPoly& p);

enum class Sign { Negative = -1, Unit = 0, Positive = 1 };

class OrderUndefined : public Error {
 public:
  OrderUndefined(Monomial m, const std::string& what)
      : Error(what), monomial(m) {}
  Monomial monomial;
};

/// A total order on Gamma, given by its positive cone.
class OrderSpec {
 public:
  enum class Kind { LexQDominant, LexqDominant, Ratio, RatioMirror, Weight };

  static OrderSpec lex_Q() { return OrderSpec(Kind::LexQDominant, 0, 0); }
  static OrderSpec lex_q() { return OrderSpec(Kind::LexqDominant, 0, 0); }
  /// Sign of c i + d j; on the tie line, positive iff j < 0.
  static OrderSpec ratio(int c, int d);
  /// The image of ratio(c, d) under Q <-> q.
  static OrderSpec ratio_mirror(int c, int d);
  /// Sign of a i + b j; ties other than 1 are an error.
  static OrderSpec weight(int a, int b);

  /// "lexQ", "lexq", "ratio:c/d", "mirror:c/d", "weight:a,b".
  static OrderSpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  int c() const { return c_; }
  int d() const { return d_; }

  Sign sign(Monomial m) const;
  bool is_positive(Monomial m) const { return sign(m) == Sign::Positive; }
  /// a < b in the order.
  bool less(Monomial a, Monomial b) const { return sign(b * a.inverse()) == Sign::Positive; }

  std::string to_string() const;
  /// Description of the positive cone, e.g. "{Q^i q^j | 2i+j>0} u {Q^j q^-2j | j>0}".
  std::string describe() const;

  bool operator==(const OrderSpec&) const = default;

 private:
  OrderSpec(Kind k, int c, int d) : kind_(k), c_(c), d_(d) {}
  Kind kind_;
  int c_;
  int d_;
};

struct SplitParts {
  GammaPoly positive;
  Coeff unit;
  GammaPoly negative;
};

/// p = positive + unit * 1 + negative with the parts supported in
/// Gamma_+, {1}, Gamma_- respectively.
SplitParts split(const GammaPoly& p, const OrderSpec& order);

/// Element of Z[v, v^-1], sorted by exponent, no zero coefficients.
class SingleLaurent {
 public:
  struct Term {
    std::int64_t e;
    Coeff c;
    bool operator==(const Term&) const = default;
  };
  SingleLaurent() = default;
  static SingleLaurent monomial(std::int64_t e, Coeff c = 1);
  static SingleLaurent from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coeff coefficient(std::int64_t e) const;

  friend SingleLaurent operator+(const SingleLaurent& a, const SingleLaurent& b);
  friend SingleLaurent operator-(const SingleLaurent& a, const SingleLaurent& b);
  friend SingleLaurent operator*(const SingleLaurent& a, const SingleLaurent& b);
  bool operator==(const SingleLaurent&) const = default;

  SingleLaurent bar() const;
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

/// The weight function L(s1) = a, L(s2) = L(s3) = b.
struct WeightFunction {
  int a = 1;
  int b = 1;
};

/// sigma_{a,b}: Q^i q^j -> v^{a i + b j}.
SingleLaurent specialize(const GammaPoly& p, const WeightFunction& wf);

/// Reads Q^i q^0 as v^i; throws when a q-exponent is nonzero.
SingleLaurent as_single(const GammaPoly& p);

nlohmann::json to_json(const GammaPoly& p);
GammaPoly gamma_poly_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SingleLaurent& p);
nlohmann::json coeff_to_json(const Coeff& c);

std::string to_string(Monomial m);

}  // namespace klcells

#endif
