#include "klcells/gamma.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace klcells {

namespace {

template <class Term, class Key>
std::vector<Term> normalize(std::vector<Term> terms, Key key) {
  std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) { return key(a) < key(b); });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && key(out.back()) == key(t)) {
      out.back().c += t.c;
      if (out.back().c == 0) out.pop_back();
    } else if (t.c != 0) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::string coeff_prefix(const Coeff& c, bool first, bool is_one_monomial) {
  std::string out;
  Coeff mag = c < 0 ? Coeff(-c) : c;
  if (c < 0) out += first ? "-" : " - ";
  else if (!first) out += " + ";
  if (mag != 1 || is_one_monomial) out += mag.str();
  return out;
}

}  // namespace

std::string to_string(Monomial m) {
  if (m.i == 0 && m.j == 0) return "1";
  std::string out;
  auto var = [&out](const char* name, int e) {
    if (e == 0) return;
    out += name;
    if (e != 1) out += "^" + std::to_string(e);
  };
  var("Q", m.i);
  var("q", m.j);
  return out;
}

GammaPoly::GammaPoly(Monomial m, Coeff c) {
  if (c != 0) terms_.push_back({m, std::move(c)});
}

GammaPoly GammaPoly::from_terms(std::vector<Term> terms) {
  GammaPoly p;
  p.terms_ = normalize(std::move(terms), [](const Term& t) { return t.m; });
  return p;
}

Coeff GammaPoly::coefficient(Monomial m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& x) { return t.m < x; });
  return (it != terms_.end() && it->m == m) ? it->c : Coeff(0);
}

void GammaPoly::add_scaled(const GammaPoly& o, int sign) {
  if (o.terms_.empty()) return;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin(), ae = terms_.end();
  auto b = o.terms_.begin(), be = o.terms_.end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->m < b->m)) {
      out.push_back(std::move(*a++));
    } else if (a == ae || b->m < a->m) {
      out.push_back({b->m, sign > 0 ? b->c : Coeff(-b->c)});
      ++b;
    } else {
      Coeff c = sign > 0 ? Coeff(a->c + b->c) : Coeff(a->c - b->c);
      if (c != 0) out.push_back({a->m, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
}

GammaPoly& GammaPoly::operator+=(const GammaPoly& o) {
  add_scaled(o, 1);
  return *this;
}

GammaPoly& GammaPoly::operator-=(const GammaPoly& o) {
  add_scaled(o, -1);
  return *this;
}

GammaPoly operator*(const GammaPoly& a, const GammaPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GammaPoly::Term> prod;
  prod.reserve(a.size() * b.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) prod.push_back({x.m * y.m, x.c * y.c});
  return GammaPoly::from_terms(std::move(prod));
}

GammaPoly GammaPoly::operator-() const {
  GammaPoly out = *this;
  for (auto& t : out.terms_) t.c = -t.c;
  return out;
}

GammaPoly GammaPoly::shifted(Monomial m) const {
  GammaPoly out = *this;
  for (auto& t : out.terms_) t.m = t.m * m;
  return out;
}

std::string GammaPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    bool one = t.m == Monomial{};
    out += coeff_prefix(t.c, first, one);
    if (!one) out += klcells::to_string(t.m);
    first = false;
  }
  return out;
}

GammaPoly bar(const GammaPoly& p) {
  std::vector<GammaPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({t.m.inverse(), t.c});
  return GammaPoly::from_terms(std::move(terms));
}

OrderSpec OrderSpec::ratio(int c, int d) {
  if (c < 1 || d < 1) throw Error("ratio order needs c, d >= 1");
  int g = std::gcd(c, d);
  return OrderSpec(Kind::Ratio, c / g, d / g);
}

OrderSpec OrderSpec::ratio_mirror(int c, int d) {
  OrderSpec o = ratio(c, d);
  return OrderSpec(Kind::RatioMirror, o.c_, o.d_);
}

OrderSpec OrderSpec::weight(int a, int b) {
  if (a < 1 || b < 1) throw Error("weight order needs a, b >= 1");
  return OrderSpec(Kind::Weight, a, b);
}

OrderSpec OrderSpec::parse(const std::string& text) {
  if (text == "lexQ") return lex_Q();
  if (text == "lexq") return lex_q();
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    std::string head = text.substr(0, colon), tail = text.substr(colon + 1);
    try {
      if (head == "ratio" || head == "mirror") {
        Rational r = parse_rational(tail);
        return head == "ratio" ? ratio(static_cast<int>(r.numerator()), static_cast<int>(r.denominator()))
                               : ratio_mirror(static_cast<int>(r.numerator()), static_cast<int>(r.denominator()));
      }
      if (head == "weight") {
        auto comma = tail.find(',');
        if (comma != std::string::npos)
          return weight(std::stoi(tail.substr(0, comma)), std::stoi(tail.substr(comma + 1)));
      }
    } catch (const std::invalid_argument&) {
    }
  }
  throw Error("unknown order '" + text + "' (expected lexQ, lexq, ratio:c/d, mirror:c/d, weight:a,b)");
}

namespace {

Sign sign_of(std::int64_t v) {
  return v > 0 ? Sign::Positive : (v < 0 ? Sign::Negative : Sign::Unit);
}

Sign ratio_sign(std::int64_t c, std::int64_t d, std::int64_t i, std::int64_t j) {
  std::int64_t v = c * i + d * j;
  if (v != 0) return sign_of(v);
  if (i == 0 && j == 0) return Sign::Unit;
  return j < 0 ? Sign::Positive : Sign::Negative;
}

}  // namespace

Sign OrderSpec::sign(Monomial m) const {
  switch (kind_) {
    case Kind::LexQDominant:
      return m.i != 0 ? sign_of(m.i) : sign_of(m.j);
    case Kind::LexqDominant:
      return m.j != 0 ? sign_of(m.j) : sign_of(m.i);
    case Kind::Ratio:
      return ratio_sign(c_, d_, m.i, m.j);
    case Kind::RatioMirror:
      return ratio_sign(c_, d_, m.j, m.i);
    case Kind::Weight: {
      std::int64_t v = std::int64_t{c_} * m.i + std::int64_t{d_} * m.j;
      if (v == 0 && (m.i != 0 || m.j != 0))
        throw OrderUndefined(m, "order undefined for monomial " + klcells::to_string(m) + " under " +
                                    to_string() + "; use a refined order");
      return sign_of(v);
    }
  }
  return Sign::Unit;
}

std::string OrderSpec::to_string() const {
  switch (kind_) {
    case Kind::LexQDominant: return "lexQ";
    case Kind::LexqDominant: return "lexq";
    case Kind::Ratio: return "ratio:" + std::to_string(c_) + "/" + std::to_string(d_);
    case Kind::RatioMirror: return "mirror:" + std::to_string(c_) + "/" + std::to_string(d_);
    case Kind::Weight: return "weight:" + std::to_string(c_) + "," + std::to_string(d_);
  }
  return "";
}

std::string OrderSpec::describe() const {
  auto lin = [](int c, const char* x, int d, const char* y) {
    std::string s;
    if (c != 1) s += std::to_string(c);
    s += x;
    s += "+";
    if (d != 1) s += std::to_string(d);
    s += y;
    return s;
  };
  auto mono = [](int k, const char* var) {
    std::string s = var;
    if (k == -1) return s + "^-j";
    if (k != 1) s += "^" + std::to_string(k) + "j";
    else s += "^j";
    return s;
  };
  switch (kind_) {
    case Kind::LexQDominant: return "{Q^i q^j | i>0} u {q^j | j>0}";
    case Kind::LexqDominant: return "{Q^i q^j | j>0} u {Q^i | i>0}";
    case Kind::Ratio:
      return "{Q^i q^j | " + lin(c_, "i", d_, "j") + ">0} u {" + mono(d_, "Q") + " q^" +
             (c_ == 1 ? std::string("-j") : "-" + std::to_string(c_) + "j") + " | j>0}";
    case Kind::RatioMirror:
      return "{Q^i q^j | " + lin(d_, "i", c_, "j") + ">0} u {Q^" +
             (c_ == 1 ? std::string("-j") : "-" + std::to_string(c_) + "j") + " " + mono(d_, "q") + " | j>0}";
    case Kind::Weight:
      return "{Q^i q^j | " + lin(c_, "i", d_, "j") + ">0} (ties undefined)";
  }
  return "";
}

SplitParts split(const GammaPoly& p, const OrderSpec& order) {
  std::vector<GammaPoly::Term> pos, neg;
  Coeff unit = 0;
  for (const auto& t : p.terms()) {
    switch (order.sign(t.m)) {
      case Sign::Positive: pos.push_back(t); break;
      case Sign::Negative: neg.push_back(t); break;
      case Sign::Unit: unit = t.c; break;
    }
  }
  return {GammaPoly::from_terms(std::move(pos)), unit, GammaPoly::from_terms(std::move(neg))};
}

SingleLaurent SingleLaurent::monomial(std::int64_t e, Coeff c) {
  SingleLaurent p;
  if (c != 0) p.terms_.push_back({e, std::move(c)});
  return p;
}

SingleLaurent SingleLaurent::from_terms(std::vector<Term> terms) {
  SingleLaurent p;
  p.terms_ = normalize(std::move(terms), [](const Term& t) { return t.e; });
  return p;
}

Coeff SingleLaurent::coefficient(std::int64_t e) const {
  for (const auto& t : terms_)
    if (t.e == e) return t.c;
  return 0;
}

SingleLaurent operator+(const SingleLaurent& a, const SingleLaurent& b) {
  auto terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return SingleLaurent::from_terms(std::move(terms));
}

SingleLaurent operator-(const SingleLaurent& a, const SingleLaurent& b) {
  auto terms = a.terms_;
  for (const auto& t : b.terms_) terms.push_back({t.e, -t.c});
  return SingleLaurent::from_terms(std::move(terms));
}

SingleLaurent operator*(const SingleLaurent& a, const SingleLaurent& b) {
  std::vector<SingleLaurent::Term> terms;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) terms.push_back({x.e + y.e, x.c * y.c});
  return SingleLaurent::from_terms(std::move(terms));
}

SingleLaurent SingleLaurent::bar() const {
  auto terms = terms_;
  for (auto& t : terms) t.e = -t.e;
  return from_terms(std::move(terms));
}

std::string SingleLaurent::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    bool one = t.e == 0;
    out += coeff_prefix(t.c, first, one);
    if (!one) out += t.e == 1 ? std::string("v") : "v^" + std::to_string(t.e);
    first = false;
  }
  return out;
}

SingleLaurent specialize(const GammaPoly& p, const WeightFunction& wf) {
  std::vector<SingleLaurent::Term> terms;
  for (const auto& t : p.terms())
    terms.push_back({std::int64_t{wf.a} * t.m.i + std::int64_t{wf.b} * t.m.j, t.c});
  return SingleLaurent::from_terms(std::move(terms));
}

SingleLaurent as_single(const GammaPoly& p) {
  std::vector<SingleLaurent::Term> terms;
  for (const auto& t : p.terms()) {
    if (t.m.j != 0) throw Error("polynomial " + p.to_string() + " is not single-parameter");
    terms.push_back({t.m.i, t.c});
  }
  return SingleLaurent::from_terms(std::move(terms));
}

nlohmann::json coeff_to_json(const Coeff& c) {
  if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(c);
  return c.str();
}

nlohmann::json to_json(const GammaPoly& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : p.terms()) arr.push_back({{"Q", t.m.i}, {"q", t.m.j}, {"c", coeff_to_json(t.c)}});
  return arr;
}

GammaPoly gamma_poly_from_json(const nlohmann::json& j) {
  std::vector<GammaPoly::Term> terms;
  for (const auto& t : j) {
    Coeff c = t.at("c").is_string() ? Coeff(t.at("c").get<std::string>()) : Coeff(t.at("c").get<std::int64_t>());
    terms.push_back({{t.at("Q").get<std::int32_t>(), t.at("q").get<std::int32_t>()}, c});
  }
  return GammaPoly::from_terms(std::move(terms));
}

nlohmann::json to_json(const SingleLaurent& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : p.terms()) arr.push_back({{"v", t.e}, {"c", coeff_to_json(t.c)}});
  return arr;
}

}  // namespace klcells
