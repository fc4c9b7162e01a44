#include "mackey/p1.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace mackey::p1 {

Place Place::infinity(FieldPtr field) {
  Place x;
  x.field_ = field;
  x.pi_ = Poly(field);
  x.inf_ = true;
  return x;
}

Place Place::finite(Poly pi) {
  if (pi.degree() < 1 || !pi.is_monic()) throw std::invalid_argument("a place needs a monic polynomial of positive degree");
  if (!poly::is_irreducible(pi)) throw std::invalid_argument(pi.to_string() + " is not irreducible");
  Place x;
  x.field_ = pi.field();
  x.pi_ = std::move(pi);
  return x;
}

Place Place::rational(FieldPtr field, Elem c) { return finite(Poly::linear(std::move(field), c)); }

FieldPtr Place::residue_field() const { return ff::make_field(field_->p(), field_->degree() * degree()); }

Elem Place::root() const {
  if (inf_) throw std::logic_error("the point at infinity has no affine root");
  auto k = residue_field();
  for (Elem e = 0; e < k->size(); ++e)
    if (pi_.eval(*k, e) == 0) return e;
  throw std::logic_error("irreducible polynomial without a root in its residue field");
}

bool Place::operator<(const Place& o) const {
  if (inf_ != o.inf_) return o.inf_;
  if (inf_) return false;
  if (pi_.degree() != o.pi_.degree()) return pi_.degree() < o.pi_.degree();
  return pi_ < o.pi_;
}

std::string Place::to_string() const {
  if (inf_) return "(inf)";
  if (pi_.degree() == 1 && field_->degree() == 1) {
    Elem c = field_->neg(pi_.coeff(0));
    return "(" + std::to_string(field_->coeffs(c)[0]) + ")";
  }
  return "(" + pi_.to_string() + ")";
}

std::int64_t valuation(const RationalFunction& f, const Place& x) {
  if (f.is_zero()) throw std::domain_error("valuation of the zero function");
  if (x.is_infinity()) return static_cast<std::int64_t>(f.den().degree()) - f.num().degree();
  return poly::valuation(f.num(), x.poly()) - poly::valuation(f.den(), x.poly());
}

Elem value_at(const RationalFunction& f, const Place& x) {
  auto k = x.residue_field();
  if (f.is_zero()) return 0;
  const std::int64_t v = valuation(f, x);
  if (v < 0) throw std::domain_error("function has a pole at " + x.to_string());
  if (v > 0) return 0;
  if (x.is_infinity()) return k->div(f.num().lead(), f.den().lead());
  Elem r = x.root();
  return k->div(f.num().eval(*k, r), f.den().eval(*k, r));
}

void Divisor::add(const Place& x, std::int64_t m) {
  if (!field_) field_ = x.field();
  if (m == 0) return;
  auto& slot = terms_[x];
  slot += m;
  if (slot == 0) terms_.erase(x);
}

std::int64_t Divisor::multiplicity(const Place& x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? 0 : it->second;
}

std::int64_t Divisor::degree() const {
  std::int64_t d = 0;
  for (const auto& [x, m] : terms_) d += m * x.degree();
  return d;
}

bool Divisor::effective() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

std::vector<Place> Divisor::support() const {
  std::vector<Place> s;
  for (const auto& [x, m] : terms_) s.push_back(x);
  return s;
}

std::uint32_t Divisor::max_support_degree() const {
  std::uint32_t d = 0;
  for (const auto& [x, m] : terms_) d = std::max(d, x.degree());
  return d;
}

std::string Divisor::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [x, m] : terms_) {
    if (!s.empty()) s += m > 0 ? "+" : "-";
    else if (m < 0) s += "-";
    std::int64_t a = m < 0 ? -m : m;
    if (a != 1) s += std::to_string(a) + "*";
    s += x.to_string();
  }
  return s;
}

Divisor divisor_of(const RationalFunction& f) {
  if (f.is_zero()) throw std::domain_error("divisor of the zero function");
  Divisor d(f.field());
  for (const auto& [pi, m] : poly::factor(f.num()).factors) d.add(Place::finite(pi), m);
  for (const auto& [pi, m] : poly::factor(f.den()).factors) d.add(Place::finite(pi), -m);
  d.add(Place::infinity(f.field()), valuation(f, Place::infinity(f.field())));
  return d;
}

namespace {

std::string strip(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  return i < s.size() && std::all_of(s.begin() + i, s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Place parse_place(const FieldPtr& field, const std::string& text) {
  std::string s = strip(text);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = strip(s.substr(1, s.size() - 2));
  if (s == "inf" || s == "oo" || s == "∞") return Place::infinity(field);
  if (is_integer(s)) return Place::rational(field, field->from_int(std::stoll(s)));
  Poly p = poly::parse_poly(field, s);
  if (p.degree() < 1) throw std::invalid_argument("place '" + text + "' is a constant");
  return Place::finite(p.monic());
}

Divisor parse_divisor(const FieldPtr& field, const std::string& text) {
  Divisor d(field);
  std::vector<std::string> terms;
  int depth = 0;
  std::string cur;
  char last = '+';
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == '+' && depth == 0) {
      terms.push_back(cur);
      cur.clear();
    } else if (ch == '-' && depth == 0 && last == ')') {
      // "(1)-2*(inf)": a minus directly after a closed place starts a negated term
      terms.push_back(cur);
      cur = "-";
    } else {
      cur += ch;
    }
    if (!std::isspace(static_cast<unsigned char>(ch))) last = ch;
  }
  terms.push_back(cur);
  for (auto term : terms) {
    term = strip(term);
    if (term.empty()) throw std::invalid_argument("empty term in divisor '" + text + "'");
    std::int64_t m = 1;
    if (term.size() > 1 && term[0] == '-' && term[1] == '(') {
      m = -1;
      term = term.substr(1);
    }
    if (auto star = term.find('*'); star != std::string::npos && is_integer(strip(term.substr(0, star)))) {
      m *= std::stoll(strip(term.substr(0, star)));
      term = term.substr(star + 1);
    }
    d.add(parse_place(field, term), m);
  }
  return d;
}

}  // namespace mackey::p1
