#include "mackey/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace mackey::poly {

Poly::Poly(FieldPtr field, std::vector<Elem> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(FieldPtr field, Elem c) { return Poly(std::move(field), {c}); }

Poly Poly::monomial(FieldPtr field, Elem c, std::size_t degree) {
  std::vector<Elem> v(degree + 1, 0);
  v[degree] = c;
  return Poly(std::move(field), std::move(v));
}

Poly Poly::linear(FieldPtr field, Elem c) {
  const Elem nc = field->neg(c);
  return Poly(std::move(field), {nc, 1});
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
  const FieldPtr& f = field_ ? field_ : o.field_;
  std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f->add(coeff(i), o.coeff(i));
  return Poly(f, std::move(r));
}

Poly Poly::operator-() const {
  std::vector<Elem> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->neg(c_[i]);
  return Poly(field_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  const FieldPtr& f = field_ ? field_ : o.field_;
  if (is_zero() || o.is_zero()) return Poly(f);
  std::vector<Elem> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = f->add(r[i + j], f->mul(c_[i], o.c_[j]));
  }
  return Poly(f, std::move(r));
}

Poly Poly::scaled(Elem s) const {
  std::vector<Elem> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->mul(c_[i], s);
  return Poly(field_, std::move(r));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(field_->inv(lead()));
}

bool Poly::operator<(const Poly& o) const {
  if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
  return std::lexicographical_compare(c_.rbegin(), c_.rend(), o.c_.rbegin(), o.c_.rend());
}

Elem Poly::eval(const ff::Field& ext, Elem x) const {
  Elem acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = ext.add(ext.mul(acc, x), ff::embed(*field_, c_[i], ext));
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(field_);
  std::vector<Elem> r(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = field_->mul(field_->from_int(static_cast<std::int64_t>(i)), c_[i]);
  return Poly(field_, std::move(r));
}

Poly Poly::shifted(Elem c) const {
  // Horner in the polynomial ring: p(t + c)
  Poly acc(field_);
  const Poly tc(field_, {c, 1});
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * tc + Poly::constant(field_, c_[i]);
  return acc;
}

Poly Poly::reversed(std::size_t deg) const {
  if (static_cast<int>(deg) < degree()) throw std::invalid_argument("reversal degree below polynomial degree");
  std::vector<Elem> r(deg + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[deg - i] = c_[i];
  return Poly(field_, std::move(r));
}

Poly Poly::embedded(const FieldPtr& ext) const {
  std::vector<Elem> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ff::embed(*field_, c_[i], *ext);
  return Poly(ext, std::move(r));
}

Poly Poly::frobenius(const ff::Field& over) const {
  std::vector<Elem> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ff::frobenius(*field_, c_[i], over);
  return Poly(field_, std::move(r));
}

Poly Poly::descended(const FieldPtr& sub) const {
  std::vector<Elem> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ff::descend(*field_, c_[i], *sub);
  return Poly(sub, std::move(r));
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    const bool unit = c_[i] == 1;
    std::string coef = field_->degree() == 1 ? std::to_string(c_[i]) : field_->format(c_[i]);
    if (i == 0) {
      os << coef;
    } else {
      if (!unit) os << coef << "*";
      os << "t";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const FieldPtr& f = b.field();
  std::vector<Elem> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly(f), a};
  std::vector<Elem> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
  const Elem inv_lead = f->inv(b.lead());
  for (int i = a.degree(); i >= db; --i) {
    const Elem c = f->mul(r[static_cast<std::size_t>(i)], inv_lead);
    if (c == 0) continue;
    q[static_cast<std::size_t>(i - db)] = c;
    for (int j = 0; j <= db; ++j) {
      auto& x = r[static_cast<std::size_t>(i - db + j)];
      x = f->sub(x, f->mul(c, b.coeff(static_cast<std::size_t>(j))));
    }
  }
  return {Poly(f, std::move(q)), Poly(f, std::move(r))};
}

Poly mod(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return mod(a * b, m); }

Poly powmod(Poly base, std::uint64_t e, const Poly& m) {
  Poly r = mod(Poly::constant(m.field(), 1), m);
  base = mod(base, m);
  while (e > 0) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

Poly pow(const Poly& a, std::uint32_t e) {
  Poly r = Poly::constant(a.field(), 1);
  for (std::uint32_t i = 0; i < e; ++i) r = r * a;
  return r;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

ExtGcd ext_gcd(const Poly& a, const Poly& b) {
  const FieldPtr& f = a.field() ? a.field() : b.field();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(f, 1), s1(f);
  Poly t0(f), t1 = Poly::constant(f, 1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::exchange(r1, r);
    s0 = std::exchange(s1, s0 - q * s1);
    t0 = std::exchange(t1, t0 - q * t1);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const Elem inv = f->inv(r0.lead());
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

Poly inverse_mod(const Poly& a, const Poly& m) {
  ExtGcd e = ext_gcd(mod(a, m), m);
  if (e.g.degree() != 0) throw std::domain_error("polynomial not invertible modulo " + m.to_string());
  return mod(e.s, m);
}

namespace {

std::vector<std::uint32_t> prime_divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t f = 2; f * f <= n; ++f)
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_irreducible(const Poly& f) {
  const int d = f.degree();
  if (d <= 0) return false;
  if (d == 1) return true;
  const FieldPtr& k = f.field();
  const std::uint64_t q = k->size();
  const Poly t = Poly::monomial(k, 1, 1);
  auto t_pow_q_k = [&](int times) {
    Poly r = t;
    for (int i = 0; i < times; ++i) r = powmod(r, q, f);
    return r;
  };
  if (!(mod(t_pow_q_k(d) - t, f).is_zero())) return false;
  for (std::uint32_t r : prime_divisors(static_cast<std::uint32_t>(d))) {
    if (gcd(f, t_pow_q_k(d / static_cast<int>(r)) - t).degree() != 0) return false;
  }
  return true;
}

std::uint64_t monic_count(const ff::Field& f, std::uint32_t degree) {
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < degree; ++i) n *= f.size();
  return n;
}

Poly monic_from_index(const FieldPtr& f, std::uint32_t degree, std::uint64_t index) {
  std::vector<Elem> c(degree + 1, 0);
  c[degree] = 1;
  for (std::uint32_t i = 0; i < degree; ++i) {
    c[i] = static_cast<Elem>(index % f->size());
    index /= f->size();
  }
  return Poly(f, std::move(c));
}

std::vector<Poly> monic_irreducibles(const FieldPtr& f, std::uint32_t degree) {
  std::vector<Poly> out;
  const std::uint64_t n = monic_count(*f, degree);
  for (std::uint64_t i = 0; i < n; ++i) {
    Poly p = monic_from_index(f, degree, i);
    if (is_irreducible(p)) out.push_back(std::move(p));
  }
  return out;
}

int valuation(const Poly& a, const Poly& pi) {
  if (a.is_zero()) throw std::domain_error("valuation of zero");
  int v = 0;
  Poly x = a;
  for (;;) {
    auto [q, r] = divmod(x, pi);
    if (!r.is_zero()) return v;
    x = std::move(q);
    ++v;
  }
}

Factorization factor(const Poly& a) {
  if (a.is_zero()) throw std::domain_error("factorization of zero");
  Factorization out;
  out.unit = a.lead();
  Poly rest = a.monic();
  const FieldPtr& f = a.field();
  for (std::uint32_t d = 1; 2 * static_cast<int>(d) <= rest.degree(); ++d) {
    for (const Poly& pi : monic_irreducibles(f, d)) {
      int m = 0;
      for (;;) {
        auto [q, r] = divmod(rest, pi);
        if (!r.is_zero()) break;
        rest = std::move(q);
        ++m;
      }
      if (m > 0) out.factors.emplace_back(pi, m);
      if (2 * static_cast<int>(d) > rest.degree()) break;
    }
  }
  if (rest.degree() > 0) {
    // whatever remains has no factor of degree <= deg/2, hence is irreducible
    auto it = std::find_if(out.factors.begin(), out.factors.end(), [&](const auto& e) { return e.first == rest; });
    if (it != out.factors.end())
      ++it->second;
    else
      out.factors.emplace_back(rest, 1);
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  reduce();
}

RationalFunction::RationalFunction(Poly num) : num_(num), den_(Poly::constant(num.field(), 1)) {}

void RationalFunction::reduce() {
  if (num_.is_zero()) {
    den_ = Poly::constant(den_.field(), 1);
    num_ = Poly(den_.field());
    return;
  }
  const Poly g = gcd(num_, den_);
  num_ = divmod(num_, g).first;
  den_ = divmod(den_, g).first;
  const Elem inv = den_.field()->inv(den_.lead());
  num_ = num_.scaled(inv);
  den_ = den_.scaled(inv);
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
}
RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return {num_ * o.den_ - o.num_ * den_, den_ * o.den_};
}
RationalFunction RationalFunction::operator*(const RationalFunction& o) const { return {num_ * o.num_, den_ * o.den_}; }
RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.is_zero()) throw std::domain_error("division by the zero function");
  return {num_ * o.den_, den_ * o.num_};
}

std::string RationalFunction::to_string() const {
  if (den_.degree() == 0) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

namespace {

class Parser {
 public:
  Parser(const FieldPtr& f, const std::string& s) : f_(f), s_(s) {}

  RationalFunction parse() {
    RationalFunction r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse error at position " + std::to_string(pos_) + " in '" + s_ + "': " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  RationalFunction expr() {
    RationalFunction acc;
    bool first = true;
    for (;;) {
      bool negate = false;
      if (eat('-'))
        negate = true;
      else if (!first && !eat('+'))
        break;
      else if (first)
        eat('+');
      RationalFunction t = term();
      if (negate) t = RationalFunction(Poly(f_)) - t;
      acc = first ? t : acc + t;
      first = false;
      skip();
      if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
    }
    return acc;
  }
  RationalFunction term() {
    RationalFunction acc = factor();
    for (;;) {
      if (eat('*')) {
        acc = acc * factor();
      } else if (eat('/')) {
        acc = acc / factor();
      } else {
        skip();
        // implicit multiplication: "2t", "t(t+1)"
        if (pos_ < s_.size() && (s_[pos_] == 't' || s_[pos_] == '(')) {
          acc = acc * factor();
          continue;
        }
        return acc;
      }
    }
  }
  RationalFunction factor() {
    RationalFunction b = base();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const int e = std::stoi(s_.substr(start, pos_ - start));
      RationalFunction r(Poly::constant(f_, 1));
      for (int i = 0; i < e; ++i) r = r * b;
      return r;
    }
    return b;
  }
  RationalFunction base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      RationalFunction r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (s_[pos_] == 't') {
      ++pos_;
      return RationalFunction(Poly::monomial(f_, 1, 1));
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const long long v = std::stoll(s_.substr(start, pos_ - start));
      return RationalFunction(Poly::constant(f_, f_->from_int(v)));
    }
    fail("unexpected character");
  }

  const FieldPtr& f_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_rational(const FieldPtr& field, const std::string& text) { return Parser(field, text).parse(); }

Poly parse_poly(const FieldPtr& field, const std::string& text) {
  RationalFunction r = parse_rational(field, text);
  if (r.den().degree() != 0) throw std::invalid_argument("'" + text + "' is not a polynomial");
  return r.num().scaled(field->inv(r.den().lead()));
}

}  // namespace mackey::poly
