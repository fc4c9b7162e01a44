#include "mackey/ffield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace mackey::ff {

namespace {

Limits g_limits;
std::mutex g_limits_mutex;

using Coeffs = std::vector<std::uint32_t>;  // polynomial over F_p, low-to-high

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  return static_cast<std::uint32_t>((t % p + p) % p);
}

Coeffs poly_mod(Coeffs a, const Coeffs& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
    trim(a);
  }
  return a;
}

Coeffs poly_mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  return poly_mod(std::move(r), m, p);
}

Coeffs poly_powmod(Coeffs base, std::uint64_t e, const Coeffs& m, std::uint32_t p) {
  Coeffs r{1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

Coeffs poly_gcd(Coeffs a, Coeffs b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Coeffs poly_sub(Coeffs a, const Coeffs& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Rabin's test: f of degree d is irreducible iff x^{p^d} = x mod f and
// gcd(x^{p^{d/r}} - x, f) = 1 for every prime r | d.
bool irreducible(const Coeffs& f, std::uint32_t p) {
  const std::uint32_t d = static_cast<std::uint32_t>(f.size() - 1);
  if (d == 1) return true;
  if (f[0] == 0) return false;
  const Coeffs x{0, 1};
  auto x_pow_p_k = [&](std::uint32_t k) {
    Coeffs r = x;
    for (std::uint32_t i = 0; i < k; ++i) r = poly_powmod(r, p, f, p);
    return r;
  };
  if (poly_sub(x_pow_p_k(d), x, p) != Coeffs{}) return false;
  for (std::uint64_t r : prime_factors(d)) {
    Coeffs g = poly_gcd(f, poly_sub(x_pow_p_k(d / static_cast<std::uint32_t>(r)), x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

// Lexicographically least monic irreducible, comparing c0 first.
Coeffs canonical_poly(std::uint32_t p, std::uint32_t d) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < d; ++i) count *= p;
  Coeffs f(d + 1, 0);
  f[d] = 1;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    for (std::uint32_t i = d; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    if (irreducible(f, p)) return f;
  }
  throw FieldError("no irreducible polynomial found");
}

// Arithmetic through coefficient vectors, used before tables exist.
struct RawArith {
  std::uint32_t p, d;
  Coeffs poly;

  Coeffs unpack(Elem a) const {
    Coeffs c(d, 0);
    for (std::uint32_t i = 0; i < d; ++i) {
      c[i] = a % p;
      a /= p;
    }
    trim(c);
    return c;
  }
  Elem pack(const Coeffs& c) const {
    Elem v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
    return v;
  }
  Elem mul(Elem a, Elem b) const { return pack(poly_mulmod(unpack(a), unpack(b), poly, p)); }
  Elem pow(Elem a, std::uint64_t e) const { return pack(poly_powmod(unpack(a), e, poly, p)); }
  Elem add(Elem a, Elem b) const {
    Elem r = 0, w = 1;
    for (std::uint32_t i = 0; i < d; ++i) {
      r += ((a % p + b % p) % p) * w;
      a /= p;
      b /= p;
      w *= p;
    }
    return r;
  }
};

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

FieldPtr build_field(std::uint32_t p, std::uint32_t d);

std::recursive_mutex g_registry_mutex;
std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> g_registry;

FieldPtr build_field(std::uint32_t p, std::uint32_t d) {
  Coeffs poly = canonical_poly(p, d);
  const RawArith raw{p, d, poly};
  const std::uint64_t q = ipow(p, d);

  // Minimal polynomials (over F_p) of the compatible generators of proper subfields.
  std::vector<std::pair<std::uint64_t, Coeffs>> constraints;
  for (std::uint32_t k = 1; k < d; ++k) {
    if (d % k != 0) continue;
    FieldPtr sub = make_field(p, k);
    std::vector<Elem> mp{sub->one()};
    Elem conj = sub->generator();
    for (std::uint32_t i = 0; i < k; ++i) {
      // mp *= (X - conj)
      std::vector<Elem> next(mp.size() + 1, 0);
      for (std::size_t j = 0; j < mp.size(); ++j) {
        next[j + 1] = sub->add(next[j + 1], mp[j]);
        next[j] = sub->sub(next[j], sub->mul(mp[j], conj));
      }
      mp = std::move(next);
      conj = sub->pow(conj, p);
    }
    Coeffs over_fp;
    for (Elem c : mp) over_fp.push_back(c);  // prime-subfield elements are single digits
    constraints.emplace_back((q - 1) / (ipow(p, k) - 1), std::move(over_fp));
  }

  const auto order_primes = prime_factors(q - 1);
  Elem gen = 0;
  for (Elem x = 1; x < q; ++x) {
    bool primitive = true;
    for (std::uint64_t r : order_primes) {
      if (raw.pow(x, (q - 1) / r) == 1) {
        primitive = false;
        break;
      }
    }
    if (!primitive) continue;
    bool compatible = true;
    for (const auto& [e, mp] : constraints) {
      const Elem z = raw.pow(x, e);
      Elem acc = 0;
      for (std::size_t i = mp.size(); i-- > 0;) acc = raw.add(raw.mul(acc, z), mp[i]);
      if (acc != 0) {
        compatible = false;
        break;
      }
    }
    if (compatible) {
      gen = x;
      break;
    }
  }
  if (gen == 0 && q > 2) throw FieldError("no compatible primitive element for " + std::to_string(p) + "^" + std::to_string(d));
  if (q == 2) gen = 1;

  std::vector<Elem> exp_table(q - 1);
  std::vector<std::uint32_t> log_table(q, 0);
  Elem cur = 1;
  for (std::uint64_t i = 0; i + 1 < q; ++i) {
    exp_table[i] = cur;
    log_table[cur] = static_cast<std::uint32_t>(i);
    cur = raw.mul(cur, gen);
  }
  if (exp_table.size() < 2) exp_table.push_back(1);  // F_2: exp_[1] must exist
  return std::make_shared<const Field>(p, d, std::move(poly), std::move(exp_table), std::move(log_table));
}

}  // namespace

void set_limits(const Limits& limits) {
  std::lock_guard lock(g_limits_mutex);
  g_limits = limits;
}

Limits limits() {
  std::lock_guard lock(g_limits_mutex);
  return g_limits;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

Field::Field(std::uint32_t p, std::uint32_t d, std::vector<std::uint32_t> poly,
             std::vector<Elem> exp_table, std::vector<std::uint32_t> log_table)
    : p_(p), d_(d), q_(static_cast<std::uint32_t>(ipow(p, d))), poly_(std::move(poly)),
      exp_(std::move(exp_table)), log_(std::move(log_table)) {
  pw_.resize(d_ + 1);
  pw_[0] = 1;
  for (std::uint32_t i = 1; i <= d_; ++i) pw_[i] = pw_[i - 1] * p_;
}

Elem Field::add(Elem a, Elem b) const {
  if (p_ == 2) return a ^ b;
  if (d_ == 1) return (a + b) % p_;
  Elem r = 0;
  for (std::uint32_t i = 0; i < d_; ++i) {
    const Elem s = a % p_ + b % p_;
    r += (s >= p_ ? s - p_ : s) * pw_[i];
    a /= p_;
    b /= p_;
  }
  return r;
}

Elem Field::neg(Elem a) const {
  if (p_ == 2) return a;
  if (d_ == 1) return a == 0 ? 0 : p_ - a;
  Elem r = 0;
  for (std::uint32_t i = 0; i < d_; ++i) {
    const Elem c = a % p_;
    r += (c == 0 ? 0 : p_ - c) * pw_[i];
    a /= p_;
  }
  return r;
}

Elem Field::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem Field::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t s = std::uint64_t{log_[a]} + log_[b];
  return exp_[s % (q_ - 1)];
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw FieldError("inverse of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Elem Field::pow(Elem a, std::int64_t e) const {
  if (a == 0) {
    if (e < 0) throw FieldError("negative power of zero");
    return e == 0 ? 1 : 0;
  }
  const std::int64_t n = q_ - 1;
  std::int64_t k = (static_cast<std::int64_t>(log_[a]) * (e % n)) % n;
  if (k < 0) k += n;
  return exp_[static_cast<std::size_t>(k)];
}

Elem Field::from_int(std::int64_t n) const {
  std::int64_t r = n % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

std::uint32_t Field::log(Elem a) const {
  if (a == 0) throw FieldError("log of zero");
  return log_[a];
}

std::vector<std::uint32_t> Field::coeffs(Elem a) const {
  std::vector<std::uint32_t> c(d_);
  for (std::uint32_t i = 0; i < d_; ++i) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

Elem Field::from_coeffs(std::span<const std::uint32_t> c) const {
  if (c.size() > d_) throw FieldError("too many coordinates for " + name());
  Elem v = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] >= p_) throw FieldError("coordinate out of range");
    v = v * p_ + c[i];
  }
  return v;
}

std::string Field::format(Elem a) const {
  std::ostringstream os;
  os << p_ << '^' << d_ << ":[";
  const auto c = coeffs(a);
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

FieldPtr make_field(std::uint32_t p, std::uint32_t d) {
  if (!is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  const Limits lim = limits();
  if (d < 1 || d > lim.max_degree) throw FieldError("degree " + std::to_string(d) + " out of range");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    q *= p;
    if (q > lim.max_size) throw FieldError("field " + std::to_string(p) + "^" + std::to_string(d) + " exceeds size cap");
  }
  std::lock_guard lock(g_registry_mutex);
  auto it = g_registry.find({p, d});
  if (it != g_registry.end()) return it->second;
  FieldPtr f = build_field(p, d);
  g_registry.emplace(std::make_pair(p, d), f);
  return f;
}

namespace {

void require_subfield(const Field& top, const Field& sub) {
  if (!top.contains_subfield(sub))
    throw FieldError("F_" + sub.name() + " is not a subfield of F_" + top.name());
}

std::uint64_t cofactor(const Field& top, const Field& sub) {
  return (std::uint64_t{top.size()} - 1) / (std::uint64_t{sub.size()} - 1);
}

}  // namespace

Elem embed(const Field& src, Elem a, const Field& dst) {
  require_subfield(dst, src);
  if (a == 0) return 0;
  if (&src == &dst) return a;
  return dst.exp(std::uint64_t{src.log(a)} * cofactor(dst, src));
}

bool lies_in(const Field& top, Elem a, const Field& sub) {
  require_subfield(top, sub);
  return a == 0 || top.log(a) % cofactor(top, sub) == 0;
}

Elem descend(const Field& top, Elem a, const Field& sub) {
  require_subfield(top, sub);
  if (a == 0) return 0;
  const std::uint64_t c = cofactor(top, sub);
  const std::uint32_t l = top.log(a);
  if (l % c != 0) throw FieldError(top.format(a) + " does not lie in F_" + sub.name());
  return sub.exp(l / c);
}

Elem frobenius(const Field& f, Elem a, const Field& over) {
  require_subfield(f, over);
  return f.pow(a, over.size());
}

Elem trace(const Field& f, Elem a, const Field& down_to) {
  require_subfield(f, down_to);
  Elem sum = 0, conj = a;
  for (std::uint32_t i = 0; i < f.degree() / down_to.degree(); ++i) {
    sum = f.add(sum, conj);
    conj = f.pow(conj, down_to.size());
  }
  return descend(f, sum, down_to);
}

Elem norm(const Field& f, Elem a, const Field& down_to) {
  require_subfield(f, down_to);
  if (a == 0) return 0;
  // N(g^l) = g^{l*c} = embed(g_sub^l), with c the cofactor.
  return down_to.exp(f.log(a));
}

FieldElem embed(const FieldElem& a, const FieldPtr& target) { return {target, embed(*a.field, a.value, *target)}; }
FieldElem frobenius(const FieldElem& a, const FieldPtr& over) { return {a.field, frobenius(*a.field, a.value, *over)}; }
FieldElem trace(const FieldElem& a, const FieldPtr& down_to) { return {down_to, trace(*a.field, a.value, *down_to)}; }
FieldElem norm(const FieldElem& a, const FieldPtr& down_to) { return {down_to, norm(*a.field, a.value, *down_to)}; }

FieldElem parse_elem(const std::string& text) {
  unsigned p = 0, d = 0;
  const auto colon = text.find(':');
  const auto caret = text.find('^');
  if (colon == std::string::npos || caret == std::string::npos || caret > colon)
    throw FieldError("expected p^d:[c0,...], got '" + text + "'");
  try {
    p = static_cast<unsigned>(std::stoul(text.substr(0, caret)));
    d = static_cast<unsigned>(std::stoul(text.substr(caret + 1, colon - caret - 1)));
  } catch (const std::exception&) {
    throw FieldError("bad field prefix in '" + text + "'");
  }
  FieldPtr f = make_field(p, d);
  std::string body = text.substr(colon + 1);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw FieldError("expected bracketed coordinates in '" + text + "'");
  body = body.substr(1, body.size() - 2);
  std::vector<std::uint32_t> c;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    c.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  return {f, f->from_coeffs(c)};
}

}  // namespace mackey::ff
