#include "mackey/groups.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mackey/zlinalg.hpp"

namespace mackey::groups {

namespace {

Limits g_limits;
std::mutex g_limits_mutex;

}  // namespace

void set_limits(const Limits& limits) {
  std::lock_guard lock(g_limits_mutex);
  g_limits = limits;
}

Limits limits() {
  std::lock_guard lock(g_limits_mutex);
  return g_limits;
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::GA: return "GA";
    case Kind::GM: return "GM";
    case Kind::GENJAC: return "GENJAC";
    case Kind::ELLIPTIC: return "ELL";
    case Kind::CONST_Z: return "Z";
  }
  return "?";
}

std::uint64_t AbelianStructure::order() const {
  std::uint64_t o = 1;
  for (auto d : invariant_factors) {
    if (d == 0) return 0;
    o *= static_cast<std::uint64_t>(d);
  }
  return o;
}

std::size_t AbelianStructure::free_rank() const {
  return static_cast<std::size_t>(std::count(invariant_factors.begin(), invariant_factors.end(), 0));
}

nlohmann::json AbelianStructure::to_json() const {
  nlohmann::json j;
  std::vector<std::int64_t> torsion;
  for (auto d : invariant_factors)
    if (d != 0) torsion.push_back(d);
  j["invariant_factors"] = torsion;
  j["free_rank"] = free_rank();
  j["order"] = free_rank() ? nlohmann::json("infinite") : nlohmann::json(order());
  return j;
}

EnumeratedStructure abelian_structure(const std::vector<Value>& elements, Value identity,
                                      const std::function<Value(Value, Value)>& op) {
  using zlinalg::Int;
  const std::size_t n = elements.size();
  if (n > limits().max_group_order) throw GroupError("group order " + std::to_string(n) + " exceeds cap");

  // Grow the subgroup generated by greedily chosen elements; coordinates are in terms
  // of the chosen elements and each new element contributes one relation.
  std::unordered_map<Value, std::vector<std::int64_t>> coords;
  coords.reserve(n * 2);
  coords[identity] = {};
  std::vector<Value> gens;
  std::vector<std::vector<std::int64_t>> relations;  // row k: m_k e_k - coords(m_k g_k)
  for (Value e : elements) {
    if (coords.contains(e)) continue;
    const std::size_t k = gens.size();
    gens.push_back(e);
    for (auto& [v, c] : coords) c.resize(k + 1, 0);
    std::int64_t m = 1;
    Value cur = e;
    while (!coords.contains(cur)) {
      cur = op(cur, e);
      ++m;
      if (static_cast<std::size_t>(m) > n + 1) throw GroupError("group law inconsistent: element of unbounded order");
    }
    std::vector<std::int64_t> rel(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i) rel[i] = -coords[cur][i];
    rel[k] = m;
    relations.push_back(std::move(rel));
    std::vector<std::pair<Value, std::vector<std::int64_t>>> old(coords.begin(), coords.end());
    Value step = e;
    for (std::int64_t i = 1; i < m; ++i) {
      for (const auto& [h, c] : old) {
        const Value hv = op(h, step);
        if (coords.contains(hv)) throw GroupError("group law inconsistent: coset collision");
        auto nc = c;
        nc[k] = i;
        coords.emplace(hv, std::move(nc));
      }
      step = op(step, e);
    }
  }
  if (coords.size() != n) throw GroupError("group law inconsistent: generated subgroup size differs from element count");

  const std::size_t r = gens.size();
  zlinalg::IntMatrix rel(0, r);
  for (const auto& row : relations) {
    zlinalg::SparseRow s;
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] != 0) s.emplace_back(static_cast<std::uint32_t>(i), Int(static_cast<long>(row[i])));
    rel.append_row(std::move(s));
  }
  const zlinalg::SmithResult snf = zlinalg::smith_normal_form(rel);

  EnumeratedStructure out;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < snf.diagonal.size(); ++i) {
    if (snf.diagonal[i] > 1) {
      kept.push_back(i);
      out.structure.invariant_factors.push_back(snf.diagonal[i].get_si());
    }
  }
  auto multiple = [&](Value a, std::int64_t times) {
    Value acc = identity;
    for (std::int64_t i = 0; i < times; ++i) acc = op(acc, a);
    return acc;
  };
  for (std::size_t idx : kept) {
    // new generator f_i = sum_j (V^-1)_{ij} g_j
    Value g = identity;
    for (std::size_t j = 0; j < r; ++j) {
      const Int& c = snf.v_inv[idx][j];
      // any multiple of the group order acts trivially
      const std::int64_t ord = static_cast<std::int64_t>(n);
      std::int64_t cm = mpz_class(c % ord).get_si();
      if (cm < 0) cm += ord;
      g = op(g, multiple(gens[j], cm));
    }
    out.structure.generators.push_back(g);
  }
  for (const auto& [v, c] : coords) {
    std::vector<std::int64_t> nc;
    nc.reserve(kept.size());
    for (std::size_t t = 0; t < kept.size(); ++t) {
      const std::size_t idx = kept[t];
      Int s = 0;
      for (std::size_t j = 0; j < r; ++j) s += Int(static_cast<long>(c[j])) * snf.v[j][idx];
      const std::int64_t d = out.structure.invariant_factors[t];
      std::int64_t sm = mpz_class(s % d).get_si();
      if (sm < 0) sm += d;
      nc.push_back(sm);
    }
    out.coords.emplace(v, std::move(nc));
  }
  return out;
}

// ---------------------------------------------------------------------------

ValueFunctor::ValueFunctor(Kind kind, FieldPtr base, poly::Poly modulus, Elem a, Elem b)
    : kind_(kind), base_(std::move(base)), modulus_(std::move(modulus)), a_(a), b_(b) {}

FunctorPtr ValueFunctor::additive(FieldPtr base) {
  return std::make_shared<ValueFunctor>(Kind::GA, base, poly::Poly(base), 0, 0);
}
FunctorPtr ValueFunctor::multiplicative(FieldPtr base) {
  return std::make_shared<ValueFunctor>(Kind::GM, base, poly::Poly(base), 0, 0);
}
FunctorPtr ValueFunctor::constant_z(FieldPtr base) {
  return std::make_shared<ValueFunctor>(Kind::CONST_Z, base, poly::Poly(base), 0, 0);
}
FunctorPtr ValueFunctor::genjac(poly::Poly modulus) {
  if (modulus.degree() < 1) throw GroupError("generalized Jacobian modulus must have positive degree");
  modulus = modulus.monic();
  FieldPtr base = modulus.field();
  return std::make_shared<ValueFunctor>(Kind::GENJAC, base, std::move(modulus), 0, 0);
}
FunctorPtr ValueFunctor::elliptic(FieldPtr base, Elem a, Elem b) {
  if (base->p() == 2 || base->p() == 3)
    throw GroupError("short Weierstrass curves require characteristic other than 2 and 3");
  const Field& f = *base;
  const Elem disc = f.add(f.mul(f.from_int(4), f.pow(a, 3)), f.mul(f.from_int(27), f.mul(b, b)));
  if (disc == 0) throw GroupError("singular curve: 4a^3 + 27b^2 = 0");
  return std::make_shared<ValueFunctor>(Kind::ELLIPTIC, base, poly::Poly(base), a, b);
}

FunctorPtr ValueFunctor::parse(const std::string& spec, const FieldPtr& base) {
  if (spec == "GA") return additive(base);
  if (spec == "GM") return multiplicative(base);
  if (spec == "Z") return constant_z(base);
  if (spec.rfind("GENJAC:", 0) == 0) return genjac(poly::parse_poly(base, spec.substr(7)));
  if (spec.rfind("ELL:", 0) == 0) {
    const std::string body = spec.substr(4);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw GroupError("expected ELL:a,b in '" + spec + "'");
    const Elem a = poly::parse_poly(base, body.substr(0, comma)).coeff(0);
    const Elem b = poly::parse_poly(base, body.substr(comma + 1)).coeff(0);
    return elliptic(base, a, b);
  }
  throw GroupError("unknown functor '" + spec + "' (expected GA, GM, Z, GENJAC:<poly>, ELL:a,b)");
}

std::string ValueFunctor::label() const {
  switch (kind_) {
    case Kind::GENJAC: {
      std::string m = modulus_.to_string();
      m.erase(std::remove(m.begin(), m.end(), ' '), m.end());
      return "GENJAC:" + m;
    }
    case Kind::ELLIPTIC: {
      auto show = [&](Elem e) { return base_->degree() == 1 ? std::to_string(e) : base_->format(e); };
      return "ELL:" + show(a_) + "," + show(b_);
    }
    default: return kind_name(kind_);
  }
}

void ValueFunctor::require_point(const Field& y) const {
  if (!y.contains_subfield(*base_))
    throw GroupError("point F_" + y.name() + " does not contain the field of definition F_" + base_->name());
}

std::pair<Elem, Elem> ValueFunctor::affine(const Field& y, Value v) const {
  return {static_cast<Elem>(v / y.size()), static_cast<Elem>(v % y.size())};
}

poly::Poly ValueFunctor::unit_rep(const FieldPtr& y, Value v) const {
  const std::size_t m = static_cast<std::size_t>(modulus_.degree());
  std::vector<Elem> c(m);
  for (std::size_t i = 0; i < m; ++i) {
    c[i] = static_cast<Elem>(v % y->size());
    v /= y->size();
  }
  return poly::Poly(y, std::move(c));
}

Value ValueFunctor::unit_value(const poly::Poly& u) const {
  const Field& y = *u.field();
  const auto& c = u.coeffs();
  std::size_t low = 0;
  while (low < c.size() && c[low] == 0) ++low;
  if (low == c.size()) throw GroupError("zero is not a unit");
  const Elem s = y.inv(c[low]);
  Value v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * y.size() + y.mul(c[i], s);
  return v;
}

namespace {

poly::Poly modulus_at(const poly::Poly& m, const FieldPtr& y) { return m.embedded(y); }

Value ell_add(const Field& f, Elem a, Value p, Value q) {
  const std::uint64_t inf = std::uint64_t{f.size()} * f.size();
  if (p == inf) return q;
  if (q == inf) return p;
  const Elem x1 = static_cast<Elem>(p / f.size()), y1 = static_cast<Elem>(p % f.size());
  const Elem x2 = static_cast<Elem>(q / f.size()), y2 = static_cast<Elem>(q % f.size());
  Elem lambda;
  if (x1 == x2) {
    if (f.add(y1, y2) == 0) return inf;
    const Elem num = f.add(f.mul(f.from_int(3), f.mul(x1, x1)), a);
    lambda = f.div(num, f.mul(f.from_int(2), y1));
  } else {
    lambda = f.div(f.sub(y2, y1), f.sub(x2, x1));
  }
  const Elem x3 = f.sub(f.sub(f.mul(lambda, lambda), x1), x2);
  const Elem y3 = f.sub(f.mul(lambda, f.sub(x1, x3)), y1);
  return std::uint64_t{x3} * f.size() + y3;
}

}  // namespace

Value ValueFunctor::identity(const Field& y) const {
  switch (kind_) {
    case Kind::GA: return 0;
    case Kind::GM: return 1;
    case Kind::GENJAC: return 1;
    case Kind::ELLIPTIC: return infinity(y);
    case Kind::CONST_Z: return 0;
  }
  return 0;
}

Value ValueFunctor::add(const Field& y, Value a, Value b) const {
  switch (kind_) {
    case Kind::GA: return y.add(as_elem(a), as_elem(b));
    case Kind::GM: return y.mul(as_elem(a), as_elem(b));
    case Kind::GENJAC: {
      const FieldPtr yp = ff::make_field(y.p(), y.degree());
      const poly::Poly m = modulus_at(modulus_, yp);
      return unit_value(poly::mulmod(unit_rep(yp, a), unit_rep(yp, b), m));
    }
    case Kind::ELLIPTIC: return ell_add(y, ff::embed(*base_, a_, y), a, b);
    case Kind::CONST_Z:
      return static_cast<Value>(static_cast<std::int64_t>(a) + static_cast<std::int64_t>(b));
  }
  return 0;
}

Value ValueFunctor::neg(const Field& y, Value a) const {
  switch (kind_) {
    case Kind::GA: return y.neg(as_elem(a));
    case Kind::GM: return y.inv(as_elem(a));
    case Kind::GENJAC: {
      const FieldPtr yp = ff::make_field(y.p(), y.degree());
      return unit_value(poly::inverse_mod(unit_rep(yp, a), modulus_at(modulus_, yp)));
    }
    case Kind::ELLIPTIC: {
      if (a == infinity(y)) return a;
      auto [x, yy] = affine(y, a);
      return point(y, x, y.neg(yy));
    }
    case Kind::CONST_Z: return static_cast<Value>(-static_cast<std::int64_t>(a));
  }
  return 0;
}

Value ValueFunctor::multiple(const Field& y, Value a, std::int64_t n) const {
  if (kind_ == Kind::CONST_Z) return static_cast<Value>(static_cast<std::int64_t>(a) * n);
  if (n < 0) return multiple(y, neg(y, a), -n);
  Value acc = identity(y), base = a;
  while (n > 0) {
    if (n & 1) acc = add(y, acc, base);
    base = add(y, base, base);
    n >>= 1;
  }
  return acc;
}

bool ValueFunctor::valid(const Field& y, Value a) const {
  switch (kind_) {
    case Kind::GA: return a < y.size();
    case Kind::GM: return a > 0 && a < y.size();
    case Kind::GENJAC: {
      const FieldPtr yp = ff::make_field(y.p(), y.degree());
      const poly::Poly u = unit_rep(yp, a);
      if (u.is_zero()) return false;
      return poly::gcd(u, modulus_at(modulus_, yp)).degree() == 0 && unit_value(u) == a;
    }
    case Kind::ELLIPTIC: {
      if (a == infinity(y)) return true;
      if (a > infinity(y)) return false;
      auto [x, yy] = affine(y, a);
      const Elem rhs = y.add(y.add(y.pow(x, 3), y.mul(ff::embed(*base_, a_, y), x)), ff::embed(*base_, b_, y));
      return y.mul(yy, yy) == rhs;
    }
    case Kind::CONST_Z: return true;
  }
  return false;
}

Value ValueFunctor::pullback(const Field& x, const Field& y, Value a) const {
  require_point(x);
  if (!y.contains_subfield(x)) throw GroupError("pull-back target F_" + y.name() + " is not an extension of F_" + x.name());
  switch (kind_) {
    case Kind::GA:
    case Kind::GM: return ff::embed(x, as_elem(a), y);
    case Kind::GENJAC: {
      const FieldPtr xp = ff::make_field(x.p(), x.degree());
      const FieldPtr yp = ff::make_field(y.p(), y.degree());
      return unit_value(unit_rep(xp, a).embedded(yp));
    }
    case Kind::ELLIPTIC: {
      if (a == infinity(x)) return infinity(y);
      auto [px, py] = affine(x, a);
      return point(y, ff::embed(x, px, y), ff::embed(x, py, y));
    }
    case Kind::CONST_Z: return a;
  }
  return 0;
}

Value ValueFunctor::pushforward(const Field& y, const Field& x, Value a) const {
  require_point(x);
  if (!y.contains_subfield(x)) throw GroupError("push-forward source F_" + y.name() + " is not an extension of F_" + x.name());
  const std::uint32_t deg = y.degree() / x.degree();
  switch (kind_) {
    case Kind::GA: return ff::trace(y, as_elem(a), x);
    case Kind::GM: return ff::norm(y, as_elem(a), x);
    case Kind::GENJAC: {
      const FieldPtr xp = ff::make_field(x.p(), x.degree());
      const FieldPtr yp = ff::make_field(y.p(), y.degree());
      const poly::Poly m = modulus_at(modulus_, yp);
      poly::Poly conj = unit_rep(yp, a);
      poly::Poly acc = poly::Poly::constant(yp, 1);
      for (std::uint32_t i = 0; i < deg; ++i) {
        acc = poly::mulmod(acc, conj, m);
        conj = conj.frobenius(x);
      }
      // fix the scalar so the norm is taken literally, then descend
      return unit_value(acc.descended(xp));
    }
    case Kind::ELLIPTIC: {
      Value acc = infinity(y), conj = a;
      for (std::uint32_t i = 0; i < deg; ++i) {
        acc = add(y, acc, conj);
        conj = frobenius(y, x, conj);
      }
      if (acc == infinity(y)) return infinity(x);
      auto [px, py] = affine(y, acc);
      return point(x, ff::descend(y, px, x), ff::descend(y, py, x));
    }
    case Kind::CONST_Z: return static_cast<Value>(static_cast<std::int64_t>(a) * deg);
  }
  return 0;
}

Value ValueFunctor::frobenius(const Field& y, const Field& over, Value a) const {
  switch (kind_) {
    case Kind::GA:
    case Kind::GM: return ff::frobenius(y, as_elem(a), over);
    case Kind::GENJAC: {
      const FieldPtr yp = ff::make_field(y.p(), y.degree());
      return unit_value(unit_rep(yp, a).frobenius(over));
    }
    case Kind::ELLIPTIC: {
      if (a == infinity(y)) return a;
      auto [px, py] = affine(y, a);
      return point(y, ff::frobenius(y, px, over), ff::frobenius(y, py, over));
    }
    case Kind::CONST_Z: return a;
  }
  return 0;
}

std::vector<Value> ValueFunctor::elements(const FieldPtr& yp) const {
  const Field& y = *yp;
  require_point(y);
  const std::uint64_t cap = limits().max_group_order;
  std::vector<Value> out;
  switch (kind_) {
    case Kind::GA:
      if (y.size() > cap) throw GroupError("GA(F_" + y.name() + ") exceeds the group-order cap");
      for (Elem e = 0; e < y.size(); ++e) out.push_back(e);
      break;
    case Kind::GM:
      if (y.size() > cap) throw GroupError("GM(F_" + y.name() + ") exceeds the group-order cap");
      for (Elem e = 1; e < y.size(); ++e) out.push_back(e);
      break;
    case Kind::GENJAC: {
      const std::size_t m = static_cast<std::size_t>(modulus_.degree());
      std::uint64_t total = 1;
      for (std::size_t i = 0; i < m; ++i) {
        total *= y.size();
        if (total > 64 * cap) throw GroupError("generalized Jacobian at F_" + y.name() + " exceeds the enumeration cap");
      }
      const poly::Poly mod = modulus_at(modulus_, yp);
      for (Value v = 1; v < total; ++v) {
        const poly::Poly u = unit_rep(yp, v);
        std::size_t low = 0;
        while (u.coeff(low) == 0) ++low;
        if (u.coeff(low) != 1) continue;
        if (poly::gcd(u, mod).degree() != 0) continue;
        out.push_back(v);
        if (out.size() > cap) throw GroupError("generalized Jacobian at F_" + y.name() + " exceeds the group-order cap");
      }
      break;
    }
    case Kind::ELLIPTIC: {
      if (y.size() > cap) throw GroupError("elliptic curve over F_" + y.name() + " exceeds the enumeration cap");
      const Elem a = ff::embed(*base_, a_, y), b = ff::embed(*base_, b_, y);
      out.push_back(infinity(y));
      for (Elem x = 0; x < y.size(); ++x) {
        const Elem rhs = y.add(y.add(y.pow(x, 3), y.mul(a, x)), b);
        if (rhs == 0) {
          out.push_back(point(y, x, 0));
          continue;
        }
        if (y.log(rhs) % 2 != 0) continue;
        const Elem r = y.exp(y.log(rhs) / 2);
        const Elem r2 = y.neg(r);
        out.push_back(point(y, x, std::min(r, r2)));
        out.push_back(point(y, x, std::max(r, r2)));
      }
      std::sort(out.begin(), out.end());
      break;
    }
    case Kind::CONST_Z: throw GroupError("the constant functor Z has infinite values");
  }
  return out;
}

const ValueFunctor::Cached& ValueFunctor::cached(const FieldPtr& y) const {
  std::lock_guard lock(mutex_);
  auto key = std::make_pair(y->p(), y->degree());
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;
  require_point(*y);
  auto c = std::make_unique<Cached>();
  switch (kind_) {
    case Kind::GA:
      for (std::uint32_t i = 0; i < y->degree(); ++i) {
        c->structure.invariant_factors.push_back(y->p());
        std::uint64_t g = 1;
        for (std::uint32_t j = 0; j < i; ++j) g *= y->p();
        c->structure.generators.push_back(g);
      }
      break;
    case Kind::GM:
      if (y->size() > 2) {
        c->structure.invariant_factors.push_back(y->size() - 1);
        c->structure.generators.push_back(y->generator());
      }
      break;
    case Kind::CONST_Z:
      c->structure.invariant_factors.push_back(0);
      c->structure.generators.push_back(1);
      break;
    case Kind::GENJAC:
    case Kind::ELLIPTIC: {
      const Field& yf = *y;
      EnumeratedStructure es = abelian_structure(elements(y), identity(yf), [&](Value a, Value b) { return add(yf, a, b); });
      c->structure = std::move(es.structure);
      c->coords = std::move(es.coords);
      break;
    }
  }
  auto& ref = *c;
  cache_.emplace(key, std::move(c));
  return ref;
}

const AbelianStructure& ValueFunctor::structure(const FieldPtr& y) const { return cached(y).structure; }

std::vector<std::int64_t> ValueFunctor::coords(const FieldPtr& y, Value a) const {
  switch (kind_) {
    case Kind::GA: {
      std::vector<std::int64_t> c;
      for (auto x : y->coeffs(as_elem(a))) c.push_back(x);
      return c;
    }
    case Kind::GM:
      if (y->size() <= 2) return {};
      return {static_cast<std::int64_t>(y->log(as_elem(a)))};
    case Kind::CONST_Z: return {static_cast<std::int64_t>(a)};
    default: {
      const Cached& c = cached(y);
      auto it = c.coords.find(a);
      if (it == c.coords.end()) throw GroupError("value " + format(*y, a) + " is not an element of the group");
      return it->second;
    }
  }
}

std::string ValueFunctor::format(const Field& y, Value a) const {
  switch (kind_) {
    case Kind::GA:
    case Kind::GM: return y.format(as_elem(a));
    case Kind::CONST_Z: return std::to_string(static_cast<std::int64_t>(a));
    case Kind::ELLIPTIC: {
      if (a == infinity(y)) return "O";
      auto [px, py] = affine(y, a);
      return "(" + y.format(px) + ";" + y.format(py) + ")";
    }
    case Kind::GENJAC: {
      const FieldPtr yp = ff::make_field(y.p(), y.degree());
      const poly::Poly u = unit_rep(yp, a);
      std::string s = "<";
      for (int i = 0; i < modulus_.degree(); ++i) s += (i ? ";" : "") + y.format(u.coeff(static_cast<std::size_t>(i)));
      return s + ">";
    }
  }
  return "?";
}

Value ValueFunctor::parse_value(const FieldPtr& y, const std::string& text) const {
  auto elem = [&](const std::string& s) -> Elem {
    if (s.find(':') != std::string::npos) {
      ff::FieldElem e = ff::parse_elem(s);
      return ff::embed(*e.field, e.value, *y);
    }
    return y->from_int(std::stoll(s));
  };
  Value v = 0;
  switch (kind_) {
    case Kind::GA:
    case Kind::GM: v = elem(text); break;
    case Kind::CONST_Z: v = static_cast<Value>(std::stoll(text)); break;
    case Kind::ELLIPTIC: {
      if (text == "O") return infinity(*y);
      if (text.size() < 3 || text.front() != '(' || text.back() != ')') throw GroupError("expected (x;y) or O");
      const std::string body = text.substr(1, text.size() - 2);
      const auto semi = body.find(';');
      if (semi == std::string::npos) throw GroupError("expected (x;y) or O");
      v = point(*y, elem(body.substr(0, semi)), elem(body.substr(semi + 1)));
      break;
    }
    case Kind::GENJAC: {
      if (text.size() < 2 || text.front() != '<' || text.back() != '>') throw GroupError("expected <c0;c1;...>");
      std::vector<Elem> c;
      std::stringstream ss(text.substr(1, text.size() - 2));
      std::string item;
      while (std::getline(ss, item, ';')) c.push_back(elem(item));
      v = unit_value(poly::mod(poly::Poly(y, c), modulus_at(modulus_, y)));
      break;
    }
  }
  if (!valid(*y, v)) throw GroupError("'" + text + "' is not an element of " + label() + "(F_" + y->name() + ")");
  return v;
}

nlohmann::json GroupValue::to_json() const {
  return {{"functor", functor->label()}, {"point", point->name()}, {"value", functor->format(*point, value)}};
}

GroupValue value_pullback(const GroupValue& a, const FieldPtr& y) {
  return {a.functor, y, a.functor->pullback(*a.point, *y, a.value)};
}

GroupValue value_pushforward(const GroupValue& a, const FieldPtr& x) {
  return {a.functor, x, a.functor->pushforward(*a.point, *x, a.value)};
}

std::uint64_t genjac_closed_form(std::uint64_t q, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& support) {
  if (support.empty()) throw GroupError("modulus has empty support");
  std::uint64_t num = 1;
  for (auto [deg, mult] : support) {
    if (mult < 1) throw GroupError("multiplicities must be positive");
    std::uint64_t qd = 1;
    for (std::uint32_t i = 0; i < deg; ++i) qd *= q;
    for (std::uint32_t i = 1; i < mult; ++i) num *= qd;
    num *= qd - 1;
  }
  return num / (q - 1);
}

}  // namespace mackey::groups
