#include "mackey/reciprocity.hpp"

#include <algorithm>
#include <set>

namespace mackey::reciprocity {

using ff::Elem;
using groups::GroupValue;
using groups::Value;
using groups::Kind;
using poly::Poly;

OpenCurve OpenCurve::parse(const ff::FieldPtr& field, const std::string& text) {
  auto open = text.find('{');
  auto close = text.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("curve '" + text + "' is not of the form P1-{...}");
  OpenCurve c{field, {}};
  std::string body = text.substr(open + 1, close - open - 1), cur;
  int depth = 0;
  auto flush = [&] {
    if (!cur.empty()) c.removed.push_back(p1::parse_place(field, cur));
    cur.clear();
  };
  for (char ch : body) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) flush();
    else cur += ch;
  }
  flush();
  std::sort(c.removed.begin(), c.removed.end());
  if (c.removed.empty()) throw std::invalid_argument("an open curve must remove at least one point");
  if (std::adjacent_find(c.removed.begin(), c.removed.end()) != c.removed.end())
    throw std::invalid_argument("removed points must be distinct");
  return c;
}

bool OpenCurve::contains(const Place& x) const {
  return std::find(removed.begin(), removed.end(), x) == removed.end();
}

std::string OpenCurve::to_string() const {
  std::string s = "P1-{";
  for (std::size_t i = 0; i < removed.size(); ++i) {
    std::string r = removed[i].to_string();
    s += (i ? "," : "") + r.substr(1, r.size() - 2);
  }
  return s + "}";
}

Section Section::parse(const ff::FieldPtr& field, const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("section '" + text + "' is not of the form GA:<f> or GM:<f>");
  std::string kind = text.substr(0, colon);
  if (kind != "GA" && kind != "GM") throw std::invalid_argument("sections are supported for GA and GM only, got " + kind);
  return {groups::ValueFunctor::parse(kind, field), poly::parse_rational(field, text.substr(colon + 1))};
}

std::string Section::to_string() const { return functor->label() + ":" + a.to_string(); }

void check_section(const Section& s, const OpenCurve& c) {
  if (s.functor->kind() == Kind::GA) {
    if (s.a.is_zero()) return;
    const Divisor div = p1::divisor_of(s.a);
    for (const auto& [x, m] : div.terms())
      if (m < 0 && c.contains(x)) throw SectionError("GA section has a pole at " + x.to_string() + " inside the curve");
    return;
  }
  if (s.functor->kind() != Kind::GM) throw SectionError("sections are supported for GA and GM only");
  if (s.a.is_zero()) throw SectionError("GM section must be nonzero");
  const Divisor div = p1::divisor_of(s.a);
  for (const auto& [x, m] : div.terms())
    if (c.contains(x)) throw SectionError("GM section has a zero or pole at " + x.to_string() + " inside the curve");
}

bool check_congruence(const RationalFunction& f, const Divisor& d) {
  const RationalFunction g = f - RationalFunction(Poly::constant(f.field(), 1));
  if (g.is_zero()) return true;
  for (const auto& [x, m] : d.terms())
    if (p1::valuation(g, x) < m) return false;
  return true;
}

GroupValue reciprocity_sum(const Section& s, const RationalFunction& f, const OpenCurve& c) {
  check_section(s, c);
  const auto& F = c.field;
  const auto& M = *s.functor;
  Value acc = M.identity(*F);
  const Divisor div = p1::divisor_of(f);
  for (const auto& [x, v] : div.terms()) {
    if (!c.contains(x)) continue;
    auto k = x.residue_field();
    Value local = p1::value_at(s.a, x);
    acc = M.add(*F, acc, M.multiple(*F, M.pushforward(*k, *F, local), v));
  }
  return {s.functor, F, acc};
}

namespace {


// Coefficient of u^n in num/den as power series, den(0) != 0.
Elem series_coeff(const ff::Field& k, const Poly& num, const Poly& den, std::size_t n) {
  std::vector<Elem> s(n + 1, 0);
  const Elem inv0 = k.inv(den.coeff(0));
  for (std::size_t i = 0; i <= n; ++i) {
    Elem acc = num.coeff(i);
    for (std::size_t j = 1; j <= i; ++j) acc = k.sub(acc, k.mul(den.coeff(j), s[i - j]));
    s[i] = k.mul(acc, inv0);
  }
  return s[n];
}

// Residue of (P/Q) dt at x, as an element of the residue field.
Elem residue(const Poly& P, const Poly& Q, const Place& x) {
  auto k = x.residue_field();
  if (P.is_zero()) return 0;
  if (x.is_infinity()) {
    // t = 1/u, dt = -du/u^2: (P/Q) dt = -u^(deg Q - deg P - 2) Prev/Qrev du
    const std::int64_t e = static_cast<std::int64_t>(Q.degree()) - P.degree() - 2;
    const std::int64_t n = -1 - e;
    if (n < 0) return 0;
    Elem r = series_coeff(*k, P.reversed(P.degree()), Q.reversed(Q.degree()), static_cast<std::size_t>(n));
    return k->neg(r);
  }
  const Elem theta = x.root();
  Poly Pk = P.embedded(k).shifted(theta);
  Poly Qk = Q.embedded(k).shifted(theta);
  std::size_t order = 0;
  while (Qk.coeff(order) == 0) ++order;
  if (order == 0) return 0;
  std::vector<Elem> rest(Qk.coeffs().begin() + static_cast<std::ptrdiff_t>(order), Qk.coeffs().end());
  return series_coeff(*k, Pk, Poly(k, rest), order - 1);
}

RationalFunction rpow(const RationalFunction& r, std::int64_t n) {
  RationalFunction base = r, acc(Poly::constant(r.field(), 1));
  if (n < 0) {
    base = RationalFunction(Poly::constant(r.field(), 1)) / r;
    n = -n;
  }
  for (; n > 0; --n) acc = acc * base;
  return acc;
}

}  // namespace

GroupValue boundary_oracle(const Section& s, const RationalFunction& f, const OpenCurve& c) {
  check_section(s, c);
  const auto& F = c.field;
  const auto& M = *s.functor;
  Value acc = M.identity(*F);
  if (M.kind() == Kind::GA) {
    if (s.a.is_zero()) return {s.functor, F, acc};
    // a * f'/f
    const Poly& N = f.num();
    const Poly& D = f.den();
    RationalFunction dlog(N.derivative() * D - N * D.derivative(), N * D);
    RationalFunction form = s.a * dlog;
    for (const auto& x : c.removed) {
      auto k = x.residue_field();
      Elem r = residue(form.num(), form.den(), x);
      acc = M.add(*F, acc, M.neg(*F, M.pushforward(*k, *F, r)));
    }
    return {s.functor, F, acc};
  }
  for (const auto& x : c.removed) {
    const std::int64_t vf = p1::valuation(f, x);
    const std::int64_t va = p1::valuation(s.a, x);
    RationalFunction h = rpow(f, va) * rpow(s.a, -vf);
    if ((vf * va) % 2 != 0) h = h * RationalFunction(Poly::constant(F, F->neg(1)));
    auto k = x.residue_field();
    acc = M.add(*F, acc, M.pushforward(*k, *F, p1::value_at(h, x)));
  }
  return {s.functor, F, acc};
}

std::vector<RationalFunction> congruent_functions(const Divisor& d, std::size_t count) {
  const auto& F = d.field();
  if (!F || d.empty()) throw std::invalid_argument("test functions need a divisor with nonempty support");
  Poly modulus = Poly::constant(F, 1);
  std::int64_t at_inf = 0;
  bool has_inf = false;
  for (const auto& [x, m] : d.terms()) {
    if (m < 1) throw std::invalid_argument("congruence divisor must be effective");
    if (x.is_infinity()) {
      has_inf = true;
      at_inf = m;
    } else {
      modulus = modulus * poly::pow(x.poly(), static_cast<std::uint32_t>(m));
    }
  }
  const std::uint64_t q = F->size();
  std::vector<RationalFunction> out;
  std::set<std::string> seen;
  for (std::uint32_t dd = 0; dd <= 12 && out.size() < count; ++dd) {
    const std::int64_t gmax = has_inf ? static_cast<std::int64_t>(dd) - modulus.degree() - at_inf : dd;
    if (gmax < 0) continue;
    const std::uint64_t dens = poly::monic_count(*F, dd);
    for (std::uint64_t di = 0; di < dens && out.size() < count; ++di) {
      Poly den = poly::monic_from_index(F, dd, di);
      if (poly::gcd(den, modulus).degree() != 0) continue;
      std::uint64_t gcount = 1;
      for (std::int64_t i = 0; i <= gmax && gcount < (1ULL << 40); ++i) gcount *= q;
      for (std::uint64_t gi = 1; gi < gcount && out.size() < count; ++gi) {
        std::vector<Elem> digits;
        for (std::uint64_t r = gi; r > 0; r /= q) digits.push_back(static_cast<Elem>(r % q));
        Poly g(F, digits);
        RationalFunction f(den + g * modulus, den);
        if (seen.insert(f.to_string()).second) out.push_back(f);
      }
    }
  }
  return out;
}

nlohmann::json Instance::to_json() const {
  return {{"f", f.to_string()},
          {"sum", sum.functor->format(*sum.point, sum.value)},
          {"oracle", oracle.functor->format(*oracle.point, oracle.value)},
          {"vanishes", vanishes},
          {"oracle_agrees", oracle_agrees}};
}

std::vector<Instance> check_family(const Section& s, const OpenCurve& c, const Divisor& d, std::size_t count) {
  std::vector<Instance> out;
  for (const auto& f : congruent_functions(d, count)) {
    Instance in{f, reciprocity_sum(s, f, c), boundary_oracle(s, f, c)};
    in.vanishes = in.sum.value == s.functor->identity(*c.field);
    in.oracle_agrees = in.sum.value == in.oracle.value;
    out.push_back(std::move(in));
  }
  return out;
}

nlohmann::json ConductorResult::to_json() const {
  nlohmann::json j;
  j["conductor"] = conductor ? nlohmann::json(conductor->to_string()) : nlohmann::json(nullptr);
  auto& rej = j["rejected"] = nlohmann::json::array();
  for (const auto& [d, f] : rejected) rej.push_back({{"divisor", d.to_string()}, {"counterexample", f.to_string()}});
  auto& ins = j["instances"] = nlohmann::json::array();
  bool all = !instances.empty();
  for (const auto& in : instances) {
    ins.push_back(in.to_json());
    all = all && in.vanishes && in.oracle_agrees;
  }
  j["instance_count"] = instances.size();
  j["all_pass"] = all;
  return j;
}

ConductorResult find_conductor(const Section& s, const OpenCurve& c, std::uint32_t max_multiplicity,
                               std::size_t instances) {
  check_section(s, c);
  if (max_multiplicity == 0) throw std::invalid_argument("multiplicity bound must be positive");
  const std::size_t r = c.removed.size();
  std::vector<std::vector<std::uint32_t>> candidates;
  std::vector<std::uint32_t> m(r, 1);
  while (true) {
    candidates.push_back(m);
    std::size_t i = 0;
    while (i < r && ++m[i] > max_multiplicity) m[i++] = 1;
    if (i == r) break;
  }
  auto weight = [&](const std::vector<std::uint32_t>& v) {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < r; ++i) w += std::uint64_t{v[i]} * c.removed[i].degree();
    return w;
  };
  std::stable_sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
    if (weight(a) != weight(b)) return weight(a) < weight(b);
    return a < b;
  });
  ConductorResult result;
  for (const auto& cand : candidates) {
    Divisor d(c.field);
    for (std::size_t i = 0; i < r; ++i) d.add(c.removed[i], cand[i]);
    auto family = check_family(s, c, d, instances);
    auto bad = std::find_if(family.begin(), family.end(), [](const Instance& in) { return !in.vanishes; });
    if (bad == family.end()) {
      result.conductor = d;
      result.instances = std::move(family);
      return result;
    }
    result.rejected.emplace_back(d, bad->f);
  }
  return result;
}

}  // namespace mackey::reciprocity
