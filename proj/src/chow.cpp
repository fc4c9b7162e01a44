#include "mackey/chow.hpp"

#include <algorithm>
#include <numeric>

namespace mackey::chow {

using groups::Value;
using zlinalg::Int;
using zlinalg::SparseRow;

Modulus Modulus::make(Divisor d) {
  if (!d.field() || d.empty()) throw ChowError("modulus has empty support");
  if (!d.effective()) throw ChowError("modulus " + d.to_string() + " is not effective");
  return {std::move(d)};
}

Modulus Modulus::parse(const FieldPtr& field, const std::string& text) {
  return make(p1::parse_divisor(field, text));
}

bool Modulus::has_rational_point() const {
  std::uint64_t rational = 0;
  for (const auto& [x, m] : divisor.terms()) rational += x.degree() == 1;
  return rational < field()->size() + 1;
}

nlohmann::json Normalization::to_json() const {
  nlohmann::json j{{"applied", applied}, {"divisor", divisor.to_string()}};
  if (applied) {
    const auto& F = *divisor.field();
    j["map"] = shift == 0 ? std::string("t -> 1/t") : "t -> 1/(t - " + F.format(shift) + ")";
  }
  return j;
}

Place moved_place(const Place& x, Elem c) {
  const auto& F = x.field();
  if (x.is_infinity()) return Place::rational(F, 0);
  if (x.poly().eval(*F, c) == 0) return Place::infinity(F);
  const Poly shifted = x.poly().shifted(c);
  return Place::finite(shifted.reversed(static_cast<std::size_t>(shifted.degree())).monic());
}

Normalization normalize(const Divisor& d) {
  Normalization n;
  n.divisor = d;
  const auto& F = d.field();
  if (d.multiplicity(Place::infinity(F)) == 0) return n;
  for (Elem c = 0; c < F->size(); ++c) {
    if (d.multiplicity(Place::rational(F, c)) != 0) continue;
    n.applied = true;
    n.shift = c;
    n.divisor = Divisor(F);
    for (const auto& [x, m] : d.terms()) n.divisor.add(moved_place(x, c), m);
    return n;
  }
  throw ChowError("every rational point of P^1 lies in " + d.to_string() + "; no coordinate change moves infinity off it");
}

Poly modulus_polynomial(const Divisor& d) {
  Poly m = Poly::constant(d.field(), 1);
  for (const auto& [x, e] : d.terms()) {
    if (x.is_infinity()) throw ChowError("modulus polynomial needs a divisor supported away from infinity");
    m = m * poly::pow(x.poly(), static_cast<std::uint32_t>(e));
  }
  return m;
}

namespace {

Value encode(const Poly& r, std::uint64_t q) {
  Value v = 0;
  for (std::size_t i = r.coeffs().size(); i-- > 0;) v = v * q + r.coeffs()[i];
  return v;
}

Poly decode(const FieldPtr& F, Value v, std::size_t len) {
  std::vector<Elem> c(len);
  for (std::size_t i = 0; i < len; ++i) {
    c[i] = static_cast<Elem>(v % F->size());
    v /= F->size();
  }
  return Poly(F, std::move(c));
}

}  // namespace

LocalUnits LocalUnits::compute(const Place& x, std::uint32_t m) {
  if (m < 1) throw ChowError("multiplicity must be positive");
  if (x.is_infinity()) throw ChowError("local units at infinity: normalize the modulus first");
  LocalUnits u;
  u.place_ = x;
  u.m_ = m;
  const auto& F = x.field();
  u.ideal_ = poly::pow(x.poly(), m);
  const std::size_t len = static_cast<std::size_t>(u.ideal_.degree());
  const std::uint64_t q = F->size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < len; ++i) {
    if (total > groups::limits().max_group_order) break;
    total *= q;
  }
  if (total > groups::limits().max_group_order)
    throw ChowError("local ring at " + x.to_string() + " with multiplicity " + std::to_string(m) + " exceeds the group cap");
  std::vector<Value> units;
  for (Value v = 0; v < total; ++v) {
    const Poly r = decode(F, v, len);
    if (!r.is_zero() && poly::mod(r, x.poly()).degree() >= 0) units.push_back(v);
  }
  const Poly ideal = u.ideal_;
  auto op = [&](Value a, Value b) {
    return encode(poly::mulmod(decode(F, a, len), decode(F, b, len), ideal), q);
  };
  auto es = groups::abelian_structure(units, 1, op);
  u.factors_ = es.structure.invariant_factors;
  for (Value g : es.structure.generators) u.generators_.push_back(decode(F, g, len));
  u.coords_ = std::move(es.coords);
  return u;
}

groups::AbelianStructure LocalUnits::structure() const {
  groups::AbelianStructure s;
  s.invariant_factors = factors_;
  s.invariant_factors.push_back(0);
  const std::uint64_t q = place_.field()->size();
  for (const auto& g : generators_) s.generators.push_back(encode(g, q));
  s.generators.push_back(encode(poly::mod(place_.poly(), ideal_), q));
  return s;
}

std::vector<std::int64_t> LocalUnits::coordinates(const Poly& unit) const {
  const Poly r = poly::mod(unit, ideal_);
  auto it = coords_.find(encode(r, place_.field()->size()));
  if (it == coords_.end()) throw ChowError(unit.to_string() + " is not a unit at " + place_.to_string());
  return it->second;
}

nlohmann::json LocalUnits::to_json() const {
  auto gens = nlohmann::json::array();
  for (const auto& g : generators_) gens.push_back(g.to_string());
  std::uint64_t order = 1;
  for (auto d : factors_) order *= static_cast<std::uint64_t>(d);
  const std::uint64_t residue = place_.residue_field()->size() - 1;
  return {{"place", place_.to_string()},
          {"multiplicity", m_},
          {"invariant_factors", structure().invariant_factors},
          {"unit_generators", gens},
          {"uniformizer", place_.poly().to_string()},
          {"residue_units", residue},
          {"principal_units", order / residue}};
}

LocalUnits local_unit_quotient(const Place& x, std::uint32_t m) { return LocalUnits::compute(x, m); }

nlohmann::json ChowGroup::to_json() const {
  auto factors = [](const zlinalg::CokernelStructure& s) {
    auto a = nlohmann::json::array();
    for (const auto& d : s.invariant_factors) a.push_back(d.get_str());
    return a;
  };
  return {{"modulus", modulus.to_string()},
          {"normalization", normalization.to_json()},
          {"n_pts", n_pts},
          {"n_fun", n_fun},
          {"generators", generator_count},
          {"relations", relation_count},
          {"rows_degree_zero", rows_degree_zero},
          {"ch0", {{"invariant_factors", factors(full)}, {"free_rank", full.free_rank}}},
          {"ch0_degree0",
           {{"invariant_factors", factors(degree_zero)},
            {"free_rank", degree_zero.free_rank},
            {"order", degree_zero.finite() ? degree_zero.torsion_order().get_str() : std::string("infinite")}}}};
}

ChowGroup relative_chow(const Modulus& mod, std::uint32_t n_pts, std::uint32_t n_fun) {
  ChowGroup g;
  g.modulus = mod;
  g.normalization = normalize(mod.divisor);
  g.n_pts = n_pts;
  g.n_fun = n_fun;
  const Divisor& D = g.normalization.divisor;
  const auto& F = mod.field();
  if (n_fun < D.max_support_degree())
    throw ChowError("N_fun must reach the largest support degree " + std::to_string(D.max_support_degree()));

  // Columns: infinity, the other places of X of degree <= n_pts, then per support
  // place its uniformizer and unit coordinates.
  std::map<Place, std::uint32_t> cycle_col;
  auto add_col = [&](std::string label, std::int64_t deg) {
    g.generator_labels.push_back(std::move(label));
    g.degrees.push_back(deg);
    return static_cast<std::uint32_t>(g.degrees.size() - 1);
  };
  cycle_col.emplace(Place::infinity(F), add_col("[(inf)]", 1));
  std::vector<std::vector<Poly>> irreducibles(std::max(n_pts, n_fun) + 1);
  for (std::uint32_t d = 1; d < irreducibles.size(); ++d) irreducibles[d] = poly::monic_irreducibles(F, d);
  for (std::uint32_t d = 1; d <= n_pts; ++d) {
    for (const auto& pi : irreducibles[d]) {
      Place x = Place::finite(pi);
      if (D.multiplicity(x) == 0) cycle_col.emplace(x, add_col("[" + x.to_string() + "]", d));
    }
  }
  struct Local {
    LocalUnits units;
    std::uint32_t uniformizer_col;
    std::uint32_t first_unit_col;
  };
  std::vector<Local> locals;
  for (const auto& [x, m] : D.terms()) {
    LocalUnits u = local_unit_quotient(x, static_cast<std::uint32_t>(m));
    const std::uint32_t uc = add_col("pi" + x.to_string(), x.degree());
    const std::uint32_t first = static_cast<std::uint32_t>(g.degrees.size());
    for (std::size_t i = 0; i < u.unit_factors().size(); ++i)
      add_col("u" + x.to_string() + "_" + std::to_string(i), 0);
    locals.push_back({std::move(u), uc, first});
  }

  std::vector<SparseRow> rows;
  for (const auto& l : locals)
    for (std::size_t i = 0; i < l.units.unit_factors().size(); ++i)
      rows.push_back({{l.first_unit_col + static_cast<std::uint32_t>(i), Int(static_cast<long>(l.units.unit_factors()[i]))}});

  auto principal_row = [&](const Poly& f) {
    SparseRow row;
    if (f.degree() > 0) {
      const Place x = Place::finite(f);
      if (D.multiplicity(x) == 0) row.emplace_back(cycle_col.at(x), 1);
      row.emplace_back(cycle_col.at(Place::infinity(F)), -f.degree());
    }
    for (const auto& l : locals) {
      Poly unit = f;
      if (f.degree() > 0 && l.units.place().poly() == f) {
        row.emplace_back(l.uniformizer_col, 1);
        unit = Poly::constant(F, 1);
      }
      const auto c = l.units.coordinates(unit);
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) row.emplace_back(l.first_unit_col + static_cast<std::uint32_t>(i), Int(static_cast<long>(c[i])));
    }
    zlinalg::normalize(row);
    return row;
  };
  for (Elem c = 1; c < F->size(); ++c) rows.push_back(principal_row(Poly::constant(F, c)));
  for (std::uint32_t d = 1; d <= n_fun; ++d) {
    for (const auto& pi : irreducibles[d]) {
      // Functions with a zero outside the truncated cycle group are dropped with it.
      if (d > n_pts && D.multiplicity(Place::finite(pi)) == 0) continue;
      rows.push_back(principal_row(pi));
    }
  }

  zlinalg::RowLattice lattice(g.degrees.size());
  for (auto& row : rows) {
    Int deg = 0;
    for (const auto& [col, v] : row) deg += v * g.degrees[col];
    if (deg != 0) g.rows_degree_zero = false;
    lattice.insert(row);
  }
  g.generator_count = g.degrees.size();
  g.relation_count = rows.size();
  g.full = lattice.cokernel();
  g.degree_zero = g.full;
  if (g.degree_zero.free_rank == 0) throw ChowError("degree map vanishes on the presented group");
  g.degree_zero.free_rank -= 1;
  return g;
}

std::uint32_t default_truncation(const Modulus& mod) {
  const Divisor& D = normalize(mod.divisor).divisor;
  const std::uint64_t q = mod.field()->size();
  std::uint32_t cap = 1;
  for (std::uint64_t n = q * q; n <= 4096; n *= q) ++cap;
  const std::uint32_t wanted = static_cast<std::uint32_t>(4 * D.degree() + 4);
  return std::max(std::min(wanted, cap), D.max_support_degree());
}

nlohmann::json ChowReport::to_json() const {
  nlohmann::json j = result().to_json();
  auto& s = j["scan"] = nlohmann::json::array();
  for (const auto& g : scan) {
    s.push_back({{"n", g.n_pts},
                 {"order", g.degree_zero.finite() ? g.degree_zero.torsion_order().get_str() : std::string("infinite")}});
  }
  j["stabilized"] = stabilized;
  j["genjac_order"] = oracle;
  j["oracle_agrees"] = oracle_agrees;
  return j;
}

ChowReport chow_scan(const Modulus& mod, std::optional<std::uint32_t> n_max) {
  const Divisor& D = normalize(mod.divisor).divisor;
  const std::uint32_t lo = std::max<std::uint32_t>(1, D.max_support_degree());
  const std::uint32_t hi = std::max(lo, n_max.value_or(default_truncation(mod)));
  ChowReport r;
  for (std::uint32_t n = lo; n <= hi; ++n) r.scan.push_back(relative_chow(mod, n, n));
  const auto& last = r.scan.back();
  r.stabilized = r.scan.size() >= 2 && product::same_structure(last.degree_zero, r.scan[r.scan.size() - 2].degree_zero);
  r.oracle = genjac_order(mod.field()->size(), mod.divisor);
  r.oracle_agrees = last.degree_zero.finite() && last.degree_zero.torsion_order() == Int(static_cast<unsigned long>(r.oracle));
  return r;
}

std::uint64_t genjac_order(std::uint64_t q, const Divisor& d) {
  if (d.empty()) throw ChowError("modulus has empty support");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> support;
  for (const auto& [x, m] : d.terms()) {
    if (m < 1) throw ChowError("modulus " + d.to_string() + " is not effective");
    support.emplace_back(x.degree(), static_cast<std::uint32_t>(m));
  }
  return groups::genjac_closed_form(q, support);
}

groups::FunctorPtr jacobian(const Modulus& mod) {
  return groups::ValueFunctor::genjac(modulus_polynomial(normalize(mod.divisor).divisor));
}

nlohmann::json ProductBound::to_json() const {
  nlohmann::json j;
  j["m1"] = m1.to_string();
  j["m2"] = m2.to_string();
  j["normalization"] = {normalize(m1.divisor).to_json(), normalize(m2.divisor).to_json()};
  j["d_max"] = d_max;
  j["factors"] = {{"J1", j1}, {"J2", j2}, {"mackey", mackey.order()}};
  j["closed_form"] = {{"J1", j1_closed_form}, {"J2", j2_closed_form}};
  j["mackey"] = mackey.to_json();
  j["bound"] = bound ? nlohmann::json(bound->get_str()) : nlohmann::json("infinite");
  j["certificate"] = {
      {"statement", "CH_0(X1 x X2, D)^0 is finite of order at most the bound"},
      {"surjection", "J1(F) + J2(F) + (J1 (x)^M J2)(Spec F) ->> CH_0(X1 x X2, D)^0"},
      {"rational_points", true},
      {"reduction_note",
       "D is taken of the form D1 x X2 + X1 x D2; a general D is dominated by such a divisor, "
       "and CH_0(X, D1 x X2 + X1 x D2) surjects onto CH_0(X, D)"}};
  return j;
}

ProductBound product_bound(const Modulus& m1, const Modulus& m2, std::uint32_t d_max) {
  if (m1.field() != m2.field()) throw ChowError("moduli live over different fields");
  for (const auto* m : {&m1, &m2})
    if (!m->has_rational_point()) throw ChowError("P^1 - supp(" + m->to_string() + ") has no rational point");
  ProductBound b;
  b.m1 = m1;
  b.m2 = m2;
  b.d_max = d_max;
  const auto& F = m1.field();
  auto J1 = jacobian(m1), J2 = jacobian(m2);
  b.j1 = J1->structure(F).order();
  b.j2 = J2->structure(F).order();
  b.j1_closed_form = genjac_order(F->size(), m1.divisor);
  b.j2_closed_form = genjac_order(F->size(), m2.divisor);
  b.mackey = product::compute_order({J1, J2}, F, d_max);
  if (b.mackey.structure.finite())
    b.bound = Int(static_cast<unsigned long>(b.j1)) * Int(static_cast<unsigned long>(b.j2)) *
              b.mackey.structure.torsion_order();
  return b;
}

Divisor cycle_pushforward(const Divisor& cycle, const FieldPtr& x) {
  const auto& y = cycle.field();
  if (!y || !y->contains_subfield(*x)) throw ChowError("base change target is not a subfield of the cycle's field");
  const std::int64_t rel = y->degree() / x->degree();
  Divisor out(x);
  for (const auto& [pt, m] : cycle.terms()) {
    if (pt.is_infinity()) {
      out.add(Place::infinity(x), m * rel);
      continue;
    }
    const auto k = pt.residue_field();
    const Elem theta = pt.root();
    // Minimal polynomial of theta over x from its Frobenius orbit.
    std::vector<Elem> orbit{theta};
    for (Elem c = ff::frobenius(*k, theta, *x); c != theta; c = ff::frobenius(*k, c, *x)) orbit.push_back(c);
    Poly minpoly = Poly::constant(k, 1);
    for (Elem c : orbit) minpoly = minpoly * Poly::linear(k, c);
    const std::int64_t over = static_cast<std::int64_t>(k->degree() / x->degree());
    out.add(Place::finite(minpoly.descended(x)), m * over / static_cast<std::int64_t>(orbit.size()));
  }
  return out;
}

Value cycle_class(const groups::FunctorPtr& J, const FieldPtr& y, const Divisor& cycle) {
  if (J->kind() != groups::Kind::GENJAC) throw ChowError("cycle classes need a GENJAC functor");
  const Poly m = J->modulus().embedded(y);
  Poly acc = Poly::constant(y, 1);
  for (const auto& [pt, e] : cycle.terms()) {
    if (pt.is_infinity()) continue;
    if (poly::gcd(pt.poly(), m).degree() > 0) throw ChowError("cycle meets the modulus at " + pt.to_string());
    Poly f = poly::mod(pt.poly(), m);
    if (e < 0) f = poly::inverse_mod(f, m);
    acc = poly::mulmod(acc, poly::powmod(f, static_cast<std::uint64_t>(e < 0 ? -e : e), m), m);
  }
  return J->unit_value(acc);
}

nlohmann::json SquareCheck::to_json() const {
  return {{"cycle", cycle}, {"pushed_cycle", pushed_cycle}, {"via_cycles", via_cycles}, {"via_norm", via_norm},
          {"commutes", commutes}};
}

SquareCheck compatibility_square(const groups::FunctorPtr& J, const FieldPtr& y, Elem theta) {
  const auto& x = J->base();
  Divisor z(y);
  z.add(Place::rational(y, theta), 1);
  z.add(Place::infinity(y), -1);
  const Divisor pushed = cycle_pushforward(z, x);
  SquareCheck s;
  s.cycle = z.to_string();
  s.pushed_cycle = pushed.to_string();
  const Value a = cycle_class(J, x, pushed);
  const Value b = J->pushforward(*y, *x, cycle_class(J, y, z));
  s.via_cycles = J->format(*x, a);
  s.via_norm = J->format(*x, b);
  s.commutes = a == b;
  return s;
}

}  // namespace mackey::chow
