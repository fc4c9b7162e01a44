#include "mackey/rewrite.hpp"

#include <algorithm>

namespace mackey::rewrite {

using groups::Kind;
using groups::Value;
using product::FinitePoint;
using product::FunctorPtr;
using zlinalg::SparseRow;

std::string strategy_name(Strategy s) { return s == Strategy::GA_CHAIN ? "GA_CHAIN" : "DIVISIBILITY"; }

Strategy parse_strategy(const std::string& text) {
  if (text == "GA_CHAIN") return Strategy::GA_CHAIN;
  if (text == "DIVISIBILITY") return Strategy::DIVISIBILITY;
  throw StrategyError("unknown strategy '" + text + "' (expected GA_CHAIN or DIVISIBILITY)");
}

nlohmann::json formal_sum_json(const FormalSum& s) {
  auto j = nlohmann::json::array();
  for (const auto& t : s) {
    nlohmann::json term = t.symbol.to_json();
    term["coef"] = t.coef.get_str();
    j.push_back(std::move(term));
  }
  return j;
}

const FormalSum& Certificate::final_form() const {
  static const FormalSum empty;
  if (steps.empty()) return empty;
  return steps.back().result;
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j;
  j["initial"] = initial.to_json();
  j["strategy"] = strategy_name(strategy);
  j["max_degree"] = max_degree;
  auto& st = j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    st.push_back({{"rule", s.rule},
                  {"params", s.params},
                  {"result", formal_sum_json(s.result)},
                  {"validated", s.validated},
                  {"modulo_I", s.modulo_i}});
  }
  j["final"] = formal_sum_json(steps.empty() && !zero ? FormalSum{{1, initial}} : final_form());
  j["zero"] = zero;
  j["validated"] = validated;
  return j;
}

namespace {

std::string key(const std::vector<FunctorPtr>& functors, const ff::FieldPtr& x, std::uint32_t d) {
  return product::functor_list_label(functors) + "@" + x->name() + "#" + std::to_string(d);
}

}  // namespace

const product::MackeyPresentation& Checker::presentation(const std::vector<FunctorPtr>& functors,
                                                         const ff::FieldPtr& x, std::uint32_t d_max) {
  const std::string k = key(functors, x, d_max);
  auto it = presentations_.find(k);
  if (it == presentations_.end())
    it = presentations_.emplace(k, product::MackeyPresentation::build(functors, x, d_max)).first;
  return it->second;
}

const zlinalg::RowLattice& Checker::chain_lattice(const std::vector<FunctorPtr>& functors, const ff::FieldPtr& x,
                                                  std::uint32_t d_max) {
  const std::string k = key(functors, x, d_max);
  if (auto it = chains_.find(k); it != chains_.end()) return it->second;
  const auto& m = presentation(functors, x, d_max);
  zlinalg::RowLattice lattice = m.lattice();
  const std::size_t n = functors.size();
  for (std::uint32_t d = 1; d <= d_max; ++d) {
    const auto y = FinitePoint::over(x, d).ext;
    const auto& gens = functors[0]->structure(y).generators;
    std::vector<std::size_t> idx(n, 0);
    // Multilinear in every slot, so generator instances suffice.
    while (!gens.empty()) {
      std::vector<Value> lhs(n), rhs(n, ff::Elem{1});
      ff::Elem prod = 1;
      for (std::size_t i = 0; i < n; ++i) {
        lhs[i] = gens[idx[i]];
        prod = y->mul(prod, static_cast<ff::Elem>(gens[idx[i]]));
      }
      rhs[0] = prod;
      SparseRow row = m.evaluate_entries(d, lhs);
      for (const auto& [col, v] : m.evaluate_entries(d, rhs)) row.emplace_back(col, -v);
      zlinalg::normalize(row);
      lattice.insert(std::move(row));
      std::size_t i = 0;
      while (i < n && ++idx[i] == gens.size()) idx[i++] = 0;
      if (i == n) break;
    }
  }
  return chains_.emplace(k, std::move(lattice)).first->second;
}

SparseRow Checker::evaluate(const product::MackeyPresentation& m, const FormalSum& s) const {
  SparseRow out;
  for (const auto& t : s)
    for (const auto& [col, v] : m.evaluate(t.symbol)) out.emplace_back(col, t.coef * v);
  zlinalg::normalize(out);
  return out;
}

namespace {

Symbol with_entries(const Symbol& s, const ff::FieldPtr& ext, std::vector<Value> entries) {
  Symbol out = s;
  out.point.ext = ext;
  out.entries = std::move(entries);
  return out;
}

void divisibility_steps(const Symbol& s, Certificate& c) {
  if (s.functors.size() != 2)
    throw StrategyError("DIVISIBILITY needs exactly two factors, got " + std::to_string(s.functors.size()));
  std::size_t u = 2, a = 2;
  for (std::size_t i = 0; i < 2; ++i) {
    if (s.functors[i]->unipotent()) u = i;
    else if (s.functors[i]->semi_abelian()) a = i;
  }
  if (u == 2 || a == 2)
    throw StrategyError("DIVISIBILITY needs one unipotent (GA) and one semi-abelian (GM or ELL) factor, got " +
                        product::functor_list_label(s.functors));
  const auto& G = *s.functors[u];
  const auto& A = *s.functors[a];
  const auto& y = s.point.ext;
  const std::int64_t p = y->p();

  // Smallest extension y'/y in which the semi-abelian entry becomes p-divisible.
  ff::FieldPtr y1;
  Value pulled = 0, root = 0;
  for (std::uint32_t k = 1; y->degree() * k <= ff::limits().max_degree; ++k) {
    auto cand = ff::make_field(static_cast<std::uint32_t>(p), y->degree() * k);
    if (cand->size() > ff::limits().max_size) break;
    pulled = A.pullback(*y, *cand, s.entries[a]);
    for (Value v : A.elements(cand)) {
      if (A.multiple(*cand, v, p) == pulled) {
        y1 = cand;
        root = v;
        break;
      }
    }
    if (y1) break;
  }
  if (!y1) throw StrategyError("no extension within the field caps makes the semi-abelian entry p-divisible");

  Value lift = s.entries[u];
  if (y1 != y) {
    bool found = false;
    for (Value v : G.elements(y1)) {
      if (G.pushforward(*y1, *y, v) == s.entries[u]) {
        lift = v;
        found = true;
        break;
      }
    }
    if (!found) throw StrategyError("trace is not surjective onto the unipotent entry");
    std::vector<Value> e(2);
    e[u] = lift;
    e[a] = pulled;
    c.steps.push_back({"projection_formula",
                       {{"extension", y1->name()},
                        {"trace_lift", G.format(*y1, lift)},
                        {"pullback", A.format(*y1, pulled)}},
                       {{1, with_entries(s, y1, e)}}});
  }
  std::vector<Value> e(2);
  e[u] = lift;
  e[a] = root;
  c.steps.push_back({"divisibility", {{"p", p}, {"root", A.format(*y1, root)}}, {{Int(static_cast<long>(p)), with_entries(s, y1, e)}}});
  c.steps.push_back({"multilinearity", {{"move", "p moved into the unipotent slot"}, {"p", p}}, {}});
  c.max_degree = y1->degree() / s.point.base->degree();
}

void chain_steps(const Symbol& s, Certificate& c) {
  if (s.functors.size() < 2 ||
      !std::all_of(s.functors.begin(), s.functors.end(), [](const FunctorPtr& f) { return f->kind() == Kind::GA; }))
    throw StrategyError("GA_CHAIN needs at least two factors, all GA; got " + product::functor_list_label(s.functors));
  const auto& y = s.point.ext;
  const auto& x = s.point.base;
  const auto& G = *s.functors[0];
  const std::size_t n = s.entries.size();
  if (y != x) {
    c.steps.push_back({"pushforward", {{"from", y->name() + "/" + y->name()}, {"to", s.point.label()}}, {{1, s}}});
  }
  ff::Elem prod = 1, rest = 1;
  for (std::size_t i = 0; i < n; ++i) {
    prod = y->mul(prod, static_cast<ff::Elem>(s.entries[i]));
    if (i) rest = y->mul(rest, static_cast<ff::Elem>(s.entries[i]));
  }
  std::vector<Value> normal(n, ff::Elem{1});
  normal[0] = prod;
  std::vector<Value> unit_first = s.entries, moved(n, ff::Elem{1});
  unit_first[0] = 1;
  moved[0] = rest;
  Symbol local = s;
  local.point.base = y;
  c.steps.push_back({"i_move",
                     {{"scalar", G.format(*y, s.entries[0])},
                      {"i_generator",
                       {with_entries(local, y, unit_first).to_json(), with_entries(local, y, moved).to_json()}}},
                     {{1, with_entries(s, y, normal)}},
                     false,
                     true});
  if (y != x) {
    Symbol down = s;
    down.point.ext = x;
    down.entries.assign(n, ff::Elem{1});
    down.entries[0] = G.pushforward(*y, *x, prod);
    c.steps.push_back({"projection_formula", {{"trace", G.format(*x, down.entries[0])}}, {{1, down}}});
  }
  c.max_degree = s.point.degree();
}

}  // namespace

bool revalidate(Certificate& c, Checker& checker) {
  if (c.steps.size() > kStepCap) return c.validated = false;
  const auto& x = c.initial.point.base;
  const auto& m = checker.presentation(c.initial.functors, x, c.max_degree);
  bool ok = true;
  FormalSum prev{{1, c.initial}};
  for (auto& step : c.steps) {
    SparseRow diff = checker.evaluate(m, prev);
    for (const auto& [col, v] : checker.evaluate(m, step.result)) diff.emplace_back(col, -v);
    zlinalg::normalize(diff);
    step.validated = step.modulo_i ? checker.chain_lattice(c.initial.functors, x, c.max_degree).contains(diff)
                                   : m.is_zero(diff);
    ok = ok && step.validated;
    prev = step.result;
  }
  if (c.zero) ok = ok && m.is_zero(m.evaluate(c.initial));
  return c.validated = ok;
}

Certificate reduce_symbol(const Symbol& s, Strategy strategy, Checker& checker) {
  s.check();
  Certificate c;
  c.initial = s;
  c.strategy = strategy;
  c.max_degree = s.point.degree();
  if (s.has_identity_entry()) {
    c.zero = true;
  } else {
    if (strategy == Strategy::DIVISIBILITY) divisibility_steps(s, c);
    else chain_steps(s, c);
    c.zero = c.final_form().empty() &&
             std::none_of(c.steps.begin(), c.steps.end(), [](const Step& st) { return st.modulo_i; });
  }
  revalidate(c, checker);
  return c;
}

Certificate reduce_symbol(const Symbol& s, Strategy strategy) {
  Checker checker;
  return reduce_symbol(s, strategy, checker);
}

}  // namespace mackey::rewrite
