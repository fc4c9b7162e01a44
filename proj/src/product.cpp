#include "mackey/product.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mackey::product {

using zlinalg::Int;

FinitePoint FinitePoint::over(const FieldPtr& base, std::uint32_t degree) {
  if (degree == 0) throw ProductError("point degree must be positive");
  return {base, ff::make_field(base->p(), base->degree() * degree)};
}

void Symbol::check() const {
  if (functors.empty()) throw ProductError("a symbol needs at least one functor");
  if (entries.size() != functors.size())
    throw ProductError("symbol has " + std::to_string(entries.size()) + " entries for " +
                       std::to_string(functors.size()) + " functors");
  if (!point.ext->contains_subfield(*point.base))
    throw ProductError(point.base->name() + " is not a subfield of " + point.ext->name());
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (!functors[i]->valid(*point.ext, entries[i]))
      throw ProductError("entry " + std::to_string(i) + " is not in " + functors[i]->label() + "(" +
                         point.ext->name() + ")");
}

bool Symbol::has_identity_entry() const {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i] == functors[i]->identity(*point.ext)) return true;
  return false;
}

nlohmann::json Symbol::to_json() const {
  nlohmann::json j;
  j["functors"] = functor_list_label(functors);
  j["point"] = point.ext->name();
  j["base"] = point.base->name();
  auto& e = j["entries"] = nlohmann::json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) e.push_back(functors[i]->format(*point.ext, entries[i]));
  return j;
}

std::string Symbol::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ", ";
    os << functors[i]->format(*point.ext, entries[i]);
  }
  os << "}_{" << point.label() << '}';
  return os.str();
}

Symbol pushforward_symbol(const Symbol& s, const FieldPtr& x) {
  if (!s.point.base->contains_subfield(*x))
    throw ProductError(x->name() + " is not a subfield of " + s.point.base->name());
  Symbol out = s;
  out.point.base = x;
  return out;
}

std::vector<FunctorPtr> parse_functor_list(const std::string& text, const FieldPtr& base) {
  std::vector<std::string> tokens;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) tokens.push_back(tok);
  std::vector<FunctorPtr> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string spec = tokens[i];
    if (spec.rfind("ELL:", 0) == 0 && i + 1 < tokens.size()) spec += "," + tokens[++i];
    out.push_back(groups::ValueFunctor::parse(spec, base));
  }
  if (out.empty()) throw ProductError("empty functor list");
  return out;
}

std::string functor_list_label(const std::vector<FunctorPtr>& functors) {
  std::string s;
  for (std::size_t i = 0; i < functors.size(); ++i) s += (i ? "," : "") + functors[i]->label();
  return s;
}

struct MackeyPresentation::Layer {
  std::uint32_t degree = 0;
  FieldPtr field;
  std::size_t offset = 0;
  std::size_t size = 0;
  // Structured: kept basis tensors of the product of structure generators.
  std::vector<std::size_t> dims;
  std::vector<std::int64_t> orders;
  std::vector<std::int64_t> index_of;
  // Naive: one generator per tuple of elements.
  std::vector<std::unordered_map<Value, std::size_t>> position;
  std::vector<std::vector<Value>> elements;
  std::vector<std::size_t> stride;
};

namespace {

std::int64_t gcd0(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

// Iterates over all index tuples with the given bounds; stops early when any bound is 0.
template <class F>
void for_each_tuple(const std::vector<std::size_t>& bounds, F&& f) {
  for (auto b : bounds)
    if (b == 0) return;
  std::vector<std::size_t> idx(bounds.size(), 0);
  while (true) {
    f(idx);
    std::size_t k = 0;
    while (k < bounds.size() && ++idx[k] == bounds[k]) idx[k++] = 0;
    if (k == bounds.size()) return;
  }
}

std::vector<std::int64_t> canonical_factors(const std::vector<std::int64_t>& orders) {
  // Diagonal SNF; zeros (free summands) go last.
  std::vector<std::int64_t> out;
  std::size_t free = 0;
  zlinalg::DenseMatrix diag;
  std::vector<std::int64_t> finite;
  for (auto o : orders) {
    if (o == 0) ++free;
    else if (o != 1) finite.push_back(o);
  }
  if (!finite.empty()) {
    diag.assign(finite.size(), std::vector<Int>(finite.size(), 0));
    for (std::size_t i = 0; i < finite.size(); ++i) diag[i][i] = static_cast<long>(finite[i]);
    for (const auto& d : zlinalg::smith_diagonal(diag))
      if (d != 1) out.push_back(d.get_si());
  }
  out.insert(out.end(), free, 0);
  return out;
}

// Generating set found by growing subgroups, independent of the structure algorithm.
std::vector<Value> naive_generating_set(const groups::ValueFunctor& f, const ff::Field& y,
                                        const std::vector<Value>& elements) {
  std::unordered_set<Value> span{f.identity(y)};
  std::vector<Value> gens;
  for (Value e : elements) {
    if (span.contains(e)) continue;
    gens.push_back(e);
    std::vector<Value> base(span.begin(), span.end());
    Value ke = e;
    while (!span.contains(ke)) {
      for (Value s : base) span.insert(f.add(y, s, ke));
      ke = f.add(y, ke, e);
    }
  }
  return gens;
}

SparseRow difference(SparseRow a, const SparseRow& b) {
  for (const auto& [c, v] : b) a.emplace_back(c, -v);
  zlinalg::normalize(a);
  return a;
}

}  // namespace

std::vector<std::int64_t> layer_group(const std::vector<FunctorPtr>& functors, const FinitePoint& y) {
  std::vector<std::size_t> dims;
  for (const auto& f : functors) dims.push_back(f->structure(y.ext).invariant_factors.size());
  std::vector<std::int64_t> orders;
  for_each_tuple(dims, [&](const std::vector<std::size_t>& idx) {
    std::int64_t g = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) g = gcd0(g, functors[i]->structure(y.ext).invariant_factors[idx[i]]);
    orders.push_back(g);
  });
  return canonical_factors(orders);
}

MackeyPresentation MackeyPresentation::build(const std::vector<FunctorPtr>& functors, const FieldPtr& x,
                                             std::uint32_t d_max, LayerMode mode) {
  if (functors.empty()) throw ProductError("a Mackey product needs at least one functor");
  if (d_max == 0) throw ProductError("degree bound must be positive");
  for (const auto& f : functors) {
    if (f->base()->p() != x->p() || !x->contains_subfield(*f->base()))
      throw ProductError("functor " + f->label() + " is not defined over " + x->name());
    if (mode == LayerMode::Naive && !f->finite())
      throw ProductError("the naive presentation needs finite value groups");
  }
  MackeyPresentation m;
  m.functors_ = functors;
  m.base_ = x;
  m.d_max_ = d_max;
  m.mode_ = mode;
  for (std::uint32_t n = 1; n <= d_max; ++n) {
    if (mode == LayerMode::Structured) m.add_structured_layer(n);
    else m.add_naive_layer(n);
  }
  if (mode == LayerMode::Structured) m.add_relations();
  else m.add_relations_naive();
  m.finish();
  return m;
}

void MackeyPresentation::add_structured_layer(std::uint32_t n) {
  auto layer = std::make_shared<Layer>();
  layer->degree = n;
  layer->field = FinitePoint::over(base_, n).ext;
  layer->offset = stats_.generator_count;
  for (const auto& f : functors_) layer->dims.push_back(f->structure(layer->field).invariant_factors.size());
  for_each_tuple(layer->dims, [&](const std::vector<std::size_t>& idx) {
    std::int64_t g = 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
      g = gcd0(g, functors_[i]->structure(layer->field).invariant_factors[idx[i]]);
    if (g == 1) {
      layer->index_of.push_back(-1);
      return;
    }
    layer->index_of.push_back(static_cast<std::int64_t>(layer->orders.size()));
    layer->orders.push_back(g);
  });
  layer->size = layer->orders.size();
  for (std::size_t k = 0; k < layer->size; ++k) {
    if (layer->orders[k] == 0) continue;
    rows_.push_back({{static_cast<std::uint32_t>(layer->offset + k), Int(static_cast<long>(layer->orders[k]))}});
  }
  stats_.generator_count += layer->size;
  stats_.layer_sizes.push_back(layer->size);
  layers_.push_back(std::move(layer));
}

void MackeyPresentation::add_naive_layer(std::uint32_t n) {
  auto layer = std::make_shared<Layer>();
  layer->degree = n;
  layer->field = FinitePoint::over(base_, n).ext;
  layer->offset = stats_.generator_count;
  std::size_t size = 1;
  for (const auto& f : functors_) {
    auto els = f->elements(layer->field);
    std::unordered_map<Value, std::size_t> pos;
    for (std::size_t i = 0; i < els.size(); ++i) pos[els[i]] = i;
    layer->stride.push_back(size);
    size *= els.size();
    layer->position.push_back(std::move(pos));
    layer->elements.push_back(std::move(els));
  }
  layer->size = size;
  stats_.generator_count += size;
  stats_.layer_sizes.push_back(size);
  layers_.push_back(std::move(layer));
}

SparseRow MackeyPresentation::evaluate_entries(std::uint32_t n, const std::vector<Value>& entries) const {
  if (n == 0 || n > d_max_)
    throw ProductError("point degree " + std::to_string(n) + " exceeds the degree bound " + std::to_string(d_max_));
  if (entries.size() != functors_.size()) throw ProductError("entry count does not match the functor count");
  const Layer& L = *layers_[n - 1];
  SparseRow row;
  if (mode_ == LayerMode::Naive) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto it = L.position[i].find(entries[i]);
      if (it == L.position[i].end()) throw ProductError("entry is not an element of the value group");
      idx += it->second * L.stride[i];
    }
    row.emplace_back(static_cast<std::uint32_t>(L.offset + idx), Int(1));
    return row;
  }
  // Elementary tensor: coefficient at a basis tensor is the product of coordinates,
  // reduced modulo that tensor's order.
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> nz(entries.size());
  std::vector<std::size_t> bounds;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto c = functors_[i]->coords(L.field, entries[i]);
    for (std::size_t k = 0; k < c.size(); ++k)
      if (c[k] != 0) nz[i].emplace_back(k, c[k]);
    bounds.push_back(nz[i].size());
  }
  for_each_tuple(bounds, [&](const std::vector<std::size_t>& idx) {
    std::size_t flat = 0, mult = 1;
    Int coef = 1;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      flat += nz[i][idx[i]].first * mult;
      mult *= L.dims[i];
      coef *= static_cast<long>(nz[i][idx[i]].second);
    }
    std::int64_t local = L.index_of[flat];
    if (local < 0) return;
    std::int64_t g = L.orders[local];
    if (g != 0) {
      coef %= static_cast<long>(g);
      if (coef < 0) coef += static_cast<long>(g);
    }
    if (coef != 0) row.emplace_back(static_cast<std::uint32_t>(L.offset + local), coef);
  });
  zlinalg::normalize(row);
  return row;
}

SparseRow MackeyPresentation::evaluate(const Symbol& s) const {
  if (s.point.base->p() != base_->p() || s.point.base->degree() != base_->degree())
    throw ProductError("symbol lies over " + s.point.base->name() + ", presentation over " + base_->name());
  s.check();
  return evaluate_entries(s.point.degree(), s.entries);
}

bool MackeyPresentation::is_zero(const SparseRow& v) const { return lattice_->contains(v); }

std::vector<std::int64_t> MackeyPresentation::layer_orders(std::uint32_t n) const {
  if (n == 0 || n > d_max_) throw ProductError("layer degree out of range");
  const Layer& L = *layers_[n - 1];
  if (mode_ == LayerMode::Naive) return layer_group(functors_, FinitePoint::over(base_, n));
  return canonical_factors(L.orders);
}

std::optional<Int> MackeyPresentation::low_layer_image_order(std::uint32_t k) const {
  if (k == 0 || k > d_max_) throw ProductError("layer degree out of range");
  // |image| = |coker R| / |coker (R + low generators)|
  zlinalg::RowLattice wider = *lattice_;
  for (std::size_t g = 0; g < layers_[k - 1]->offset + layers_[k - 1]->size; ++g)
    wider.insert({{static_cast<std::uint32_t>(g), Int(1)}});
  auto quotient = wider.cokernel();
  if (structure_.free_rank != quotient.free_rank) return std::nullopt;
  return Int(structure_.torsion_order() / quotient.torsion_order());
}

void MackeyPresentation::add_relations() {
  const std::size_t r = functors_.size();
  // Projection formula along the tower embedding for y_m -> y_n, n | m.
  for (std::uint32_t n = 1; n <= d_max_; ++n) {
    const FieldPtr& yn = layers_[n - 1]->field;
    for (std::uint32_t m = 2 * n; m <= d_max_; m += n) {
      const FieldPtr& ym = layers_[m - 1]->field;
      for (std::size_t i0 = 0; i0 < r; ++i0) {
        std::vector<const std::vector<Value>*> gens(r);
        std::vector<std::size_t> bounds(r);
        for (std::size_t i = 0; i < r; ++i) {
          gens[i] = &functors_[i]->structure(i == i0 ? ym : yn).generators;
          bounds[i] = gens[i]->size();
        }
        for_each_tuple(bounds, [&](const std::vector<std::size_t>& idx) {
          std::vector<Value> lhs(r), rhs(r);
          for (std::size_t i = 0; i < r; ++i) {
            Value v = (*gens[i])[idx[i]];
            if (i == i0) {
              lhs[i] = v;
              rhs[i] = functors_[i]->pushforward(*ym, *yn, v);
            } else {
              lhs[i] = functors_[i]->pullback(*yn, *ym, v);
              rhs[i] = v;
            }
          }
          rows_.push_back(difference(evaluate_entries(m, lhs), evaluate_entries(n, rhs)));
        });
      }
    }
  }
  // Frobenius of y_n over x generates Aut(y_n/x).
  for (std::uint32_t n = 2; n <= d_max_; ++n) {
    const FieldPtr& yn = layers_[n - 1]->field;
    for (std::size_t i0 = 0; i0 < r; ++i0) {
      std::vector<std::size_t> bounds(r);
      for (std::size_t i = 0; i < r; ++i) bounds[i] = functors_[i]->structure(yn).generators.size();
      for_each_tuple(bounds, [&](const std::vector<std::size_t>& idx) {
        std::vector<Value> lhs(r), rhs(r);
        for (std::size_t i = 0; i < r; ++i) {
          Value v = functors_[i]->structure(yn).generators[idx[i]];
          if (i == i0) {
            lhs[i] = v;
            Value w = v;
            for (std::uint32_t k = 1; k < n; ++k) w = functors_[i]->frobenius(*yn, *base_, w);
            rhs[i] = w;
          } else {
            lhs[i] = functors_[i]->frobenius(*yn, *base_, v);
            rhs[i] = v;
          }
        }
        rows_.push_back(difference(evaluate_entries(n, lhs), evaluate_entries(n, rhs)));
      });
    }
  }
}

void MackeyPresentation::add_relations_naive() {
  const std::size_t r = functors_.size();
  auto elems = [&](std::uint32_t n, std::size_t i) -> const std::vector<Value>& { return layers_[n - 1]->elements[i]; };
  // Multilinearity in each slot.
  for (std::uint32_t n = 1; n <= d_max_; ++n) {
    const Layer& L = *layers_[n - 1];
    std::vector<std::size_t> bounds(r);
    for (std::size_t i = 0; i < r; ++i) bounds[i] = L.elements[i].size();
    for (std::size_t i = 0; i < r; ++i) {
      auto gens = naive_generating_set(*functors_[i], *L.field, L.elements[i]);
      gens.push_back(functors_[i]->identity(*L.field));  // kills tensors with an identity entry
      for_each_tuple(bounds, [&](const std::vector<std::size_t>& idx) {
        std::vector<Value> a(r);
        for (std::size_t k = 0; k < r; ++k) a[k] = L.elements[k][idx[k]];
        for (Value g : gens) {
          auto sum = a, single = a;
          sum[i] = functors_[i]->add(*L.field, a[i], g);
          single[i] = g;
          SparseRow row = evaluate_entries(n, sum);
          row = difference(row, evaluate_entries(n, a));
          row = difference(row, evaluate_entries(n, single));
          rows_.push_back(std::move(row));
        }
      });
    }
  }
  // Projection formula over all element tuples.
  for (std::uint32_t n = 1; n <= d_max_; ++n) {
    const FieldPtr& yn = layers_[n - 1]->field;
    for (std::uint32_t m = 2 * n; m <= d_max_; m += n) {
      const FieldPtr& ym = layers_[m - 1]->field;
      for (std::size_t i0 = 0; i0 < r; ++i0) {
        std::vector<std::size_t> bounds(r);
        for (std::size_t i = 0; i < r; ++i) bounds[i] = elems(i == i0 ? m : n, i).size();
        for_each_tuple(bounds, [&](const std::vector<std::size_t>& idx) {
          std::vector<Value> lhs(r), rhs(r);
          for (std::size_t i = 0; i < r; ++i) {
            Value v = elems(i == i0 ? m : n, i)[idx[i]];
            lhs[i] = i == i0 ? v : functors_[i]->pullback(*yn, *ym, v);
            rhs[i] = i == i0 ? functors_[i]->pushforward(*ym, *yn, v) : v;
          }
          rows_.push_back(difference(evaluate_entries(m, lhs), evaluate_entries(n, rhs)));
        });
      }
    }
  }
  // Every automorphism sigma^k, not only the generator.
  for (std::uint32_t n = 2; n <= d_max_; ++n) {
    const FieldPtr& yn = layers_[n - 1]->field;
    std::vector<std::size_t> bounds(r);
    for (std::size_t i = 0; i < r; ++i) bounds[i] = elems(n, i).size();
    for (std::uint32_t k = 1; k < n; ++k) {
      for (std::size_t i0 = 0; i0 < r; ++i0) {
        for_each_tuple(bounds, [&](const std::vector<std::size_t>& idx) {
          std::vector<Value> lhs(r), rhs(r);
          for (std::size_t i = 0; i < r; ++i) {
            Value v = elems(n, i)[idx[i]];
            Value pushed = v, pulled = v;
            for (std::uint32_t s = 0; s < k; ++s) pulled = functors_[i]->frobenius(*yn, *base_, pulled);
            for (std::uint32_t s = 0; s < n - k; ++s) pushed = functors_[i]->frobenius(*yn, *base_, pushed);
            lhs[i] = i == i0 ? v : pulled;
            rhs[i] = i == i0 ? pushed : v;
          }
          rows_.push_back(difference(evaluate_entries(n, lhs), evaluate_entries(n, rhs)));
        });
      }
    }
  }
}

void MackeyPresentation::finish() {
  std::erase_if(rows_, [](const SparseRow& row) { return row.empty(); });
  for (auto& row : rows_)
    if (row.front().second < 0)
      for (auto& e : row) e.second = -e.second;
  std::sort(rows_.begin(), rows_.end());
  rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
  lattice_ = std::make_shared<zlinalg::RowLattice>(stats_.generator_count);
  for (const auto& row : rows_) lattice_->insert(row);
  stats_.relation_count = rows_.size();
  structure_ = lattice_->cokernel();
}

bool same_structure(const zlinalg::CokernelStructure& a, const zlinalg::CokernelStructure& b) {
  return a.free_rank == b.free_rank && a.invariant_factors == b.invariant_factors;
}

nlohmann::json structure_json(const zlinalg::CokernelStructure& s) {
  nlohmann::json j;
  auto& f = j["invariant_factors"] = nlohmann::json::array();
  for (const auto& d : s.invariant_factors) {
    if (d.fits_slong_p()) f.push_back(d.get_si());
    else f.push_back(d.get_str());
  }
  j["free_rank"] = s.free_rank;
  if (s.free_rank) j["order"] = "infinite";
  else if (Int o = s.torsion_order(); o.fits_slong_p()) j["order"] = o.get_si();
  else j["order"] = o.get_str();
  return j;
}

std::string OrderResult::order() const {
  return structure.free_rank ? "infinite" : structure.torsion_order().get_str();
}

nlohmann::json OrderResult::to_json() const {
  nlohmann::json j = structure_json(structure);
  j["d_max"] = degree_bound;
  j["generators"] = stats.generator_count;
  j["relations"] = stats.relation_count;
  j["layer_sizes"] = stats.layer_sizes;
  if (!rational_image) j["rational_symbol_subgroup_order"] = "infinite";
  else if (rational_image->fits_slong_p()) j["rational_symbol_subgroup_order"] = rational_image->get_si();
  else j["rational_symbol_subgroup_order"] = rational_image->get_str();
  return j;
}

OrderResult compute_order(const std::vector<FunctorPtr>& functors, const FieldPtr& x, std::uint32_t d_max,
                          LayerMode mode) {
  auto m = MackeyPresentation::build(functors, x, d_max, mode);
  return {d_max, m.structure(), m.stats(), m.low_layer_image_order(1)};
}

nlohmann::json ScanResult::to_json() const {
  nlohmann::json j;
  auto& s = j["scan"] = nlohmann::json::array();
  for (const auto& st : steps) s.push_back(st.to_json());
  j["stabilized"] = stabilized;
  return j;
}

ScanResult stabilization_scan(const std::vector<FunctorPtr>& functors, const FieldPtr& x, std::uint32_t d_from,
                              std::uint32_t d_to, LayerMode mode) {
  if (d_from == 0 || d_to < d_from) throw ProductError("invalid degree range");
  ScanResult r;
  for (std::uint32_t d = d_from; d <= d_to; ++d) r.steps.push_back(compute_order(functors, x, d, mode));
  const auto n = r.steps.size();
  r.stabilized = n >= 2 && same_structure(r.steps[n - 1].structure, r.steps[n - 2].structure);
  return r;
}

}  // namespace mackey::product
