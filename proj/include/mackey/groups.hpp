#pragma once

// Value groups M(y) of the implemented Mackey functors, with pull-back,
// push-forward, Galois action and invariant-factor structure.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "mackey/ffield.hpp"
#include "mackey/poly.hpp"

namespace mackey::groups {

using ff::Elem;
using ff::Field;
using ff::FieldPtr;

/// Encoded element of a value group. The encoding depends on the functor kind.
using Value = std::uint64_t;

enum class Kind { GA, GM, GENJAC, ELLIPTIC, CONST_Z };

std::string kind_name(Kind k);

class GroupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Limits {
  std::uint64_t max_group_order = 100000;
};
void set_limits(const Limits& limits);
Limits limits();

/// Finite abelian group (plus free summands) in invariant-factor form.
struct AbelianStructure {
  /// d1 | d2 | ... with each di >= 2; free summands are recorded as 0 and listed last.
  std::vector<std::int64_t> invariant_factors;
  std::vector<Value> generators;

  /// 0 when a free summand is present.
  std::uint64_t order() const;
  std::size_t free_rank() const;
  nlohmann::json to_json() const;
};

/// Result of the generic structure algorithm on an enumerated group.
struct EnumeratedStructure {
  AbelianStructure structure;
  std::unordered_map<Value, std::vector<std::int64_t>> coords;
};

/// Invariant factors, realizing generators and a discrete-log table for a finite
/// abelian group given by its element list and law. Deterministic in the
/// enumeration order; throws if the law is inconsistent.
EnumeratedStructure abelian_structure(const std::vector<Value>& elements, Value identity,
                                      const std::function<Value(Value, Value)>& op);

class ValueFunctor;
using FunctorPtr = std::shared_ptr<const ValueFunctor>;

class ValueFunctor : public std::enable_shared_from_this<ValueFunctor> {
 public:
  static FunctorPtr additive(FieldPtr base);
  static FunctorPtr multiplicative(FieldPtr base);
  static FunctorPtr constant_z(FieldPtr base);
  /// Generalized Jacobian of P^1 with modulus given by a monic polynomial over base.
  static FunctorPtr genjac(poly::Poly modulus);
  /// y^2 = x^3 + a x + b over base; rejects characteristic 2, 3 and singular curves.
  static FunctorPtr elliptic(FieldPtr base, Elem a, Elem b);
  /// "GA", "GM", "Z", "GENJAC:<poly in t>", "ELL:a,b"
  static FunctorPtr parse(const std::string& spec, const FieldPtr& base);

  Kind kind() const { return kind_; }
  const FieldPtr& base() const { return base_; }
  const poly::Poly& modulus() const { return modulus_; }
  Elem curve_a() const { return a_; }
  Elem curve_b() const { return b_; }
  std::string label() const;
  bool finite() const { return kind_ != Kind::CONST_Z; }
  /// Semi-abelian kinds in the canonical decomposition (GM, ELLIPTIC).
  bool semi_abelian() const { return kind_ == Kind::GM || kind_ == Kind::ELLIPTIC; }
  bool unipotent() const { return kind_ == Kind::GA; }

  Value identity(const Field& y) const;
  Value add(const Field& y, Value a, Value b) const;
  Value neg(const Field& y, Value a) const;
  Value multiple(const Field& y, Value a, std::int64_t n) const;
  bool valid(const Field& y, Value a) const;

  /// j^*: M(x) -> M(y) for x a subfield of y.
  Value pullback(const Field& x, const Field& y, Value a) const;
  /// j_*: M(y) -> M(x).
  Value pushforward(const Field& y, const Field& x, Value a) const;
  /// Action of the |over|-power Frobenius of y on M(y).
  Value frobenius(const Field& y, const Field& over, Value a) const;

  /// All elements of M(y) in a fixed order (finite kinds only).
  std::vector<Value> elements(const FieldPtr& y) const;
  const AbelianStructure& structure(const FieldPtr& y) const;
  /// Coordinates of a in the structure generators, reduced modulo the invariant factors.
  std::vector<std::int64_t> coords(const FieldPtr& y, Value a) const;

  std::string format(const Field& y, Value a) const;
  Value parse_value(const FieldPtr& y, const std::string& text) const;

  /// Field element for GA/GM values.
  Elem as_elem(Value v) const { return static_cast<Elem>(v); }
  static Value of_elem(Elem e) { return e; }
  /// Elliptic-curve helpers.
  Value point(const Field& y, Elem x, Elem yy) const { return std::uint64_t{x} * y.size() + yy; }
  Value infinity(const Field& y) const { return std::uint64_t{y.size()} * y.size(); }
  std::pair<Elem, Elem> affine(const Field& y, Value v) const;
  /// Generalized-Jacobian helpers: normalized representative <-> coefficients.
  poly::Poly unit_rep(const FieldPtr& y, Value v) const;
  Value unit_value(const poly::Poly& u) const;

  ValueFunctor(Kind kind, FieldPtr base, poly::Poly modulus, Elem a, Elem b);

 private:
  void require_point(const Field& y) const;
  struct Cached {
    AbelianStructure structure;
    std::unordered_map<Value, std::vector<std::int64_t>> coords;
  };
  const Cached& cached(const FieldPtr& y) const;

  Kind kind_;
  FieldPtr base_;
  poly::Poly modulus_;
  Elem a_ = 0, b_ = 0;

  mutable std::mutex mutex_;
  mutable std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<Cached>> cache_;
};

/// An element of M(point).
struct GroupValue {
  FunctorPtr functor;
  FieldPtr point;
  Value value = 0;

  nlohmann::json to_json() const;
};

GroupValue value_pullback(const GroupValue& a, const FieldPtr& y);
GroupValue value_pushforward(const GroupValue& a, const FieldPtr& x);

/// Order of J_{P^1, D}(F_q) from the closed form; support given as (degree, multiplicity) pairs.
std::uint64_t genjac_closed_form(std::uint64_t q, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& support);

}  // namespace mackey::groups
