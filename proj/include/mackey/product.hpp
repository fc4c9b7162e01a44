#pragma once

// Mackey products (M_1 (x) ... (x) M_n)(x) as finitely presented abelian groups.
//
// The group is truncated at an extension-degree bound d_max: generators come
// from the layers M_1(y) (x) ... (x) M_n(y) for every point y over x with
// [y:x] <= d_max, relations from the projection formula for every morphism
// between such points (tower embeddings and Frobenius automorphisms generate
// all of them).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mackey/ffield.hpp"
#include "mackey/groups.hpp"
#include "mackey/zlinalg.hpp"

namespace mackey::product {

using ff::FieldPtr;
using groups::FunctorPtr;
using groups::Value;
using zlinalg::SparseRow;

class ProductError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point y over x; both fields live in the tower.
struct FinitePoint {
  FieldPtr base;
  FieldPtr ext;

  static FinitePoint over(const FieldPtr& base, std::uint32_t degree);
  std::uint32_t degree() const { return ext->degree() / base->degree(); }
  std::string label() const { return ext->name() + "/" + base->name(); }
};

/// {a_1, ..., a_n}_{y/x}
struct Symbol {
  std::vector<FunctorPtr> functors;
  FinitePoint point;
  std::vector<Value> entries;

  /// Validates entry count and membership of every entry in M_i(y).
  void check() const;
  bool has_identity_entry() const;
  nlohmann::json to_json() const;
  std::string to_string() const;
};

/// j_*: rebases {..}_{y/x'} to {..}_{y/x} along x' -> x.
Symbol pushforward_symbol(const Symbol& s, const FieldPtr& x);

/// Parses "GA,GM,ELL:1,1,GENJAC:t^2" (ELL takes the following token as its b).
std::vector<FunctorPtr> parse_functor_list(const std::string& text, const FieldPtr& base);
std::string functor_list_label(const std::vector<FunctorPtr>& functors);

enum class LayerMode { Structured, Naive };

struct PresentationStats {
  std::size_t generator_count = 0;
  std::size_t relation_count = 0;
  std::vector<std::size_t> layer_sizes;  // generators per degree 1..d_max
};

class MackeyPresentation {
 public:
  static MackeyPresentation build(const std::vector<FunctorPtr>& functors, const FieldPtr& x, std::uint32_t d_max,
                                  LayerMode mode = LayerMode::Structured);

  const std::vector<FunctorPtr>& functors() const { return functors_; }
  const FieldPtr& base() const { return base_; }
  std::uint32_t degree_bound() const { return d_max_; }
  LayerMode mode() const { return mode_; }
  const PresentationStats& stats() const { return stats_; }
  const zlinalg::CokernelStructure& structure() const { return structure_; }
  const std::vector<SparseRow>& relations() const { return rows_; }
  const zlinalg::RowLattice& lattice() const { return *lattice_; }

  /// Presentation coordinates of a symbol (its point must lie over base()).
  SparseRow evaluate(const Symbol& s) const;
  /// Coordinates of the elementary tensor of the given entries at the degree-n layer.
  SparseRow evaluate_entries(std::uint32_t n, const std::vector<Value>& entries) const;
  /// Whether the vector lies in the relation span (i.e. is zero in the group).
  bool is_zero(const SparseRow& v) const;

  /// Layer group L(y) for [y:x] = n, as invariant factors (0 marks a free summand).
  std::vector<std::int64_t> layer_orders(std::uint32_t n) const;

  /// Order of the subgroup generated by the layers of degree <= k, or nullopt
  /// when it is infinite.
  std::optional<zlinalg::Int> low_layer_image_order(std::uint32_t k) const;

 private:
  struct Layer;
  MackeyPresentation() = default;
  void add_structured_layer(std::uint32_t n);
  void add_naive_layer(std::uint32_t n);
  void add_relations();
  void add_relations_naive();
  void finish();

  std::vector<FunctorPtr> functors_;
  FieldPtr base_;
  std::uint32_t d_max_ = 0;
  LayerMode mode_ = LayerMode::Structured;
  std::vector<std::shared_ptr<const Layer>> layers_;
  std::vector<SparseRow> rows_;
  std::shared_ptr<zlinalg::RowLattice> lattice_;
  zlinalg::CokernelStructure structure_;
  PresentationStats stats_;
};

/// Tensor product of finite abelian groups by invariant factors.
std::vector<std::int64_t> layer_group(const std::vector<FunctorPtr>& functors, const FinitePoint& y);

struct OrderResult {
  std::uint32_t degree_bound = 0;
  zlinalg::CokernelStructure structure;
  PresentationStats stats;
  /// Order of the subgroup generated by symbols over x itself; nullopt when infinite.
  std::optional<zlinalg::Int> rational_image;
  /// Order as a decimal string, "infinite" when the free rank is positive.
  std::string order() const;
  nlohmann::json to_json() const;
};

OrderResult compute_order(const std::vector<FunctorPtr>& functors, const FieldPtr& x, std::uint32_t d_max,
                          LayerMode mode = LayerMode::Structured);

struct ScanResult {
  std::vector<OrderResult> steps;
  /// The last two computed structures agree.
  bool stabilized = false;
  nlohmann::json to_json() const;
};

ScanResult stabilization_scan(const std::vector<FunctorPtr>& functors, const FieldPtr& x, std::uint32_t d_from,
                              std::uint32_t d_to, LayerMode mode = LayerMode::Structured);

bool same_structure(const zlinalg::CokernelStructure& a, const zlinalg::CokernelStructure& b);
nlohmann::json structure_json(const zlinalg::CokernelStructure& s);

}  // namespace mackey::product
