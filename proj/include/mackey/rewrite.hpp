#pragma once

// Certified rewriting of Mackey symbols to zero or to a normal form
// {c, 1, ..., 1}_{x/x}. Every step is re-checked against a truncated
// presentation.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mackey/product.hpp"

namespace mackey::rewrite {

using product::Symbol;
using zlinalg::Int;

enum class Strategy { GA_CHAIN, DIVISIBILITY };

std::string strategy_name(Strategy s);
Strategy parse_strategy(const std::string& text);

class StrategyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Term {
  Int coef;
  Symbol symbol;
};
using FormalSum = std::vector<Term>;

nlohmann::json formal_sum_json(const FormalSum& s);

struct Step {
  std::string rule;  // multilinearity, pushforward, projection_formula, divisibility, i_move
  nlohmann::json params;
  FormalSum result;
  bool validated = false;
  /// The step holds only modulo the subgroup I(x) of the unipotent chain.
  bool modulo_i = false;
};

struct Certificate {
  Symbol initial;
  Strategy strategy = Strategy::DIVISIBILITY;
  std::vector<Step> steps;
  /// Degree bound of the presentation used for validation.
  std::uint32_t max_degree = 1;
  bool zero = false;
  bool validated = false;

  const FormalSum& final_form() const;
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kStepCap = 64;

/// Caches the truncated presentations used for validation.
class Checker {
 public:
  const product::MackeyPresentation& presentation(const std::vector<product::FunctorPtr>& functors,
                                                  const ff::FieldPtr& x, std::uint32_t d_max);
  /// Relations plus the I(x) generators {c, a_2, ..., a_n} - {c a_2 ... a_n, 1, ..., 1} on points of degree <= d_max.
  const zlinalg::RowLattice& chain_lattice(const std::vector<product::FunctorPtr>& functors, const ff::FieldPtr& x,
                                           std::uint32_t d_max);

  zlinalg::SparseRow evaluate(const product::MackeyPresentation& m, const FormalSum& s) const;

 private:
  std::map<std::string, product::MackeyPresentation> presentations_;
  std::map<std::string, zlinalg::RowLattice> chains_;
};

Certificate reduce_symbol(const Symbol& s, Strategy strategy, Checker& checker);
Certificate reduce_symbol(const Symbol& s, Strategy strategy);

/// Re-checks every step of a certificate; updates and returns the validated flag.
bool revalidate(Certificate& c, Checker& checker);

}  // namespace mackey::rewrite
