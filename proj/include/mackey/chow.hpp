#pragma once

// Relative Chow groups CH_0(X, D) of open curves X = P^1 - supp(D), computed
// from the idele presentation
//
//   (Z_0(X) + sum_{s in D} F_s^x / U_s^{m_s}) / F(t)^x,
//
// together with the generalized-Jacobian closed form and the finiteness bound
// for products of two such curves.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "mackey/groups.hpp"
#include "mackey/p1.hpp"
#include "mackey/product.hpp"
#include "mackey/zlinalg.hpp"

namespace mackey::chow {

using ff::Elem;
using ff::FieldPtr;
using p1::Divisor;
using p1::Place;
using poly::Poly;

class ChowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Effective divisor with nonempty support; X is its open complement.
struct Modulus {
  Divisor divisor;

  static Modulus make(Divisor d);
  /// "2*(inf)", "(0)+(inf)", "(t^2 + 1)"
  static Modulus parse(const FieldPtr& field, const std::string& text);
  const FieldPtr& field() const { return divisor.field(); }
  /// Whether X has an F-rational point.
  bool has_rational_point() const;
  std::string to_string() const { return divisor.to_string(); }
};

/// Coordinate change s = 1/(t - c) moving infinity off the support.
struct Normalization {
  bool applied = false;
  Elem shift = 0;
  Divisor divisor;

  nlohmann::json to_json() const;
};

/// Identity when infinity is not in the support; otherwise c is the least
/// rational point outside the support. Throws when every rational point is in it.
Normalization normalize(const Divisor& d);
/// Image of a place under s = 1/(t - c).
Place moved_place(const Place& x, Elem c);
/// Monic modulus polynomial prod pi^m of a divisor supported away from infinity.
Poly modulus_polynomial(const Divisor& d);

/// F_x^x / U_x^m = Z (uniformizer) + (O_x / pi^m)^x. Unit representatives are
/// residues modulo pi^m, i.e. truncated power series in the local parameter pi.
class LocalUnits {
 public:
  static LocalUnits compute(const Place& x, std::uint32_t m);

  const Place& place() const { return place_; }
  std::uint32_t multiplicity() const { return m_; }
  const Poly& ideal() const { return ideal_; }
  /// Invariant factors of (O/pi^m)^x.
  const std::vector<std::int64_t>& unit_factors() const { return factors_; }
  const std::vector<Poly>& unit_generators() const { return generators_; }
  /// Unit factors followed by a free summand for the uniformizer.
  groups::AbelianStructure structure() const;
  /// Discrete logarithm of a unit (any polynomial prime to pi) in unit_generators().
  std::vector<std::int64_t> coordinates(const Poly& unit) const;
  nlohmann::json to_json() const;

 private:
  Place place_;
  std::uint32_t m_ = 0;
  Poly ideal_;
  std::vector<std::int64_t> factors_;
  std::vector<Poly> generators_;
  std::unordered_map<groups::Value, std::vector<std::int64_t>> coords_;
};

LocalUnits local_unit_quotient(const Place& x, std::uint32_t m);

struct ChowGroup {
  Modulus modulus;
  Normalization normalization;
  std::uint32_t n_pts = 0, n_fun = 0;
  std::size_t generator_count = 0, relation_count = 0;
  /// Generator labels and their degrees under the degree functional.
  std::vector<std::string> generator_labels;
  std::vector<std::int64_t> degrees;
  zlinalg::CokernelStructure full;
  /// Kernel of the degree map: same torsion, free rank one less.
  zlinalg::CokernelStructure degree_zero;
  bool rows_degree_zero = true;

  nlohmann::json to_json() const;
};

/// Idele presentation truncated to cycles of degree <= n_pts and functions
/// (constants and monic irreducibles) of degree <= n_fun.
ChowGroup relative_chow(const Modulus& mod, std::uint32_t n_pts, std::uint32_t n_fun);

/// 4 deg D + 4, clamped so that the irreducibles of the top degree stay enumerable.
std::uint32_t default_truncation(const Modulus& mod);

struct ChowReport {
  std::vector<ChowGroup> scan;
  bool stabilized = false;
  std::uint64_t oracle = 0;
  bool oracle_agrees = false;

  const ChowGroup& result() const { return scan.back(); }
  nlohmann::json to_json() const;
};

/// Scans N = N_pts = N_fun from the largest support degree up to n_max.
ChowReport chow_scan(const Modulus& mod, std::optional<std::uint32_t> n_max = std::nullopt);

/// |J_{P^1, D}(F_q)| from the closed form.
std::uint64_t genjac_order(std::uint64_t q, const Divisor& d);

/// GENJAC functor for the normalized modulus.
groups::FunctorPtr jacobian(const Modulus& mod);

struct ProductBound {
  Modulus m1, m2;
  std::uint32_t d_max = 0;
  std::uint64_t j1 = 0, j2 = 0;
  std::uint64_t j1_closed_form = 0, j2_closed_form = 0;
  product::OrderResult mackey;
  /// Empty when the Mackey factor is infinite.
  std::optional<zlinalg::Int> bound;

  nlohmann::json to_json() const;
};

ProductBound product_bound(const Modulus& m1, const Modulus& m2, std::uint32_t d_max);

/// Push-forward of a zero-cycle along the base change x' -> x.
Divisor cycle_pushforward(const Divisor& cycle, const FieldPtr& x);

/// Class in J(y) of a cycle over y disjoint from the modulus (prod pi^m; infinity contributes 1).
groups::Value cycle_class(const groups::FunctorPtr& J, const FieldPtr& y, const Divisor& cycle);

struct SquareCheck {
  std::string cycle;
  std::string pushed_cycle;
  std::string via_cycles;
  std::string via_norm;
  bool commutes = false;

  nlohmann::json to_json() const;
};

/// Compares cycle_class(pushforward([theta] - [inf])) with the norm of the
/// class of [theta] - [inf] over y.
SquareCheck compatibility_square(const groups::FunctorPtr& J, const FieldPtr& y, Elem theta);

}  // namespace mackey::chow
