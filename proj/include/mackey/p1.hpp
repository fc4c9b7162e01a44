#pragma once

// Closed points and divisors on the projective line over a tower field.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mackey/ffield.hpp"
#include "mackey/poly.hpp"

namespace mackey::p1 {

using ff::Elem;
using ff::FieldPtr;
using poly::Poly;
using poly::RationalFunction;

/// A closed point: a monic irreducible polynomial, or the point at infinity.
class Place {
 public:
  static Place infinity(FieldPtr field);
  /// Throws unless pi is monic irreducible of positive degree.
  static Place finite(Poly pi);
  /// The rational point t = c.
  static Place rational(FieldPtr field, Elem c);

  bool is_infinity() const { return inf_; }
  const Poly& poly() const { return pi_; }
  const FieldPtr& field() const { return field_; }
  std::uint32_t degree() const { return inf_ ? 1 : static_cast<std::uint32_t>(pi_.degree()); }
  /// F_q(x) as a tower field.
  FieldPtr residue_field() const;
  /// A fixed root of poly() in the residue field (the least element that is a root).
  Elem root() const;

  bool operator==(const Place& o) const { return inf_ == o.inf_ && pi_ == o.pi_; }
  /// Finite places by degree then coefficients; infinity last.
  bool operator<(const Place& o) const;
  /// "(0)", "(2)" for rational points of prime fields, "(t^2+1)", "(inf)".
  std::string to_string() const;

 private:
  FieldPtr field_;
  Poly pi_;
  bool inf_ = false;
};

/// v_x(f) for nonzero f.
std::int64_t valuation(const RationalFunction& f, const Place& x);
/// f(x) in the residue field, for f regular at x (v_x(f) >= 0).
Elem value_at(const RationalFunction& f, const Place& x);

class Divisor {
 public:
  Divisor() = default;
  explicit Divisor(FieldPtr field) : field_(std::move(field)) {}

  const FieldPtr& field() const { return field_; }
  const std::map<Place, std::int64_t>& terms() const { return terms_; }
  void add(const Place& x, std::int64_t m);
  std::int64_t multiplicity(const Place& x) const;
  std::int64_t degree() const;
  bool effective() const;
  bool empty() const { return terms_.empty(); }
  std::vector<Place> support() const;
  std::uint32_t max_support_degree() const;
  /// "2*(inf)+(0)" in place order; "0" when empty.
  std::string to_string() const;
  bool operator==(const Divisor& o) const { return terms_ == o.terms_; }

 private:
  FieldPtr field_;
  std::map<Place, std::int64_t> terms_;
};

/// Zeros and poles of a nonzero rational function, infinity included.
Divisor divisor_of(const RationalFunction& f);

/// "(0)+(inf)", "2*inf", "3*(t^2+1)+(1)"; a bare integer c means the point t = c.
Divisor parse_divisor(const FieldPtr& field, const std::string& text);
/// "inf", an integer c, or a polynomial in t made monic.
Place parse_place(const FieldPtr& field, const std::string& text);

}  // namespace mackey::p1
