#pragma once

// Univariate polynomials and rational functions in t over a tower field.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mackey/ffield.hpp"

namespace mackey::poly {

using ff::Elem;
using ff::FieldPtr;

class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldPtr field, std::vector<Elem> coeffs = {});
  static Poly constant(FieldPtr field, Elem c);
  static Poly monomial(FieldPtr field, Elem c, std::size_t degree);
  /// t - c
  static Poly linear(FieldPtr field, Elem c);

  const FieldPtr& field() const { return field_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(Elem s) const;
  Poly monic() const;
  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator<(const Poly& o) const;

  /// Value at a point of an extension field of field().
  Elem eval(const ff::Field& ext, Elem x) const;
  Poly derivative() const;
  /// p(t + c)
  Poly shifted(Elem c) const;
  /// t^deg * p(1/t)
  Poly reversed(std::size_t deg) const;
  /// Coefficientwise image in an extension field.
  Poly embedded(const FieldPtr& ext) const;
  /// Coefficientwise q-power Frobenius with q = |over|.
  Poly frobenius(const ff::Field& over) const;
  /// Coefficientwise descent to a subfield; throws if a coefficient is outside it.
  Poly descended(const FieldPtr& sub) const;

  std::string to_string() const;

 private:
  void trim();
  FieldPtr field_;
  std::vector<Elem> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly mod(const Poly& a, const Poly& b);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(Poly base, std::uint64_t e, const Poly& m);
/// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);
/// s*a + t*b = g, g monic.
struct ExtGcd {
  Poly g, s, t;
};
ExtGcd ext_gcd(const Poly& a, const Poly& b);
/// Inverse of a modulo m; throws when not coprime.
Poly inverse_mod(const Poly& a, const Poly& m);
Poly pow(const Poly& a, std::uint32_t e);

bool is_irreducible(const Poly& f);
/// Monic polynomials of the given degree, enumerated in packed-coefficient order.
std::uint64_t monic_count(const ff::Field& f, std::uint32_t degree);
Poly monic_from_index(const FieldPtr& f, std::uint32_t degree, std::uint64_t index);
/// All monic irreducibles of the given degree in enumeration order.
std::vector<Poly> monic_irreducibles(const FieldPtr& f, std::uint32_t degree);

struct Factorization {
  Elem unit = 1;
  std::vector<std::pair<Poly, int>> factors;  // monic irreducible, multiplicity
};
/// Trial division by monic irreducibles of increasing degree (desk-scale inputs).
Factorization factor(const Poly& a);
/// Multiplicity of the irreducible pi in a (a nonzero).
int valuation(const Poly& a, const Poly& pi);

class RationalFunction {
 public:
  RationalFunction() = default;
  RationalFunction(Poly num, Poly den);
  explicit RationalFunction(Poly num);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const FieldPtr& field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }

  std::string to_string() const;

 private:
  void reduce();
  Poly num_;
  Poly den_;
};

/// Grammar: sums, products, integer powers, parentheses, integers and the variable t;
/// '/' is allowed in rational functions only.
RationalFunction parse_rational(const FieldPtr& field, const std::string& text);
Poly parse_poly(const FieldPtr& field, const std::string& text);

}  // namespace mackey::poly
