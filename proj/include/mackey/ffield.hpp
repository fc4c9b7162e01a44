#pragma once

// Finite fields F_{p^d} arranged in one coherent tower.
//
// Every field carries a primitive element chosen so that for each divisor
// k of d, gen_d^((p^d-1)/(p^k-1)) is the primitive element of F_{p^k}.
// Embeddings, norms and descents then reduce to arithmetic on discrete
// logarithms and compose exactly.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mackey::ff {

/// Packed element: base-p digits of the power-basis coordinates, c0 least significant.
using Elem = std::uint32_t;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Limits {
  std::uint32_t max_degree = 6;
  std::uint64_t max_size = std::uint64_t{1} << 20;
};

void set_limits(const Limits& limits);
Limits limits();

bool is_prime(std::uint64_t n);

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  std::uint32_t p() const { return p_; }
  std::uint32_t degree() const { return d_; }
  std::uint32_t size() const { return q_; }
  /// Monic defining polynomial over F_p, coefficients low-to-high (length d+1).
  const std::vector<std::uint32_t>& defining_poly() const { return poly_; }
  /// Primitive element compatible with every subfield in the tower.
  Elem generator() const { return exp_[1]; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::int64_t e) const;
  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t n) const;

  /// Discrete log to the compatible generator; a must be nonzero.
  std::uint32_t log(Elem a) const;
  Elem exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }

  std::vector<std::uint32_t> coeffs(Elem a) const;
  Elem from_coeffs(std::span<const std::uint32_t> c) const;

  /// "p^d:[c0,c1,...]"
  std::string format(Elem a) const;
  std::string name() const { return std::to_string(p_) + "^" + std::to_string(d_); }

  bool contains_subfield(const Field& sub) const { return sub.p_ == p_ && d_ % sub.d_ == 0; }

  Field(std::uint32_t p, std::uint32_t d, std::vector<std::uint32_t> poly,
        std::vector<Elem> exp_table, std::vector<std::uint32_t> log_table);

 private:
  std::uint32_t p_;
  std::uint32_t d_;
  std::uint32_t q_;
  std::vector<std::uint32_t> poly_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> pw_;  // p^i
};

/// Canonical field of order p^d; repeated calls return the same object.
FieldPtr make_field(std::uint32_t p, std::uint32_t d);

/// Image of a ∈ src under the tower embedding src -> dst.
Elem embed(const Field& src, Elem a, const Field& dst);
/// Inverse of embed for elements lying in the image of sub; throws otherwise.
Elem descend(const Field& top, Elem a, const Field& sub);
bool lies_in(const Field& top, Elem a, const Field& sub);
/// a^{|over|}.
Elem frobenius(const Field& f, Elem a, const Field& over);
Elem trace(const Field& f, Elem a, const Field& down_to);
Elem norm(const Field& f, Elem a, const Field& down_to);

/// Value type pairing an element with its field.
struct FieldElem {
  FieldPtr field;
  Elem value = 0;

  FieldElem operator+(const FieldElem& o) const { return {field, field->add(value, o.value)}; }
  FieldElem operator-(const FieldElem& o) const { return {field, field->sub(value, o.value)}; }
  FieldElem operator*(const FieldElem& o) const { return {field, field->mul(value, o.value)}; }
  FieldElem operator-() const { return {field, field->neg(value)}; }
  bool operator==(const FieldElem& o) const { return field == o.field && value == o.value; }
  bool is_zero() const { return value == 0; }
  std::vector<std::uint32_t> coeffs() const { return field->coeffs(value); }
  std::string format() const { return field->format(value); }
};

FieldElem embed(const FieldElem& a, const FieldPtr& target);
FieldElem frobenius(const FieldElem& a, const FieldPtr& over);
FieldElem trace(const FieldElem& a, const FieldPtr& down_to);
FieldElem norm(const FieldElem& a, const FieldPtr& down_to);

/// Parses "p^d:[c0,...]".
FieldElem parse_elem(const std::string& text);

}  // namespace mackey::ff
