#pragma once

// The reciprocity law for GA and GM sections on open subsets of P^1:
// sum over x in C of v_x(f) Tr_{x/F}(a(x)) vanishes for f = 1 mod D.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mackey/groups.hpp"
#include "mackey/p1.hpp"

namespace mackey::reciprocity {

using p1::Divisor;
using p1::Place;
using poly::RationalFunction;

class SectionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// P^1 minus a nonempty finite set of closed points.
struct OpenCurve {
  ff::FieldPtr field;
  std::vector<Place> removed;

  /// "P1-{0,inf}", "P1-{inf}", "P1-{t^2+1,inf}"
  static OpenCurve parse(const ff::FieldPtr& field, const std::string& text);
  bool contains(const Place& x) const;
  std::string to_string() const;
};

struct Section {
  groups::FunctorPtr functor;  // GA or GM over the curve's field
  RationalFunction a;

  /// "GA:t", "GM:t^2+1"
  static Section parse(const ff::FieldPtr& field, const std::string& text);
  std::string to_string() const;
};

/// Throws SectionError unless a is regular (GA) or invertible (GM) on C.
void check_section(const Section& s, const OpenCurve& c);

/// v_x(f - 1) >= m_x(D) for every x in the support of D.
bool check_congruence(const RationalFunction& f, const Divisor& d);

/// sum_{x in C, v_x(f) != 0} v_x(f) * pushforward_{x/F}(a(x)), as an element of M(F).
groups::GroupValue reciprocity_sum(const Section& s, const RationalFunction& f, const OpenCurve& c);

/// The same quantity from the boundary: minus the residues of a df/f (GA) or the
/// product of tame symbols (GM) at the removed points, by Laurent expansion.
groups::GroupValue boundary_oracle(const Section& s, const RationalFunction& f, const OpenCurve& c);

/// Test functions f = 1 + g * prod(pi^m) / den meeting f = 1 mod D, in a fixed order.
std::vector<RationalFunction> congruent_functions(const Divisor& d, std::size_t count);

struct Instance {
  RationalFunction f;
  groups::GroupValue sum;
  groups::GroupValue oracle;
  bool vanishes = false;
  bool oracle_agrees = false;
  nlohmann::json to_json() const;
};

std::vector<Instance> check_family(const Section& s, const OpenCurve& c, const Divisor& d, std::size_t count);

struct ConductorResult {
  std::optional<Divisor> conductor;
  std::vector<Instance> instances;
  /// Candidates rejected before the conductor, with a counterexample f.
  std::vector<std::pair<Divisor, RationalFunction>> rejected;
  nlohmann::json to_json() const;
};

/// Least effective D on the removed points (every multiplicity in [1, max_multiplicity], ordered by
/// degree then place order) for which all enumerated congruent test functions satisfy the law.
ConductorResult find_conductor(const Section& s, const OpenCurve& c, std::uint32_t max_multiplicity,
                               std::size_t instances);

}  // namespace mackey::reciprocity
