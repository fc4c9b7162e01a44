#include <doctest.h>

#include "mackey/p1.hpp"
#include "mackey/poly.hpp"

using namespace mackey;
using poly::Poly;
using poly::RationalFunction;

namespace {

std::int64_t mobius(std::uint32_t n) {
  std::int64_t m = 1;
  for (std::uint32_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    m = -m;
  }
  return n > 1 ? -m : m;
}

// Gauss count of monic irreducibles of degree n over F_q.
std::uint64_t gauss_count(std::uint64_t q, std::uint32_t n) {
  std::int64_t s = 0;
  for (std::uint32_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    std::int64_t qp = 1;
    for (std::uint32_t i = 0; i < n / d; ++i) qp *= static_cast<std::int64_t>(q);
    s += mobius(d) * qp;
  }
  return static_cast<std::uint64_t>(s / n);
}

bool brute_irreducible(const Poly& f) {
  const auto& F = f.field();
  for (std::uint32_t d = 1; 2 * d <= static_cast<std::uint32_t>(f.degree()); ++d)
    for (std::uint64_t i = 0; i < poly::monic_count(*F, d); ++i)
      if (poly::mod(f, poly::monic_from_index(F, d, i)).is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("irreducible counts match the Gauss formula") {
  for (auto [p, d, nmax] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
           {2, 1, 8}, {3, 1, 5}, {5, 1, 3}, {2, 2, 3}}) {
    auto F = ff::make_field(p, d);
    for (std::uint32_t n = 1; n <= nmax; ++n) CHECK(poly::monic_irreducibles(F, n).size() == gauss_count(F->size(), n));
  }
}

TEST_CASE("irreducibility test agrees with trial division") {
  auto F = ff::make_field(3, 1);
  for (std::uint32_t n = 1; n <= 4; ++n)
    for (std::uint64_t i = 0; i < poly::monic_count(*F, n); ++i) {
      Poly f = poly::monic_from_index(F, n, i);
      CHECK(poly::is_irreducible(f) == brute_irreducible(f));
    }
}

TEST_CASE("factorization reconstructs its input") {
  auto F = ff::make_field(2, 1);
  for (std::uint64_t i = 0; i < poly::monic_count(*F, 7); ++i) {
    Poly f = poly::monic_from_index(F, 7, i);
    auto fac = poly::factor(f);
    Poly g = Poly::constant(F, fac.unit);
    for (const auto& [pi, m] : fac.factors) {
      CHECK(poly::is_irreducible(pi));
      CHECK(poly::valuation(f, pi) == m);
      g = g * poly::pow(pi, static_cast<std::uint32_t>(m));
    }
    CHECK(g == f);
  }
}

TEST_CASE("division, gcd and inverses") {
  auto F = ff::make_field(5, 1);
  Poly a = poly::parse_poly(F, "t^5 + 3*t^2 + 1"), b = poly::parse_poly(F, "2*t^2 + t + 4");
  auto [q, r] = poly::divmod(a, b);
  CHECK(q * b + r == a);
  CHECK(r.degree() < b.degree());
  auto e = poly::ext_gcd(a, b);
  CHECK(e.s * a + e.t * b == e.g);
  Poly m = poly::parse_poly(F, "t^3 + t + 1");
  Poly inv = poly::inverse_mod(b, m);
  CHECK(poly::mulmod(inv, b, m) == Poly::constant(F, 1));
  CHECK(poly::powmod(b, 7, m) == poly::mod(poly::pow(b, 7), m));
}

TEST_CASE("parsing and printing") {
  auto F = ff::make_field(3, 1);
  CHECK(poly::parse_poly(F, "t^2 + 1").to_string() == "t^2 + 1");
  CHECK(poly::parse_poly(F, "(t+1)^2").to_string() == "t^2 + 2*t + 1");
  CHECK(poly::parse_poly(F, "4*t").to_string() == "t");
  RationalFunction r = poly::parse_rational(F, "(t^2 - 1)/(t - 1)");
  CHECK(r.to_string() == "t + 1");
  CHECK_THROWS(poly::parse_poly(F, "1/t"));
  CHECK_THROWS(poly::parse_poly(F, "t +"));
}

TEST_CASE("substitutions") {
  auto F = ff::make_field(5, 1);
  Poly f = poly::parse_poly(F, "t^3 + 2*t + 3");
  for (ff::Elem c = 0; c < 5; ++c)
    for (ff::Elem x = 0; x < 5; ++x) CHECK(f.shifted(c).eval(*F, x) == f.eval(*F, F->add(x, c)));
  Poly rev = f.reversed(3);
  for (ff::Elem x = 1; x < 5; ++x) CHECK(rev.eval(*F, x) == F->mul(F->pow(x, 3), f.eval(*F, F->inv(x))));
  auto F25 = ff::make_field(5, 2);
  CHECK(f.embedded(F25).descended(F) == f);
}

TEST_CASE("divisors of functions have degree zero") {
  auto F = ff::make_field(3, 1);
  for (const char* s : {"t", "(t^2 + 1)/(t^3 + 2)", "t^4 + t + 2", "(t + 1)^3/t^2"}) {
    auto d = p1::divisor_of(poly::parse_rational(F, s));
    CHECK(d.degree() == 0);
  }
  auto d = p1::divisor_of(poly::parse_rational(F, "(t + 1)^3/t^2"));
  CHECK(d.to_string() == "-2*(0)+3*(2)-(inf)");
  CHECK(p1::parse_divisor(F, d.to_string()) == d);
  CHECK(p1::parse_divisor(F, "(1)+(t^2+1)-3*(inf)").degree() == 0);
}

TEST_CASE("places and divisors parse") {
  auto F = ff::make_field(3, 1);
  auto d = p1::parse_divisor(F, "2*(inf) + (t^2+1) + (0)");
  CHECK(d.degree() == 5);
  CHECK(d.max_support_degree() == 2);
  CHECK(d.effective());
  CHECK(p1::parse_place(F, "inf").is_infinity());
  CHECK(p1::parse_place(F, "(2)").to_string() == "(2)");
  CHECK_THROWS(p1::parse_place(F, "t^2 + 2"));
  CHECK(p1::valuation(poly::parse_rational(F, "t^2/(t+1)"), p1::Place::infinity(F)) == -1);
  CHECK(p1::value_at(poly::parse_rational(F, "(t+1)/(t+2)"), p1::Place::rational(F, 0)) == F->div(1, 2));
}
