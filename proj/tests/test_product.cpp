#include <doctest.h>

#include "mackey/product.hpp"

using namespace mackey;
using groups::Value;
using product::FinitePoint;
using product::LayerMode;
using product::MackeyPresentation;
using product::Symbol;

namespace {

std::vector<groups::FunctorPtr> functors(const std::string& s, const ff::FieldPtr& F) {
  return product::parse_functor_list(s, F);
}

std::vector<Value> orders(const std::string& list, std::uint32_t p, std::uint32_t d_to) {
  auto F = ff::make_field(p, 1);
  auto scan = product::stabilization_scan(functors(list, F), F, 1, d_to);
  std::vector<Value> out;
  for (const auto& s : scan.steps) {
    REQUIRE(s.structure.finite());
    out.push_back(s.structure.torsion_order().get_ui());
  }
  return out;
}

Symbol symbol(const std::vector<groups::FunctorPtr>& fs, const ff::FieldPtr& x, const ff::FieldPtr& y,
              std::vector<Value> entries) {
  return {fs, {x, y}, std::move(entries)};
}

}  // namespace

TEST_CASE("functor list parsing") {
  auto F = ff::make_field(5, 1);
  auto fs = functors("GA,ELL:1,1,GENJAC:t^2,GM", F);
  REQUIRE(fs.size() == 4);
  CHECK(product::functor_list_label(fs) == "GA,ELL:1,1,GENJAC:t^2,GM");
  CHECK_THROWS(functors("GA,XYZ", F));
  CHECK_THROWS(functors("ELL:1", F));
}

TEST_CASE("structured and naive presentations agree") {
  for (std::uint32_t p : {2u, 3u}) {
    auto F = ff::make_field(p, 1);
    for (const char* list : {"GA,GA", "GA,GM", "GM,GM", "GA,GENJAC:t^2", "GM,GENJAC:t^2"}) {
      auto fs = functors(list, F);
      for (std::uint32_t d : {1u, 2u}) {
        auto a = product::compute_order(fs, F, d, LayerMode::Structured);
        auto b = product::compute_order(fs, F, d, LayerMode::Naive);
        CAPTURE(list);
        CAPTURE(p);
        CAPTURE(d);
        CHECK(a.structure.invariant_factors == b.structure.invariant_factors);
        CHECK(a.structure.free_rank == b.structure.free_rank);
      }
    }
  }
}

TEST_CASE("single factor collapses to the rational values") {
  CHECK(orders("GM", 5, 3) == std::vector<Value>{4, 4, 4});
  CHECK(orders("GA", 2, 3) == std::vector<Value>{2, 2, 2});
  CHECK(orders("GENJAC:t^2", 3, 2) == std::vector<Value>{3, 3});
}

TEST_CASE("unit law with the constant functor") {
  CHECK(orders("Z,GM", 5, 2) == orders("GM", 5, 2));
  CHECK(orders("GA,Z", 2, 3) == orders("GA", 2, 3));
  CHECK(orders("Z,GA,GM", 3, 2) == orders("GA,GM", 3, 2));
}

TEST_CASE("permuting factors preserves the structure") {
  for (std::uint32_t p : {2u, 3u}) {
    auto F = ff::make_field(p, 1);
    for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
             {"GA,GM", "GM,GA"}, {"GA,GENJAC:t^2", "GENJAC:t^2,GA"}, {"GA,GA,GM", "GM,GA,GA"}}) {
      auto x = product::compute_order(functors(a, F), F, 2);
      auto y = product::compute_order(functors(b, F), F, 2);
      CHECK(product::same_structure(x.structure, y.structure));
    }
  }
}

TEST_CASE("unipotent times multiplicative vanishes") {
  CHECK(orders("GA,GM", 3, 2) == std::vector<Value>{1, 1});
  CHECK(orders("GA,GM", 5, 2) == std::vector<Value>{1, 1});
  CHECK(orders("GA,GM", 7, 2) == std::vector<Value>{1, 1});
  CHECK(orders("GA,ELL:1,1", 5, 2) == std::vector<Value>{1, 1});
}

TEST_CASE("truncated orders are pinned") {
  CHECK(orders("GA,GA", 2, 3) == std::vector<Value>{2, 4, 16});
  CHECK(orders("GA,GA", 3, 2) == std::vector<Value>{3, 9});
  CHECK(orders("GM,GM", 3, 3) == std::vector<Value>{2, 8, 8});
  CHECK(orders("GM,GM", 2, 3) == std::vector<Value>{1, 3, 3});
  CHECK(orders("GM,GM,GM", 2, 3) == std::vector<Value>{1, 1, 7});
}

TEST_CASE("projection formula holds on all elements, not only generators") {
  for (auto [p, list] : std::vector<std::pair<std::uint32_t, const char*>>{{2, "GA,GA"}, {3, "GA,GM"},
                                                                           {2, "GM,GENJAC:t^2"}, {3, "GM,GM"}}) {
    auto F = ff::make_field(p, 1);
    auto y = ff::make_field(p, 2);
    auto fs = functors(list, F);
    auto m = MackeyPresentation::build(fs, F, 2);
    for (std::size_t slot = 0; slot < 2; ++slot) {
      const auto& A = *fs[slot];
      const auto& B = *fs[1 - slot];
      for (Value a : A.elements(y))
        for (Value b : B.elements(F)) {
          std::vector<Value> up(2), down(2);
          up[slot] = a;
          up[1 - slot] = B.pullback(*F, *y, b);
          down[slot] = A.pushforward(*y, *F, a);
          down[1 - slot] = b;
          auto diff = m.evaluate(symbol(fs, F, y, up));
          for (const auto& [c, v] : m.evaluate(symbol(fs, F, F, down))) diff.emplace_back(c, -v);
          zlinalg::normalize(diff);
          CHECK(m.is_zero(diff));
        }
    }
  }
}

TEST_CASE("every emitted relation lies in the relation lattice") {
  auto F = ff::make_field(3, 1);
  auto m = MackeyPresentation::build(functors("GA,GA", F), F, 2);
  for (const auto& row : m.relations()) CHECK(m.is_zero(row));
}

TEST_CASE("symbols are multilinear and Galois invariant") {
  auto F = ff::make_field(3, 1);
  auto y = ff::make_field(3, 2);
  auto fs = functors("GA,GA", F);
  auto m = MackeyPresentation::build(fs, F, 2);
  const auto& G = *fs[0];
  for (Value a : G.elements(y))
    for (Value b : G.elements(y)) {
      auto lhs = m.evaluate(symbol(fs, F, y, {G.add(*y, a, b), 1}));
      auto rhs = m.evaluate(symbol(fs, F, y, {a, 1}));
      for (const auto& e : m.evaluate(symbol(fs, F, y, {b, 1}))) rhs.push_back(e);
      for (const auto& [c, v] : rhs) lhs.emplace_back(c, -v);
      zlinalg::normalize(lhs);
      CHECK(m.is_zero(lhs));
      auto s = m.evaluate(symbol(fs, F, y, {a, b}));
      for (const auto& [c, v] : m.evaluate(symbol(fs, F, y, {G.frobenius(*y, *F, a), G.frobenius(*y, *F, b)})))
        s.emplace_back(c, -v);
      zlinalg::normalize(s);
      CHECK(m.is_zero(s));
    }
}

TEST_CASE("layer groups are tensor products") {
  auto F = ff::make_field(3, 1);
  CHECK(product::layer_group(functors("GA,GM", F), FinitePoint::over(F, 1)).empty());
  CHECK(product::layer_group(functors("GM,GM", F), FinitePoint::over(F, 2)) == std::vector<std::int64_t>{8});
  CHECK(product::layer_group(functors("GA,GA", F), FinitePoint::over(F, 2)) == std::vector<std::int64_t>{3, 3, 3, 3});
}

TEST_CASE("symbol checks and push-forward of symbols") {
  auto F = ff::make_field(3, 1);
  auto y = ff::make_field(3, 2);
  auto fs = functors("GA,GM", F);
  CHECK_THROWS(symbol(fs, F, y, {1}).check());
  CHECK_THROWS(symbol(fs, F, y, {1, 0}).check());
  Symbol s = symbol(fs, y, y, {1, 2});
  CHECK(s.has_identity_entry() == false);
  Symbol t = product::pushforward_symbol(s, F);
  CHECK(t.point.base == F);
  CHECK(t.point.ext == y);
  CHECK(symbol(fs, F, y, {0, 2}).has_identity_entry());
}

TEST_CASE("reports carry the truncation and stabilization verdict") {
  auto F = ff::make_field(3, 1);
  auto scan = product::stabilization_scan(functors("GA,GM", F), F, 1, 2);
  auto j = scan.to_json();
  CHECK(j["stabilized"] == true);
  auto r = scan.steps.back().to_json();
  CHECK(r["d_max"] == 2);
  CHECK(r["order"] == 1);
  CHECK(r.contains("rational_symbol_subgroup_order"));
}
