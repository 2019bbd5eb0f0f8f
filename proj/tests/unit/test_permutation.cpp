#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "ybmarkov/permutation.hpp"

using namespace ybmarkov;

namespace {

Permutation P(const char* text, int n) { return Permutation::parse(text, n); }

// Composition straight from the image tables.
Permutation apply_twice(const Permutation& p) {
  std::vector<int> img(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) img[static_cast<std::size_t>(i)] = p(p(i));
  return Permutation(img);
}

}  // namespace

TEST_CASE("compose") {
  const Permutation p = P("(0 2 1)(3)", 4);
  CHECK(compose(Permutation::identity(4), p) == p);
  CHECK(compose(p, p.inverse()) == Permutation::identity(4));
  CHECK(compose(P("(0 1)", 2), P("(0 1)", 2)).is_identity());
  CHECK_THROWS_AS(compose(P("(0 1)", 2), P("(0 1)", 3)), std::invalid_argument);

  const Permutation a = P("(0 1)", 3);
  const Permutation b = P("(1 2)", 3);
  const Permutation ab = a * b;
  for (int i = 0; i < 3; ++i) CHECK(ab(i) == a(b(i)));
}

TEST_CASE("power") {
  CHECK(power(P("(0 1 2)", 3), 3).is_identity());
  CHECK(power(P("(0 1 2 3)", 4), 2) == P("(0 2)(1 3)", 4));
  CHECK(power(P("(0 2 1)", 3), 2) == apply_twice(P("(0 2 1)", 3)));
  CHECK(power(P("(0 2 1)", 3), 2) == P("(0 1 2)", 3));
  CHECK(power(P("(0 1 2)", 3), -1) == P("(0 1 2)", 3).inverse());
  CHECK(power(P("(0 1 2)", 3), 0).is_identity());
}

TEST_CASE("cycle decomposition") {
  CHECK(cycle_decomposition(Permutation::identity(3)).cycles == std::vector<std::vector<int>>{{0}, {1}, {2}});
  CHECK(cycle_decomposition(power(P("(0 1 2 3)", 4), 2)).cycles == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
  CHECK(cycle_decomposition(Permutation({2, 1, 0})).cycles == std::vector<std::vector<int>>{{0, 2}, {1}});
  CHECK(P("(2 0)(1)", 3).to_string() == "(0 2)(1)");
  CHECK(Permutation::identity(2).to_string() == "(0)(1)");
}

TEST_CASE("parsing") {
  CHECK(Permutation::parse("[2,1,0]") == Permutation({2, 1, 0}));
  CHECK(Permutation::parse("(0 2)(1)") == Permutation({2, 1, 0}));
  CHECK(Permutation::parse("()", 3).is_identity());
  CHECK(Permutation::parse("(0,2)", 4) == Permutation({2, 1, 0, 3}));
  CHECK_THROWS_AS(Permutation::parse("(0 0)", 2), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::parse("[0,0]"), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::parse("(0 5)", 3), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::parse("(0 1"), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({1, 2}), std::invalid_argument);
}

TEST_CASE("charge coordinates") {
  const auto id = charge_coordinates(Permutation::identity(3));
  CHECK(id.species_count() == 3);
  CHECK(id.charge_of == std::vector<int>{0, 0, 0});

  const auto full = charge_coordinates(P("(0 1 2 3 4)", 5));
  CHECK(full.species_count() == 1);
  for (int v = 0; v < 5; ++v) CHECK(full.charge_of[static_cast<std::size_t>(v)] == v);

  const auto cc = charge_coordinates(P("(0 2)(1)", 3));
  CHECK(cc.species_of[2] == 1);
  CHECK(cc.charge_of[2] == 1);
  CHECK(cc.species_of[1] == 2);
  CHECK(cc.value(1, 1) == 2);
}

TEST_CASE("gcd of cycle lengths") {
  CHECK(gcd_cycle_lengths(P("(0 1 2)(3 4 5)", 6), {1, 2}) == 3);
  CHECK(gcd_cycle_lengths(P("(0 1)(2)", 3), {1, 2}) == 1);
  CHECK(gcd_cycle_lengths(P("(0 1 2 3)(4 5 6 7 8 9)", 10), {1, 2}) == 2);
  CHECK(gcd_cycle_lengths(P("(0 1 2 3)(4 5 6 7 8 9)", 10), {2}) == 6);
  CHECK_THROWS_AS(gcd_cycle_lengths(P("(0 1)", 2), {}), std::invalid_argument);
}

TEST_CASE("l-th roots") {
  for (long L = 1; L <= 4; ++L) {
    const auto r = lth_root(Permutation::identity(3), L);
    REQUIRE(r);
    CHECK(power(*r, L).is_identity());
  }
  const auto root = lth_root(P("(0 1 2)", 3), 2);
  REQUIRE(root);
  CHECK(*root == P("(0 2 1)", 3));
  CHECK_FALSE(lth_root(P("(0 1)", 2), 2));
  CHECK_THROWS_AS(lth_root(Permutation::identity(9), 2), std::length_error);

  // A result is always a root; absence is confirmed by exhaustion.
  for (const auto& f : all_permutations(4))
    for (long L = 2; L <= 3; ++L) {
      const auto g = lth_root(f, L);
      bool any = false;
      for (const auto& h : all_permutations(4)) any = any || power(h, L) == f;
      CHECK(g.has_value() == any);
      if (g) CHECK(power(*g, L) == f);
    }
}

TEST_CASE("exhaustive properties for N <= 5") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& p : all_permutations(n)) {
      const auto dec = cycle_decomposition(p);
      CHECK(dec.assemble() == p);
      std::vector<int> seen;
      for (const auto& c : dec.cycles) {
        CHECK(c.front() == *std::min_element(c.begin(), c.end()));
        seen.insert(seen.end(), c.begin(), c.end());
      }
      std::sort(seen.begin(), seen.end());
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      CHECK(seen == all);

      const auto lengths = dec.lengths();
      long lcm = 1;
      for (int c : lengths) lcm = std::lcm(lcm, static_cast<long>(c));
      CHECK(order(p) == lcm);
      CHECK(power(p, order(p)).is_identity());

      const auto cc = charge_coordinates(p);
      for (int v = 0; v < n; ++v) {
        const int s = cc.species_of[static_cast<std::size_t>(v)];
        CHECK(cc.species_of[static_cast<std::size_t>(p(v))] == s);
        CHECK(cc.charge_of[static_cast<std::size_t>(p(v))] ==
              (cc.charge_of[static_cast<std::size_t>(v)] + 1) % cc.cycle_length(s));
      }
      CHECK(Permutation::parse(p.to_string(), n) == p);
      CHECK(Permutation::parse(p.to_image_string()) == p);
    }
  CHECK(all_permutations(5).size() == 120);
}
