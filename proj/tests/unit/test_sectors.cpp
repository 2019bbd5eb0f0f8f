#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <map>
#include <numeric>

#include "ybmarkov/sectors.hpp"

using namespace ybmarkov;

namespace {

Permutation P(const char* text, int n = 0) { return n ? Permutation::parse(text, n) : Permutation::parse(text); }

using Config = std::vector<int>;

std::vector<Config> all_configs(int n, int L) {
  std::vector<Config> out;
  Config c(static_cast<std::size_t>(L), 0);
  while (true) {
    out.push_back(c);
    int i = L - 1;
    while (i >= 0 && ++c[static_cast<std::size_t>(i)] == n) c[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return out;
  }
}

// Neighbours under nearest-neighbour swaps and the twisted wrap-around swap.
std::vector<Config> neighbours(const Config& c, const Permutation& f) {
  const std::size_t L = c.size();
  std::vector<Config> out;
  for (std::size_t i = 0; i + 1 < L; ++i) {
    Config d = c;
    std::swap(d[i], d[i + 1]);
    out.push_back(d);
  }
  Config d = c;
  d[L - 1] = f(c[0]);
  d[0] = f.inverse()(c[L - 1]);
  out.push_back(d);
  return out;
}

// Component index of every configuration, by breadth-first search.
std::map<Config, int> bfs_components(int n, int L, const Permutation& f) {
  std::map<Config, int> comp;
  int next = 0;
  for (const auto& start : all_configs(n, L)) {
    if (comp.count(start)) continue;
    std::deque<Config> queue{start};
    comp[start] = next;
    while (!queue.empty()) {
      const Config c = queue.front();
      queue.pop_front();
      for (const auto& d : neighbours(c, f))
        if (comp.emplace(d, next).second) queue.push_back(d);
    }
    ++next;
  }
  return comp;
}

int count_components(const std::map<Config, int>& comp) {
  int m = 0;
  for (const auto& [c, k] : comp) m = std::max(m, k + 1);
  return m;
}

// (species counts, E, D) from the cycles of f walked directly.
std::tuple<std::vector<int>, long, long> oracle_label(const Config& c, const Permutation& f) {
  const int n = f.size();
  std::vector<int> species(static_cast<std::size_t>(n), -1), charge(static_cast<std::size_t>(n)), lengths;
  for (int v = 0; v < n; ++v) {
    if (species[static_cast<std::size_t>(v)] >= 0) continue;
    int len = 0;
    for (int w = v; species[static_cast<std::size_t>(w)] < 0; w = f(w), ++len) {
      species[static_cast<std::size_t>(w)] = static_cast<int>(lengths.size());
      charge[static_cast<std::size_t>(w)] = len;
    }
    lengths.push_back(len);
  }
  std::vector<int> counts(lengths.size(), 0);
  long e = 0, d = 0;
  for (int x : c) {
    const int s = species[static_cast<std::size_t>(x)];
    ++counts[static_cast<std::size_t>(s)];
    e += charge[static_cast<std::size_t>(x)];
    d = std::gcd(d, static_cast<long>(lengths[static_cast<std::size_t>(s)]));
  }
  return {counts, d == 1 ? 0 : e % d, d};
}

// Pascal's triangle.
long long choose(int n, int k) {
  std::vector<std::vector<long long>> t(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    t[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1);
    for (int j = 1; j < i; ++j)
      t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
  }
  return (k < 0 || k > n) ? 0 : t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace

TEST_CASE("profile and charge labels") {
  const Permutation f = P("(0 1 2)(3 4 5)", 6);
  const Config c{0, 1, 4};
  CHECK(profile_of(c, f).to_string() == "(2,1)");
  CHECK(charge_of(c, f).to_string() == "2 mod 3");
  CHECK(charge_of(Config{0, 2, 2}, f) == TotalCharge{1, 3});

  const Permutation g = P("(0 1)(2 3 4)", 5);
  CHECK(charge_of(Config{1, 2}, g) == TotalCharge{0, 1});
  CHECK(charge_of(Config{1, 1, 0}, g) == TotalCharge{0, 2});
  CHECK(charge_of(Config{1, 1, 1}, g) == TotalCharge{1, 2});

  const ConfigSpace s(6, 3);
  CHECK(label_of(s, s.encode(c), f).profile.counts == std::vector<int>{2, 1});
  CHECK(Profile{{2, 1}}.length() == 3);
}

TEST_CASE("sector counts at N = 3, L = 3") {
  CHECK(twisted_ssep_sectors(Permutation::identity(3), 3).count() == 10);
  CHECK(twisted_ssep_sectors(P("(0 1)", 3), 3).count() == 5);
  CHECK(twisted_ssep_sectors(P("(0 1 2)"), 3).count() == 3);
  CHECK(enumerate_sectors(set_theoretical_markov(general_map(counterexample_family()), 3)).count() == 7);
}

TEST_CASE("orbits agree with breadth-first search and with the labels") {
  for (int n = 2; n <= 4; ++n)
    for (const auto& f : all_permutations(n))
      for (int L = 2; L <= (n == 4 ? 3 : 5); ++L) {
        const SectorPartition part = twisted_ssep_sectors(f, L);
        const auto comp = bfs_components(n, L, f);
        CHECK(part.count() == static_cast<std::size_t>(count_components(comp)));
        const ConfigSpace& space = part.space();
        std::map<std::uint32_t, int> to_bfs;
        std::map<std::tuple<std::vector<int>, long, long>, std::uint32_t> by_label;
        for (const auto& [c, k] : comp) {
          const std::uint32_t id = part.sector_of(space.encode(c));
          CHECK(to_bfs.emplace(id, k).first->second == k);
          CHECK(by_label.emplace(oracle_label(c, f), id).first->second == id);
          const SectorLabel lab = label_of(space, space.encode(c), f);
          const auto [counts, e, d] = oracle_label(c, f);
          CHECK(lab.profile.counts == counts);
          CHECK(lab.charge == TotalCharge{e, d});
        }
        CHECK(by_label.size() == part.count());
      }
}

TEST_CASE("closed-form counts") {
  // Subset sum with Pascal binomials.
  auto oracle = [](const Permutation& f, int L) {
    const auto lengths = cycle_decomposition(f).lengths();
    const std::size_t k = lengths.size();
    long long total = 0;
    for (unsigned long mask = 1; mask < (1ul << k); ++mask) {
      long g = 0;
      int size = 0;
      for (std::size_t s = 0; s < k; ++s)
        if (mask & (1ul << s)) {
          g = std::gcd(g, static_cast<long>(lengths[s]));
          ++size;
        }
      total += choose(L - 1, size - 1) * g;
    }
    return total;
  };
  for (int n = 1; n <= 5; ++n)
    for (const auto& f : all_permutations(n))
      for (int L = 2; L <= 6; ++L) CHECK(count_sectors_closed_form(f, L) == oracle(f, L));

  CHECK(count_sectors_equal_cycles(4, 2, 3) == 8);
  CHECK(count_sectors_equal_cycles(3, 3, 3) == 10);
  CHECK(count_sectors_equal_cycles(3, 1, 3) == 3);
  CHECK(count_sectors_equal_cycles(12, 12, 4) == choose(15, 4));
  CHECK_THROWS_AS(count_sectors_equal_cycles(12, 5, 4), std::invalid_argument);
  CHECK_THROWS_AS(count_sectors_closed_form(P("(0 1)"), 1), std::invalid_argument);

  CHECK(binomial(10, 3) == choose(10, 3));
  CHECK(binomial(40, 20) == BigInt("137846528820"));
  CHECK(factorial(20) == BigInt("2432902008176640000"));
}

TEST_CASE("equal-cycle counts grow with the number of cycles") {
  for (long N : {4L, 6L, 12L})
    for (int L = 2; L <= 5; ++L) {
      BigInt prev = 0;
      for (long d = 1; d <= N; ++d) {
        if (N % d) continue;
        const BigInt v = count_sectors_equal_cycles(N, d, L);
        CHECK(v > prev);
        prev = v;
      }
      CHECK(count_sectors_equal_cycles(N, 1, L) == N);
      CHECK(count_sectors_equal_cycles(N, N, L) == choose(static_cast<int>(N) - 1 + L, static_cast<int>(N) - 1));
    }
}

TEST_CASE("sector sizes match the cardinality formula") {
  for (int n = 2; n <= 4; ++n)
    for (const auto& f : all_permutations(n))
      for (int L = 2; L <= (n == 4 ? 3 : 4); ++L) {
        const SectorPartition part = twisted_ssep_sectors(f, L);
        std::size_t total = 0;
        for (const auto& s : describe_sectors(part, f)) {
          REQUIRE(s.label);
          CHECK(s.size == sector_cardinality_closed_form(f, s.label->profile));
          CHECK(s.size == part.size(s.id));
          CHECK(s.representative == part.representative(s.id));
          total += part.size(s.id);
        }
        CHECK(total == part.space().size());
      }
  CHECK(sector_cardinality_closed_form(P("(0 1 2)"), Profile{{3}}) == 9);
  CHECK(sector_cardinality_closed_form(Permutation::identity(2), Profile{{2, 1}}) == 3);
  CHECK_THROWS_AS(sector_cardinality_closed_form(P("(0 1 2)"), Profile{{1, 1}}), std::invalid_argument);
}

TEST_CASE("partition structure") {
  const SectorPartition part = twisted_ssep_sectors(P("(0 1)", 3), 3);
  for (std::size_t id = 0; id < part.count(); ++id) {
    const auto mem = part.members(id);
    CHECK(std::is_sorted(mem.begin(), mem.end()));
    CHECK(mem.front() == part.representative(id));
    CHECK(mem.size() == part.size(id));
    if (id) CHECK(part.representative(id) > part.representative(id - 1));
  }
  // The untwisted SSEP partition refines every twisted one.
  const SectorPartition id_part = twisted_ssep_sectors(Permutation::identity(3), 3);
  for (const auto& f : all_permutations(3)) CHECK(id_part.refines(twisted_ssep_sectors(f, 3)));
  CHECK_FALSE(part.refines(id_part));
  CHECK(part == twisted_ssep_sectors(P("(0 1)", 3), 3));

  Limits tight;
  tight.max_enumeration_states = 26;
  CHECK_THROWS_AS(twisted_ssep_sectors(P("(0 1 2)"), 3, tight), std::length_error);
}

TEST_CASE("uniform sector states are stationary") {
  std::vector<RateMatrix> ms;
  for (const auto& f : all_permutations(3)) ms.push_back(twisted_ssep_matrix(f, 3));
  ms.push_back(set_theoretical_markov(general_map(counterexample_family()), 3));
  for (const auto& m : ms) {
    const SectorPartition part = enumerate_sectors(m);
    const RationalMatrix dense = m.dense<Rational>();
    for (std::size_t id = 0; id < part.count(); ++id) {
      const StationaryState s = stationary_state(part, id);
      CHECK(check_stationary(m, s).passed());
      const RationalVector v = s.to_vector(m.dim());
      CHECK((dense * v).isZero(0));
      CHECK(v.sum() == 1);
      CHECK(s.weight == Rational(1, static_cast<long>(part.size(id))));
    }
  }
  const RateMatrix m = twisted_ssep_matrix(P("(0 1 2)"), 3);
  StationaryState wrong = stationary_state(enumerate_sectors(m), 0);
  wrong.support.pop_back();
  CHECK_FALSE(check_stationary(m, wrong).passed());
  CHECK_THROWS_AS(stationary_state(enumerate_sectors(m), 99), std::out_of_range);
}

TEST_CASE("full sector theory check") {
  for (const auto& f : all_permutations(3))
    for (int L = 2; L <= 5; ++L) CHECK(verify_sector_theory(f, L).passed());
  for (const auto& f : all_permutations(4))
    for (int L = 2; L <= 3; ++L) CHECK(verify_sector_theory(f, L).passed());
}
