#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "ybmarkov/model_io.hpp"
#include "ybmarkov/quench.hpp"

using namespace ybmarkov;

namespace {

Permutation P(const char* text, int n = 0) { return n ? Permutation::parse(text, n) : Permutation::parse(text); }

Permutation full_cycle(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) img[static_cast<std::size_t>(v)] = (v + 1) % n;
  return Permutation(img);
}

// Orbits of the twisted SSEP as sets of encodings, by breadth-first search.
std::vector<std::set<int>> orbits(const Permutation& f, int L) {
  const int n = f.size();
  int dim = 1;
  for (int i = 0; i < L; ++i) dim *= n;
  auto dec = [&](int c) {
    std::vector<int> v(static_cast<std::size_t>(L));
    for (int i = L - 1; i >= 0; --i, c /= n) v[static_cast<std::size_t>(i)] = c % n;
    return v;
  };
  auto enc = [&](const std::vector<int>& v) {
    int c = 0;
    for (int x : v) c = c * n + x;
    return c;
  };
  std::vector<int> comp(static_cast<std::size_t>(dim), -1);
  std::vector<std::set<int>> out;
  for (int s = 0; s < dim; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    out.emplace_back();
    std::deque<int> q{s};
    comp[static_cast<std::size_t>(s)] = static_cast<int>(out.size()) - 1;
    while (!q.empty()) {
      const int c = q.front();
      q.pop_front();
      out.back().insert(c);
      const auto v = dec(c);
      std::vector<std::vector<int>> next;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        auto w = v;
        std::swap(w[i], w[i + 1]);
        next.push_back(w);
      }
      auto w = v;
      w[v.size() - 1] = f(v[0]);
      w[0] = f.inverse()(v[v.size() - 1]);
      next.push_back(w);
      for (const auto& x : next) {
        const int d = enc(x);
        if (comp[static_cast<std::size_t>(d)] < 0) {
          comp[static_cast<std::size_t>(d)] = comp[static_cast<std::size_t>(s)];
          q.push_back(d);
        }
      }
    }
  }
  // Canonical order: by smallest member.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
  return out;
}

Rational overlap(const std::set<int>& a, const std::set<int>& b) {
  long k = 0;
  for (int x : a) k += static_cast<long>(b.count(x));
  return Rational(k, static_cast<long>(a.size()));
}

}  // namespace

TEST_CASE("branching examples") {
  const BranchingMatrix same = branching_matrix(P("(0 1 2)"), P("(0 1 2)"), 3);
  CHECK(same.prob == RationalMatrix::Identity(same.prob.rows(), same.prob.cols()));

  // {00,11} splits evenly into {00} and {11}.
  const BranchingMatrix split = branching_matrix(P("(0 1)"), Permutation::identity(2), 2);
  CHECK(split.prob(0, 0) == Rational(1, 2));
  CHECK(split.prob(0, 2) == Rational(1, 2));
  CHECK(split.prob(0, 1) == 0);

  const BranchingMatrix spread = branching_matrix(Permutation::identity(2), P("(0 1)"), 2);
  CHECK(spread.prob(0, 0) == 1);
  CHECK(spread.intersections(0, 0) == 1);

  CHECK_THROWS_AS(branching_matrix(P("(0 1)"), P("(0 1 2)"), 2), std::invalid_argument);
  Limits tight;
  tight.max_enumeration_states = 10;
  CHECK_THROWS_AS(branching_matrix(P("(0 1 2)"), P("(0 1)", 3), 3, tight), std::length_error);
}

TEST_CASE("branching matches set intersections of searched orbits") {
  for (int n = 2; n <= 3; ++n)
    for (const auto& f1 : all_permutations(n))
      for (const auto& f2 : all_permutations(n))
        for (int L = 2; L <= 4; ++L) {
          const BranchingMatrix b = branching_matrix(f1, f2, L);
          const auto o1 = orbits(f1, L);
          const auto o2 = orbits(f2, L);
          REQUIRE(b.prob.rows() == static_cast<Eigen::Index>(o1.size()));
          REQUIRE(b.prob.cols() == static_cast<Eigen::Index>(o2.size()));
          CHECK(b.check_rows().passed());
          for (std::size_t a = 0; a < o1.size(); ++a) {
            Rational row = 0;
            for (std::size_t g = 0; g < o2.size(); ++g) {
              const Rational p = overlap(o1[a], o2[g]);
              CHECK(b.prob(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(g)) == p);
              row += p;
            }
            CHECK(row == 1);
          }
        }
}

TEST_CASE("relations and verdicts") {
  const Permutation c = full_cycle(4);
  const Permutation sq = power(c, 2);
  const RelationReport fwd = classify_relation(sq, c, 3);
  CHECK(fwd.verdict == "spreading");
  CHECK(fwd.reverse_verdict == "splitting");
  CHECK(fwd.power_check.passed());
  CHECK(fwd.power_check.checked > 0);
  CHECK(classify_relation(c, sq, 3).verdict == "splitting");

  const RelationReport eq = classify_relation(c, c, 3);
  CHECK(eq.verdict == "equal");
  for (const auto& row : eq.relation)
    for (std::size_t b = 0; b < row.size(); ++b) CHECK((row[b] == SectorRelation::Equal || row[b] == SectorRelation::Disjoint));

  for (int n = 2; n <= 3; ++n)
    for (const auto& f : all_permutations(n))
      for (int L = 2; L <= 4; ++L) {
        const std::string v = classify_relation(Permutation::identity(n), f, L).verdict;
        CHECK((v == "spreading" || v == "equal"));
      }

  // Whenever f1 is a power of f2 the f2-sectors split into f1-sectors.
  for (const auto& f2 : all_permutations(4))
    for (long k = 0; k <= 3; ++k) {
      const RelationReport r = classify_relation(power(f2, k), f2, 3);
      CHECK((r.verdict == "spreading" || r.verdict == "equal"));
      CHECK(r.power_check.passed());
      CHECK(r.overlap_pairs == 0);
    }
  CHECK(to_string(SectorRelation::ReverseInclusion) == "reverse-inclusion");
  CHECK(power_exponent(sq, c) == 2);
  CHECK(power_exponent(Permutation::identity(4), c) == 0);
  CHECK_FALSE(power_exponent(P("(0 1)", 4), c));
}

TEST_CASE("splitting probabilities are size ratios") {
  const Permutation c = full_cycle(4);
  const auto o1 = orbits(power(c, 2), 3);
  const auto o2 = orbits(c, 3);
  const BranchingMatrix back = branching_matrix(c, power(c, 2), 3);
  for (std::size_t a = 0; a < o2.size(); ++a)
    for (std::size_t g = 0; g < o1.size(); ++g) {
      const Rational p = back.prob(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(g));
      const bool inside = std::includes(o2[a].begin(), o2[a].end(), o1[g].begin(), o1[g].end());
      CHECK(p == (inside ? Rational(static_cast<long>(o1[g].size()), static_cast<long>(o2[a].size())) : Rational(0)));
    }
}

TEST_CASE("inclusion condition") {
  const Permutation c3 = full_cycle(3);
  CHECK(ssep_inclusion_condition({1, 0, 1}, Profile{{2}}, TotalCharge{2, 3}, c3));
  CHECK_FALSE(ssep_inclusion_condition({1, 0, 1}, Profile{{2}}, TotalCharge{1, 3}, c3));
  CHECK_FALSE(ssep_inclusion_condition({1, 0, 1}, Profile{{3}}, TotalCharge{2, 3}, c3));
  const Permutation id = Permutation::identity(3);
  CHECK(ssep_inclusion_condition({2, 0, 1}, Profile{{2, 0, 1}}, TotalCharge{0, 1}, id));
  CHECK_FALSE(ssep_inclusion_condition({2, 0, 1}, Profile{{1, 1, 1}}, TotalCharge{0, 1}, id));

  // Agreement with orbit inclusion: an SSEP sector is the set of
  // configurations with given value counts.
  for (const auto& f : all_permutations(3))
    for (int L = 2; L <= 4; ++L) {
      const auto fine = orbits(Permutation::identity(3), L);
      const auto coarse = orbits(f, L);
      const ConfigSpace space(3, L);
      for (const auto& s : fine) {
        std::vector<int> counts(3, 0);
        for (int x : space.decode(static_cast<Code>(*s.begin()))) ++counts[static_cast<std::size_t>(x)];
        for (const auto& g : coarse) {
          const SectorLabel lab = label_of(space, static_cast<Code>(*g.begin()), f);
          const bool inside = std::includes(g.begin(), g.end(), s.begin(), s.end());
          CHECK(ssep_inclusion_condition(counts, lab.profile, lab.charge, f) == inside);
        }
      }
    }
}

TEST_CASE("closed forms") {
  CHECK(closed_form_branching_fullcycle_square(4, 3, 0, 3, 0, 0) == Rational(1, 4));
  CHECK(closed_form_branching_fullcycle_square(4, 3, 0, 1, 2, 1) == Rational(3, 4));
  CHECK(closed_form_branching_fullcycle_square(4, 3, 1, 1, 2, 1) == 0);
  CHECK_THROWS_AS(closed_form_branching_fullcycle_square(5, 3, 0, 3, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_branching_fullcycle_square(4, 3, 0, 1, 1, 0), std::invalid_argument);

  CHECK(closed_form_branching_power(6, 2, 2, 1, {1, 1, 0}, 0) == Rational(2, 3));
  CHECK(closed_form_branching_power(6, 2, 2, 2, {1, 1, 0}, 0) == 0);
  CHECK_THROWS_AS(closed_form_branching_power(6, 4, 2, 0, {2}, 0), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_branching_power(6, 2, 2, 0, {1, 0, 0}, 0), std::invalid_argument);

  // The power form with n - 1 = 2 is the square form.
  for (long N : {2L, 4L, 6L})
    for (int L = 1; L <= 5; ++L)
      for (int p2 = 0; p2 <= L; ++p2)
        for (long k = 0; k < N; ++k)
          for (long l = 0; l < N / 2; ++l)
            CHECK(closed_form_branching_power(N, N / 2, L, k, {p2, L - p2}, l) ==
                  closed_form_branching_fullcycle_square(N, L, k, p2, L - p2, l));

  // Row sums: the allowed terms add up to 2^(L-1).
  for (int L = 1; L <= 8; ++L)
    for (int a = 0; a <= 1; ++a) {
      Rational total = 0;
      for (int p3 = a; p3 <= L; p3 += 2)
        total += Rational(factorial(L) / (factorial(L - p3) * factorial(p3)));
      CHECK(total == Rational(BigInt(1) << (L - 1)));
    }
}

TEST_CASE("closed forms agree with intersections for N in {2, 4, 6}") {
  const std::vector<std::tuple<long, long, int>> cases{{2, 2, 5}, {4, 2, 5}, {4, 4, 4}, {6, 2, 4},
                                                       {6, 3, 4}, {6, 6, 3}, {6, 3, 2}};
  for (const auto& [N, e, Lmax] : cases)
    for (int L = 2; L <= Lmax; ++L) {
      const CheckReport r = check_power_closed_form(N, e, L);
      CHECK_MESSAGE(r.passed(), "N=", N, " e=", e, " L=", L, " ", (r.violations.empty() ? "" : r.violations[0]));
    }
  CHECK_THROWS_AS(check_power_closed_form(6, 4, 2), std::invalid_argument);
}

TEST_CASE("oscillation chains") {
  const SectorChainResult same = oscillation_chain(P("(0 1 2)"), P("(0 1 2)"), 3, 1, 3);
  CHECK(same.transition == RationalMatrix::Identity(same.transition.rows(), same.transition.cols()));
  for (const auto& p : same.history) CHECK(p == same.history.front());

  const SectorChainResult id = oscillation_chain(Permutation::identity(2), P("(0 1)"), 2, 0, 1);
  REQUIRE(id.history.size() == 2);
  CHECK(id.history[1](0) == Rational(1, 2));
  CHECK(id.history[1](1) == 0);
  CHECK(id.history[1](2) == Rational(1, 2));
  CHECK(id.fixed_point_check.passed());

  for (int n = 2; n <= 3; ++n)
    for (const auto& f1 : all_permutations(n))
      for (const auto& f2 : all_permutations(n))
        for (int L = 2; L <= 4; ++L) {
          const SectorChainResult r = oscillation_chain(f1, f2, L, 0, 4);
          CHECK(r.fixed_point_check.passed());
          CHECK(r.fixed_point.sum() == 1);
          const RationalVector moved = (r.fixed_point.transpose() * r.transition).transpose();
          CHECK(moved == r.fixed_point);
          for (const auto& p : r.history) CHECK(p.sum() == 1);
          for (Eigen::Index a = 0; a < r.transition.rows(); ++a) CHECK(r.transition.row(a).sum() == 1);
        }
  CHECK_THROWS_AS(oscillation_chain(P("(0 1)"), P("(0 1)"), 2, 10, 1), std::out_of_range);
}

TEST_CASE("quench schedules") {
  std::istringstream in(R"(# full cycle and its square
N 4
L 3
initial sector 0
step twist=(0 1 2 3) until=stationary
step twist=(0 2)(1 3) until=stationary
step twist=(0 1 2 3) until=stationary
step twist=(0 2)(1 3) time=0.5
)");
  const QuenchSchedule s = parse_quench_schedule(in);
  CHECK(s.n == 4);
  CHECK(s.L == 3);
  CHECK(s.initial_sector == std::size_t{0});
  REQUIRE(s.steps.size() == 4);
  CHECK(s.steps[3].duration == 0.5);

  const auto res = run_quench_schedule(s);
  REQUIRE(res.size() == 4);
  REQUIRE(res[0].exact_weights);
  CHECK((*res[0].exact_weights)[0] == 1);

  const Permutation c = full_cycle(4);
  const BranchingMatrix b12 = branching_matrix(c, power(c, 2), 3);
  const BranchingMatrix b21 = branching_matrix(power(c, 2), c, 3);
  REQUIRE(res[1].exact_weights);
  std::vector<Rational> nonzero;
  for (std::size_t g = 0; g < res[1].exact_weights->size(); ++g) {
    CHECK((*res[1].exact_weights)[g] == b12.prob(0, static_cast<Eigen::Index>(g)));
    if ((*res[1].exact_weights)[g] != 0) nonzero.push_back((*res[1].exact_weights)[g]);
  }
  std::sort(nonzero.begin(), nonzero.end());
  CHECK(nonzero == std::vector<Rational>{Rational(1, 4), Rational(3, 4)});

  const RationalVector after2 = (b12.prob.row(0) * b21.prob).transpose();
  REQUIRE(res[2].exact_weights);
  for (std::size_t a = 0; a < res[2].exact_weights->size(); ++a)
    CHECK((*res[2].exact_weights)[a] == after2(static_cast<Eigen::Index>(a)));

  // Sector weights of the running twist are conserved by its own dynamics.
  CHECK_FALSE(res[3].exact_weights);
  const RationalVector after3 = (after2.transpose() * b12.prob).transpose();
  for (std::size_t g = 0; g < res[3].weights.size(); ++g)
    CHECK(res[3].weights[g] == doctest::Approx(after3(static_cast<Eigen::Index>(g)).convert_to<double>()).epsilon(1e-9));

  std::ostringstream csv;
  write_quench_csv(csv, res);
  const std::string text = csv.str();
  CHECK(text.rfind("step,twist,mode,sector,representative,profile,charge,size,weight\n", 0) == 0);
  CHECK(text.find("1/4") != std::string::npos);
  CHECK(text.find("time=") != std::string::npos);
}

TEST_CASE("quench schedule from a configuration") {
  std::istringstream in("N 2\nL 2\ninitial config 0,0\nstep twist=(0 1) until=stationary\nstep twist=() until=stationary\n");
  const auto res = run_quench_schedule(parse_quench_schedule(in));
  REQUIRE(res[1].exact_weights);
  CHECK((*res[1].exact_weights)[0] == Rational(1, 2));
  CHECK((*res[1].exact_weights)[2] == Rational(1, 2));
}

TEST_CASE("schedule parse errors carry the line") {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_quench_schedule(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("N 3\nL 2\nbogus\n") == 3);
  CHECK(line_of("N 3\nL 2\ninitial sector 0\nstep twist=(0 1) time=abc\n") == 4);
  CHECK(line_of("N 3\nL 2\ninitial sector 0\nstep twist=(0 7) until=stationary\n") == 4);
  CHECK(line_of("step twist=(0 1) until=stationary\n") == 1);
  CHECK(line_of("N 3\nL 2\ninitial sector 0\n") > 0);
  CHECK(line_of("N 3\nL 2\ninitial config 0,1,2\nstep twist=() until=stationary\n") > 0);
}
