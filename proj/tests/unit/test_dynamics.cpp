#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ybmarkov/dynamics.hpp"
#include "ybmarkov/quench.hpp"

using namespace ybmarkov;

namespace {

Permutation P(const char* text, int n = 0) { return n ? Permutation::parse(text, n) : Permutation::parse(text); }

// e^{tM} p0 from the spectral decomposition of the symmetric generator.
ProbabilityVector spectral_evolve(const RateMatrix& m, const ProbabilityVector& p0, double t) {
  const Matrix<double> d = m.dense<double>();
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(d);
  const Vector<double> ex = (t * es.eigenvalues().array()).exp().matrix();
  return es.eigenvectors() * ex.asDiagonal() * es.eigenvectors().transpose() * p0;
}

ProbabilityVector random_distribution(Code dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ProbabilityVector p(dim);
  for (Code c = 0; c < dim; ++c) p(c) = rng.uniform();
  return p / p.sum();
}

}  // namespace

TEST_CASE("evolve basics") {
  const RateMatrix m = twisted_ssep_matrix(P("(0 1)"), 2);
  const ProbabilityVector p0 = point_mass(4, 0);
  CHECK(evolve(m, p0, 0.0) == p0);

  const ProbabilityVector p = evolve(m, p0, 50.0);
  ProbabilityVector target = ProbabilityVector::Zero(4);
  target(0) = target(3) = 0.5;
  CHECK(total_variation(p, target) < 1e-8);

  CHECK_THROWS_AS(evolve(m, p0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve(m, p0, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(evolve(m, p0, std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(evolve(m, p0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve(m, point_mass(3, 0), 1.0), std::invalid_argument);
}

TEST_CASE("evolve matches the spectral solution") {
  std::vector<RateMatrix> ms;
  for (const auto& f : all_permutations(3)) ms.push_back(twisted_ssep_matrix(f, 3));
  ms.push_back(set_theoretical_markov(general_map(counterexample_family()), 3));
  ms.push_back(set_theoretical_markov(lyubashenko_map(P("(0 1 2 3)")), 3));
  std::uint64_t seed = 1;
  for (const auto& m : ms)
    for (double t : {0.01, 0.3, 2.0, 17.0, 120.0}) {
      const ProbabilityVector p0 = random_distribution(m.dim(), seed++);
      const ProbabilityVector p = evolve(m, p0, t, 1e-13);
      CHECK(total_variation(p, spectral_evolve(m, p0, t)) < 1e-10);
      CHECK(std::abs(p.sum() - 1.0) < 1e-12);
      CHECK(p.minCoeff() >= 0.0);
    }
}

TEST_CASE("sector weights are conserved and stationary states stay put") {
  for (const auto& f : all_permutations(3)) {
    const RateMatrix m = twisted_ssep_matrix(f, 3);
    const SectorPartition part = enumerate_sectors(m);
    const ProbabilityVector p0 = random_distribution(m.dim(), 7);
    const auto w0 = sector_weights(part, p0);
    const auto w1 = sector_weights(part, evolve(m, p0, 3.7));
    for (std::size_t k = 0; k < w0.size(); ++k) CHECK(w1[k] == doctest::Approx(w0[k]).epsilon(1e-12));

    for (std::size_t id = 0; id < part.count(); ++id) {
      const ProbabilityVector s = stationary_state(part, id).to_vector(m.dim()).cast<double>();
      CHECK(total_variation(evolve(m, s, 25.0), s) < 1e-12);
    }
  }
}

TEST_CASE("long-time limits") {
  const Permutation c = P("(0 1 2 3)");
  const Permutation sq = power(c, 2);
  const SectorPartition s1 = twisted_ssep_sectors(c, 3);
  const SectorPartition s2 = twisted_ssep_sectors(sq, 3);

  // Stationary for f2 already: a point mass on its own sector.
  const SectorMixture own = long_time_limit(stationary_state(s2, 1), 64, s2);
  for (std::size_t g = 0; g < s2.count(); ++g) CHECK(own.weights[g] == (g == 1 ? 1 : 0));

  const SectorMixture mix = long_time_limit(stationary_state(s1, 0), 64, s2);
  std::vector<Rational> nonzero;
  for (const auto& w : mix.weights)
    if (w != 0) nonzero.push_back(w);
  std::sort(nonzero.begin(), nonzero.end());
  CHECK(nonzero == std::vector<Rational>{Rational(1, 4), Rational(3, 4)});
  CHECK(mix.state().sum() == 1);

  // Point masses relax to the uniform state of their sector.
  for (Code x : {Code{0}, Code{5}, Code{27}, Code{63}}) {
    const SectorMixture pm = long_time_limit(x, s2);
    const RationalVector v = pm.state();
    const std::size_t id = s2.sector_of(x);
    for (Code y = 0; y < 64; ++y)
      CHECK(v(y) == (s2.sector_of(y) == id ? Rational(1, static_cast<long>(s2.size(id))) : Rational(0)));
  }

  const RateMatrix m2 = twisted_ssep_matrix(sq, 3);
  const ConvergenceResult conv = evolve_to_stationarity(m2, stationary_state(s1, 0).to_vector(64).cast<double>());
  CHECK(conv.converged);
  CHECK(conv.last_change < 1e-10);
  CHECK(total_variation(conv.state, mix.state().cast<double>()) < 1e-8);
}

TEST_CASE("currents vanish in sector states") {
  const RateMatrix m = twisted_ssep_matrix(P("(0 1 2)"), 3);
  const SectorPartition part = enumerate_sectors(m);
  for (std::size_t id = 0; id < part.count(); ++id)
    CHECK(check_currents(m, stationary_state(part, id).to_vector(27)).passed());
  RationalVector skew = RationalVector::Zero(27);
  skew(part.members(0)[0]) = Rational(1, 2);
  skew(part.members(0)[1]) = Rational(1, 2);
  CHECK_FALSE(check_currents(m, skew).passed());
}

TEST_CASE("SplitMix64 reference values") {
  // Reference outputs for seed 1234567.
  SplitMix64 rng(1234567);
  CHECK(rng() == 6457827717110365317ull);
  CHECK(rng() == 3203168211198807973ull);
  CHECK(rng() == 9817491932198370423ull);
  SplitMix64 a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
  CHECK(SplitMix64::stream_seed(5, 0) != SplitMix64::stream_seed(5, 1));
}

TEST_CASE("trajectories") {
  // {00} is isolated under the SSEP.
  const RateMatrix ssep = twisted_ssep_matrix(Permutation::identity(2), 2);
  const Trajectory still = sample_trajectory(ssep, 0, 1e6, 3);
  CHECK(still.events.empty());
  CHECK(still.final_configuration() == 0);

  const RateMatrix m = twisted_ssep_matrix(P("(0 1 2)"), 3);
  const SectorPartition part = enumerate_sectors(m);
  const Code start = 5;
  const Trajectory tr = sample_trajectory(m, start, 40.0, 11);
  REQUIRE_FALSE(tr.events.empty());
  double prev = 0;
  Code at = start;
  for (const auto& e : tr.events) {
    CHECK(e.time > prev);
    CHECK(e.time <= 40.0);
    CHECK(e.from == at);
    CHECK(m.entry(e.to, e.from) > 0);
    CHECK(part.sector_of(e.to) == part.sector_of(start));
    CHECK(e.bond >= 0);
    CHECK(e.bond < 3);
    CHECK(m.bond_moves()[static_cast<std::size_t>(e.bond)][e.from] == e.to);
    prev = e.time;
    at = e.to;
  }
  const Trajectory again = sample_trajectory(m, start, 40.0, 11);
  REQUIRE(again.events.size() == tr.events.size());
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    CHECK(again.events[i].time == tr.events[i].time);
    CHECK(again.events[i].to == tr.events[i].to);
  }

  // Generators given only by rates use the off-diagonal column.
  SparseMatrix<Rational> rates(4, 4);
  rates.insert(1, 0) = Rational(2);
  rates.insert(0, 1) = Rational(2);
  const RateMatrix plain = RateMatrix::from_off_diagonal(ConfigSpace(2, 2), rates);
  const Trajectory pt = sample_trajectory(plain, 0, 5.0, 1);
  for (const auto& e : pt.events) {
    CHECK(e.bond == -1);
    CHECK(plain.entry(e.to, e.from) > 0);
  }
}

TEST_CASE("Monte Carlo occupation matches the uniform sector state") {
  const RateMatrix m = twisted_ssep_matrix(P("(0 1 2)"), 3);
  const SectorPartition part = enumerate_sectors(m);
  const Code start = 1;
  const std::size_t n = 100000;
  const auto hist = sample_occupation(m, start, 30.0, n, 2024, 4);
  const std::size_t id = part.sector_of(start);
  const double p = 1.0 / static_cast<double>(part.size(id));
  const double sigma = std::sqrt(static_cast<double>(n) * p * (1 - p));
  std::size_t total = 0;
  for (Code c = 0; c < m.dim(); ++c) {
    total += hist[c];
    if (part.sector_of(c) != id) {
      CHECK(hist[c] == 0);
      continue;
    }
    CHECK(std::abs(static_cast<double>(hist[c]) - static_cast<double>(n) * p) <= 3 * sigma);
  }
  CHECK(total == n);

  // Same histogram for any thread count.
  CHECK(sample_occupation(m, start, 3.0, 2000, 99, 1) == sample_occupation(m, start, 3.0, 2000, 99, 3));
}
