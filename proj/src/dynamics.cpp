#include "ybmarkov/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ybmarkov {

ProbabilityVector point_mass(Code dim, Code c) {
  ProbabilityVector p = ProbabilityVector::Zero(dim);
  p(c) = 1.0;
  return p;
}

double total_variation(const ProbabilityVector& a, const ProbabilityVector& b) {
  return 0.5 * (a - b).cwiseAbs().sum();
}

ProbabilityVector evolve(const RateMatrix& m, const ProbabilityVector& p0, double t, double tol) {
  if (!std::isfinite(t) || t < 0) throw std::invalid_argument("evolve: time must be finite and >= 0");
  if (!(tol > 0)) throw std::invalid_argument("evolve: tolerance must be positive");
  if (p0.size() != static_cast<Eigen::Index>(m.dim()))
    throw std::invalid_argument("evolve: initial vector has the wrong dimension");
  if (t == 0) return p0;

  double max_exit = 0;
  for (Code c = 0; c < m.dim(); ++c) max_exit = std::max(max_exit, m.exit_rate(c).convert_to<double>());
  const double lambda = max_exit + 1.0;

  // P = I + M / lambda is column stochastic with nonnegative entries.
  SparseMatrix<double> p_step = m.sparse<double>() / lambda;
  for (Code c = 0; c < m.dim(); ++c) p_step.coeffRef(c, c) += 1.0;
  p_step.makeCompressed();

  const double total = lambda * t;
  const auto chunks = static_cast<long>(std::ceil(total / 30.0));
  const double mu = total / static_cast<double>(chunks);
  const double chunk_tol = tol / static_cast<double>(chunks);

  ProbabilityVector p = p0;
  for (long chunk = 0; chunk < chunks; ++chunk) {
    double weight = std::exp(-mu);
    double mass = weight;
    ProbabilityVector term = p;
    ProbabilityVector acc = weight * term;
    for (long k = 1; 1.0 - mass > chunk_tol && k < 10000; ++k) {
      term = p_step * term;
      weight *= mu / static_cast<double>(k);
      mass += weight;
      acc += weight * term;
    }
    p = acc / acc.sum() * p0.sum();
  }
  return p;
}

ConvergenceResult evolve_to_stationarity(const RateMatrix& m, const ProbabilityVector& p0, double t0,
                                         double tol, double change_tol, double t_max) {
  if (!(t0 > 0)) throw std::invalid_argument("evolve_to_stationarity: t0 must be positive");
  ConvergenceResult r;
  r.time = t0;
  r.state = evolve(m, p0, t0, tol);
  while (r.time < t_max) {
    // e^{2tM} p0 = e^{tM} (e^{tM} p0).
    ProbabilityVector next = evolve(m, r.state, r.time, tol);
    r.last_change = total_variation(next, r.state);
    r.state = std::move(next);
    r.time *= 2;
    if (r.last_change < change_tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

std::vector<double> sector_weights(const SectorPartition& partition, const ProbabilityVector& p) {
  std::vector<double> w(partition.count(), 0.0);
  for (Code c = 0; c < partition.space().size(); ++c) w[partition.sector_of(c)] += p(c);
  return w;
}

RationalVector SectorMixture::state() const {
  RationalVector v = RationalVector::Zero(partition.space().size());
  for (Code c = 0; c < partition.space().size(); ++c) {
    const auto id = partition.sector_of(c);
    v(c) = weights[id] / static_cast<long>(partition.size(id));
  }
  return v;
}

SectorMixture long_time_limit(const RationalVector& p0, const SectorPartition& target) {
  if (p0.size() != static_cast<Eigen::Index>(target.space().size()))
    throw std::invalid_argument("long_time_limit: distribution has the wrong dimension");
  SectorMixture mix{target, std::vector<Rational>(target.count(), Rational(0))};
  for (Code c = 0; c < target.space().size(); ++c) mix.weights[target.sector_of(c)] += p0(c);
  return mix;
}

SectorMixture long_time_limit(const StationaryState& s, Code dim, const SectorPartition& target) {
  return long_time_limit(s.to_vector(dim), target);
}

SectorMixture long_time_limit(Code c, const SectorPartition& target) {
  RationalVector p = RationalVector::Zero(target.space().size());
  p(c) = 1;
  return long_time_limit(p, target);
}

CheckReport check_currents(const RateMatrix& m, const RationalVector& state) {
  CheckReport report{.name = "currents"};
  const auto& rates = m.off_diagonal();
  const auto& space = m.space();
  for (std::int64_t col = 0; col < rates.outerSize(); ++col)
    for (SparseMatrix<Rational>::InnerIterator it(rates, col); it; ++it) {
      const auto from = static_cast<Code>(col);
      const auto to = static_cast<Code>(it.row());
      if (to < from) continue;
      ++report.checked;
      const Rational j = it.value() * state(from) - m.entry(from, to) * state(to);
      if (j != 0)
        report.record("current " + space.format(from) + " -> " + space.format(to) + " is " + to_string(j));
    }
  return report;
}

namespace {

struct Jump {
  Code to;
  int bond;
};

// Picks the next jump out of c, or nothing when c has no exits.
class JumpSampler {
 public:
  explicit JumpSampler(const RateMatrix& m) : m_(m) {
    if (!m.has_bond_moves()) {
      const auto& rates = m.off_diagonal();
      targets_.resize(m.dim());
      for (std::int64_t col = 0; col < rates.outerSize(); ++col)
        for (SparseMatrix<Rational>::InnerIterator it(rates, col); it; ++it)
          targets_[static_cast<std::size_t>(col)].emplace_back(static_cast<Code>(it.row()),
                                                               it.value().convert_to<double>());
    }
  }

  double exit_rate(Code c) const { return m_.exit_rate(c).convert_to<double>(); }

  Jump pick(Code c, double u) const {
    if (m_.has_bond_moves()) {
      const auto& moves = m_.bond_moves();
      std::size_t active = 0;
      for (const auto& mv : moves) active += (mv[c] != c);
      auto k = std::min(static_cast<std::size_t>(u * static_cast<double>(active)), active - 1);
      for (std::size_t b = 0; b < moves.size(); ++b)
        if (moves[b][c] != c && k-- == 0) return {moves[b][c], static_cast<int>(b)};
    }
    const auto& out = targets_[c];
    double total = 0;
    for (const auto& [to, rate] : out) total += rate;
    double x = u * total;
    for (const auto& [to, rate] : out) {
      if (x < rate) return {to, -1};
      x -= rate;
    }
    return {out.back().first, -1};
  }

 private:
  const RateMatrix& m_;
  std::vector<std::vector<std::pair<Code, double>>> targets_;
};

template <typename OnJump>
Code run(const JumpSampler& sampler, Code c, double t_max, SplitMix64& rng, OnJump on_jump) {
  double t = 0;
  while (true) {
    const double rate = sampler.exit_rate(c);
    if (rate <= 0) return c;
    t += -std::log1p(-rng.uniform()) / rate;
    if (t > t_max) return c;
    const Jump j = sampler.pick(c, rng.uniform());
    on_jump(t, j, c);
    c = j.to;
  }
}

}  // namespace

Trajectory sample_trajectory(const RateMatrix& m, Code c0, double t_max, std::uint64_t seed) {
  if (c0 >= m.dim()) throw std::out_of_range("sample_trajectory: initial configuration out of range");
  if (!(t_max >= 0)) throw std::invalid_argument("sample_trajectory: t_max must be >= 0");
  Trajectory traj{seed, c0, t_max, {}};
  const JumpSampler sampler(m);
  SplitMix64 rng(seed);
  run(sampler, c0, t_max, rng, [&](double t, const Jump& j, Code from) {
    traj.events.push_back({t, j.bond, from, j.to});
  });
  return traj;
}

std::vector<std::size_t> sample_occupation(const RateMatrix& m, Code c0, double t, std::size_t count,
                                           std::uint64_t seed, unsigned threads) {
  if (c0 >= m.dim()) throw std::out_of_range("sample_occupation: initial configuration out of range");
  const JumpSampler sampler(m);
  threads = std::max(1u, threads);
  std::vector<std::vector<std::size_t>> partial(threads, std::vector<std::size_t>(m.dim(), 0));
  auto worker = [&](unsigned part) {
    for (std::size_t i = part; i < count; i += threads) {
      SplitMix64 rng(SplitMix64::stream_seed(seed, i));
      ++partial[part][run(sampler, c0, t, rng, [](double, const Jump&, Code) {})];
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned p = 0; p < threads; ++p) pool.emplace_back(worker, p);
    for (auto& th : pool) th.join();
  }
  std::vector<std::size_t> hist(m.dim(), 0);
  for (const auto& h : partial)
    for (Code c = 0; c < m.dim(); ++c) hist[c] += h[c];
  return hist;
}

}  // namespace ybmarkov
