#pragma once

// Master-equation time evolution by uniformization, exact long-time limits
// as sector mixtures, and kinetic Monte Carlo trajectories.

#include <cstdint>
#include <limits>
#include <vector>

#include "ybmarkov/check_report.hpp"
#include "ybmarkov/markov.hpp"
#include "ybmarkov/sectors.hpp"
#include "ybmarkov/types.hpp"

namespace ybmarkov {

using ProbabilityVector = Vector<double>;

ProbabilityVector point_mass(Code dim, Code c);

/// e^{tM} p0 via uniformization with lambda = max|diag| + 1. Long times are
/// split into chunks with lambda*dt <= 30; each Poisson series is cut once
/// its tail is below the chunk's share of `tol`, and the result is
/// renormalized. Throws std::invalid_argument for negative or nonfinite t,
/// tol <= 0, or a wrong-sized p0.
ProbabilityVector evolve(const RateMatrix& m, const ProbabilityVector& p0, double t, double tol = 1e-12);

struct ConvergenceResult {
  ProbabilityVector state;
  double time = 0;
  /// Total variation between the last two doublings.
  double last_change = 0;
  bool converged = false;
};

/// Doubles t from `t0` until successive outputs differ by less than
/// `change_tol` in total variation, or t exceeds `t_max`.
ConvergenceResult evolve_to_stationarity(const RateMatrix& m, const ProbabilityVector& p0,
                                         double t0 = 1.0, double tol = 1e-12,
                                         double change_tol = 1e-10, double t_max = 1e7);

double total_variation(const ProbabilityVector& a, const ProbabilityVector& b);

/// Sum of the probability on each sector.
std::vector<double> sector_weights(const SectorPartition& partition, const ProbabilityVector& p);

/// A mixture of the uniform stationary states of a partition.
struct SectorMixture {
  SectorPartition partition;
  std::vector<Rational> weights;

  RationalVector state() const;
};

/// The t -> infinity limit of any initial distribution: sector weights are
/// conserved and each sector relaxes to its uniform state. Exact.
SectorMixture long_time_limit(const RationalVector& p0, const SectorPartition& target);
SectorMixture long_time_limit(const StationaryState& s, Code dim, const SectorPartition& target);
/// Point mass on c.
SectorMixture long_time_limit(Code c, const SectorPartition& target);

/// m(tau -> tau') S(tau) - m(tau' -> tau) S(tau') == 0 for every pair.
CheckReport check_currents(const RateMatrix& m, const RationalVector& state);

/// SplitMix64 (Steele, Lea, Flood 2014): state advances by the golden gamma
/// 0x9E3779B97F4A7C15 and is finalized by the MurmurHash3-style mixer.
/// Trajectory i of an ensemble with base seed s uses the stream seeded with
/// mix(s + (i + 1) * gamma), so results do not depend on thread count.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    return mix(base + (index + 1) * kGamma);
  }

  std::uint64_t operator()() { return mix(state_ += kGamma); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct TrajectoryEvent {
  double time = 0;
  /// Bond index (0-based, bond L-1 is (L, 1)); -1 for generators without moves.
  int bond = -1;
  Code from = 0;
  Code to = 0;
};

struct Trajectory {
  std::uint64_t seed = 0;
  Code initial = 0;
  double t_max = 0;
  std::vector<TrajectoryEvent> events;

  Code final_configuration() const { return events.empty() ? initial : events.back().to; }
};

/// Exponential holding times with the exit rate, jumps proportional to the
/// rates out of the current configuration. A configuration without exits
/// holds forever.
Trajectory sample_trajectory(const RateMatrix& m, Code c0, double t_max, std::uint64_t seed);

/// Histogram of the configuration at time t over `count` trajectories with
/// stream seeds derived from `seed`.
std::vector<std::size_t> sample_occupation(const RateMatrix& m, Code c0, double t, std::size_t count,
                                           std::uint64_t seed, unsigned threads = 1);

}  // namespace ybmarkov
