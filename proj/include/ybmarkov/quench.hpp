#pragma once

// Quenches between twisted SSEPs: branching probabilities from exact sector
// intersections, spreading/splitting classification, the closed forms for
// full-cycle twists and their powers, oscillation chains and quench
// schedules.

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ybmarkov/check_report.hpp"
#include "ybmarkov/dynamics.hpp"
#include "ybmarkov/permutation.hpp"
#include "ybmarkov/sectors.hpp"
#include "ybmarkov/types.hpp"

namespace ybmarkov {

/// prob(from_a -> to_b) = |from_a ∩ to_b| / |from_a|.
struct BranchingMatrix {
  SectorPartition from;
  SectorPartition to;
  Matrix<long long> intersections;
  RationalMatrix prob;

  /// Rows sum to exactly 1 and entries lie in [0, 1].
  CheckReport check_rows() const;
};

/// Throws std::invalid_argument when the partitions live on different spaces.
BranchingMatrix branching_matrix(const SectorPartition& from, const SectorPartition& to);

/// Sectors of the twisted SSEPs of f1 and f2. Throws std::invalid_argument on
/// an alphabet mismatch and std::length_error above the enumeration bound.
BranchingMatrix branching_matrix(const Permutation& f1, const Permutation& f2, int L,
                                 const Limits& limits = {});

enum class SectorRelation { Equal, Inclusion, ReverseInclusion, Disjoint, Overlap };

std::string to_string(SectorRelation r);

struct RelationReport {
  /// relation[a][b] between from-sector a and to-sector b.
  std::vector<std::vector<SectorRelation>> relation;
  /// "equal", "spreading" (every from-sector sits in one to-sector),
  /// "splitting" (every to-sector sits in one from-sector) or "mixed".
  std::string verdict;
  /// The verdict with the roles exchanged.
  std::string reverse_verdict;
  std::size_t overlap_pairs = 0;
  /// When f1 is a power of f2: f2-sectors split into f1-sectors with
  /// probabilities |C1|/|C2| matching the cardinality formula.
  CheckReport power_check;
};

RelationReport classify_relation(const Permutation& f1, const Permutation& f2, int L,
                                 const Limits& limits = {});

/// Smallest k >= 0 with base^k == p, if any.
std::optional<long> power_exponent(const Permutation& p, const Permutation& base);

/// fine[v] counts the sites holding value v. True iff the SSEP sector with
/// these counts lies in the f2-sector with profile p2 and charge e2:
/// sum_e fine[s^(e)] = p2_s and sum_{s,e} e fine[s^(e)] = E mod D.
bool ssep_inclusion_condition(const std::vector<int>& fine, const Profile& p2, const TotalCharge& e2,
                              const Permutation& f2);

/// f1 the full N-cycle, f2 = f1^2, N even. Row k (charge of f1), column
/// (p2, p3, l) with p2 counting even values. Zero unless k = 2l + p3 mod N,
/// else L!/(p2! p3!) (1/2)^{L-1}. Throws std::invalid_argument when N is odd
/// or p2 + p3 != L.
Rational closed_form_branching_fullcycle_square(long N, int L, long k, int p2, int p3, long l);

/// f1 the full N-cycle, f2 = f1^{n-1}, N = (n-1) D. profile[j] counts values
/// = j mod (n-1). Zero unless (n-1) l + sum_j j profile[j] = k mod N, else
/// L!/prod profile! (1/(n-1))^{L-1}. Throws std::invalid_argument unless D
/// divides N with n >= 2, and the profile has n-1 entries summing to L.
Rational closed_form_branching_power(long N, long D, int L, long k, const std::vector<int>& profile,
                                     long l);

/// Compares a branching matrix of (full cycle, its power) with the closed
/// forms entrywise. The exponent must divide N.
CheckReport check_power_closed_form(long N, long n_minus_1, int L, const Limits& limits = {});

struct SectorChainResult {
  BranchingMatrix forward;   // f1 -> f2
  BranchingMatrix backward;  // f2 -> f1
  /// B12 B21, row-stochastic on f1-sectors.
  RationalMatrix transition;
  std::size_t start = 0;
  /// history[k] is the distribution after k double switches.
  std::vector<RationalVector> history;
  /// Proportional to |C1_a| on the sectors reachable from `start`.
  RationalVector fixed_point;
  /// fixed_point T == fixed_point and detailed balance, exactly.
  CheckReport fixed_point_check;
};

/// Alternates f2 and f1 quenches starting from f1-sector `start`.
SectorChainResult oscillation_chain(const Permutation& f1, const Permutation& f2, int L, std::size_t start,
                                    std::size_t switches, const Limits& limits = {});

struct QuenchStep {
  Permutation twist;
  /// nullopt means "until stationary".
  std::optional<double> duration;
};

struct QuenchSchedule {
  int n = 0;
  int L = 0;
  std::optional<std::vector<int>> initial_config;
  std::optional<std::size_t> initial_sector;  // sector of the first step's twist
  std::vector<QuenchStep> steps;
};

/// Line-based format:
///   N 4
///   L 3
///   initial config 0,0,1      (or: initial sector <id>)
///   step twist=(0 1 2 3) until=stationary
///   step twist=(0 2)(1 3) time=2.5
/// '#' starts a comment. Throws ParseError (see model_io.hpp) with the line.
QuenchSchedule parse_quench_schedule(std::istream& in);

struct QuenchStepResult {
  std::size_t step = 0;
  Permutation twist;
  std::optional<double> duration;
  SectorPartition sectors;
  /// Exact while every step so far was "until stationary".
  std::optional<std::vector<Rational>> exact_weights;
  std::vector<double> weights;
};

std::vector<QuenchStepResult> run_quench_schedule(const QuenchSchedule& schedule, double tol = 1e-12,
                                                  const Limits& limits = {});

/// step,twist,mode,sector,representative,profile,charge,size,weight
void write_quench_csv(std::ostream& out, const std::vector<QuenchStepResult>& results);

}  // namespace ybmarkov
