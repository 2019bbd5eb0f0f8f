#pragma once

// Sectors of a generator as orbits of its moves, their profile and total
// charge labels under a twist, the closed-form counts and sizes, and uniform
// stationary states.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ybmarkov/check_report.hpp"
#include "ybmarkov/markov.hpp"
#include "ybmarkov/permutation.hpp"
#include "ybmarkov/types.hpp"

namespace ybmarkov {

/// Species counts (p_1..p_n) in canonical cycle order of the twist.
struct Profile {
  std::vector<int> counts;

  int length() const;
  std::string to_string() const;  // "(2,1)"
  friend auto operator<=>(const Profile&, const Profile&) = default;
};

/// E mod D.
struct TotalCharge {
  long value = 0;
  long modulus = 1;

  std::string to_string() const;  // "2 mod 3"
  friend auto operator<=>(const TotalCharge&, const TotalCharge&) = default;
};

struct SectorLabel {
  Profile profile;
  TotalCharge charge;
  friend auto operator<=>(const SectorLabel&, const SectorLabel&) = default;
};

Profile profile_of(std::span<const int> sites, const Permutation& f);
Profile profile_of(const ConfigSpace& space, Code c, const Permutation& f);

/// D is the gcd of the cycle lengths of the species present; E = 0 when D = 1.
TotalCharge charge_of(std::span<const int> sites, const Permutation& f);
TotalCharge charge_of(const ConfigSpace& space, Code c, const Permutation& f);

SectorLabel label_of(const ConfigSpace& space, Code c, const Permutation& f);

/// Connected components of the transition graph. Sector ids follow the
/// minimal member encoding, so the partition is canonical.
class SectorPartition {
 public:
  SectorPartition() = default;
  SectorPartition(ConfigSpace space, std::vector<std::uint32_t> sector_of);

  const ConfigSpace& space() const { return space_; }
  std::size_t count() const { return representative_.size(); }
  std::uint32_t sector_of(Code c) const { return sector_of_[c]; }
  const std::vector<std::uint32_t>& assignment() const { return sector_of_; }
  /// Smallest member encoding.
  Code representative(std::size_t id) const { return representative_[id]; }
  std::size_t size(std::size_t id) const { return size_[id]; }
  /// Members in increasing encoding, materialized on each call.
  std::vector<Code> members(std::size_t id) const;

  /// Every sector of this partition lies inside one sector of `coarser`.
  bool refines(const SectorPartition& coarser) const;

  friend bool operator==(const SectorPartition& a, const SectorPartition& b) {
    return a.space_ == b.space_ && a.sector_of_ == b.sector_of_;
  }

 private:
  ConfigSpace space_;
  std::vector<std::uint32_t> sector_of_;
  std::vector<Code> representative_;
  std::vector<std::size_t> size_;
};

/// Union-find over the bond moves (or the off-diagonal support when the
/// generator was not built from moves). Throws std::length_error above
/// limits.max_enumeration_states.
SectorPartition enumerate_sectors(const RateMatrix& m, const Limits& limits = {});

/// Sectors of the twisted SSEP with twist f.
SectorPartition twisted_ssep_sectors(const Permutation& f, int L, const Limits& limits = {});

struct Sector {
  std::size_t id = 0;
  Code representative = 0;
  BigInt size;
  /// Present when a twist was given.
  std::optional<SectorLabel> label;
};

/// Sector records, labelled by the representative's profile and charge when
/// `f` is given.
std::vector<Sector> describe_sectors(const SectorPartition& partition,
                                     const std::optional<Permutation>& f = std::nullopt);

BigInt binomial(long n, long k);
BigInt factorial(long n);

/// Sum over nonempty species sets X of C(L-1, |X|-1) gcd(c_x : x in X).
/// Throws std::invalid_argument when L < 2.
BigInt count_sectors_closed_form(const Permutation& f, int L);

/// (N/d) C(L+d-1, L) for d cycles of equal length. Throws
/// std::invalid_argument when d does not divide N or L < 2.
BigInt count_sectors_equal_cycles(long N, long d, int L);

/// (L!/prod p_s!) prod c_s^{p_s} / gcd(c_x : p_x > 0). Throws
/// std::invalid_argument when the profile does not fit f or L < 2.
BigInt sector_cardinality_closed_form(const Permutation& f, const Profile& p);

/// The uniform distribution 1/|C| on a sector.
struct StationaryState {
  std::size_t sector = 0;
  std::vector<Code> support;
  Rational weight;

  RationalVector to_vector(Code dim) const;
};

StationaryState stationary_state(const SectorPartition& partition, std::size_t id);

/// M v == 0 and sum v == 1, exactly.
CheckReport check_stationary(const RateMatrix& m, const StationaryState& s);

/// For the twisted SSEP of f on L sites:
///  (a) orbits coincide with the (profile, charge) classes,
///  (b) the orbit count equals the closed form,
///  (c) every orbit size equals the cardinality formula,
///  (d) when f has d cycles of one length, the equal-cycle count agrees and
///      is strictly increasing over the divisors of N,
///  (e) N <= count <= C(N-1+L, N-1).
CheckReport verify_sector_theory(const Permutation& f, int L, const Limits& limits = {});

}  // namespace ybmarkov
