#pragma once

// Permutations of {0..n-1}: composition, powers, canonical cycle
// decomposition, species/charge coordinates and brute-force roots.

#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ybmarkov {

class Permutation {
 public:
  Permutation() = default;

  /// `image[i]` is the image of i. Throws std::invalid_argument unless the
  /// table is a bijection of {0..n-1}.
  explicit Permutation(std::vector<int> image);

  static Permutation identity(int n);

  /// Cycles may omit fixed points; every listed value must be < n and occur
  /// at most once.
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles);

  /// Cycle notation "(0 2)(1)" (commas optional, "()" is the identity) or
  /// one-line image notation "[2,1,0]". Without `n`, cycle notation takes
  /// n = largest listed value + 1.
  static Permutation parse(std::string_view text, std::optional<int> n = std::nullopt);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[static_cast<std::size_t>(i)]; }
  std::span<const int> image() const { return image_; }

  Permutation inverse() const;
  bool is_identity() const;

  /// Canonical cycle notation including fixed points, e.g. "(0 2)(1)".
  std::string to_string() const;
  /// One-line notation, e.g. "[2,1,0]".
  std::string to_image_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  /// Lexicographic on the image table.
  friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
    return a.image_ <=> b.image_;
  }

 private:
  std::vector<int> image_;
};

/// p after q: result(i) = p(q(i)). Throws std::invalid_argument on size mismatch.
Permutation compose(const Permutation& p, const Permutation& q);
inline Permutation operator*(const Permutation& p, const Permutation& q) { return compose(p, q); }

/// p applied k times; negative k uses the inverse.
Permutation power(const Permutation& p, long k);

/// lcm of the cycle lengths.
long order(const Permutation& p);

struct CycleDecomposition {
  int n = 0;
  /// Each cycle starts at its minimal element; cycles sorted by that element.
  std::vector<std::vector<int>> cycles;

  std::vector<int> lengths() const;
  Permutation assemble() const;
  friend bool operator==(const CycleDecomposition&, const CycleDecomposition&) = default;
};

CycleDecomposition cycle_decomposition(const Permutation& p);

/// Value v is the `charge_of[v]`-th element of cycle `species_of[v]`.
/// Species are numbered from 1 in canonical cycle order; charges from 0.
struct ChargeCoordinates {
  std::vector<int> species_of;
  std::vector<int> charge_of;
  std::vector<int> cycle_lengths;  // c_1..c_n at index s-1
  std::vector<std::vector<int>> value_at;  // value_at[s-1][e]

  int species_count() const { return static_cast<int>(cycle_lengths.size()); }
  int cycle_length(int species) const { return cycle_lengths[static_cast<std::size_t>(species - 1)]; }
  int value(int species, int charge) const;
};

ChargeCoordinates charge_coordinates(const Permutation& p);

/// gcd of the cycle lengths of the given (1-based) species. Throws
/// std::invalid_argument on an empty set or unknown species.
long gcd_cycle_lengths(const Permutation& p, const std::set<int>& species);

/// Some g with g^L == f, searched exhaustively in lexicographic order of the
/// image table (so the smallest root is returned). Throws std::length_error
/// when f.size() exceeds `search_bound`.
std::optional<Permutation> lth_root(const Permutation& f, long L, int search_bound = 8);

/// All of S_n in lexicographic order.
std::vector<Permutation> all_permutations(int n);

}  // namespace ybmarkov
