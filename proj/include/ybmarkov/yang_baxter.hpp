#pragma once

// Two-site set-theoretical maps and the exact checks that make them usable as
// integrable Markov building blocks: braided Yang-Baxter equation,
// involutivity, the pointwise relations of a (g_i, f_i) family, and
// Baxterization with spectral parameters.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ybmarkov/check_report.hpp"
#include "ybmarkov/permutation.hpp"
#include "ybmarkov/types.hpp"

namespace ybmarkov {

/// Bijection of {0..n-1}^2. The pair (i, j) is encoded as i*n + j and the
/// table is stored row-major in that encoding.
class TwoSiteMap {
 public:
  TwoSiteMap() = default;

  /// Throws std::invalid_argument naming a collision when the table is not a
  /// bijection of the n^2 pairs.
  TwoSiteMap(int n, std::vector<int> table);

  static TwoSiteMap from_function(int n, const std::function<std::pair<int, int>(int, int)>& fn);

  int alphabet() const { return n_; }
  std::span<const int> table() const { return table_; }

  std::pair<int, int> operator()(int i, int j) const {
    const int code = table_[static_cast<std::size_t>(i * n_ + j)];
    return {code / n_, code % n_};
  }
  int apply_encoded(int code) const { return table_[static_cast<std::size_t>(code)]; }

  TwoSiteMap inverse() const;

  /// n^2 x n^2 permutation matrix: column (i,j) has a one in row r(i,j).
  template <typename Scalar>
  Matrix<Scalar> matrix() const {
    const Eigen::Index d = static_cast<Eigen::Index>(table_.size());
    Matrix<Scalar> m = Matrix<Scalar>::Zero(d, d);
    for (Eigen::Index c = 0; c < d; ++c) m(table_[static_cast<std::size_t>(c)], c) = Scalar(1);
    return m;
  }

  friend bool operator==(const TwoSiteMap&, const TwoSiteMap&) = default;

 private:
  int n_ = 0;
  std::vector<int> table_;
};

/// The flip (i, j) -> (j, i).
TwoSiteMap swap_map(int n);

/// (i, j) -> (g(j), g^{-1}(i)).
TwoSiteMap lyubashenko_map(const Permutation& g);

/// Bijections g_i, f_i of {0..n-1}, defining (i, j) -> (g_i(j), f_j(i)).
struct SolutionFamily {
  int n = 0;
  std::vector<Permutation> g;
  std::vector<Permutation> f;

  /// Throws std::invalid_argument when sizes disagree.
  void validate() const;
  /// The pair table (i, j) -> (g_i(j), f_j(i)), bijective or not.
  std::vector<int> raw_table() const;
  friend bool operator==(const SolutionFamily&, const SolutionFamily&) = default;
};

/// g_i = g and f_i = g^{-1} for every i.
SolutionFamily lyubashenko_family(const Permutation& g);

/// The N = 3 family g_0 = f_0 = (0 2), g_1 = f_1 = Id, g_2 = f_2 = (0 2). It
/// is involutive and braided but not of Lyubashenko form.
SolutionFamily counterexample_family();

/// Throws std::invalid_argument listing a colliding pair when the derived
/// table is not bijective.
TwoSiteMap general_map(const SolutionFamily& fam);

CheckReport check_involutive(const TwoSiteMap& m, std::size_t cap = kDefaultViolationCap);

/// r12 r23 r12 == r23 r12 r23 on all n^3 triples. The triple range may be
/// split across `threads`; violations are merged in triple order.
CheckReport check_braided_ybe(const TwoSiteMap& m, std::size_t cap = kDefaultViolationCap,
                              unsigned threads = 1);

/// Pointwise check of the three braid relations and two involutivity
/// relations of the family. When the derived table is a bijection, the
/// verdict is cross-checked against check_braided_ybe and check_involutive
/// on general_map(fam); a disagreement is recorded as a violation.
CheckReport check_family_relations(const SolutionFamily& fam,
                                   std::size_t cap = kDefaultViolationCap);

/// R(z) = (z r + Id) / (z + 1). Throws std::domain_error at the pole z = -1.
template <typename Scalar>
Matrix<Scalar> baxterize(const TwoSiteMap& m, const Scalar& z) {
  if (z == Scalar(-1)) throw std::domain_error("baxterize: pole at z = -1");
  const Eigen::Index d = static_cast<Eigen::Index>(m.table().size());
  const Scalar denom = z + Scalar(1);
  return (z * m.matrix<Scalar>() + Matrix<Scalar>::Identity(d, d)) / denom;
}

/// R12(u) R23(u+v) R12(v) == R23(v) R12(u+v) R23(u), exactly.
CheckReport check_spectral_ybe(const TwoSiteMap& m, const Rational& u, const Rational& v,
                               std::size_t cap = kDefaultViolationCap);

/// The default certification grid u, v in {1/2, 1/3, 2/5, 3/7}.
std::vector<Rational> spectral_grid();

/// check_spectral_ybe over every (u, v) of `grid` x `grid`.
CheckReport check_spectral_ybe_grid(const TwoSiteMap& m, const std::vector<Rational>& grid);

}  // namespace ybmarkov
