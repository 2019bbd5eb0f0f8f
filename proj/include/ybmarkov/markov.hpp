#pragma once

// Exact Markov generators on the periodic lattice built from two-site maps,
// transfer matrices with an optional constant twist, and the identities that
// tie them together.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ybmarkov/check_report.hpp"
#include "ybmarkov/permutation.hpp"
#include "ybmarkov/types.hpp"
#include "ybmarkov/yang_baxter.hpp"

namespace ybmarkov {

/// Configurations (tau_1..tau_L) over {0..N-1}, encoded as
/// sum tau_i * N^(L-i) so site 1 is the most significant digit. Sites are
/// 0-based in this API.
class ConfigSpace {
 public:
  ConfigSpace() = default;
  /// Throws std::invalid_argument when N < 1 or L < 1, std::length_error when
  /// N^L does not fit a Code.
  ConfigSpace(int alphabet, int length);

  int alphabet() const { return n_; }
  int length() const { return L_; }
  Code size() const { return size_; }

  Code encode(std::span<const int> sites) const;
  std::vector<int> decode(Code code) const;
  int site(Code code, int i) const {
    return static_cast<int>((code / stride_[static_cast<std::size_t>(i)]) % static_cast<Code>(n_));
  }
  Code with_site(Code code, int i, int value) const {
    const Code s = stride_[static_cast<std::size_t>(i)];
    return code - static_cast<Code>(site(code, i)) * s + static_cast<Code>(value) * s;
  }
  /// "(0,1,1)"
  std::string format(Code code) const;

  friend bool operator==(const ConfigSpace&, const ConfigSpace&) = default;

 private:
  int n_ = 0;
  int L_ = 0;
  Code size_ = 0;
  std::vector<Code> stride_;
};

/// The image of every configuration under one bond's two-site map.
using BondMove = std::vector<Code>;

/// Image of every configuration when `map` acts on the ordered site pair
/// (left, right).
BondMove bond_move(const ConfigSpace& space, const TwoSiteMap& map, int left, int right);

/// A bijection of the configuration space. Separable bijections also keep
/// their per-site permutations.
class ConfigBijection {
 public:
  /// Throws std::invalid_argument when `image` is not a bijection.
  ConfigBijection(ConfigSpace space, std::vector<Code> image);

  static ConfigBijection identity(const ConfigSpace& space);
  /// Site i is relabelled by per_site[i].
  static ConfigBijection separable(const ConfigSpace& space, std::vector<Permutation> per_site);

  const ConfigSpace& space() const { return space_; }
  Code operator()(Code c) const { return image_[c]; }
  std::span<const Code> image() const { return image_; }
  bool is_separable() const { return per_site_.has_value(); }
  const std::optional<std::vector<Permutation>>& per_site() const { return per_site_; }

  ConfigBijection inverse() const;
  /// (*this after other)(c) = (*this)(other(c)).
  ConfigBijection after(const ConfigBijection& other) const;

  friend bool operator==(const ConfigBijection& a, const ConfigBijection& b) {
    return a.space_ == b.space_ && a.image_ == b.image_;
  }

 private:
  ConfigSpace space_;
  std::vector<Code> image_;
  std::optional<std::vector<Permutation>> per_site_;
};

/// Continuous-time Markov generator with exact rational rates. Only the
/// off-diagonal rates are stored; the diagonal is always minus the column sum,
/// so columns sum to zero by construction. Column c holds the rates out of
/// configuration c.
class RateMatrix {
 public:
  RateMatrix() = default;

  /// Every move contributes rate 1 from c to move[c] whenever they differ.
  static RateMatrix from_bond_moves(const ConfigSpace& space, std::vector<BondMove> moves);
  /// Throws std::invalid_argument on a negative rate or a stored diagonal.
  static RateMatrix from_off_diagonal(const ConfigSpace& space, SparseMatrix<Rational> rates);

  const ConfigSpace& space() const { return space_; }
  Code dim() const { return space_.size(); }

  const SparseMatrix<Rational>& off_diagonal() const { return rates_; }
  const std::vector<BondMove>& bond_moves() const { return moves_; }
  bool has_bond_moves() const { return !moves_.empty(); }

  Rational diagonal(Code c) const { return -exit_rate_[c]; }
  /// Total rate out of c.
  const Rational& exit_rate(Code c) const { return exit_rate_[c]; }
  /// m(col -> row), diagonal included.
  Rational entry(Code row, Code col) const;

  SparseMatrix<Rational> generator() const;

  template <typename Scalar>
  SparseMatrix<Scalar> sparse() const {
    SparseMatrix<Scalar> out = generator().template cast<Scalar>();
    out.makeCompressed();
    return out;
  }

  template <typename Scalar>
  Matrix<Scalar> dense() const {
    return Matrix<Scalar>(sparse<Scalar>());
  }

  /// Nonnegative off-diagonals, zero column sums and symmetry.
  CheckReport audit(bool require_symmetric = true) const;

  /// V^{-1} M V for the bijection V: entry (a, b) of the result is
  /// entry (V(a), V(b)) of this matrix.
  RateMatrix relabel(const ConfigBijection& v) const;

  /// Lines "row col num/den", column-major, diagonal included.
  std::string to_triplets() const;

  /// Same configuration space and identical off-diagonal rates.
  friend bool operator==(const RateMatrix& a, const RateMatrix& b);

 private:
  void finish();

  ConfigSpace space_;
  SparseMatrix<Rational> rates_;
  std::vector<Rational> exit_rate_;
  std::vector<BondMove> moves_;
};

/// Lists the first differing entries (capped) between two generators.
CheckReport compare_generators(const RateMatrix& actual, const RateMatrix& expected,
                               const std::string& name);

/// Two-site blocks act on the ordered pair (first site, second site) with the
/// pair (a, b) at index a*N + b.
using TwoSiteRateBlock = RationalMatrix;

/// Flip minus identity.
TwoSiteRateBlock local_ssep_jump(int n);
/// |a, b> -> |f(b), f^{-1}(a)> minus identity, on the pair (site L, site 1).
TwoSiteRateBlock twisted_jump(const Permutation& f);

/// Sum over bonds (i, i+1), i < L, and (L, 1) of (r - Id). Throws
/// std::invalid_argument when L < 2.
RateMatrix set_theoretical_markov(const TwoSiteMap& m, int L);

/// Bulk bonds use m; the (L, 1) bond uses f_L m f_L^{-1}.
RateMatrix twisted_set_theoretical_markov(const TwoSiteMap& m, int L, const Permutation& f);

/// Periodic multi-species SSEP with the (L, 1) bond twisted by f.
RateMatrix twisted_ssep_matrix(const Permutation& f, int L);

/// The (L, 1) bond map of the twisted model: (a, b) -> f(x), y where
/// (x, y) = r(f^{-1}(a), b).
TwoSiteMap twisted_bond_map(const TwoSiteMap& m, const Permutation& f);

/// t(z) = tr_0 R_{0,L}(z) ... R_{0,1}(z) T_0 with R(z) = P (z r + Id)/(z + 1)
/// and a constant twist T = f^{-1} on the auxiliary space. Because each
/// factor is (P + z P r)/(z + 1), (z + 1)^L t(z) is an integer matrix
/// polynomial; its coefficients are computed once and evaluated exactly.
class TransferMatrix {
 public:
  /// Throws std::length_error when N^L exceeds limits.max_dense_states.
  TransferMatrix(const TwoSiteMap& m, int L, std::optional<Permutation> twist = std::nullopt,
                 const Limits& limits = {});

  const ConfigSpace& space() const { return space_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  /// Coefficient of z^k in (z + 1)^L t(z); entries are path counts.
  const Matrix<long long>& coefficient(int k) const { return coefficients_[static_cast<std::size_t>(k)]; }

  /// Throws std::domain_error at the pole z = -1.
  RationalMatrix at(const Rational& z) const;
  RationalMatrix at_zero() const;
  /// t'(0) by the product rule: factor i differentiated to (P r - P), every
  /// other factor at its value P.
  RationalMatrix derivative_at_zero() const;

 private:
  /// tr_0 of the product where factor i is P r when bit i of `mask` is set
  /// and P otherwise.
  Matrix<long long> trace_term(unsigned long mask) const;

  TwoSiteMap map_;
  ConfigSpace space_;
  std::optional<Permutation> twist_;
  std::vector<Matrix<long long>> coefficients_;
};

inline RationalMatrix transfer_matrix(const TwoSiteMap& m, int L, const Rational& z,
                                      std::optional<Permutation> twist = std::nullopt,
                                      const Limits& limits = {}) {
  return TransferMatrix(m, L, std::move(twist), limits).at(z);
}

/// Default commutation grid z = 1/2, 1/3, ..., 1/(L+2).
std::vector<Rational> commutation_grid(int L);

/// [t(z1), t(z2)] == 0 exactly for every pair of grid points.
CheckReport check_transfer_commutation(const TransferMatrix& t, const std::vector<Rational>& grid);

/// t(0)^{-1} t'(0) equals the generator entrywise. The twist derivative term
/// vanishes because the twist does not depend on z.
CheckReport check_hamiltonian_extraction(const TwoSiteMap& m, int L,
                                         const std::optional<Permutation>& twist = std::nullopt,
                                         const Limits& limits = {});

/// R(u - v) (T (x) T) == (T (x) T) R(u - v) for R = baxterize(m, .). Throws
/// std::invalid_argument when T is singular or of the wrong size.
CheckReport check_integrable_twist(const TwoSiteMap& m, const RationalMatrix& twist,
                                   const Rational& u, const Rational& v);
/// With T = f^{-1}.
CheckReport check_integrable_twist(const TwoSiteMap& m, const Permutation& f, const Rational& u,
                                   const Rational& v);

/// N x N matrix |p(t)><t|.
RationalMatrix permutation_matrix(const Permutation& p);

/// V(tau) = (tau_1, g(tau_2), ..., g^{L-1}(tau_L)); separable.
ConfigBijection conjugation_V(const Permutation& g, int L);
/// U = prod_{i<L} (g_i^{-1})^{L-i}; separable.
ConfigBijection conjugation_U(const Permutation& g, int L);

enum class Conjugator { U, V };

/// Non-separable bijections of a (g_i, f_i) family:
/// U(tau)_i = f_{tau_L} ... f_{tau_{i+1}}(tau_i),
/// V(tau)_i = g_{tau_1} ... g_{tau_{i-1}}(tau_i).
ConfigBijection conjugation_UV_general(const SolutionFamily& fam, int L, Conjugator which);

/// The Lyubashenko model of g is V^{-1} M_f V (and U^{-1} M_f U) with
/// f = g^L; also checks the bond-level identities behind it and the
/// local conjugation of the constant family.
CheckReport check_conjugation_identity(const Permutation& g, int L, const Limits& limits = {});

/// r_{i,i+1} = U^{-1} P_{i,i+1} U = V^{-1} P_{i,i+1} V for every bulk bond.
CheckReport check_local_conjugation(const SolutionFamily& fam, int L);

/// dim - rank of the dense generator, exactly. Throws std::length_error above
/// limits.max_dense_states.
std::size_t kernel_dimension(const RateMatrix& m, const Limits& limits = {});

}  // namespace ybmarkov
