#pragma once

// Scalar and matrix vocabulary shared by every module.
//
// Exact work uses GMP-backed rationals with expression templates disabled so
// that they compose cleanly inside Eigen expressions.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <cstdint>
#include <string>

namespace ybmarkov {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, std::int64_t>;

using RationalMatrix = Matrix<Rational>;
using RationalVector = Vector<Rational>;

/// Configuration encodings. N^L must fit in 32 bits.
using Code = std::uint32_t;

/// Always "num/den", including integers ("3/1").
std::string to_string(const Rational& q);

/// Accepts "p/q", "p" or a decimal literal such as "0.25".
Rational parse_rational(const std::string& text);

inline Rational make_rational(long num, long den = 1) { return Rational(num, den); }

/// Sizes that gate dense and enumerative work.
struct Limits {
  std::size_t max_dense_states = 4096;
  std::size_t max_enumeration_states = std::size_t{1} << 24;
};

/// Kronecker product with the first factor as the most significant index.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Exact rank by Gaussian elimination over the rationals.
Eigen::Index exact_rank(RationalMatrix m);

/// Exact inverse; throws std::domain_error when singular.
RationalMatrix exact_inverse(const RationalMatrix& m);

}  // namespace ybmarkov
