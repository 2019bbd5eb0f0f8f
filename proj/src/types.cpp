#include "ybmarkov/types.hpp"

#include <stdexcept>

namespace ybmarkov {

std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(text.substr(0, slash));
      BigInt den(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    // Decimal literal: scale by the number of fractional digits.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    BigInt den = 1;
    for (std::size_t k = dot + 1; k < text.size(); ++k) den *= 10;
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    return Rational(BigInt(digits), den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  }
}

Eigen::Index exact_rank(RationalMatrix m) {
  Eigen::Index rank = 0;
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  for (Eigen::Index col = 0; col < cols && rank < rows; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = rank; r < rows; ++r)
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(rank));
    const Rational inv = 1 / m(rank, col);
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      if (m(r, col) == 0) continue;
      const Rational factor = m(r, col) * inv;
      for (Eigen::Index c = col; c < cols; ++c) m(r, c) -= factor * m(rank, c);
    }
    ++rank;
  }
  return rank;
}

RationalMatrix exact_inverse(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("exact_inverse: matrix is not square");
  const Eigen::Index n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = col; r < n; ++r)
      if (a(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::domain_error("exact_inverse: matrix is singular");
    a.row(pivot).swap(a.row(col));
    inv.row(pivot).swap(inv.row(col));
    const Rational scale = 1 / a(col, col);
    a.row(col) *= scale;
    inv.row(col) *= scale;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational factor = a(r, col);
      a.row(r) -= factor * a.row(col);
      inv.row(r) -= factor * inv.row(col);
    }
  }
  return inv;
}

}  // namespace ybmarkov
