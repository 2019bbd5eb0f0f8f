#include "ybmarkov/markov.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace ybmarkov {

// ---------------------------------------------------------------------------
// Configuration space

ConfigSpace::ConfigSpace(int alphabet, int length) : n_(alphabet), L_(length) {
  if (alphabet < 1) throw std::invalid_argument("configuration space: alphabet must be >= 1");
  if (length < 1) throw std::invalid_argument("configuration space: lattice length must be >= 1");
  stride_.assign(static_cast<std::size_t>(length), 1);
  unsigned long long size = 1;
  for (int i = length - 1; i >= 0; --i) {
    stride_[static_cast<std::size_t>(i)] = static_cast<Code>(size);
    size *= static_cast<unsigned long long>(alphabet);
    if (size > std::numeric_limits<Code>::max())
      throw std::length_error("configuration space: " + std::to_string(alphabet) + "^" +
                              std::to_string(length) + " configurations do not fit 32-bit codes");
  }
  size_ = static_cast<Code>(size);
}

Code ConfigSpace::encode(std::span<const int> sites) const {
  if (static_cast<int>(sites.size()) != L_)
    throw std::invalid_argument("configuration has " + std::to_string(sites.size()) +
                                " sites, expected " + std::to_string(L_));
  Code code = 0;
  for (int v : sites) {
    if (v < 0 || v >= n_)
      throw std::invalid_argument("site value " + std::to_string(v) + " outside {0.." +
                                  std::to_string(n_ - 1) + "}");
    code = code * static_cast<Code>(n_) + static_cast<Code>(v);
  }
  return code;
}

std::vector<int> ConfigSpace::decode(Code code) const {
  std::vector<int> sites(static_cast<std::size_t>(L_));
  for (int i = 0; i < L_; ++i) sites[static_cast<std::size_t>(i)] = site(code, i);
  return sites;
}

std::string ConfigSpace::format(Code code) const {
  std::string out = "(";
  for (int i = 0; i < L_; ++i) {
    if (i) out += ",";
    out += std::to_string(site(code, i));
  }
  return out + ")";
}

BondMove bond_move(const ConfigSpace& space, const TwoSiteMap& map, int left, int right) {
  if (map.alphabet() != space.alphabet())
    throw std::invalid_argument("bond_move: map and configuration alphabets differ");
  BondMove move(space.size());
  for (Code c = 0; c < space.size(); ++c) {
    const auto [a, b] = map(space.site(c, left), space.site(c, right));
    move[c] = space.with_site(space.with_site(c, left, a), right, b);
  }
  return move;
}

// ---------------------------------------------------------------------------
// Configuration bijections

ConfigBijection::ConfigBijection(ConfigSpace space, std::vector<Code> image)
    : space_(std::move(space)), image_(std::move(image)) {
  if (image_.size() != space_.size())
    throw std::invalid_argument("configuration bijection: wrong table size");
  std::vector<bool> hit(image_.size(), false);
  for (Code c = 0; c < image_.size(); ++c) {
    const Code img = image_[c];
    if (img >= image_.size() || hit[img])
      throw std::invalid_argument("configuration map is not bijective at " + space_.format(c));
    hit[img] = true;
  }
}

ConfigBijection ConfigBijection::identity(const ConfigSpace& space) {
  std::vector<Code> image(space.size());
  for (Code c = 0; c < space.size(); ++c) image[c] = c;
  return ConfigBijection(space, std::move(image));
}

ConfigBijection ConfigBijection::separable(const ConfigSpace& space, std::vector<Permutation> per_site) {
  if (static_cast<int>(per_site.size()) != space.length())
    throw std::invalid_argument("separable bijection: need one permutation per site");
  for (const auto& p : per_site)
    if (p.size() != space.alphabet())
      throw std::invalid_argument("separable bijection: permutation on the wrong alphabet");
  std::vector<Code> image(space.size());
  for (Code c = 0; c < space.size(); ++c) {
    Code out = c;
    for (int i = 0; i < space.length(); ++i)
      out = space.with_site(out, i, per_site[static_cast<std::size_t>(i)](space.site(c, i)));
    image[c] = out;
  }
  ConfigBijection result(space, std::move(image));
  result.per_site_ = std::move(per_site);
  return result;
}

ConfigBijection ConfigBijection::inverse() const {
  std::vector<Code> inv(image_.size());
  for (Code c = 0; c < image_.size(); ++c) inv[image_[c]] = c;
  ConfigBijection result(space_, std::move(inv));
  if (per_site_) {
    std::vector<Permutation> sites;
    for (const auto& p : *per_site_) sites.push_back(p.inverse());
    result.per_site_ = std::move(sites);
  }
  return result;
}

ConfigBijection ConfigBijection::after(const ConfigBijection& other) const {
  if (!(space_ == other.space_)) throw std::invalid_argument("composing bijections of different spaces");
  std::vector<Code> image(image_.size());
  for (Code c = 0; c < image_.size(); ++c) image[c] = image_[other.image_[c]];
  ConfigBijection result(space_, std::move(image));
  if (per_site_ && other.per_site_) {
    std::vector<Permutation> sites;
    for (std::size_t i = 0; i < per_site_->size(); ++i)
      sites.push_back(compose((*per_site_)[i], (*other.per_site_)[i]));
    result.per_site_ = std::move(sites);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Rate matrices

RateMatrix RateMatrix::from_bond_moves(const ConfigSpace& space, std::vector<BondMove> moves) {
  std::vector<Eigen::Triplet<Rational, std::int64_t>> triplets;
  for (const auto& move : moves) {
    if (move.size() != space.size()) throw std::invalid_argument("bond move has the wrong size");
    for (Code c = 0; c < space.size(); ++c)
      if (move[c] != c) triplets.emplace_back(move[c], c, Rational(1));
  }
  RateMatrix m;
  m.space_ = space;
  m.rates_.resize(space.size(), space.size());
  m.rates_.setFromTriplets(triplets.begin(), triplets.end());
  m.moves_ = std::move(moves);
  m.finish();
  return m;
}

RateMatrix RateMatrix::from_off_diagonal(const ConfigSpace& space, SparseMatrix<Rational> rates) {
  if (rates.rows() != static_cast<std::int64_t>(space.size()) ||
      rates.cols() != static_cast<std::int64_t>(space.size()))
    throw std::invalid_argument("rate matrix has the wrong dimensions");
  for (std::int64_t col = 0; col < rates.outerSize(); ++col)
    for (SparseMatrix<Rational>::InnerIterator it(rates, col); it; ++it) {
      if (it.row() == it.col() && it.value() != 0)
        throw std::invalid_argument("rate matrix: diagonal entries are derived, not stored");
      if (it.value() < 0)
        throw std::invalid_argument("rate matrix: negative rate at (" + std::to_string(it.row()) +
                                    "," + std::to_string(it.col()) + ")");
    }
  RateMatrix m;
  m.space_ = space;
  m.rates_ = std::move(rates);
  m.finish();
  return m;
}

void RateMatrix::finish() {
  rates_.prune([](std::int64_t r, std::int64_t c, const Rational& v) { return r != c && v != 0; });
  rates_.makeCompressed();
  exit_rate_.assign(space_.size(), Rational(0));
  for (std::int64_t col = 0; col < rates_.outerSize(); ++col)
    for (SparseMatrix<Rational>::InnerIterator it(rates_, col); it; ++it)
      exit_rate_[static_cast<std::size_t>(col)] += it.value();
}

Rational RateMatrix::entry(Code row, Code col) const {
  if (row == col) return diagonal(col);
  return rates_.coeff(row, col);
}

SparseMatrix<Rational> RateMatrix::generator() const {
  SparseMatrix<Rational> out = rates_;
  for (Code c = 0; c < dim(); ++c)
    if (exit_rate_[c] != 0) out.coeffRef(c, c) = -exit_rate_[c];
  out.makeCompressed();
  return out;
}

CheckReport RateMatrix::audit(bool require_symmetric) const {
  CheckReport report{.name = "generator_audit"};
  std::vector<Rational> col_sum(dim(), Rational(0));
  for (std::int64_t col = 0; col < rates_.outerSize(); ++col)
    for (SparseMatrix<Rational>::InnerIterator it(rates_, col); it; ++it) {
      ++report.checked;
      if (it.value() < 0)
        report.record("negative rate " + space_.format(static_cast<Code>(col)) + " -> " +
                      space_.format(static_cast<Code>(it.row())));
      if (require_symmetric && rates_.coeff(it.col(), it.row()) != it.value())
        report.record("asymmetric rates between " + space_.format(static_cast<Code>(col)) +
                      " and " + space_.format(static_cast<Code>(it.row())));
      col_sum[static_cast<std::size_t>(col)] += it.value();
    }
  for (Code c = 0; c < dim(); ++c) {
    ++report.checked;
    if (col_sum[c] + diagonal(c) != 0) report.record("column " + space_.format(c) + " does not sum to 0");
  }
  return report;
}

RateMatrix RateMatrix::relabel(const ConfigBijection& v) const {
  if (!(v.space() == space_)) throw std::invalid_argument("relabel: bijection acts on another space");
  const ConfigBijection vinv = v.inverse();
  std::vector<Eigen::Triplet<Rational, std::int64_t>> triplets;
  for (std::int64_t col = 0; col < rates_.outerSize(); ++col)
    for (SparseMatrix<Rational>::InnerIterator it(rates_, col); it; ++it)
      triplets.emplace_back(vinv(static_cast<Code>(it.row())), vinv(static_cast<Code>(col)), it.value());
  RateMatrix out;
  out.space_ = space_;
  out.rates_.resize(dim(), dim());
  out.rates_.setFromTriplets(triplets.begin(), triplets.end());
  for (const auto& move : moves_) {
    BondMove relabelled(dim());
    for (Code b = 0; b < dim(); ++b) relabelled[b] = vinv(move[v(b)]);
    out.moves_.push_back(std::move(relabelled));
  }
  out.finish();
  return out;
}

std::string RateMatrix::to_triplets() const {
  std::ostringstream os;
  const auto g = generator();
  for (std::int64_t col = 0; col < g.outerSize(); ++col)
    for (SparseMatrix<Rational>::InnerIterator it(g, col); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << to_string(it.value()) << '\n';
  return os.str();
}

namespace {

using Entry = std::tuple<std::int64_t, std::int64_t, Rational>;

std::vector<Entry> sorted_entries(const SparseMatrix<Rational>& m) {
  std::vector<Entry> out;
  for (std::int64_t col = 0; col < m.outerSize(); ++col)
    for (SparseMatrix<Rational>::InnerIterator it(m, col); it; ++it)
      if (it.value() != 0) out.emplace_back(it.col(), it.row(), it.value());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool operator==(const RateMatrix& a, const RateMatrix& b) {
  return a.space_ == b.space_ && sorted_entries(a.rates_) == sorted_entries(b.rates_);
}

CheckReport compare_generators(const RateMatrix& actual, const RateMatrix& expected,
                               const std::string& name) {
  CheckReport report{.name = name};
  if (!(actual.space() == expected.space())) {
    report.record("configuration spaces differ");
    return report;
  }
  const auto& space = actual.space();
  const SparseMatrix<Rational> diff = actual.generator() - expected.generator();
  report.checked = static_cast<std::size_t>(space.size()) * space.size();
  for (std::int64_t col = 0; col < diff.outerSize(); ++col)
    for (SparseMatrix<Rational>::InnerIterator it(diff, col); it; ++it)
      if (it.value() != 0)
        report.record("entry " + space.format(static_cast<Code>(it.row())) + "<-" +
                      space.format(static_cast<Code>(col)) + ": " +
                      to_string(actual.entry(static_cast<Code>(it.row()), static_cast<Code>(col))) +
                      " vs " +
                      to_string(expected.entry(static_cast<Code>(it.row()), static_cast<Code>(col))));
  return report;
}

// ---------------------------------------------------------------------------
// Local jumps and generators

TwoSiteRateBlock local_ssep_jump(int n) {
  const Eigen::Index d = static_cast<Eigen::Index>(n) * n;
  return swap_map(n).matrix<Rational>() - RationalMatrix::Identity(d, d);
}

TwoSiteRateBlock twisted_jump(const Permutation& f) {
  const Eigen::Index d = static_cast<Eigen::Index>(f.size()) * f.size();
  return lyubashenko_map(f).matrix<Rational>() - RationalMatrix::Identity(d, d);
}

RateMatrix set_theoretical_markov(const TwoSiteMap& m, int L) {
  if (L < 2) throw std::invalid_argument("Markov generator needs L >= 2, got " + std::to_string(L));
  const ConfigSpace space(m.alphabet(), L);
  std::vector<BondMove> moves;
  for (int i = 0; i + 1 < L; ++i) moves.push_back(bond_move(space, m, i, i + 1));
  moves.push_back(bond_move(space, m, L - 1, 0));
  return RateMatrix::from_bond_moves(space, std::move(moves));
}

TwoSiteMap twisted_bond_map(const TwoSiteMap& m, const Permutation& f) {
  if (f.size() != m.alphabet()) throw std::invalid_argument("twist acts on the wrong alphabet");
  const Permutation finv = f.inverse();
  return TwoSiteMap::from_function(m.alphabet(), [&](int a, int b) {
    const auto [x, y] = m(finv(a), b);
    return std::pair{f(x), y};
  });
}

RateMatrix twisted_set_theoretical_markov(const TwoSiteMap& m, int L, const Permutation& f) {
  if (L < 2) throw std::invalid_argument("Markov generator needs L >= 2, got " + std::to_string(L));
  const ConfigSpace space(m.alphabet(), L);
  std::vector<BondMove> moves;
  for (int i = 0; i + 1 < L; ++i) moves.push_back(bond_move(space, m, i, i + 1));
  moves.push_back(bond_move(space, twisted_bond_map(m, f), L - 1, 0));
  return RateMatrix::from_bond_moves(space, std::move(moves));
}

RateMatrix twisted_ssep_matrix(const Permutation& f, int L) {
  return twisted_set_theoretical_markov(swap_map(f.size()), L, f);
}

// ---------------------------------------------------------------------------
// Transfer matrices

TransferMatrix::TransferMatrix(const TwoSiteMap& m, int L, std::optional<Permutation> twist,
                               const Limits& limits)
    : map_(m), space_(m.alphabet(), L), twist_(std::move(twist)) {
  if (space_.size() > limits.max_dense_states)
    throw std::length_error("transfer matrix: " + std::to_string(space_.size()) +
                            " states exceed the dense bound " + std::to_string(limits.max_dense_states));
  if (L > 20) throw std::length_error("transfer matrix: lattice too long for the subset expansion");
  if (twist_ && twist_->size() != m.alphabet())
    throw std::invalid_argument("transfer matrix: twist acts on the wrong alphabet");
  const Eigen::Index d = static_cast<Eigen::Index>(space_.size());
  coefficients_.assign(static_cast<std::size_t>(L + 1), Matrix<long long>::Zero(d, d));
  for (unsigned long mask = 0; mask < (1ul << L); ++mask)
    coefficients_[static_cast<std::size_t>(__builtin_popcountl(mask))] += trace_term(mask);
}

Matrix<long long> TransferMatrix::trace_term(unsigned long mask) const {
  const int n = space_.alphabet();
  const int L = space_.length();
  const Eigen::Index d = static_cast<Eigen::Index>(space_.size());
  Matrix<long long> out = Matrix<long long>::Zero(d, d);
  std::optional<Permutation> aux_twist;
  if (twist_) aux_twist = twist_->inverse();
  for (Code tau = 0; tau < space_.size(); ++tau)
    for (int a0 = 0; a0 < n; ++a0) {
      // The twist acts first, then R_{0,1}, ..., R_{0,L}.
      int aux = aux_twist ? (*aux_twist)(a0) : a0;
      Code state = tau;
      for (int i = 0; i < L; ++i) {
        int x = space_.site(state, i);
        int a = aux;
        if (mask & (1ul << i)) std::tie(a, x) = map_(a, x);
        // P exchanges the auxiliary and the quantum slot.
        state = space_.with_site(state, i, a);
        aux = x;
      }
      if (aux == a0) out(state, tau) += 1;
    }
  return out;
}

RationalMatrix TransferMatrix::at(const Rational& z) const {
  if (z == -1) throw std::domain_error("transfer matrix: pole at z = -1");
  const Eigen::Index d = static_cast<Eigen::Index>(space_.size());
  RationalMatrix acc = RationalMatrix::Zero(d, d);
  // Horner in z over the integer coefficients.
  for (int k = degree(); k >= 0; --k) acc = (acc * z).eval() + coefficient(k).cast<Rational>();
  Rational scale = 1;
  for (int k = 0; k < space_.length(); ++k) scale *= (z + 1);
  return acc / scale;
}

RationalMatrix TransferMatrix::at_zero() const { return coefficient(0).cast<Rational>(); }

RationalMatrix TransferMatrix::derivative_at_zero() const {
  const Matrix<long long> base = trace_term(0);
  Matrix<long long> acc = Matrix<long long>::Zero(base.rows(), base.cols());
  for (int i = 0; i < space_.length(); ++i) acc += trace_term(1ul << i) - base;
  return acc.cast<Rational>();
}

std::vector<Rational> commutation_grid(int L) {
  std::vector<Rational> grid;
  for (int k = 2; k <= L + 2; ++k) grid.emplace_back(1, k);
  return grid;
}

CheckReport check_transfer_commutation(const TransferMatrix& t, const std::vector<Rational>& grid) {
  CheckReport report{.name = "transfer_commutation"};
  std::vector<RationalMatrix> values;
  for (const auto& z : grid) values.push_back(t.at(z));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      ++report.checked;
      const RationalMatrix comm = values[i] * values[j] - values[j] * values[i];
      if (!comm.isZero(0))
        report.record("[t(" + to_string(grid[i]) + "), t(" + to_string(grid[j]) + ")] != 0");
    }
  return report;
}

CheckReport check_hamiltonian_extraction(const TwoSiteMap& m, int L,
                                         const std::optional<Permutation>& twist,
                                         const Limits& limits) {
  const TransferMatrix t(m, L, twist, limits);
  const RationalMatrix t0 = t.at_zero();
  const RationalMatrix extracted = exact_inverse(t0) * t.derivative_at_zero();
  const RateMatrix expected =
      twist ? twisted_set_theoretical_markov(m, L, *twist) : set_theoretical_markov(m, L);
  const RationalMatrix target = expected.dense<Rational>();

  CheckReport report{.name = "hamiltonian_extraction"};
  const auto& space = t.space();
  for (Eigen::Index c = 0; c < target.cols(); ++c)
    for (Eigen::Index r = 0; r < target.rows(); ++r) {
      ++report.checked;
      if (extracted(r, c) != target(r, c))
        report.record("entry " + space.format(static_cast<Code>(r)) + "<-" +
                      space.format(static_cast<Code>(c)) + ": t(0)^-1 t'(0) gives " +
                      to_string(extracted(r, c)) + ", generator has " + to_string(target(r, c)));
    }
  return report;
}

RationalMatrix permutation_matrix(const Permutation& p) {
  RationalMatrix m = RationalMatrix::Zero(p.size(), p.size());
  for (int t = 0; t < p.size(); ++t) m(p(t), t) = 1;
  return m;
}

CheckReport check_integrable_twist(const TwoSiteMap& m, const RationalMatrix& twist,
                                   const Rational& u, const Rational& v) {
  if (twist.rows() != m.alphabet() || twist.cols() != m.alphabet())
    throw std::invalid_argument("integrable twist: twist must be " + std::to_string(m.alphabet()) +
                                " x " + std::to_string(m.alphabet()));
  if (exact_rank(twist) != twist.rows())
    throw std::invalid_argument("integrable twist: twist matrix is not invertible");
  const RationalMatrix r = baxterize(m, Rational(u - v));
  const RationalMatrix tt = kron(twist, twist);
  const RationalMatrix diff = r * tt - tt * r;
  CheckReport report{.name = "integrable_twist"};
  for (Eigen::Index c = 0; c < diff.cols(); ++c)
    for (Eigen::Index row = 0; row < diff.rows(); ++row) {
      ++report.checked;
      if (diff(row, c) != 0)
        report.record("entry (" + std::to_string(row) + "," + std::to_string(c) + ") differs by " +
                      to_string(diff(row, c)));
    }
  return report;
}

CheckReport check_integrable_twist(const TwoSiteMap& m, const Permutation& f, const Rational& u,
                                   const Rational& v) {
  return check_integrable_twist(m, permutation_matrix(f.inverse()), u, v);
}

// ---------------------------------------------------------------------------
// Conjugations

ConfigBijection conjugation_V(const Permutation& g, int L) {
  std::vector<Permutation> sites;
  for (int i = 0; i < L; ++i) sites.push_back(power(g, i));
  return ConfigBijection::separable(ConfigSpace(g.size(), L), std::move(sites));
}

ConfigBijection conjugation_U(const Permutation& g, int L) {
  std::vector<Permutation> sites;
  for (int i = 0; i < L; ++i) sites.push_back(power(g, -(L - 1 - i)));
  return ConfigBijection::separable(ConfigSpace(g.size(), L), std::move(sites));
}

ConfigBijection conjugation_UV_general(const SolutionFamily& fam, int L, Conjugator which) {
  fam.validate();
  const ConfigSpace space(fam.n, L);
  std::vector<Code> image(space.size());
  for (Code c = 0; c < space.size(); ++c) {
    const auto tau = space.decode(c);
    std::vector<int> out(tau.size());
    for (int i = 0; i < L; ++i) {
      int x = tau[static_cast<std::size_t>(i)];
      if (which == Conjugator::U) {
        for (int j = i + 1; j < L; ++j) x = fam.f[static_cast<std::size_t>(tau[static_cast<std::size_t>(j)])](x);
      } else {
        for (int j = i - 1; j >= 0; --j) x = fam.g[static_cast<std::size_t>(tau[static_cast<std::size_t>(j)])](x);
      }
      out[static_cast<std::size_t>(i)] = x;
    }
    image[c] = space.encode(out);
  }
  return ConfigBijection(space, std::move(image));
}

namespace {

// c -> w(move(w^{-1}(c))) compared with `expected`.
void compare_conjugated_move(CheckReport& report, const ConfigBijection& w, const BondMove& move,
                             const BondMove& expected, const std::string& label) {
  const ConfigBijection winv = w.inverse();
  const auto& space = w.space();
  for (Code c = 0; c < space.size(); ++c) {
    ++report.checked;
    const Code got = w(move[winv(c)]);
    if (got != expected[c])
      report.record(label + " at " + space.format(c) + ": " + space.format(got) + " vs " +
                    space.format(expected[c]));
  }
}

}  // namespace

CheckReport check_local_conjugation(const SolutionFamily& fam, int L) {
  const TwoSiteMap r = general_map(fam);
  const ConfigSpace space(fam.n, L);
  const ConfigBijection u = conjugation_UV_general(fam, L, Conjugator::U);
  const ConfigBijection v = conjugation_UV_general(fam, L, Conjugator::V);
  const TwoSiteMap flip = swap_map(fam.n);
  CheckReport report{.name = "local_conjugation"};
  for (int i = 0; i + 1 < L; ++i) {
    const BondMove rmove = bond_move(space, r, i, i + 1);
    const BondMove pmove = bond_move(space, flip, i, i + 1);
    const std::string bond = "bond " + std::to_string(i + 1) + "," + std::to_string(i + 2);
    compare_conjugated_move(report, u, rmove, pmove, "U r U^-1 != P on " + bond);
    compare_conjugated_move(report, v, rmove, pmove, "V r V^-1 != P on " + bond);
  }
  return report;
}

CheckReport check_conjugation_identity(const Permutation& g, int L, const Limits& limits) {
  const ConfigSpace space(g.size(), L);
  if (space.size() > limits.max_dense_states)
    throw std::length_error("conjugation check: state space exceeds the dense bound");
  const Permutation f = power(g, L);
  const TwoSiteMap r = lyubashenko_map(g);
  const RateMatrix lyub = set_theoretical_markov(r, L);
  const RateMatrix twisted = twisted_ssep_matrix(f, L);
  const ConfigBijection v = conjugation_V(g, L);
  const ConfigBijection u = conjugation_U(g, L);

  CheckReport report{.name = "conjugation(g=" + g.to_string() + ",L=" + std::to_string(L) + ")"};
  report.absorb(compare_generators(lyub, twisted.relabel(v), "V^-1 M_f V"));
  report.absorb(compare_generators(lyub, twisted.relabel(u), "U^-1 M_f U"));

  // Bond by bond: W r_{i,i+1} W^{-1} is the flip in the bulk and the twisted
  // flip on (L, 1).
  const TwoSiteMap flip = swap_map(g.size());
  for (int i = 0; i < L; ++i) {
    const int j = (i + 1) % L;
    const BondMove rmove = bond_move(space, r, i, j);
    const BondMove target = (j == 0) ? bond_move(space, lyubashenko_map(f), i, j)
                                     : bond_move(space, flip, i, j);
    const std::string bond = "bond " + std::to_string(i + 1) + "," + std::to_string(j + 1);
    CheckReport bonds{.name = "bond identities"};
    compare_conjugated_move(bonds, v, rmove, target, "V r V^-1 on " + bond);
    compare_conjugated_move(bonds, u, rmove, target, "U r U^-1 on " + bond);
    report.absorb(bonds);
  }

  report.absorb(check_local_conjugation(lyubashenko_family(g), L));

  // The constant family's non-separable V coincides with the separable one.
  ++report.checked;
  if (!(conjugation_UV_general(lyubashenko_family(g), L, Conjugator::V) == v))
    report.record("general V of the constant family differs from the separable V");
  ++report.checked;
  if (!(conjugation_UV_general(lyubashenko_family(g), L, Conjugator::U) == u))
    report.record("general U of the constant family differs from the separable U");
  return report;
}

std::size_t kernel_dimension(const RateMatrix& m, const Limits& limits) {
  if (m.dim() > limits.max_dense_states)
    throw std::length_error("kernel_dimension: " + std::to_string(m.dim()) +
                            " states exceed the dense bound");
  return static_cast<std::size_t>(m.dim()) -
         static_cast<std::size_t>(exact_rank(m.dense<Rational>()));
}

}  // namespace ybmarkov
