#include "ybmarkov/sectors.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace ybmarkov {

int Profile::length() const { return std::accumulate(counts.begin(), counts.end(), 0); }

std::string Profile::to_string() const {
  std::string out = "(";
  for (std::size_t s = 0; s < counts.size(); ++s) {
    if (s) out += ",";
    out += std::to_string(counts[s]);
  }
  return out + ")";
}

std::string TotalCharge::to_string() const {
  return std::to_string(value) + " mod " + std::to_string(modulus);
}

Profile profile_of(std::span<const int> sites, const Permutation& f) {
  const ChargeCoordinates cc = charge_coordinates(f);
  Profile p{std::vector<int>(static_cast<std::size_t>(cc.species_count()), 0)};
  for (int v : sites) ++p.counts[static_cast<std::size_t>(cc.species_of[static_cast<std::size_t>(v)] - 1)];
  return p;
}

Profile profile_of(const ConfigSpace& space, Code c, const Permutation& f) {
  return profile_of(space.decode(c), f);
}

TotalCharge charge_of(std::span<const int> sites, const Permutation& f) {
  const ChargeCoordinates cc = charge_coordinates(f);
  long d = 0;
  long sum = 0;
  for (int v : sites) {
    d = std::gcd(d, static_cast<long>(cc.cycle_length(cc.species_of[static_cast<std::size_t>(v)])));
    sum += cc.charge_of[static_cast<std::size_t>(v)];
  }
  if (d == 0) d = 1;
  return {sum % d, d};
}

TotalCharge charge_of(const ConfigSpace& space, Code c, const Permutation& f) {
  return charge_of(space.decode(c), f);
}

SectorLabel label_of(const ConfigSpace& space, Code c, const Permutation& f) {
  const auto sites = space.decode(c);
  return {profile_of(sites, f), charge_of(sites, f)};
}

// ---------------------------------------------------------------------------

SectorPartition::SectorPartition(ConfigSpace space, std::vector<std::uint32_t> sector_of)
    : space_(std::move(space)), sector_of_(std::move(sector_of)) {
  if (sector_of_.size() != space_.size()) throw std::invalid_argument("sector assignment has the wrong size");
  for (Code c = 0; c < space_.size(); ++c) {
    const std::uint32_t id = sector_of_[c];
    if (id == representative_.size()) {
      representative_.push_back(c);
      size_.push_back(0);
    } else if (id > representative_.size()) {
      throw std::invalid_argument("sector ids must follow the minimal member encoding");
    }
    ++size_[id];
  }
}

std::vector<Code> SectorPartition::members(std::size_t id) const {
  std::vector<Code> out;
  out.reserve(size_[id]);
  for (Code c = representative_[id]; c < space_.size(); ++c)
    if (sector_of_[c] == id) out.push_back(c);
  return out;
}

bool SectorPartition::refines(const SectorPartition& coarser) const {
  if (!(space_ == coarser.space_)) return false;
  std::vector<std::int64_t> image(count(), -1);
  for (Code c = 0; c < space_.size(); ++c) {
    auto& slot = image[sector_of_[c]];
    const auto target = static_cast<std::int64_t>(coarser.sector_of_[c]);
    if (slot < 0) slot = target;
    else if (slot != target) return false;
  }
  return true;
}

namespace {

struct UnionFind {
  std::vector<Code> parent;

  explicit UnionFind(Code n) : parent(n) { std::iota(parent.begin(), parent.end(), Code{0}); }

  Code find(Code x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  // The smaller encoding always becomes the root.
  void unite(Code a, Code b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

}  // namespace

SectorPartition enumerate_sectors(const RateMatrix& m, const Limits& limits) {
  const ConfigSpace& space = m.space();
  if (space.size() > limits.max_enumeration_states)
    throw std::length_error("enumerate_sectors: " + std::to_string(space.size()) +
                            " configurations exceed the enumeration bound " +
                            std::to_string(limits.max_enumeration_states));
  UnionFind uf(space.size());
  if (m.has_bond_moves()) {
    for (const auto& move : m.bond_moves())
      for (Code c = 0; c < space.size(); ++c) uf.unite(c, move[c]);
  } else {
    const auto& rates = m.off_diagonal();
    for (std::int64_t col = 0; col < rates.outerSize(); ++col)
      for (SparseMatrix<Rational>::InnerIterator it(rates, col); it; ++it)
        uf.unite(static_cast<Code>(col), static_cast<Code>(it.row()));
  }
  std::vector<std::uint32_t> id_of_root(space.size(), UINT32_MAX);
  std::vector<std::uint32_t> sector_of(space.size());
  std::uint32_t next = 0;
  for (Code c = 0; c < space.size(); ++c) {
    const Code root = uf.find(c);
    if (id_of_root[root] == UINT32_MAX) id_of_root[root] = next++;
    sector_of[c] = id_of_root[root];
  }
  return SectorPartition(space, std::move(sector_of));
}

SectorPartition twisted_ssep_sectors(const Permutation& f, int L, const Limits& limits) {
  return enumerate_sectors(twisted_ssep_matrix(f, L), limits);
}

std::vector<Sector> describe_sectors(const SectorPartition& partition, const std::optional<Permutation>& f) {
  std::vector<Sector> out;
  for (std::size_t id = 0; id < partition.count(); ++id) {
    Sector s{id, partition.representative(id), BigInt(partition.size(id)), std::nullopt};
    if (f) s.label = label_of(partition.space(), s.representative, *f);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms

BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (long i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

BigInt factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  BigInt out = 1;
  for (long i = 2; i <= n; ++i) out *= i;
  return out;
}

BigInt count_sectors_closed_form(const Permutation& f, int L) {
  if (L < 2) throw std::invalid_argument("sector count formula needs L >= 2");
  const auto lengths = cycle_decomposition(f).lengths();
  const std::size_t n = lengths.size();
  if (n > 30) throw std::length_error("sector count formula: too many cycles for subset enumeration");
  BigInt total = 0;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    long g = 0;
    for (std::size_t s = 0; s < n; ++s)
      if (mask & (1ul << s)) g = std::gcd(g, static_cast<long>(lengths[s]));
    total += binomial(L - 1, __builtin_popcountl(mask) - 1) * g;
  }
  return total;
}

BigInt count_sectors_equal_cycles(long N, long d, int L) {
  if (L < 2) throw std::invalid_argument("sector count formula needs L >= 2");
  if (d < 1 || N < 1 || N % d != 0)
    throw std::invalid_argument("equal-cycle count: d = " + std::to_string(d) + " does not divide N = " +
                                std::to_string(N));
  return binomial(L + d - 1, L) * (N / d);
}

BigInt sector_cardinality_closed_form(const Permutation& f, const Profile& p) {
  const auto lengths = cycle_decomposition(f).lengths();
  if (p.counts.size() != lengths.size())
    throw std::invalid_argument("profile has " + std::to_string(p.counts.size()) + " species, twist has " +
                                std::to_string(lengths.size()));
  const int L = p.length();
  if (L < 2) throw std::invalid_argument("cardinality formula needs L >= 2");
  BigInt num = factorial(L);
  long g = 0;
  for (std::size_t s = 0; s < lengths.size(); ++s) {
    if (p.counts[s] < 0) throw std::invalid_argument("negative profile entry");
    num /= factorial(p.counts[s]);
    for (int k = 0; k < p.counts[s]; ++k) num *= lengths[s];
    if (p.counts[s] > 0) g = std::gcd(g, static_cast<long>(lengths[s]));
  }
  return num / g;
}

// ---------------------------------------------------------------------------
// Stationary states

RationalVector StationaryState::to_vector(Code dim) const {
  RationalVector v = RationalVector::Zero(dim);
  for (Code c : support) v(c) = weight;
  return v;
}

StationaryState stationary_state(const SectorPartition& partition, std::size_t id) {
  if (id >= partition.count()) throw std::out_of_range("no sector " + std::to_string(id));
  StationaryState s{id, partition.members(id), Rational(0)};
  s.weight = Rational(1, static_cast<long>(s.support.size()));
  return s;
}

CheckReport check_stationary(const RateMatrix& m, const StationaryState& s) {
  CheckReport report{.name = "stationary(sector " + std::to_string(s.sector) + ")"};
  const RationalVector v = s.to_vector(m.dim());
  const RationalVector mv = m.generator() * v;
  const auto& space = m.space();
  for (Code c = 0; c < m.dim(); ++c) {
    ++report.checked;
    if (mv(c) != 0) report.record("(M v)" + space.format(c) + " = " + to_string(mv(c)));
  }
  ++report.checked;
  if (v.sum() != 1) report.record("weights sum to " + to_string(v.sum()));
  return report;
}

// ---------------------------------------------------------------------------

CheckReport verify_sector_theory(const Permutation& f, int L, const Limits& limits) {
  const long N = f.size();
  CheckReport report{.name = "sector_theory(f=" + f.to_string() + ",L=" + std::to_string(L) + ")"};
  const SectorPartition part = twisted_ssep_sectors(f, L, limits);
  const ConfigSpace& space = part.space();

  // (a) orbits versus labels.
  std::vector<SectorLabel> labels;
  std::map<SectorLabel, std::size_t> sector_of_label;
  for (std::size_t id = 0; id < part.count(); ++id) {
    labels.push_back(label_of(space, part.representative(id), f));
    auto [it, fresh] = sector_of_label.emplace(labels.back(), id);
    ++report.checked;
    if (!fresh)
      report.record("(a) sectors " + std::to_string(it->second) + " and " + std::to_string(id) +
                    " share profile " + labels.back().profile.to_string() + " and charge " +
                    labels.back().charge.to_string());
  }
  for (Code c = 0; c < space.size(); ++c) {
    ++report.checked;
    const SectorLabel here = label_of(space, c, f);
    if (!(here == labels[part.sector_of(c)]))
      report.record("(a) " + space.format(c) + " has label " + here.profile.to_string() + "/" +
                    here.charge.to_string() + " unlike its sector");
  }

  // (b) count.
  const BigInt closed = count_sectors_closed_form(f, L);
  ++report.checked;
  if (closed != part.count())
    report.record("(b) " + std::to_string(part.count()) + " orbits, closed form " + closed.str());

  // (c) sizes.
  for (std::size_t id = 0; id < part.count(); ++id) {
    ++report.checked;
    const BigInt expected = sector_cardinality_closed_form(f, labels[id].profile);
    if (expected != part.size(id))
      report.record("(c) sector " + std::to_string(id) + " has " + std::to_string(part.size(id)) +
                    " members, formula " + expected.str());
  }

  // (d) equal cycles.
  const auto lengths = cycle_decomposition(f).lengths();
  if (std::all_of(lengths.begin(), lengths.end(), [&](int c) { return c == lengths.front(); })) {
    const long d = static_cast<long>(lengths.size());
    ++report.checked;
    if (count_sectors_equal_cycles(N, d, L) != closed)
      report.record("(d) equal-cycle count " + count_sectors_equal_cycles(N, d, L).str() +
                    " differs from the general formula " + closed.str());
    BigInt previous = -1;
    for (long div = 1; div <= N; ++div) {
      if (N % div) continue;
      const BigInt value = count_sectors_equal_cycles(N, div, L);
      ++report.checked;
      if (value <= previous)
        report.record("(d) count not increasing at d = " + std::to_string(div) + ": " + value.str());
      previous = value;
    }
  }

  // (e) extremes.
  ++report.checked;
  const BigInt ssep = binomial(N - 1 + L, N - 1);
  if (closed < N || closed > ssep)
    report.record("(e) count " + closed.str() + " outside [" + std::to_string(N) + ", " + ssep.str() + "]");
  return report;
}

}  // namespace ybmarkov
