#include "ybmarkov/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ybmarkov {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t i = 0; i < image_.size(); ++i) {
    const int v = image_[i];
    if (v < 0 || static_cast<std::size_t>(v) >= image_.size())
      throw std::invalid_argument("permutation: image of " + std::to_string(i) + " is " +
                                  std::to_string(v) + ", outside {0.." +
                                  std::to_string(image_.size()) + "-1}");
    if (seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("permutation: value " + std::to_string(v) +
                                  " appears twice in the image table");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 0) throw std::invalid_argument("permutation: negative size");
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  return Permutation(std::move(image));
}

Permutation Permutation::from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (const auto& cycle : cycles) {
    for (int v : cycle) {
      if (v < 0 || v >= n)
        throw std::invalid_argument("cycle value " + std::to_string(v) + " outside {0.." +
                                    std::to_string(n) + "-1}");
      if (used[static_cast<std::size_t>(v)])
        throw std::invalid_argument("cycle value " + std::to_string(v) + " listed twice");
      used[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t k = 0; k < cycle.size(); ++k)
      image[static_cast<std::size_t>(cycle[k])] = cycle[(k + 1) % cycle.size()];
  }
  return Permutation(std::move(image));
}

namespace {

std::vector<int> parse_int_list(std::string_view body, std::string_view whole) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("permutation '" + std::string(whole) +
                                  "': unexpected character '" + std::string(1, c) + "'");
    int v = 0;
    while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) {
      v = v * 10 + (body[i] - '0');
      ++i;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

Permutation Permutation::parse(std::string_view text, std::optional<int> n) {
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    throw std::invalid_argument("permutation: empty text");
  const std::string_view s = text.substr(first, last - first + 1);

  if (s.front() == '[') {
    if (s.back() != ']') throw std::invalid_argument("permutation '" + std::string(s) + "': missing ']'");
    auto image = parse_int_list(s.substr(1, s.size() - 2), s);
    if (n && static_cast<int>(image.size()) != *n)
      throw std::invalid_argument("permutation '" + std::string(s) + "': has " +
                                  std::to_string(image.size()) + " entries, expected " +
                                  std::to_string(*n));
    return Permutation(std::move(image));
  }

  std::vector<std::vector<int>> cycles;
  std::size_t i = 0;
  int largest = -1;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s[i] != '(')
      throw std::invalid_argument("permutation '" + std::string(s) + "': expected '(' at offset " +
                                  std::to_string(i));
    const auto close = s.find(')', i);
    if (close == std::string_view::npos)
      throw std::invalid_argument("permutation '" + std::string(s) + "': unbalanced '('");
    auto cycle = parse_int_list(s.substr(i + 1, close - i - 1), s);
    for (int v : cycle) largest = std::max(largest, v);
    cycles.push_back(std::move(cycle));
    i = close + 1;
  }
  const int size = n.value_or(largest + 1);
  return from_cycles(size, cycles);
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[static_cast<std::size_t>(image_[i])] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < image_.size(); ++i)
    if (image_[i] != static_cast<int>(i)) return false;
  return true;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  for (const auto& cycle : cycle_decomposition(*this).cycles) {
    os << '(';
    for (std::size_t k = 0; k < cycle.size(); ++k) os << (k ? " " : "") << cycle[k];
    os << ')';
  }
  return os.str();
}

std::string Permutation::to_image_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < image_.size(); ++k) os << (k ? "," : "") << image_[k];
  os << ']';
  return os.str();
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("compose: sizes " + std::to_string(p.size()) + " and " +
                                std::to_string(q.size()) + " differ");
  std::vector<int> image(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) image[static_cast<std::size_t>(i)] = p(q(i));
  return Permutation(std::move(image));
}

Permutation power(const Permutation& p, long k) {
  // Walk each cycle by k mod its length.
  std::vector<int> image(static_cast<std::size_t>(p.size()));
  for (const auto& cycle : cycle_decomposition(p).cycles) {
    const long c = static_cast<long>(cycle.size());
    const long shift = ((k % c) + c) % c;
    for (long j = 0; j < c; ++j)
      image[static_cast<std::size_t>(cycle[static_cast<std::size_t>(j)])] =
          cycle[static_cast<std::size_t>((j + shift) % c)];
  }
  return Permutation(std::move(image));
}

long order(const Permutation& p) {
  long result = 1;
  for (int c : cycle_decomposition(p).lengths()) result = std::lcm(result, static_cast<long>(c));
  return result;
}

std::vector<int> CycleDecomposition::lengths() const {
  std::vector<int> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(static_cast<int>(c.size()));
  return out;
}

Permutation CycleDecomposition::assemble() const { return Permutation::from_cycles(n, cycles); }

CycleDecomposition cycle_decomposition(const Permutation& p) {
  CycleDecomposition out;
  out.n = p.size();
  std::vector<bool> visited(static_cast<std::size_t>(p.size()), false);
  for (int start = 0; start < p.size(); ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    std::vector<int> cycle;
    for (int v = start; !visited[static_cast<std::size_t>(v)]; v = p(v)) {
      visited[static_cast<std::size_t>(v)] = true;
      cycle.push_back(v);
    }
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

int ChargeCoordinates::value(int species, int charge) const {
  const auto& cycle = value_at.at(static_cast<std::size_t>(species - 1));
  const int c = static_cast<int>(cycle.size());
  return cycle[static_cast<std::size_t>(((charge % c) + c) % c)];
}

ChargeCoordinates charge_coordinates(const Permutation& p) {
  ChargeCoordinates out;
  out.species_of.assign(static_cast<std::size_t>(p.size()), 0);
  out.charge_of.assign(static_cast<std::size_t>(p.size()), 0);
  int species = 0;
  for (const auto& cycle : cycle_decomposition(p).cycles) {
    ++species;
    out.cycle_lengths.push_back(static_cast<int>(cycle.size()));
    out.value_at.push_back(cycle);
    for (std::size_t e = 0; e < cycle.size(); ++e) {
      out.species_of[static_cast<std::size_t>(cycle[e])] = species;
      out.charge_of[static_cast<std::size_t>(cycle[e])] = static_cast<int>(e);
    }
  }
  return out;
}

long gcd_cycle_lengths(const Permutation& p, const std::set<int>& species) {
  if (species.empty()) throw std::invalid_argument("gcd_cycle_lengths: empty species set");
  const auto lengths = cycle_decomposition(p).lengths();
  long g = 0;
  for (int s : species) {
    if (s < 1 || s > static_cast<int>(lengths.size()))
      throw std::invalid_argument("gcd_cycle_lengths: unknown species " + std::to_string(s));
    g = std::gcd(g, static_cast<long>(lengths[static_cast<std::size_t>(s - 1)]));
  }
  return g;
}

std::optional<Permutation> lth_root(const Permutation& f, long L, int search_bound) {
  if (f.size() > search_bound)
    throw std::length_error("lth_root: alphabet of size " + std::to_string(f.size()) +
                            " exceeds the search bound " + std::to_string(search_bound));
  std::vector<int> image(static_cast<std::size_t>(f.size()));
  std::iota(image.begin(), image.end(), 0);
  do {
    Permutation g(image);
    if (power(g, L) == f) return g;
  } while (std::next_permutation(image.begin(), image.end()));
  return std::nullopt;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  do {
    out.emplace_back(image);
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

}  // namespace ybmarkov
