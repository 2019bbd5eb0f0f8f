#include "ybmarkov/quench.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ybmarkov/model_io.hpp"

namespace ybmarkov {

CheckReport BranchingMatrix::check_rows() const {
  CheckReport report{.name = "branching_rows"};
  for (Eigen::Index a = 0; a < prob.rows(); ++a) {
    Rational sum = 0;
    for (Eigen::Index b = 0; b < prob.cols(); ++b) {
      ++report.checked;
      if (prob(a, b) < 0 || prob(a, b) > 1)
        report.record("entry (" + std::to_string(a) + "," + std::to_string(b) + ") = " + to_string(prob(a, b)));
      sum += prob(a, b);
    }
    ++report.checked;
    if (sum != 1) report.record("row " + std::to_string(a) + " sums to " + to_string(sum));
  }
  return report;
}

BranchingMatrix branching_matrix(const SectorPartition& from, const SectorPartition& to) {
  if (!(from.space() == to.space()))
    throw std::invalid_argument("branching_matrix: sector partitions of different configuration spaces");
  const auto rows = static_cast<Eigen::Index>(from.count());
  const auto cols = static_cast<Eigen::Index>(to.count());
  BranchingMatrix b{from, to, Matrix<long long>::Zero(rows, cols), RationalMatrix::Zero(rows, cols)};
  for (Code c = 0; c < from.space().size(); ++c) ++b.intersections(from.sector_of(c), to.sector_of(c));
  for (Eigen::Index a = 0; a < rows; ++a)
    for (Eigen::Index g = 0; g < cols; ++g)
      if (b.intersections(a, g))
        b.prob(a, g) = Rational(b.intersections(a, g), static_cast<long long>(from.size(static_cast<std::size_t>(a))));
  return b;
}

BranchingMatrix branching_matrix(const Permutation& f1, const Permutation& f2, int L, const Limits& limits) {
  if (f1.size() != f2.size())
    throw std::invalid_argument("branching_matrix: twists act on alphabets of size " + std::to_string(f1.size()) +
                                " and " + std::to_string(f2.size()));
  return branching_matrix(twisted_ssep_sectors(f1, L, limits), twisted_ssep_sectors(f2, L, limits));
}

std::string to_string(SectorRelation r) {
  switch (r) {
    case SectorRelation::Equal: return "equal";
    case SectorRelation::Inclusion: return "inclusion";
    case SectorRelation::ReverseInclusion: return "reverse-inclusion";
    case SectorRelation::Disjoint: return "disjoint";
    case SectorRelation::Overlap: return "overlap";
  }
  return "?";
}

std::optional<long> power_exponent(const Permutation& p, const Permutation& base) {
  if (p.size() != base.size()) return std::nullopt;
  const long ord = order(base);
  Permutation acc = Permutation::identity(base.size());
  for (long k = 0; k < ord; ++k) {
    if (acc == p) return k;
    acc = compose(base, acc);
  }
  return std::nullopt;
}

namespace {

std::string verdict_of(const SectorPartition& from, const SectorPartition& to) {
  const bool fine = from.refines(to);
  const bool coarse = to.refines(from);
  if (fine && coarse) return "equal";
  if (fine) return "spreading";
  if (coarse) return "splitting";
  return "mixed";
}

}  // namespace

RelationReport classify_relation(const Permutation& f1, const Permutation& f2, int L, const Limits& limits) {
  const BranchingMatrix b = branching_matrix(f1, f2, L, limits);
  RelationReport rep;
  rep.power_check.name = "power_splitting";
  for (Eigen::Index a = 0; a < b.intersections.rows(); ++a) {
    std::vector<SectorRelation> row;
    const auto size_a = static_cast<long long>(b.from.size(static_cast<std::size_t>(a)));
    for (Eigen::Index g = 0; g < b.intersections.cols(); ++g) {
      const long long both = b.intersections(a, g);
      const auto size_g = static_cast<long long>(b.to.size(static_cast<std::size_t>(g)));
      SectorRelation r = SectorRelation::Overlap;
      if (both == 0) r = SectorRelation::Disjoint;
      else if (both == size_a && both == size_g) r = SectorRelation::Equal;
      else if (both == size_a) r = SectorRelation::Inclusion;
      else if (both == size_g) r = SectorRelation::ReverseInclusion;
      if (r == SectorRelation::Overlap) ++rep.overlap_pairs;
      row.push_back(r);
    }
    rep.relation.push_back(std::move(row));
  }
  rep.verdict = verdict_of(b.from, b.to);
  rep.reverse_verdict = verdict_of(b.to, b.from);

  if (const auto k = power_exponent(f1, f2)) {
    CheckReport& pc = rep.power_check;
    ++pc.checked;
    if (rep.verdict != "spreading" && rep.verdict != "equal")
      pc.record("f1 = f2^" + std::to_string(*k) + " but the f1 -> f2 quench is " + rep.verdict);
    // Splitting: prob(C2 -> C1_a) = |C1_a| / |C2| for every f1-sector inside C2.
    const BranchingMatrix back = branching_matrix(b.to, b.from);
    const ConfigSpace& space = b.from.space();
    for (Eigen::Index g = 0; g < back.prob.rows(); ++g)
      for (Eigen::Index a = 0; a < back.prob.cols(); ++a) {
        if (back.intersections(g, a) == 0) continue;
        ++pc.checked;
        const Profile pa = profile_of(space, b.from.representative(static_cast<std::size_t>(a)), f1);
        const Profile pg = profile_of(space, b.to.representative(static_cast<std::size_t>(g)), f2);
        const Rational expected(sector_cardinality_closed_form(f1, pa), sector_cardinality_closed_form(f2, pg));
        if (back.prob(g, a) != expected)
          pc.record("prob(C2_" + std::to_string(g) + " -> C1_" + std::to_string(a) + ") = " +
                    to_string(back.prob(g, a)) + ", cardinality ratio " + to_string(expected));
      }
  }
  return rep;
}

bool ssep_inclusion_condition(const std::vector<int>& fine, const Profile& p2, const TotalCharge& e2,
                              const Permutation& f2) {
  const ChargeCoordinates cc = charge_coordinates(f2);
  if (static_cast<int>(fine.size()) != f2.size() ||
      static_cast<int>(p2.counts.size()) != cc.species_count())
    return false;
  long charge = 0;
  long d = 0;
  for (int s = 1; s <= cc.species_count(); ++s) {
    long total = 0;
    for (int e = 0; e < cc.cycle_length(s); ++e) {
      const int count = fine[static_cast<std::size_t>(cc.value(s, e))];
      total += count;
      charge += static_cast<long>(e) * count;
    }
    if (total != p2.counts[static_cast<std::size_t>(s - 1)]) return false;
    if (total > 0) d = std::gcd(d, static_cast<long>(cc.cycle_length(s)));
  }
  if (d == 0 || e2.modulus != d) return false;
  return charge % d == e2.value % d;
}

namespace {

long mod(long a, long m) { return ((a % m) + m) % m; }

Rational pow_inverse(long base, int exponent) {
  BigInt den = 1;
  for (int i = 0; i < exponent; ++i) den *= base;
  return Rational(BigInt(1), den);
}

}  // namespace

Rational closed_form_branching_fullcycle_square(long N, int L, long k, int p2, int p3, long l) {
  if (N <= 0 || N % 2 != 0) throw std::invalid_argument("full-cycle square branching needs N even");
  if (p2 < 0 || p3 < 0 || p2 + p3 != L || L < 1)
    throw std::invalid_argument("full-cycle square branching needs p2 + p3 = L");
  if (mod(k, N) != mod(2 * l + p3, N)) return 0;
  return Rational(factorial(L) / (factorial(p2) * factorial(p3))) * pow_inverse(2, L - 1);
}

Rational closed_form_branching_power(long N, long D, int L, long k, const std::vector<int>& profile, long l) {
  if (D < 1 || N < 1 || N % D != 0) throw std::invalid_argument("power branching needs N = (n-1) D");
  const long n1 = N / D;
  if (static_cast<long>(profile.size()) != n1)
    throw std::invalid_argument("power branching: profile needs " + std::to_string(n1) + " entries");
  if (L < 1 || std::accumulate(profile.begin(), profile.end(), 0) != L ||
      std::any_of(profile.begin(), profile.end(), [](int p) { return p < 0; }))
    throw std::invalid_argument("power branching: profile must be nonnegative and sum to L");
  long weighted = 0;
  BigInt multinomial = factorial(L);
  for (std::size_t j = 0; j < profile.size(); ++j) {
    weighted += static_cast<long>(j) * profile[j];
    multinomial /= factorial(profile[j]);
  }
  if (mod(n1 * l + weighted, N) != mod(k, N)) return 0;
  return Rational(multinomial) * pow_inverse(n1, L - 1);
}

CheckReport check_power_closed_form(long N, long n_minus_1, int L, const Limits& limits) {
  if (n_minus_1 < 1 || N % n_minus_1 != 0)
    throw std::invalid_argument("check_power_closed_form: exponent must divide N");
  std::vector<int> image(static_cast<std::size_t>(N));
  for (long v = 0; v < N; ++v) image[static_cast<std::size_t>(v)] = static_cast<int>((v + 1) % N);
  const Permutation f1(image);
  const Permutation f2 = power(f1, n_minus_1);
  const long D = N / n_minus_1;
  const BranchingMatrix b = branching_matrix(f1, f2, L, limits);
  const ConfigSpace& space = b.from.space();

  CheckReport report{.name = "closed_form(N=" + std::to_string(N) + ",n-1=" + std::to_string(n_minus_1) +
                             ",L=" + std::to_string(L) + ")"};
  report.absorb(b.check_rows());
  for (Eigen::Index a = 0; a < b.prob.rows(); ++a) {
    const TotalCharge ka = charge_of(space, b.from.representative(static_cast<std::size_t>(a)), f1);
    for (Eigen::Index g = 0; g < b.prob.cols(); ++g) {
      const SectorLabel lg = label_of(space, b.to.representative(static_cast<std::size_t>(g)), f2);
      Rational expected = closed_form_branching_power(N, D, L, ka.value, lg.profile.counts, lg.charge.value);
      ++report.checked;
      if (n_minus_1 == 2) {
        const Rational square = closed_form_branching_fullcycle_square(
            N, L, ka.value, lg.profile.counts[0], lg.profile.counts[1], lg.charge.value);
        if (square != expected)
          report.record("square and power closed forms disagree at (" + std::to_string(a) + "," +
                        std::to_string(g) + ")");
      }
      if (b.prob(a, g) != expected)
        report.record("k=" + std::to_string(ka.value) + " profile " + lg.profile.to_string() + " l=" +
                      std::to_string(lg.charge.value) + ": intersection gives " + to_string(b.prob(a, g)) +
                      ", closed form " + to_string(expected));
    }
  }
  return report;
}

SectorChainResult oscillation_chain(const Permutation& f1, const Permutation& f2, int L, std::size_t start,
                                    std::size_t switches, const Limits& limits) {
  SectorChainResult r{branching_matrix(f1, f2, L, limits), {}, {}, start, {}, {}, {}};
  r.backward = branching_matrix(r.forward.to, r.forward.from);
  const auto n = static_cast<Eigen::Index>(r.forward.from.count());
  if (start >= static_cast<std::size_t>(n)) throw std::out_of_range("oscillation_chain: no such start sector");
  r.transition = r.forward.prob * r.backward.prob;

  // Distributions are row vectors: p_{k+1} = p_k T.
  RationalVector p = RationalVector::Zero(n);
  p(static_cast<Eigen::Index>(start)) = 1;
  r.history.push_back(p);
  for (std::size_t k = 0; k < switches; ++k) {
    p = (p.transpose() * r.transition).transpose();
    r.history.push_back(p);
  }

  // Sectors reachable from start through nonzero transitions.
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{static_cast<Eigen::Index>(start)};
  reached[start] = true;
  while (!stack.empty()) {
    const Eigen::Index a = stack.back();
    stack.pop_back();
    for (Eigen::Index c = 0; c < n; ++c)
      if (!reached[static_cast<std::size_t>(c)] && r.transition(a, c) != 0) {
        reached[static_cast<std::size_t>(c)] = true;
        stack.push_back(c);
      }
  }
  r.fixed_point = RationalVector::Zero(n);
  long long total = 0;
  for (Eigen::Index a = 0; a < n; ++a)
    if (reached[static_cast<std::size_t>(a)]) total += static_cast<long long>(r.forward.from.size(static_cast<std::size_t>(a)));
  for (Eigen::Index a = 0; a < n; ++a)
    if (reached[static_cast<std::size_t>(a)])
      r.fixed_point(a) = Rational(static_cast<long long>(r.forward.from.size(static_cast<std::size_t>(a))), total);

  CheckReport& fc = r.fixed_point_check;
  fc.name = "oscillation_fixed_point";
  const RationalVector image = (r.fixed_point.transpose() * r.transition).transpose();
  for (Eigen::Index a = 0; a < n; ++a) {
    ++fc.checked;
    if (image(a) != r.fixed_point(a)) fc.record("fixed point moves at sector " + std::to_string(a));
    for (Eigen::Index c = a + 1; c < n; ++c) {
      ++fc.checked;
      if (r.fixed_point(a) * r.transition(a, c) != r.fixed_point(c) * r.transition(c, a))
        fc.record("detailed balance fails between sectors " + std::to_string(a) + " and " + std::to_string(c));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Quench schedules

QuenchSchedule parse_quench_schedule(std::istream& in) {
  QuenchSchedule s;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> ParseError { return ParseError(msg, lineno, 1); };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string key;
    if (!(words >> key)) continue;
    if (key == "N" || key == "L") {
      int value = 0;
      if (!(words >> value) || value < 1) throw fail("expected a positive integer after " + key);
      (key == "N" ? s.n : s.L) = value;
    } else if (key == "initial") {
      std::string kind, rest;
      words >> kind;
      std::getline(words, rest);
      rest.erase(0, rest.find_first_not_of(" \t"));
      if (kind == "config") {
        std::vector<int> sites;
        std::string item;
        std::istringstream items(rest);
        while (std::getline(items, item, ',')) {
          try {
            sites.push_back(std::stoi(item));
          } catch (const std::exception&) {
            throw fail("malformed configuration entry '" + item + "'");
          }
        }
        s.initial_config = std::move(sites);
      } else if (kind == "sector") {
        try {
          s.initial_sector = static_cast<std::size_t>(std::stoul(rest));
        } catch (const std::exception&) {
          throw fail("expected a sector id");
        }
      } else {
        throw fail("expected 'initial config ...' or 'initial sector ...'");
      }
    } else if (key == "step") {
      if (s.n == 0) throw fail("N must be given before the first step");
      std::string rest;
      std::getline(words, rest);
      const auto twist_at = rest.find("twist=");
      if (twist_at == std::string::npos) throw fail("step needs twist=<permutation>");
      const auto mode_at = std::min(rest.find("until="), rest.find("time="));
      if (mode_at == std::string::npos || mode_at < twist_at) throw fail("step needs until=stationary or time=<t> after the twist");
      QuenchStep step;
      try {
        step.twist = Permutation::parse(rest.substr(twist_at + 6, mode_at - twist_at - 6), s.n);
      } catch (const std::invalid_argument& e) {
        throw fail(e.what());
      }
      std::istringstream mode(rest.substr(mode_at));
      std::string token;
      mode >> token;
      if (token == "until=stationary") {
      } else if (token.rfind("time=", 0) == 0) {
        try {
          step.duration = std::stod(token.substr(5));
        } catch (const std::exception&) {
          throw fail("malformed time '" + token + "'");
        }
        if (!(*step.duration >= 0)) throw fail("time must be >= 0");
      } else {
        throw fail("unknown step mode '" + token + "'");
      }
      s.steps.push_back(std::move(step));
    } else {
      throw fail("unknown directive '" + key + "'");
    }
  }
  if (s.n == 0 || s.L == 0) throw ParseError("schedule needs N and L", lineno, 1);
  if (s.steps.empty()) throw ParseError("schedule has no steps", lineno, 1);
  if (s.initial_config.has_value() == s.initial_sector.has_value())
    throw ParseError("schedule needs exactly one of 'initial config' and 'initial sector'", lineno, 1);
  if (s.initial_config && static_cast<int>(s.initial_config->size()) != s.L)
    throw ParseError("initial configuration must have L sites", lineno, 1);
  return s;
}

std::vector<QuenchStepResult> run_quench_schedule(const QuenchSchedule& schedule, double tol, const Limits& limits) {
  const ConfigSpace space(schedule.n, schedule.L);
  std::optional<RationalVector> exact = RationalVector::Zero(space.size());
  if (schedule.initial_config) {
    (*exact)(space.encode(*schedule.initial_config)) = 1;
  } else {
    const SectorPartition first = twisted_ssep_sectors(schedule.steps.front().twist, schedule.L, limits);
    *exact = stationary_state(first, *schedule.initial_sector).to_vector(space.size());
  }
  ProbabilityVector approx = exact->cast<double>();

  std::vector<QuenchStepResult> out;
  for (std::size_t i = 0; i < schedule.steps.size(); ++i) {
    const QuenchStep& step = schedule.steps[i];
    const RateMatrix m = twisted_ssep_matrix(step.twist, schedule.L);
    QuenchStepResult r{i, step.twist, step.duration, enumerate_sectors(m, limits), std::nullopt, {}};
    if (!step.duration && exact) {
      const SectorMixture mix = long_time_limit(*exact, r.sectors);
      *exact = mix.state();
      approx = exact->cast<double>();
      r.exact_weights = mix.weights;
    } else if (!step.duration) {
      const auto w = sector_weights(r.sectors, approx);
      for (Code c = 0; c < space.size(); ++c)
        approx(c) = w[r.sectors.sector_of(c)] / static_cast<double>(r.sectors.size(r.sectors.sector_of(c)));
    } else {
      exact.reset();
      approx = evolve(m, approx, *step.duration, tol);
    }
    r.weights = sector_weights(r.sectors, approx);
    if (r.exact_weights)
      for (std::size_t k = 0; k < r.weights.size(); ++k) r.weights[k] = (*r.exact_weights)[k].convert_to<double>();
    out.push_back(std::move(r));
  }
  return out;
}

void write_quench_csv(std::ostream& out, const std::vector<QuenchStepResult>& results) {
  out << "step,twist,mode,sector,representative,profile,charge,size,weight\n";
  for (const auto& r : results) {
    const ConfigSpace& space = r.sectors.space();
    const std::string mode = r.duration ? "time=" + std::to_string(*r.duration) : "until=stationary";
    for (std::size_t id = 0; id < r.sectors.count(); ++id) {
      const SectorLabel label = label_of(space, r.sectors.representative(id), r.twist);
      out << r.step << ",\"" << r.twist.to_string() << "\"," << mode << ',' << id << ",\""
          << space.format(r.sectors.representative(id)) << "\",\"" << label.profile.to_string() << "\",\""
          << label.charge.to_string() << "\"," << r.sectors.size(id) << ',';
      if (r.exact_weights) out << to_string((*r.exact_weights)[id]);
      else out << std::setprecision(17) << r.weights[id];
      out << '\n';
    }
  }
}

}  // namespace ybmarkov
