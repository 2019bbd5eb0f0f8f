// ybmarkov: command-line front end.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "ybmarkov/dynamics.hpp"
#include "ybmarkov/markov.hpp"
#include "ybmarkov/model_io.hpp"
#include "ybmarkov/quench.hpp"
#include "ybmarkov/repro.hpp"
#include "ybmarkov/sectors.hpp"
#include "ybmarkov/yang_baxter.hpp"

using namespace ybmarkov;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::size_t max_states = Limits{}.max_dense_states;
  double tol = 1e-12;
  std::uint64_t seed = 1;
  std::string format = "table";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  Limits limits() const {
    Limits l;
    l.max_dense_states = max_states;
    return l;
  }
};

// Rows of strings, printed as an aligned table, CSV or a JSON array of
// objects keyed by the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Plain integers and decimals become JSON numbers; rationals stay "p/q" strings.
json json_value(const std::string& s) {
  if (s.empty()) return s;
  long long i = 0;
  const char* end = s.data() + s.size();
  if (auto [p, ec] = std::from_chars(s.data(), end, i); ec == std::errc() && p == end) return i;
  double d = 0;
  if (auto [p, ec] = std::from_chars(s.data(), end, d); ec == std::errc() && p == end && std::isfinite(d)) return d;
  return s;
}

void print(const Table& t, const std::string& format, std::ostream& os = std::cout) {
  if (format == "csv") {
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << csv_field(t.header[i]);
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << '\n';
    }
  } else if (format == "json") {
    json arr = json::array();
    for (const auto& row : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = json_value(row[i]);
      arr.push_back(obj);
    }
    os << arr.dump(2) << '\n';
  } else {
    std::vector<std::size_t> width(t.header.size());
    for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
    for (const auto& row : t.rows)
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    auto line = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "  " : "") << row[i];
        if (i + 1 < row.size()) os << std::string(width[i] - row[i].size(), ' ');
      }
      os << '\n';
    };
    line(t.header);
    for (const auto& row : t.rows) line(row);
  }
}

std::string first_witness(const CheckReport& r) { return r.violations.empty() ? "" : r.violations.front(); }

void add_check(Table& t, const CheckReport& r) {
  t.rows.push_back({r.name, std::to_string(r.checked), std::to_string(r.violation_count),
                    r.passed() ? "pass" : "FAIL", first_witness(r)});
}

Table check_table() { return {{"check", "checked", "violations", "status", "witness"}, {}}; }

bool all_pass(const Table& t) {
  return std::all_of(t.rows.begin(), t.rows.end(), [](const auto& row) { return row[3] == "pass"; });
}

// A model from a file, or inline text when the argument is not a file.
ModelSpec read_model(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_model_file(arg);
  if (arg.find('=') != std::string::npos || arg.find(':') != std::string::npos) return parse_model(arg);
  throw std::runtime_error("no such model file '" + arg + "'");
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

Code parse_config(const ConfigSpace& space, const std::string& text) {
  std::vector<int> sites;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) sites.push_back(std::stoi(item));
  return space.encode(sites);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrable Markov models from set-theoretical Yang-Baxter solutions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--max-states", g.max_states, "Bound on N^L for dense work")->capture_default_str();
  app.add_option("--tol", g.tol, "Floating-point tolerance")->capture_default_str();
  app.add_option("--seed", g.seed, "Base seed for sampling")->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string model_arg;
  std::optional<int> length;
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("model", model_arg, "Model file, or inline model text")->required();
    sub->add_option("-L,--length", length, "Lattice length (overrides the model's L)");
  };

  auto* verify = app.add_subcommand("verify", "Braided YBE, involutivity, family relations, spectral YBE");
  add_model(verify);

  auto* integrability = app.add_subcommand("integrability", "Transfer-matrix commutation and M = t(0)^-1 t'(0)");
  add_model(integrability);

  bool show_members = false;
  auto* sectors = app.add_subcommand("sectors", "Enumerate sectors with profile and charge labels");
  add_model(sectors);
  sectors->add_flag("--members", show_members, "List every member");

  std::string twist_text;
  long count_n = 0, count_d = 0;
  auto* count = app.add_subcommand("count", "Closed-form sector counts, checked against enumeration");
  count->add_option("--twist", twist_text, "Twist permutation");
  count->add_option("-N", count_n, "Alphabet size for --cycles");
  count->add_option("-d,--cycles", count_d, "Number of equal cycles");
  count->add_option("-L,--length", length, "Lattice length")->required();

  std::optional<std::size_t> sector_id;
  auto* stationary = app.add_subcommand("stationary", "Uniform stationary states, checked exactly");
  add_model(stationary);
  stationary->add_option("--sector", sector_id, "Only this sector");

  std::string from_text, to_text;
  auto* branch = app.add_subcommand("branch", "Branching probabilities between two twists");
  branch->add_option("--from", from_text, "Twist before the quench")->required();
  branch->add_option("--to", to_text, "Twist after the quench")->required();
  branch->add_option("-L,--length", length, "Lattice length")->required();
  branch->add_option("-N", count_n, "Alphabet size (default: from the twists)");

  std::string schedule_path;
  auto* quench = app.add_subcommand("quench", "Run a quench schedule and print sector weights as CSV");
  quench->add_option("--schedule", schedule_path, "Schedule file")->required()->check(CLI::ExistingFile);

  std::string init_text;
  double t_max = 10;
  int steps = 10;
  auto* evolve_cmd = app.add_subcommand("evolve", "Master-equation evolution from a configuration");
  add_model(evolve_cmd);
  evolve_cmd->add_option("--init", init_text, "Initial configuration, e.g. 0,0,1")->required();
  evolve_cmd->add_option("--t-max", t_max, "Final time")->capture_default_str();
  evolve_cmd->add_option("--steps", steps, "Number of output times")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "Kinetic Monte Carlo event log");
  add_model(sample);
  sample->add_option("--init", init_text, "Initial configuration, e.g. 0,0,1")->required();
  sample->add_option("--t-max", t_max, "Final time")->capture_default_str();

  auto* repro = app.add_subcommand("repro", "Run every acceptance check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Limits limits = g.limits();

    if (*verify) {
      const ModelSpec spec = read_model(model_arg);
      const TwoSiteMap m = spec.bulk_map();
      Table t = check_table();
      add_check(t, check_involutive(m));
      add_check(t, check_braided_ybe(m, kDefaultViolationCap, g.threads));
      if (spec.family) add_check(t, check_family_relations(*spec.family));
      add_check(t, check_spectral_ybe_grid(m, spectral_grid()));
      print(t, g.format);
      return all_pass(t) ? 0 : 1;
    }

    if (*integrability) {
      const ModelSpec spec = read_model(model_arg);
      const int L = spec.length(length);
      const TwoSiteMap m = spec.bulk_map();
      std::optional<Permutation> twist = spec.twist;
      if (twist && twist->is_identity()) twist.reset();
      Table t = check_table();
      const TransferMatrix tm(m, L, twist, limits);
      add_check(t, check_transfer_commutation(tm, commutation_grid(L)));
      add_check(t, check_hamiltonian_extraction(m, L, twist, limits));
      if (spec.twist) {
        CheckReport tw{.name = "integrable_twist"};
        for (const auto& u : spectral_grid())
          for (const auto& v : spectral_grid())
            if (u - v != -1) tw.absorb(check_integrable_twist(m, *spec.twist, u, v));
        add_check(t, tw);
      }
      if (spec.kind == ModelSpec::Kind::Lyubashenko && !spec.twist)
        add_check(t, check_conjugation_identity(*spec.g, L, limits));
      if (spec.family) add_check(t, check_local_conjugation(*spec.family, L));
      print(t, g.format);
      return all_pass(t) ? 0 : 1;
    }

    if (*sectors) {
      const ModelSpec spec = read_model(model_arg);
      const RateMatrix m = spec.generator(length);
      const SectorPartition part = enumerate_sectors(m, limits);
      // Profile/charge labels are meaningful for twisted SSEPs only.
      std::optional<Permutation> label_twist;
      if (spec.kind == ModelSpec::Kind::TwistedSsep) label_twist = spec.twist;
      Table t{{"id", "representative", "profile", "charge", "size"}, {}};
      if (show_members) t.header.push_back("members");
      for (const auto& s : describe_sectors(part, label_twist)) {
        std::vector<std::string> row{std::to_string(s.id), part.space().format(s.representative),
                                     s.label ? s.label->profile.to_string() : "-",
                                     s.label ? s.label->charge.to_string() : "-", s.size.str()};
        if (show_members) {
          std::string members;
          for (Code c : part.members(s.id)) members += (members.empty() ? "" : " ") + part.space().format(c);
          row.push_back(members);
        }
        t.rows.push_back(std::move(row));
      }
      print(t, g.format);
      return 0;
    }

    if (*count) {
      const int L = *length;
      Table t{{"twist", "L", "closed_form", "enumerated", "status"}, {}};
      if (!twist_text.empty()) {
        const Permutation f = Permutation::parse(twist_text, count_n > 0 ? std::optional<int>(static_cast<int>(count_n)) : std::nullopt);
        const BigInt closed = count_sectors_closed_form(f, L);
        std::string enumerated = "-", status = "pass";
        const double states = std::pow(static_cast<double>(f.size()), L);
        if (states <= static_cast<double>(limits.max_enumeration_states)) {
          const auto n = twisted_ssep_sectors(f, L, limits).count();
          enumerated = std::to_string(n);
          if (closed != n) status = "FAIL";
        }
        t.rows.push_back({f.to_string(), std::to_string(L), closed.str(), enumerated, status});
      } else if (count_n > 0) {
        for (long d = 1; d <= count_n; ++d) {
          if (count_n % d) continue;
          if (count_d > 0 && d != count_d) continue;
          t.rows.push_back({"N=" + std::to_string(count_n) + " d=" + std::to_string(d), std::to_string(L),
                            count_sectors_equal_cycles(count_n, d, L).str(), "-", "pass"});
        }
      } else {
        throw CLI::ValidationError("count needs --twist or -N");
      }
      print(t, g.format);
      return std::all_of(t.rows.begin(), t.rows.end(), [](const auto& r) { return r[4] == "pass"; }) ? 0 : 1;
    }

    if (*stationary) {
      const ModelSpec spec = read_model(model_arg);
      const RateMatrix m = spec.generator(length);
      const SectorPartition part = enumerate_sectors(m, limits);
      Table t{{"sector", "size", "weight", "M_v_zero", "currents_zero"}, {}};
      bool ok = true;
      for (std::size_t id = 0; id < part.count(); ++id) {
        if (sector_id && *sector_id != id) continue;
        const StationaryState s = stationary_state(part, id);
        const CheckReport a = check_stationary(m, s);
        const CheckReport b = check_currents(m, s.to_vector(m.dim()));
        ok = ok && a.passed() && b.passed();
        t.rows.push_back({std::to_string(id), std::to_string(s.support.size()), to_string(s.weight),
                          a.passed() ? "pass" : "FAIL", b.passed() ? "pass" : "FAIL"});
      }
      if (sector_id && t.rows.empty()) throw std::out_of_range("no sector " + std::to_string(*sector_id));
      print(t, g.format);
      return ok ? 0 : 1;
    }

    if (*branch) {
      std::optional<int> n;
      if (count_n > 0) n = static_cast<int>(count_n);
      Permutation f1 = Permutation::parse(from_text, n);
      Permutation f2 = Permutation::parse(to_text, n);
      if (!n) {
        const int size = std::max(f1.size(), f2.size());
        f1 = Permutation::parse(from_text, size);
        f2 = Permutation::parse(to_text, size);
      }
      const BranchingMatrix b = branching_matrix(f1, f2, *length, limits);
      const RelationReport rel = classify_relation(f1, f2, *length, limits);
      const ConfigSpace& space = b.from.space();
      Table t{{"from_sector", "from_label", "to_sector", "to_label", "relation", "probability"}, {}};
      for (Eigen::Index a = 0; a < b.prob.rows(); ++a)
        for (Eigen::Index c = 0; c < b.prob.cols(); ++c) {
          const SectorLabel la = label_of(space, b.from.representative(static_cast<std::size_t>(a)), f1);
          const SectorLabel lc = label_of(space, b.to.representative(static_cast<std::size_t>(c)), f2);
          t.rows.push_back({std::to_string(a), la.profile.to_string() + " " + la.charge.to_string(), std::to_string(c),
                            lc.profile.to_string() + " " + lc.charge.to_string(),
                            to_string(rel.relation[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)]),
                            to_string(b.prob(a, c))});
        }
      print(t, g.format);
      const CheckReport rows = b.check_rows();
      if (g.format == "table") {
        std::cout << "verdict: " << rel.verdict << " (reverse: " << rel.reverse_verdict << "), overlapping pairs: "
                  << rel.overlap_pairs << ", rows sum to 1: " << (rows.passed() ? "yes" : "NO") << '\n';
      }
      return rows.passed() && rel.power_check.passed() ? 0 : 1;
    }

    if (*quench) {
      std::ifstream in(schedule_path);
      const QuenchSchedule schedule = parse_quench_schedule(in);
      write_quench_csv(std::cout, run_quench_schedule(schedule, g.tol, limits));
      return 0;
    }

    if (*evolve_cmd) {
      const ModelSpec spec = read_model(model_arg);
      const RateMatrix m = spec.generator(length);
      const ConfigSpace& space = m.space();
      const SectorPartition part = enumerate_sectors(m, limits);
      ProbabilityVector p = point_mass(space.size(), parse_config(space, init_text));
      Table t{{"time"}, {}};
      for (std::size_t id = 0; id < part.count(); ++id) t.header.push_back("sector_" + std::to_string(id));
      for (int i = 0; i < space.length(); ++i)
        for (int v = 0; v < space.alphabet(); ++v)
          t.header.push_back("site" + std::to_string(i + 1) + "_value" + std::to_string(v));
      double now = 0;
      for (int k = 0; k <= steps; ++k) {
        const double target = t_max * k / std::max(steps, 1);
        p = evolve(m, p, target - now, g.tol);
        now = target;
        std::vector<std::string> row{fmt_double(now)};
        for (double w : sector_weights(part, p)) row.push_back(fmt_double(w));
        std::vector<double> occ(static_cast<std::size_t>(space.length() * space.alphabet()), 0.0);
        for (Code c = 0; c < space.size(); ++c)
          for (int i = 0; i < space.length(); ++i)
            occ[static_cast<std::size_t>(i * space.alphabet() + space.site(c, i))] += p(c);
        for (double o : occ) row.push_back(fmt_double(o));
        t.rows.push_back(std::move(row));
      }
      print(t, g.format == "table" ? "csv" : g.format);
      return 0;
    }

    if (*sample) {
      const ModelSpec spec = read_model(model_arg);
      const RateMatrix m = spec.generator(length);
      const ConfigSpace& space = m.space();
      const Trajectory traj = sample_trajectory(m, parse_config(space, init_text), t_max, g.seed);
      Table t{{"time", "bond", "from", "to"}, {}};
      for (const auto& e : traj.events)
        t.rows.push_back({fmt_double(e.time), std::to_string(e.bond), space.format(e.from), space.format(e.to)});
      print(t, g.format == "table" ? "csv" : g.format);
      return 0;
    }

    if (*repro) {
      ReproOptions opt;
      opt.limits = limits;
      opt.threads = g.threads;
      opt.tol = g.tol;
      const ReproReport r = run_repro_suite(opt);
      Table t{{"id", "description", "source", "expected", "computed", "status", "seconds"}, {}};
      for (const auto& c : r.checks) {
        std::ostringstream secs;
        secs << std::fixed << std::setprecision(2) << c.seconds;
        t.rows.push_back({c.id, c.description, c.source, c.expected, c.computed, c.passed ? "pass" : "FAIL", secs.str()});
      }
      print(t, g.format);
      return r.all_passed() ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << (model_arg.empty() ? schedule_path : model_arg) << ":" << e.what() << '\n';
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
