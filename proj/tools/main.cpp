// Command-line front end. Exit codes follow one convention everywhere:
//   0 = holds / valid, 1 = falsified / invalid, 2 = bad input or I/O,
//   3 = inconclusive. Falsified and inconclusive are never conflated.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omlattice/checker.hpp"
#include "omlattice/families.hpp"
#include "omlattice/greechie.hpp"
#include "omlattice/lattice.hpp"
#include "omlattice/states.hpp"
#include "omlattice/term.hpp"
#include "omlattice/version.hpp"

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFalsified = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInconclusive = 3;

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  ss << in.rdbuf();
  return ss.str();
}

// Shared lattice source: either --builtin NAME or a diagram file ('-' reads
// standard input). Returns the lattice plus a display name.
struct lattice_source {
  std::string file;
  std::string builtin;

  void add_options(CLI::App* cmd) {
    cmd->add_option("file", file, "diagram file ('-' for stdin)");
    cmd->add_option("--builtin", builtin, "built-in lattice: O6, MO2, Chain2, Boolean(n)");
  }

  std::pair<oml::lattice, std::string> load() const {
    if (!builtin.empty() && !file.empty())
      throw std::runtime_error("give either a diagram file or --builtin, not both");
    if (!builtin.empty()) return {oml::make_builtin(builtin), builtin};
    if (file.empty()) throw std::runtime_error("need a diagram file or --builtin");
    return {oml::build(oml::parse(read_input(file))), file == "-" ? "stdin" : file};
  }
};

int run_validate(const std::string& path, bool quiet) {
  oml::diagram d;
  try {
    d = oml::parse(read_input(path));
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitBadInput;
  }
  auto report = oml::validate(d);
  if (!quiet) {
    for (const auto& entry : report.entries) {
      std::cout << "condition (" << static_cast<int>(entry.condition) << "): "
                << (entry.pass ? "pass" : "FAIL") << "\n";
      for (const auto& f : entry.failures)
        std::cout << "  - " << f.detail << "\n";
    }
  }
  if (!report.pass) {
    std::cout << "invalid: " << report.summary() << "\n";
    return kExitFalsified;
  }
  auto loops = oml::find_loops(d, 4);
  if (!loops.empty()) {
    std::cout << "valid Greechie diagram, but " << loops.size()
              << " loop(s) of order <= 4: pasting is not a lattice\n";
    return kExitFalsified;
  }
  std::cout << "valid: " << d.atom_count() << " atoms, " << d.block_count()
            << " blocks, no loop of order <= 4\n";
  return kExitHolds;
}

int verdict_exit(const oml::verdict& v) {
  switch (v.status) {
    case oml::verdict_status::holds: return kExitHolds;
    case oml::verdict_status::falsified: return kExitFalsified;
    case oml::verdict_status::inconclusive: return kExitInconclusive;
  }
  return kExitBadInput;
}

void print_verdict(const std::string& lattice_name, std::size_t size,
                   const oml::inference& inf, const oml::verdict& v) {
  std::cout << "lattice: " << lattice_name << " (" << size << " elements)\n";
  std::cout << "family: " << inf.name << "\n";
  std::cout << "verdict: " << oml::to_string(v.status) << "\n";
  if (!v.counterexample.empty()) {
    std::cout << "counterexample:";
    for (const auto& [var, val] : v.counterexample) std::cout << " " << var << "=" << val;
    std::cout << "\n";
  }
  std::cout << "assignments examined: " << v.assignments_examined << "\n";
}

// Fallback verdict-cache location; an explicit --cache or manifest entry wins.
std::string default_cache_path() {
  const char* dir = std::getenv("OMLATTICE_CACHE_DIR");
  if (!dir || !*dir) return {};
  return std::string(dir) + "/verdicts.cache";
}

void print_state(const oml::state_lp& slp, const std::vector<oml::rational>& point) {
  for (int j = 0; j < slp.vars(); ++j)
    std::cout << "  " << slp.var_names()[j] << " = " << point[j].get_str() << "\n";
}

// One manifest job: a lattice source, a family, a strategy and an output
// file for the report block.
struct run_job {
  std::string id;
  std::string lattice_file;
  std::string builtin;
  std::string family;
  std::string mode = "exhaustive";
  std::uint64_t budget = 50'000'000;
  std::uint64_t seed = 1;
  std::string output;
};

struct run_manifest {
  unsigned workers = 1;
  std::string cache;
  std::vector<run_job> jobs;
};

// Key-value lines, one block per job, blocks separated by '---'. The block
// before the first separator sets global options (workers, cache). Blank
// lines and '#' comments are ignored.
run_manifest parse_manifest(const std::string& text) {
  run_manifest m;
  std::vector<std::map<std::string, std::string>> blocks(1);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line[0] == '#') continue;
    if (line == "---") {
      blocks.emplace_back();
      continue;
    }
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("manifest line " + std::to_string(lineno) +
                               ": expected 'key: value'");
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    size_t vstart = value.find_first_not_of(' ');
    value = vstart == std::string::npos ? "" : value.substr(vstart);
    if (!blocks.back().emplace(key, value).second)
      throw std::runtime_error("manifest line " + std::to_string(lineno) +
                               ": duplicate key '" + key + "'");
  }

  auto parse_u64 = [](const std::map<std::string, std::string>& kv, const char* key,
                      std::uint64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    return static_cast<std::uint64_t>(std::stoull(it->second));
  };

  const auto& global = blocks.front();
  for (const auto& [key, value] : global) {
    if (key == "workers")
      m.workers = static_cast<unsigned>(std::stoul(value));
    else if (key == "cache")
      m.cache = value;
    else
      throw std::runtime_error("manifest: unknown global key '" + key + "'");
  }

  std::set<std::string> ids;
  for (size_t b = 1; b < blocks.size(); ++b) {
    const auto& kv = blocks[b];
    if (kv.empty()) continue;
    run_job job;
    for (const auto& [key, value] : kv) {
      if (key == "job") job.id = value;
      else if (key == "lattice") job.lattice_file = value;
      else if (key == "builtin") job.builtin = value;
      else if (key == "family") job.family = value;
      else if (key == "mode") job.mode = value;
      else if (key == "budget" || key == "seed") continue;  // read below
      else if (key == "output") job.output = value;
      else throw std::runtime_error("manifest: unknown job key '" + key + "'");
    }
    job.budget = parse_u64(kv, "budget", job.budget);
    job.seed = parse_u64(kv, "seed", job.seed);
    if (job.id.empty()) throw std::runtime_error("manifest: job without an id");
    if (!ids.insert(job.id).second)
      throw std::runtime_error("manifest: duplicate job id '" + job.id + "'");
    if (job.lattice_file.empty() == job.builtin.empty())
      throw std::runtime_error("manifest job '" + job.id +
                               "': give exactly one of lattice or builtin");
    if (!job.lattice_file.empty() && !std::filesystem::exists(job.lattice_file))
      throw std::runtime_error("manifest job '" + job.id + "': no such file " +
                               job.lattice_file);
    if (job.family.empty())
      throw std::runtime_error("manifest job '" + job.id + "': missing family");
    if (job.mode != "exhaustive" && job.mode != "search")
      throw std::runtime_error("manifest job '" + job.id + "': unknown mode '" +
                               job.mode + "'");
    if (job.output.empty())
      throw std::runtime_error("manifest job '" + job.id + "': missing output");
    oml::family_id::parse(job.family);  // validates, throws family_error
    m.jobs.push_back(std::move(job));
  }
  if (m.jobs.empty()) throw std::runtime_error("manifest: no jobs");
  return m;
}

// Versioned line format, one block per job. Timing stays out of the file so
// reruns and cache replays are byte-identical.
void write_report(std::ostream& os, const run_job& job, const oml::lattice& L,
                  const std::string& lattice_name, const oml::inference& inf,
                  const oml::strategy& s, const oml::verdict& v) {
  os << "report: 1\n";
  os << "job: " << job.id << "\n";
  os << "tool: " << oml::kToolVersion << "\n";
  os << "lattice: " << lattice_name << "\n";
  os << "digest: " << L.digest() << "\n";
  os << "family: " << inf.name << "\n";
  os << "strategy: " << s.cache_key() << "\n";
  os << "verdict: " << oml::to_string(v.status) << "\n";
  if (!v.counterexample.empty()) {
    os << "counterexample:";
    for (const auto& [var, val] : v.counterexample) os << " " << var << "=" << val;
    os << "\n";
  }
  os << "assignments examined: " << v.assignments_examined << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite quantum-logic workbench"};
  app.set_version_flag("--version", oml::kToolVersion);
  app.require_subcommand(1);

  // validate: parse + the five diagram conditions + loop scan
  std::string validate_path;
  bool validate_quiet = false;
  auto* validate_cmd =
      app.add_subcommand("validate", "check a Greechie diagram file");
  validate_cmd->add_option("file", validate_path, "diagram file ('-' for stdin)")
      ->required();
  validate_cmd->add_flag("-q,--quiet", validate_quiet,
                         "only print the final verdict");

  // export: DOT / table dumps of the pasted lattice
  lattice_source export_src;
  std::string export_format = "dot";
  auto* export_cmd = app.add_subcommand("export", "export the pasted lattice");
  export_src.add_options(export_cmd);
  export_cmd->add_option("--format", export_format, "dot | table");

  // check: model-check one or more equation families against a lattice
  lattice_source check_src;
  std::vector<std::string> check_families;
  std::string check_mode_name = "exhaustive";
  std::uint64_t check_budget = 50'000'000;
  std::uint64_t check_seed = 1;
  unsigned check_workers = 1;
  bool check_no_prune = false;
  bool check_timings = false;
  std::string check_cache;
  auto* check_cmd =
      app.add_subcommand("check", "model-check equation families on a lattice");
  check_src.add_options(check_cmd);
  check_cmd->add_option("--family", check_families, "family id, e.g. noa:3 (repeatable)")
      ->required();
  check_cmd->add_option("--mode", check_mode_name, "exhaustive | search");
  check_cmd->add_option("--budget", check_budget, "search budget (assignments)");
  check_cmd->add_option("--seed", check_seed, "search random seed");
  check_cmd->add_option("--workers", check_workers, "worker threads");
  check_cmd->add_flag("--no-prune", check_no_prune, "disable conclusion pruning");
  check_cmd->add_flag("--timings", check_timings, "print elapsed times to stderr");
  check_cmd->add_option("--cache", check_cache, "verdict cache file (read/write)");

  // generate: print an equation family as an inference, or the fixture corpus
  std::string gen_family;
  bool gen_expand = false;
  bool gen_fixtures = false;
  auto* gen_cmd =
      app.add_subcommand("generate", "print the inference for an equation family");
  gen_cmd->add_option("--family", gen_family, "family id, e.g. ngo:4");
  gen_cmd->add_flag("--expand", gen_expand,
                    "rewrite derived connectives into meet/join/ortho");
  gen_cmd->add_flag("--fixtures", gen_fixtures,
                    "print the bundled lattice corpus as a manifest");

  // states: existence of states and strong-set questions, answered by exact
  // rational linear programming over the block structure
  lattice_source states_src;
  bool states_exists = false, states_quantum = false, states_classical = false;
  bool states_dump_lp = false;
  unsigned states_workers = 1;
  auto* states_cmd =
      app.add_subcommand("states", "decide state-space questions for a lattice");
  states_src.add_options(states_cmd);
  states_cmd->add_flag("--exists", states_exists, "is there any state at all?");
  states_cmd->add_flag("--strong-quantum", states_quantum,
                       "does a strong set of states exist (state per pair)?");
  states_cmd->add_flag("--strong-classical", states_classical,
                       "does one state separate every pair?");
  states_cmd->add_flag("--dump-lp", states_dump_lp,
                       "print the linear program in plain text");
  states_cmd->add_option("--workers", states_workers, "worker threads");

  // derive: read a condensed state equation off a strong-set failure
  lattice_source derive_src;
  auto* derive_cmd = app.add_subcommand(
      "derive", "derive a failing state equation from a lattice without a "
                "strong set of states");
  derive_src.add_options(derive_cmd);

  // run: execute a manifest of check jobs and write report files
  std::string run_manifest_path;
  bool run_timings = false;
  auto* run_cmd = app.add_subcommand("run", "run a manifest of check jobs");
  run_cmd->add_option("manifest", run_manifest_path, "manifest file")->required();
  run_cmd->add_flag("--timings", run_timings, "print elapsed times to stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return run_validate(validate_path, validate_quiet);

    if (export_cmd->parsed()) {
      auto [L, name] = export_src.load();
      if (export_format == "dot")
        std::cout << L.to_dot();
      else if (export_format == "table")
        std::cout << L.dump();
      else {
        std::cerr << "unknown format '" << export_format << "'\n";
        return kExitBadInput;
      }
      return kExitHolds;
    }

    if (check_cmd->parsed()) {
      auto [L, name] = check_src.load();
      oml::strategy s;
      if (check_mode_name == "exhaustive")
        s.mode = oml::check_mode::exhaustive;
      else if (check_mode_name == "search")
        s.mode = oml::check_mode::counterexample_search;
      else {
        std::cerr << "unknown mode '" << check_mode_name << "'\n";
        return kExitBadInput;
      }
      s.budget = check_budget;
      s.seed = check_seed;
      s.workers = check_workers;
      s.prune_conclusion = !check_no_prune;

      std::unique_ptr<oml::verdict_cache> cache;
      if (check_cache.empty()) check_cache = default_cache_path();
      if (!check_cache.empty())
        cache = std::make_unique<oml::verdict_cache>(check_cache);

      oml::term_store store;
      int exit_code = kExitHolds;
      bool first = true;
      for (const std::string& fam : check_families) {
        oml::inference inf = oml::generate(fam, store);
        if (!first) std::cout << "\n";
        first = false;

        oml::verdict v;
        bool from_cache = false;
        if (cache) {
          if (auto hit = cache->lookup(L.digest(), inf.name, s.cache_key())) {
            v = *hit;
            from_cache = true;
          }
        }
        if (!from_cache) {
          auto t0 = std::chrono::steady_clock::now();
          v = oml::check(L, inf, s);
          v.elapsed_seconds =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          if (cache) cache->store(L.digest(), inf.name, s.cache_key(), v);
        }
        print_verdict(name, L.size(), inf, v);
        if (from_cache) std::cout << "cached: true\n";
        if (check_timings)
          std::cerr << inf.name << " elapsed: " << v.elapsed_seconds << "s\n";
        exit_code = std::max(exit_code, verdict_exit(v));
      }
      return exit_code;
    }

    if (gen_cmd->parsed()) {
      if (gen_fixtures && !gen_family.empty()) {
        std::cerr << "give either --family or --fixtures, not both\n";
        return kExitBadInput;
      }
      if (!gen_fixtures && gen_family.empty()) {
        std::cerr << "give either --family or --fixtures\n";
        return kExitBadInput;
      }
      if (gen_fixtures) {
        bool first = true;
        for (const oml::fixture& f : oml::fixtures()) {
          if (!first) std::cout << "---\n";
          first = false;
          std::cout << "id: " << f.id << "\n";
          std::cout << "atoms: " << f.d.atom_count() << "\n";
          std::cout << "blocks: " << f.d.block_count() << "\n";
          std::cout << "diagram: " << f.text << "\n";
          std::cout << "claims: ";
          bool first_claim = true;
          for (const auto& [fam, holds] : f.claims) {
            if (!first_claim) std::cout << ", ";
            first_claim = false;
            std::cout << fam.to_string() << "=" << (holds ? "pass" : "fail");
          }
          std::cout << "\n";
        }
        return kExitHolds;
      }
      oml::term_store store;
      oml::inference inf = oml::generate(gen_family, store);
      if (gen_expand) {
        inf.lhs = oml::expand(inf.lhs, store);
        inf.rhs = oml::expand(inf.rhs, store);
        for (auto& h : inf.hypotheses)
          if (h.kind == oml::hypothesis_kind::equality) {
            h.lhs = oml::expand(h.lhs, store);
            h.rhs = oml::expand(h.rhs, store);
          }
      }
      std::cout << inf.name << "\n" << oml::to_string(inf) << "\n";
      return kExitHolds;
    }

    if (states_cmd->parsed()) {
      if (states_exists + states_quantum + states_classical != 1) {
        std::cerr << "give exactly one of --exists, --strong-quantum, "
                     "--strong-classical\n";
        return kExitBadInput;
      }
      auto [L, name] = states_src.load();
      oml::state_lp slp(L);
      std::cout << "lattice: " << name << " (" << L.size() << " elements)\n";
      if (states_dump_lp) std::cout << slp.problem().dump();

      if (states_exists) {
        auto w = oml::admits_state(L);
        if (!w) {
          std::cout << "state: none\n";
          return kExitFalsified;
        }
        std::cout << "state: exists\n";
        print_state(slp, *w);
        return kExitHolds;
      }

      if (states_quantum) {
        oml::strong_set_report r =
            oml::strong_quantum(L, static_cast<int>(states_workers));
        if (r.admits) {
          std::cout << "strong quantum: yes\n";
          std::cout << "pairs checked: " << r.witnesses.size() << "\n";
          return kExitHolds;
        }
        std::cout << "strong quantum: no\n";
        std::cout << "failing pair: " << L.info(r.failing_a).label << " !<= "
                  << L.info(r.failing_b).label << " (elements " << r.failing_a
                  << ", " << r.failing_b << ")\n";
        std::cout << "reason: "
                  << (r.failing_infeasible ? "no state reaches 1 on the left element"
                                           : "every such state is 1 on the right element")
                  << "\n";
        if (states_dump_lp) std::cout << r.failing_problem.dump();
        return kExitFalsified;
      }

      oml::classical_report r = oml::strong_classical(L);
      if (!r.admits) {
        std::cout << "strong classical: no\n";
        if (r.failing_element >= 0)
          std::cout << "failing element: " << L.info(r.failing_element).label << "\n";
        return kExitFalsified;
      }
      std::cout << "strong classical: yes\n";
      std::cout << "state:\n";
      print_state(slp, r.witness);
      return kExitHolds;
    }

    if (derive_cmd->parsed()) {
      auto [L, name] = derive_src.load();
      std::cout << "lattice: " << name << " (" << L.size() << " elements)\n";
      oml::strong_set_report report = oml::strong_quantum(L);
      if (report.admits) {
        std::cout << "strong quantum: yes\n";
        std::cout << "nothing to derive: every pair has a separating state\n";
        return kExitFalsified;
      }
      std::cout << "strong quantum: no\n";
      std::cout << "failing pair: " << L.info(report.failing_a).label << " !<= "
                << L.info(report.failing_b).label << "\n";
      oml::term_store store;
      oml::readoff_result rr;
      try {
        rr = oml::mge_readoff(L, report, store);
      } catch (const oml::states_error& e) {
        if (e.code() == oml::states_errc::readoff_failed) {
          std::cerr << "read-off failed: " << e.what() << "\n";
          return kExitInconclusive;
        }
        throw;
      }
      std::cout << "equation: " << oml::serialize_condensed(rr.condensed) << "\n";
      std::cout << "variables:";
      for (const auto& [ch, el] : rr.atom_of_var)
        std::cout << " " << ch << "=" << L.info(el).label;
      std::cout << "\n";
      std::cout << "verified: fails in this lattice\n";
      return kExitHolds;
    }

    if (run_cmd->parsed()) {
      run_manifest manifest;
      try {
        manifest = parse_manifest(read_input(run_manifest_path));
      } catch (const std::exception& e) {
        std::cerr << "manifest error: " << e.what() << "\n";
        return kExitBadInput;
      }

      std::unique_ptr<oml::verdict_cache> cache;
      std::string cache_path =
          manifest.cache.empty() ? default_cache_path() : manifest.cache;
      if (!cache_path.empty())
        cache = std::make_unique<oml::verdict_cache>(cache_path);

      // Lattices and output files are shared across jobs; build each once
      // and truncate each output before the first block lands in it.
      std::map<std::string, oml::lattice> lattices;
      auto load_lattice = [&](const run_job& job) -> oml::lattice& {
        std::string key = job.builtin.empty() ? "file:" + job.lattice_file
                                              : "builtin:" + job.builtin;
        auto it = lattices.find(key);
        if (it != lattices.end()) return it->second;
        oml::lattice L = job.builtin.empty()
                             ? oml::build(oml::parse(read_input(job.lattice_file)))
                             : oml::make_builtin(job.builtin);
        return lattices.emplace(key, std::move(L)).first->second;
      };
      std::set<std::string> truncated;

      oml::term_store store;
      int exit_code = kExitHolds;
      for (const run_job& job : manifest.jobs) {
        oml::lattice& L = load_lattice(job);
        std::string lattice_name =
            job.builtin.empty() ? job.lattice_file : job.builtin;
        oml::inference inf = oml::generate(job.family, store);

        oml::strategy s;
        s.mode = job.mode == "search" ? oml::check_mode::counterexample_search
                                      : oml::check_mode::exhaustive;
        s.budget = job.budget;
        s.seed = job.seed;
        s.workers = manifest.workers;

        oml::verdict v;
        bool from_cache = false;
        if (cache) {
          if (auto hit = cache->lookup(L.digest(), inf.name, s.cache_key())) {
            v = *hit;
            from_cache = true;
          }
        }
        if (!from_cache) {
          auto t0 = std::chrono::steady_clock::now();
          v = oml::check(L, inf, s);
          v.elapsed_seconds =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
          if (cache) cache->store(L.digest(), inf.name, s.cache_key(), v);
        }

        std::ios_base::openmode mode = std::ios::out;
        if (truncated.insert(job.output).second)
          mode |= std::ios::trunc;
        else
          mode |= std::ios::app;
        std::ofstream out(job.output, mode);
        if (!out) throw std::runtime_error("cannot write " + job.output);
        if (mode & std::ios::app) out << "\n";
        write_report(out, job, L, lattice_name, inf, s, v);

        std::cout << "job " << job.id << ": " << oml::to_string(v.status)
                  << (from_cache ? " (cached)" : "") << "\n";
        if (run_timings)
          std::cerr << job.id << " elapsed: " << v.elapsed_seconds << "s\n";
        exit_code = std::max(exit_code, verdict_exit(v));
      }
      return exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
