#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omlattice/lattice.hpp"
#include "omlattice/term.hpp"

namespace oml {

enum class check_mode : std::uint8_t { exhaustive, counterexample_search };

struct strategy {
  check_mode mode = check_mode::exhaustive;
  // counterexample_search: complete assignments to try before giving up.
  std::uint64_t budget = 50'000'000;
  std::uint64_t seed = 1;
  int workers = 1;
  // Skip subtrees where a partial evaluation already forces the conclusion
  // (sound for <= conclusions; never changes a verdict or the first witness,
  // only assignments_examined). Turned off by the enumeration-count oracle.
  bool prune_conclusion = true;

  // Stable identity used by the verdict cache; excludes workers, which never
  // affect the result.
  std::string cache_key() const;
};

enum class verdict_status : std::uint8_t { holds, falsified, inconclusive };

std::string to_string(verdict_status s);

struct verdict {
  verdict_status status = verdict_status::inconclusive;
  // Total over all alias names of each enumerated variable class.
  assignment counterexample;
  // Complete assignments reached (every orthogonality hypothesis satisfied;
  // equality-hypothesis and conclusion pruning can skip the rest).
  std::uint64_t assignments_examined = 0;
  double elapsed_seconds = 0.0;

  bool holds() const { return status == verdict_status::holds; }
  bool falsified() const { return status == verdict_status::falsified; }
};

// Decides whether inf holds in L. Exhaustive verdicts are definitive; in
// counterexample_search mode a run that finds nothing within budget returns
// inconclusive, never holds. Counterexamples are re-verified by direct term
// evaluation before being returned.
verdict check(const lattice& L, const inference& inf, const strategy& s = {});

// Append-only verdict store keyed by (lattice digest, family id, strategy).
class verdict_cache {
 public:
  // Loads existing records from path; creates the file on first store.
  explicit verdict_cache(std::string path);

  std::optional<verdict> lookup(const std::string& digest, const std::string& family,
                                const std::string& strategy_key) const;
  void store(const std::string& digest, const std::string& family,
             const std::string& strategy_key, const verdict& v);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::map<std::string, verdict> entries_;
};

struct matrix_entry {
  std::string lattice_name;
  std::string family;
  verdict result;
  bool from_cache = false;
};

// Cross product in input order; per-cell verdicts, resumable through cache.
std::vector<matrix_entry> check_matrix(
    const std::vector<std::pair<std::string, const lattice*>>& lattices,
    const std::vector<std::pair<std::string, inference>>& families, const strategy& s,
    verdict_cache* cache = nullptr);

}  // namespace oml
