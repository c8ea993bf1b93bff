#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oml {

// Atom display characters, in canonical order. '0' is deliberately absent:
// it is reserved so a stray zero in a block list fails loudly instead of
// silently minting a 62nd atom name.
inline constexpr std::string_view kAtomAlphabet =
    "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

enum class greechie_errc {
  empty_input,
  illegal_character,
  duplicate_atom_in_block,
  empty_block,
  atom_alphabet_exhausted,
};

class greechie_error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  greechie_error(greechie_errc code, const std::string& msg,
                 std::size_t position = npos)
      : std::runtime_error(msg), code_(code), position_(position) {}

  greechie_errc code() const { return code_; }
  // Byte offset into the parsed text, or npos when not applicable.
  std::size_t position() const { return position_; }

 private:
  greechie_errc code_;
  std::size_t position_;
};

// A diagram is a hypergraph: atoms are vertices, blocks are hyperedges.
// Atom indices are assigned in first-appearance order by parse(); blocks and
// the atoms within them keep input order so serialization is bit-faithful.
struct diagram {
  std::vector<char> atom_names;
  std::vector<std::vector<int>> blocks;

  int atom_count() const { return static_cast<int>(atom_names.size()); }
  int block_count() const { return static_cast<int>(blocks.size()); }

  friend bool operator==(const diagram&, const diagram&) = default;
};

// A loop of order n: cyclic sequence of n mutually distinct blocks joined at
// n mutually distinct atoms, junction_atoms[i] in blocks[i] & blocks[i+1]
// (wrapping). Canonical: lexicographically least rotation/reflection of the
// (block, atom) cycle.
struct loop {
  std::vector<int> blocks;
  std::vector<int> junction_atoms;

  int order() const { return static_cast<int>(blocks.size()); }

  friend bool operator==(const loop&, const loop&) = default;
};

bool operator<(const loop& a, const loop& b);

// The five diagram conditions, in the order reports list them:
//   (1) every atom lies in at least one block
//   (2) if the diagram has >= 2 atoms, every block has >= 2 atoms
//   (3) a block that intersects another block has >= 3 atoms
//   (4) two distinct blocks share at most one atom
//   (5) no loop of order 3
enum class greechie_condition {
  atoms_covered = 1,
  blocks_big_enough = 2,
  intersecting_blocks_ternary = 3,
  single_shared_atom = 4,
  no_order3_loop = 5,
};

struct condition_failure {
  std::vector<int> atoms;   // offending atom indices, if any
  std::vector<int> blocks;  // offending block indices, if any
  std::optional<loop> bad_loop;
  std::string detail;
};

struct validation_entry {
  greechie_condition condition;
  bool pass = true;
  std::vector<condition_failure> failures;
};

struct validation_report {
  std::vector<validation_entry> entries;  // exactly five, conditions 1..5
  bool pass = false;

  std::string summary() const;
};

// Parses the textual notation: blocks are runs of atom characters separated
// by ',', optionally terminated by '.'; '#' starts a comment running to end
// of line; whitespace (including CRLF) is skipped everywhere.
// Throws greechie_error; does NOT check the five diagram conditions.
diagram parse(std::string_view text);

// Checks all five conditions and reports every offender found.
validation_report validate(const diagram& d);

// All loops of order 2..max_order, each reported once, canonicalized.
// Sound for arbitrary structurally well-formed diagrams.
std::vector<loop> find_loops(const diagram& d, int max_order);

// Canonical text form: blocks in input order, atoms in input order, ','
// separated, trailing '.'. Programmatic diagrams with empty atom_names get
// names assigned in index order from kAtomAlphabet.
// Throws atom_alphabet_exhausted when names are needed for > 61 atoms.
std::string serialize(const diagram& d);

// Helper for programmatic construction: canonical names for n atoms.
std::vector<char> default_atom_names(int n);

}  // namespace oml
