#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "omlattice/greechie.hpp"

namespace oml {

enum class lattice_errc {
  not_a_lattice,
  invalid_diagram,
  unknown_name,
  index_out_of_range,
  too_large,
};

class lattice_error : public std::runtime_error {
 public:
  lattice_error(lattice_errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  lattice_errc code() const { return code_; }

 private:
  lattice_errc code_;
};

enum class element_kind { zero, one, atom, subset };

struct element_info {
  element_kind kind = element_kind::subset;
  // For atoms: the source-diagram atom index. For subsets: a representative
  // block and the member atoms (sorted diagram atom indices). Bounds and
  // built-ins leave these at defaults.
  int atom = -1;
  int block = -1;
  std::vector<int> members;
  std::string label;
};

// Finite ortholattice with dense operation tables. Immutable once built;
// element 0 is the bottom and element size()-1 the top.
class lattice {
 public:
  int size() const { return n_; }
  int zero() const { return 0; }
  int one() const { return n_ - 1; }

  bool leq(int x, int y) const {
    check_index(x);
    check_index(y);
    return leq_unchecked(x, y);
  }
  int ortho(int x) const {
    check_index(x);
    return ortho_[x];
  }
  int meet(int x, int y) const {
    check_index(x);
    check_index(y);
    return meet_[x * n_ + y];
  }
  int join(int x, int y) const {
    check_index(x);
    check_index(y);
    return join_[x * n_ + y];
  }
  bool orthogonal(int x, int y) const { return leq(x, ortho(y)); }

  bool leq_unchecked(int x, int y) const {
    return (up_[x * words_ + (y >> 6)] >> (y & 63)) & 1;
  }

  const element_info& info(int x) const {
    check_index(x);
    return elems_[x];
  }
  // Element ids of the diagram atoms, in diagram order; empty for built-ins
  // without block structure.
  const std::vector<int>& atom_elements() const { return atom_elements_; }
  // Per diagram block: element ids of its atoms, in block order.
  const std::vector<std::vector<int>>& block_atom_elements() const {
    return block_atom_elements_;
  }
  const std::optional<diagram>& source() const { return source_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  // Raw tables for hot loops; entries are element ids.
  const std::vector<std::uint16_t>& meet_table() const { return meet_; }
  const std::vector<std::uint16_t>& join_table() const { return join_; }
  const std::vector<std::uint16_t>& ortho_table() const { return ortho_; }
  // Bitset of elements >= x (row-major, words_per_row() words per element).
  const std::vector<std::uint64_t>& up_sets() const { return up_; }
  int words_per_row() const { return words_; }

  // Deterministic text table: element list, ortho map, leq matrix.
  std::string dump() const;
  // Stable hex digest of dump(); keys the verdict cache.
  std::string digest() const;
  // Hasse diagram (covering relation) in DOT format.
  std::string to_dot() const;

  // Builders live in lattice.cpp; see the free functions below.
  struct raw {
    std::vector<element_info> elems;
    std::vector<std::vector<bool>> leq;  // full order relation, not covers
    std::vector<int> ortho;
    std::optional<diagram> source;
    std::vector<int> atom_elements;
    std::vector<std::vector<int>> block_atom_elements;
    std::string name;
  };
  static lattice from_raw(raw r);

 private:
  void check_index(int x) const {
    if (x < 0 || x >= n_)
      throw lattice_error(lattice_errc::index_out_of_range,
                          "element id " + std::to_string(x) +
                              " outside lattice of size " +
                              std::to_string(n_));
  }

  int n_ = 0;
  int words_ = 0;
  std::vector<element_info> elems_;
  std::vector<std::uint64_t> up_;    // row x: bitset of {y : x <= y}
  std::vector<std::uint16_t> ortho_;
  std::vector<std::uint16_t> meet_;
  std::vector<std::uint16_t> join_;
  std::vector<int> atom_elements_;
  std::vector<std::vector<int>> block_atom_elements_;
  std::optional<diagram> source_;
  std::string name_;
};

// Pastes a valid diagram into its orthomodular lattice.
// Throws lattice_error(invalid_diagram) when validate(d) fails and
// lattice_error(not_a_lattice) when an order-4 loop exists or some pair
// lacks a unique meet/join (checked constructively, not just via loops).
lattice build(const diagram& d);

// Built-in lattices: "O6" (the non-orthomodular hexagon), "MO2", "Chain2",
// "Boolean(n)" for 1 <= n <= 6. Unknown names throw
// lattice_error(unknown_name).
lattice make_builtin(std::string_view name);

enum class lattice_property {
  ortholattice,
  orthomodular,
  modular,
  distributive,
  atomistic,
  superposition_a,
  superposition_b,
  minimal_length,
};

std::string_view to_string(lattice_property p);
std::optional<lattice_property> parse_lattice_property(std::string_view s);

struct property_report {
  lattice_property property;
  bool holds = false;
  // Falsifying assignment, e.g. {("a", 3), ("b", 7)}; empty when holds.
  std::vector<std::pair<std::string, int>> witness;
  std::string detail;
};

// Exhaustively checks the defining quantified condition of p over L.
property_report check_property(const lattice& L, lattice_property p);

// Free-function views of the table lookups (spec-level operation names).
inline int ortho(const lattice& L, int x) { return L.ortho(x); }
inline int meet(const lattice& L, int x, int y) { return L.meet(x, y); }
inline int join(const lattice& L, int x, int y) { return L.join(x, y); }
inline bool leq(const lattice& L, int x, int y) { return L.leq(x, y); }
inline bool orthogonal(const lattice& L, int x, int y) {
  return L.orthogonal(x, y);
}

}  // namespace oml
