#include "omlattice/greechie.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

namespace oml {

namespace {

// Maps a display character to its alphabet rank, -1 if not an atom character.
constexpr std::array<int, 256> make_alphabet_rank() {
  std::array<int, 256> rank{};
  for (auto& r : rank) r = -1;
  int i = 0;
  for (char c : kAtomAlphabet) rank[static_cast<unsigned char>(c)] = i++;
  return rank;
}
constexpr std::array<int, 256> kAlphabetRank = make_alphabet_rank();

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

std::string offset_msg(const std::string& what, std::size_t pos) {
  std::ostringstream os;
  os << what << " at offset " << pos;
  return os.str();
}

}  // namespace

diagram parse(std::string_view text) {
  diagram d;
  std::array<int, 256> atom_id;
  atom_id.fill(-1);
  std::array<bool, 256> in_current{};
  std::vector<int> current;
  std::vector<unsigned char> current_chars;  // for resetting in_current
  bool after_comma = false;
  bool terminated = false;

  auto flush_block = [&]() {
    d.blocks.push_back(current);
    current.clear();
    for (unsigned char c : current_chars) in_current[c] = false;
    current_chars.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (is_ws(c)) continue;
    if (c == '#') {  // comment runs to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (terminated) {
      throw greechie_error(greechie_errc::illegal_character,
                           offset_msg("content after terminating '.'", i), i);
    }
    if (c == ',') {
      if (current.empty()) {
        throw greechie_error(greechie_errc::empty_block,
                             offset_msg("empty block before ','", i), i);
      }
      flush_block();
      after_comma = true;
      continue;
    }
    if (c == '.') {
      if (!current.empty()) {
        flush_block();
      } else if (after_comma) {
        throw greechie_error(greechie_errc::empty_block,
                             offset_msg("empty block before '.'", i), i);
      } else if (d.blocks.empty()) {
        throw greechie_error(greechie_errc::empty_input,
                             "no blocks before terminating '.'");
      }
      after_comma = false;
      terminated = true;
      continue;
    }
    unsigned char uc = static_cast<unsigned char>(c);
    if (kAlphabetRank[uc] < 0) {
      std::string what = (c == '0')
                             ? "reserved character '0'"
                             : std::string("illegal character '") + c + "'";
      throw greechie_error(greechie_errc::illegal_character,
                           offset_msg(what, i), i);
    }
    if (in_current[uc]) {
      throw greechie_error(
          greechie_errc::duplicate_atom_in_block,
          offset_msg(std::string("atom '") + c + "' repeated within a block",
                     i),
          i);
    }
    int id = atom_id[uc];
    if (id < 0) {
      id = d.atom_count();
      atom_id[uc] = id;
      d.atom_names.push_back(c);
    }
    in_current[uc] = true;
    current_chars.push_back(uc);
    current.push_back(id);
    after_comma = false;
  }

  if (!current.empty()) {
    flush_block();  // terminating '.' is optional
  } else if (after_comma) {
    throw greechie_error(greechie_errc::empty_block,
                         "empty block after trailing ','");
  }
  if (d.blocks.empty()) {
    throw greechie_error(greechie_errc::empty_input,
                         "input contains no blocks");
  }
  return d;
}

namespace {

char display_name(const diagram& d, int atom) {
  if (atom >= 0 && atom < d.atom_count()) return d.atom_names[atom];
  return '?';
}

std::vector<int> shared_atoms(const std::vector<int>& a,
                              const std::vector<int>& b) {
  std::vector<int> out;
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

loop canonical_loop(const std::vector<int>& bl, const std::vector<int>& at) {
  const int n = static_cast<int>(bl.size());
  auto best_b = bl;
  auto best_a = at;
  bool have = false;
  auto consider = [&](const std::vector<int>& b, const std::vector<int>& a) {
    for (int k = 0; k < n; ++k) {
      std::vector<int> rb(n), ra(n);
      for (int j = 0; j < n; ++j) {
        rb[j] = b[(j + k) % n];
        ra[j] = a[(j + k) % n];
      }
      if (!have || std::pair(rb, ra) < std::pair(best_b, best_a)) {
        best_b = std::move(rb);
        best_a = std::move(ra);
        have = true;
      }
    }
  };
  consider(bl, at);
  // Reflection: traversing the cycle backwards. Block j of the reflected
  // walk is bl[(n-j) mod n]; the atom joining reflected blocks j, j+1 is the
  // original edge (n-1-j) atom.
  std::vector<int> fb(n), fa(n);
  for (int j = 0; j < n; ++j) {
    fb[j] = bl[(n - j) % n];
    fa[j] = at[(n - 1 - j) % n];
  }
  consider(fb, fa);
  return loop{best_b, best_a};
}

}  // namespace

bool operator<(const loop& a, const loop& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  if (a.blocks != b.blocks) return a.blocks < b.blocks;
  return a.junction_atoms < b.junction_atoms;
}

std::vector<loop> find_loops(const diagram& d, int max_order) {
  const int nb = d.block_count();
  std::vector<loop> out;
  if (max_order < 2 || nb < 2) return out;

  // Pair adjacency with the atoms joining each pair. Built atom-by-atom so
  // the cost is linear in total incidence, not quadratic in blocks.
  int natoms = d.atom_count();
  for (const auto& b : d.blocks)
    for (int a : b) natoms = std::max(natoms, a + 1);
  std::vector<std::vector<int>> incidence(natoms);
  for (int b = 0; b < nb; ++b)
    for (int a : d.blocks[b]) incidence[a].push_back(b);

  std::vector<std::vector<std::pair<int, int>>> adj(nb);  // (block, atom)
  for (int a = 0; a < natoms; ++a) {
    const auto& in = incidence[a];
    for (std::size_t i = 0; i < in.size(); ++i)
      for (std::size_t j = 0; j < in.size(); ++j)
        if (i != j) adj[in[i]].push_back({in[j], a});
  }

  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  std::vector<int> path_blocks, path_atoms;
  std::vector<char> block_used(nb, 0), atom_used(natoms, 0);

  // Enumerates simple block cycles with start = least block index; each
  // cycle is found in both directions and deduplicated via canonical form.
  auto dfs = [&](auto&& self, int start, int cur) -> void {
    for (auto [nxt, a] : adj[cur]) {
      if (atom_used[a]) continue;
      if (nxt == start && path_blocks.size() >= 2) {
        path_atoms.push_back(a);
        loop cand = canonical_loop(path_blocks, path_atoms);
        if (seen.insert({cand.blocks, cand.junction_atoms}).second)
          out.push_back(std::move(cand));
        path_atoms.pop_back();
      }
      if (nxt > start && !block_used[nxt] &&
          path_blocks.size() < static_cast<std::size_t>(max_order)) {
        block_used[nxt] = 1;
        atom_used[a] = 1;
        path_blocks.push_back(nxt);
        path_atoms.push_back(a);
        self(self, start, nxt);
        path_blocks.pop_back();
        path_atoms.pop_back();
        atom_used[a] = 0;
        block_used[nxt] = 0;
      }
    }
  };

  for (int s = 0; s < nb; ++s) {
    block_used[s] = 1;
    path_blocks.assign(1, s);
    path_atoms.clear();
    dfs(dfs, s, s);
    block_used[s] = 0;
  }
  std::sort(out.begin(), out.end());
  return out;
}

validation_report validate(const diagram& d) {
  validation_report r;
  r.entries.resize(5);
  for (int i = 0; i < 5; ++i)
    r.entries[i].condition = static_cast<greechie_condition>(i + 1);

  auto fail = [&](greechie_condition c, condition_failure f) {
    auto& e = r.entries[static_cast<int>(c) - 1];
    e.pass = false;
    e.failures.push_back(std::move(f));
  };

  // (1) every atom lies in at least one block
  std::vector<char> covered(d.atom_count(), 0);
  for (const auto& b : d.blocks)
    for (int a : b)
      if (a >= 0 && a < d.atom_count()) covered[a] = 1;
  for (int a = 0; a < d.atom_count(); ++a) {
    if (!covered[a]) {
      fail(greechie_condition::atoms_covered,
           {{a},
            {},
            std::nullopt,
            std::string("atom '") + display_name(d, a) + "' lies in no block"});
    }
  }

  // (2) with >= 2 atoms present, every block needs >= 2 atoms
  if (d.atom_count() >= 2) {
    for (int b = 0; b < d.block_count(); ++b) {
      if (d.blocks[b].size() < 2) {
        std::ostringstream os;
        os << "block " << b << " has fewer than 2 atoms";
        fail(greechie_condition::blocks_big_enough,
             {{}, {b}, std::nullopt, os.str()});
      }
    }
  }

  // (3) intersecting blocks need >= 3 atoms; (4) intersections are single
  for (int i = 0; i < d.block_count(); ++i) {
    for (int j = i + 1; j < d.block_count(); ++j) {
      auto shared = shared_atoms(d.blocks[i], d.blocks[j]);
      if (shared.empty()) continue;
      auto report_small = [&](int small, int other) {
        std::ostringstream os;
        os << "block " << small << " has " << d.blocks[small].size()
           << " atoms but intersects block " << other;
        fail(greechie_condition::intersecting_blocks_ternary,
             {shared, {small, other}, std::nullopt, os.str()});
      };
      if (d.blocks[i].size() < 3) report_small(i, j);
      if (d.blocks[j].size() < 3) report_small(j, i);
      if (shared.size() >= 2) {
        std::ostringstream os;
        os << "blocks " << i << " and " << j << " share " << shared.size()
           << " atoms";
        fail(greechie_condition::single_shared_atom,
             {shared, {i, j}, std::nullopt, os.str()});
      }
    }
  }

  // (5) no loop of order 3
  for (auto& lp : find_loops(d, 3)) {
    if (lp.order() != 3) continue;
    std::ostringstream os;
    os << "loop of order 3 through blocks";
    for (int b : lp.blocks) os << ' ' << b;
    fail(greechie_condition::no_order3_loop,
         {{}, {}, std::move(lp), os.str()});
  }

  r.pass = true;
  for (const auto& e : r.entries) r.pass = r.pass && e.pass;
  return r;
}

std::string validation_report::summary() const {
  if (pass) return "valid Greechie diagram (conditions 1-5 hold)";
  std::ostringstream os;
  bool first = true;
  for (const auto& e : entries) {
    if (e.pass) continue;
    if (!first) os << "; ";
    first = false;
    os << "condition (" << static_cast<int>(e.condition) << ") failed: "
       << (e.failures.empty() ? std::string("unspecified")
                              : e.failures.front().detail);
    if (e.failures.size() > 1)
      os << " (+" << e.failures.size() - 1 << " more)";
  }
  return os.str();
}

std::vector<char> default_atom_names(int n) {
  if (n < 0 || static_cast<std::size_t>(n) > kAtomAlphabet.size()) {
    std::ostringstream os;
    os << "cannot name " << n << " atoms from a "
       << kAtomAlphabet.size() << "-character alphabet";
    throw greechie_error(greechie_errc::atom_alphabet_exhausted, os.str());
  }
  return std::vector<char>(kAtomAlphabet.begin(), kAtomAlphabet.begin() + n);
}

std::string serialize(const diagram& d) {
  const std::vector<char>* names = &d.atom_names;
  std::vector<char> assigned;
  if (names->empty() && !d.blocks.empty()) {
    int count = 0;
    for (const auto& b : d.blocks)
      for (int a : b) count = std::max(count, a + 1);
    assigned = default_atom_names(count);
    names = &assigned;
  }
  std::string out;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    if (b) out += ',';
    for (int a : d.blocks[b]) {
      if (a < 0 || static_cast<std::size_t>(a) >= names->size())
        throw greechie_error(greechie_errc::atom_alphabet_exhausted,
                             "atom index has no display name");
      out += (*names)[a];
    }
  }
  out += '.';
  return out;
}

}  // namespace oml
