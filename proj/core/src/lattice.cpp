#include "omlattice/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <sstream>

namespace oml {

namespace {

// Union-find with path halving; small and allocation-light.
struct uf {
  std::vector<int> p;
  explicit uf(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[a] = b;
  }
};

std::string element_list(const std::vector<element_info>& elems,
                         const std::vector<int>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ", ";
    s += elems[ids[i]].label;
  }
  return s;
}

}  // namespace

lattice lattice::from_raw(raw r) {
  lattice L;
  const int n = static_cast<int>(r.elems.size());
  if (n < 2)
    throw lattice_error(lattice_errc::invalid_diagram,
                        "a lattice needs at least bottom and top");
  if (n > 1024)
    throw lattice_error(lattice_errc::too_large,
                        "lattice has " + std::to_string(n) +
                            " elements; this tool is desk-scale (<= 1024)");
  L.n_ = n;
  L.words_ = (n + 63) / 64;
  L.elems_ = std::move(r.elems);
  L.atom_elements_ = std::move(r.atom_elements);
  L.block_atom_elements_ = std::move(r.block_atom_elements);
  L.source_ = std::move(r.source);
  L.name_ = std::move(r.name);

  L.up_.assign(static_cast<std::size_t>(n) * L.words_, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (r.leq[x][y]) L.up_[x * L.words_ + (y >> 6)] |= 1ull << (y & 63);

  auto lq = [&](int x, int y) { return L.leq_unchecked(x, y); };

  // Partial-order sanity: reflexive, antisymmetric, transitive; bottom and
  // top in their conventional slots.
  for (int x = 0; x < n; ++x) {
    if (!lq(x, x))
      throw lattice_error(lattice_errc::invalid_diagram,
                          "order not reflexive at " + L.elems_[x].label);
    if (!lq(0, x) || !lq(x, n - 1))
      throw lattice_error(lattice_errc::invalid_diagram,
                          "bounds misplaced at " + L.elems_[x].label);
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y && lq(x, y) && lq(y, x))
        throw lattice_error(lattice_errc::invalid_diagram,
                            "order not antisymmetric on {" + L.elems_[x].label +
                                ", " + L.elems_[y].label + "}");
      if (lq(x, y)) {
        // up[x] must contain up[y] wholesale, else transitivity fails.
        for (int w = 0; w < L.words_; ++w) {
          if ((L.up_[y * L.words_ + w] & ~L.up_[x * L.words_ + w]) != 0)
            throw lattice_error(lattice_errc::invalid_diagram,
                                "order not transitive above " +
                                    L.elems_[x].label);
        }
      }
    }
  }

  // Orthocomplement sanity: involution, order-reversing.
  L.ortho_.resize(n);
  for (int x = 0; x < n; ++x) {
    int ox = r.ortho[x];
    if (ox < 0 || ox >= n || r.ortho[ox] != x)
      throw lattice_error(lattice_errc::invalid_diagram,
                          "ortho map is not an involution");
    L.ortho_[x] = static_cast<std::uint16_t>(ox);
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (lq(x, y) && !lq(L.ortho_[y], L.ortho_[x]))
        throw lattice_error(lattice_errc::invalid_diagram,
                            "ortho map is not order-reversing on {" +
                                L.elems_[x].label + ", " + L.elems_[y].label +
                                "}");

  // Down-sets, transposed from up-sets, for the glb computation.
  std::vector<std::uint64_t> down(static_cast<std::size_t>(n) * L.words_, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (lq(x, y)) down[y * L.words_ + (x >> 6)] |= 1ull << (x & 63);

  // Constructive lattice-hood: every pair needs a unique maximal common
  // lower bound and a unique minimal common upper bound. This deliberately
  // re-proves what loop detection predicts.
  L.meet_.assign(static_cast<std::size_t>(n) * n, 0);
  L.join_.assign(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::uint64_t> common(L.words_);
  auto extremal = [&](const std::vector<std::uint64_t>& closure, int x, int y,
                      const std::vector<std::uint64_t>& bound_rows,
                      const char* what) -> int {
    for (int w = 0; w < L.words_; ++w)
      common[w] = bound_rows[x * L.words_ + w] & bound_rows[y * L.words_ + w];
    // z is extremal iff closure[z] meets `common` only at z itself.
    std::vector<int> ext;
    for (int w = 0; w < L.words_; ++w) {
      std::uint64_t bits = common[w];
      while (bits) {
        int z = (w << 6) + std::countr_zero(bits);
        bits &= bits - 1;
        bool extreme = true;
        for (int v = 0; v < L.words_ && extreme; ++v) {
          std::uint64_t hits = closure[z * L.words_ + v] & common[v];
          if (v == (z >> 6)) hits &= ~(1ull << (z & 63));
          extreme = hits == 0;
        }
        if (extreme) ext.push_back(z);
      }
    }
    if (ext.size() != 1) {
      std::ostringstream os;
      os << "no unique " << what << " of " << L.elems_[x].label << " and "
         << L.elems_[y].label << "; candidates: {"
         << element_list(L.elems_, ext) << "}";
      throw lattice_error(lattice_errc::not_a_lattice, os.str());
    }
    return ext[0];
  };
  for (int x = 0; x < n; ++x) {
    for (int y = x; y < n; ++y) {
      int m, j;
      if (lq(x, y)) {
        m = x;
        j = y;
      } else if (lq(y, x)) {
        m = y;
        j = x;
      } else {
        m = extremal(L.up_, x, y, down, "meet");
        j = extremal(down, x, y, L.up_, "join");
      }
      L.meet_[x * n + y] = L.meet_[y * n + x] = static_cast<std::uint16_t>(m);
      L.join_[x * n + y] = L.join_[y * n + x] = static_cast<std::uint16_t>(j);
    }
  }

  // Complement laws now that the tables exist.
  for (int x = 0; x < n; ++x) {
    if (L.meet_[x * n + L.ortho_[x]] != 0 ||
        L.join_[x * n + L.ortho_[x]] != static_cast<std::uint16_t>(n - 1))
      throw lattice_error(lattice_errc::not_a_lattice,
                          "complement laws fail at " + L.elems_[x].label);
  }
  return L;
}

lattice build(const diagram& d) {
  {
    auto vr = validate(d);
    if (!vr.pass)
      throw lattice_error(lattice_errc::invalid_diagram,
                          "diagram invalid: " + vr.summary());
  }
  for (const auto& lp : find_loops(d, 4)) {
    if (lp.order() == 4) {
      std::ostringstream os;
      os << "order-4 loop through blocks";
      for (int b : lp.blocks) os << ' ' << b;
      os << "; pasting is an orthoposet but not a lattice";
      throw lattice_error(lattice_errc::not_a_lattice, os.str());
    }
  }

  const int nb = d.block_count();
  const int na = d.atom_count();
  for (const auto& b : d.blocks)
    if (b.size() > 20)
      throw lattice_error(lattice_errc::too_large,
                          "block with > 20 atoms is beyond desk scale");

  // Node universe: every (block, subset-mask) pair. Identifications:
  //   - all block bottoms are 0, all block tops are 1
  //   - singleton {a} is the same atom in every block containing a
  //   - B\{a} is the same orthocomplement a' in every block containing a
  std::vector<int> off(nb + 1, 0);
  for (int b = 0; b < nb; ++b)
    off[b + 1] = off[b] + (1 << d.blocks[b].size());
  uf u(off[nb]);
  auto node = [&](int b, std::uint32_t m) {
    return off[b] + static_cast<int>(m);
  };
  auto full = [&](int b) {
    return static_cast<std::uint32_t>((1u << d.blocks[b].size()) - 1);
  };

  std::vector<std::vector<int>> ablocks(na);  // atom -> containing blocks
  std::vector<std::vector<int>> abit(nb);     // block -> atom -> bit position
  for (int b = 0; b < nb; ++b) {
    abit[b].assign(na, -1);
    for (std::size_t k = 0; k < d.blocks[b].size(); ++k) {
      int a = d.blocks[b][k];
      abit[b][a] = static_cast<int>(k);
      ablocks[a].push_back(b);
    }
  }
  for (int b = 1; b < nb; ++b) {
    u.unite(node(0, 0), node(b, 0));
    u.unite(node(0, full(0)), node(b, full(b)));
  }
  for (int a = 0; a < na; ++a) {
    int b0 = ablocks[a][0];
    std::uint32_t m0 = 1u << abit[b0][a];
    for (std::size_t i = 1; i < ablocks[a].size(); ++i) {
      int b = ablocks[a][i];
      std::uint32_t m = 1u << abit[b][a];
      u.unite(node(b0, m0), node(b, m));
      u.unite(node(b0, full(b0) ^ m0), node(b, full(b) ^ m));
    }
  }

  // Gather classes; iteration order (block, then mask) fixes each class's
  // representative to its least block.
  std::vector<int> cls(off[nb], -1);
  struct class_info {
    int rep_block = -1;
    std::uint32_t rep_mask = 0;
    std::vector<std::pair<int, std::uint32_t>> reps;
  };
  std::vector<class_info> classes;
  for (int b = 0; b < nb; ++b) {
    for (std::uint32_t m = 0; m <= full(b); ++m) {
      int root = u.find(node(b, m));
      if (cls[root] < 0) {
        cls[root] = static_cast<int>(classes.size());
        classes.push_back({b, m, {}});
      }
      classes[cls[root]].reps.push_back({b, m});
    }
  }
  auto class_of = [&](int b, std::uint32_t m) {
    return cls[u.find(node(b, m))];
  };

  auto members_of = [&](int b, std::uint32_t m) {
    std::vector<int> ms;
    for (std::size_t k = 0; k < d.blocks[b].size(); ++k)
      if (m & (1u << k)) ms.push_back(d.blocks[b][k]);
    std::sort(ms.begin(), ms.end());
    return ms;
  };

  const int zero_c = class_of(0, 0);
  const int one_c = class_of(0, full(0));
  if (zero_c == one_c)
    throw lattice_error(lattice_errc::invalid_diagram,
                        "pasting collapsed 0 and 1");

  std::vector<int> atom_class(na);
  for (int a = 0; a < na; ++a) {
    int b0 = ablocks[a][0];
    atom_class[a] = class_of(b0, 1u << abit[b0][a]);
    if (atom_class[a] == zero_c)
      throw lattice_error(lattice_errc::invalid_diagram,
                          "pasting collapsed an atom with 0");
    for (int a2 = 0; a2 < a; ++a2)
      if (atom_class[a2] == atom_class[a])
        throw lattice_error(lattice_errc::invalid_diagram,
                            "pasting collapsed two distinct atoms");
  }

  // Orthocomplement on classes; every representation must agree.
  const int nc = static_cast<int>(classes.size());
  std::vector<int> oclass(nc, -1);
  for (int c = 0; c < nc; ++c) {
    for (auto [b, m] : classes[c].reps) {
      int oc = class_of(b, full(b) ^ m);
      if (oclass[c] < 0) oclass[c] = oc;
      if (oclass[c] != oc)
        throw lattice_error(lattice_errc::invalid_diagram,
                            "orthocomplement is not well-defined on a class");
    }
  }

  // Element order: 0, atoms in diagram order, remaining subset classes by
  // (representative block, member list) lexicographically with each class's
  // orthocomplement placed adjacently when it is also a plain subset, 1 last.
  std::vector<int> id_of(nc, -1);
  std::vector<int> order;
  order.reserve(nc);
  auto place = [&](int c) {
    id_of[c] = static_cast<int>(order.size());
    order.push_back(c);
  };
  place(zero_c);
  for (int a = 0; a < na; ++a)
    if (atom_class[a] != one_c) place(atom_class[a]);
  std::vector<int> rest;
  for (int c = 0; c < nc; ++c)
    if (id_of[c] < 0 && c != one_c) rest.push_back(c);
  std::vector<std::pair<int, std::vector<int>>> key(nc);
  for (int c : rest)
    key[c] = {classes[c].rep_block,
              members_of(classes[c].rep_block, classes[c].rep_mask)};
  std::sort(rest.begin(), rest.end(),
            [&](int a, int b) { return key[a] < key[b]; });
  for (int c : rest) {
    if (id_of[c] >= 0) continue;
    place(c);
    int oc = oclass[c];
    if (id_of[oc] < 0 && oc != one_c) place(oc);
  }
  place(one_c);
  const int n = static_cast<int>(order.size());

  // Element descriptions.
  lattice::raw r;
  r.elems.resize(n);
  for (int c = 0; c < nc; ++c) {
    element_info& e = r.elems[id_of[c]];
    if (c == zero_c) {
      e.kind = element_kind::zero;
      e.label = "0";
    } else if (c == one_c) {
      e.kind = element_kind::one;
      e.label = "1";
    } else {
      e.block = classes[c].rep_block;
      e.members = members_of(classes[c].rep_block, classes[c].rep_mask);
      e.kind = element_kind::subset;
      // Prefer an atom description, then an atom-complement one.
      for (auto [b, m] : classes[c].reps) {
        if (std::popcount(m) == 1) {
          e.kind = element_kind::atom;
          e.atom = d.blocks[b][std::countr_zero(m)];
          e.label = std::string(1, d.atom_names[e.atom]);
          break;
        }
      }
      if (e.kind != element_kind::atom) {
        int missing = -1;
        for (auto [b, m] : classes[c].reps) {
          std::uint32_t gap = full(b) ^ m;
          if (std::popcount(gap) == 1) {
            missing = d.blocks[b][std::countr_zero(gap)];
            break;
          }
        }
        if (missing >= 0) {
          e.label = std::string(1, d.atom_names[missing]) + "'";
        } else {
          e.label = "(";
          for (int a : e.members) e.label += d.atom_names[a];
          e.label += ")";
        }
      }
    }
  }

  // Order relation: within-block subset inclusion, transitively closed over
  // the identified classes.
  std::vector<std::pair<int, int>> edges;
  for (int b = 0; b < nb; ++b) {
    for (std::uint32_t m = 0; m <= full(b); ++m) {
      int from = id_of[cls[u.find(node(b, m))]];
      for (std::size_t k = 0; k < d.blocks[b].size(); ++k) {
        if (m & (1u << k)) continue;
        int to = id_of[cls[u.find(node(b, m | (1u << k)))]];
        edges.push_back({from, to});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const int words = (n + 63) / 64;
  std::vector<std::uint64_t> up(static_cast<std::size_t>(n) * words, 0);
  for (int x = 0; x < n; ++x) up[x * words + (x >> 6)] |= 1ull << (x & 63);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [a, b] : edges) {
      for (int w = 0; w < words; ++w) {
        std::uint64_t add = up[b * words + w] & ~up[a * words + w];
        if (add) {
          up[a * words + w] |= add;
          changed = true;
        }
      }
    }
  }

  r.leq.assign(n, std::vector<bool>(n, false));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      r.leq[x][y] = (up[x * words + (y >> 6)] >> (y & 63)) & 1;

  r.ortho.resize(n);
  for (int c = 0; c < nc; ++c) r.ortho[id_of[c]] = id_of[oclass[c]];

  r.atom_elements.resize(na);
  for (int a = 0; a < na; ++a) r.atom_elements[a] = id_of[atom_class[a]];
  r.block_atom_elements.resize(nb);
  for (int b = 0; b < nb; ++b)
    for (int a : d.blocks[b])
      r.block_atom_elements[b].push_back(id_of[atom_class[a]]);
  r.source = d;
  return lattice::from_raw(std::move(r));
}

lattice make_builtin(std::string_view name) {
  if (name == "O6") {
    // The benzene ring / hexagon: 0 < a < b < 1 and 0 < b' < a' < 1.
    // The canonical ortholattice that is not orthomodular.
    lattice::raw r;
    auto el = [](element_kind k, const char* label) {
      element_info e;
      e.kind = k;
      e.label = label;
      return e;
    };
    r.elems = {el(element_kind::zero, "0"),   el(element_kind::atom, "a"),
               el(element_kind::subset, "b"), el(element_kind::atom, "b'"),
               el(element_kind::subset, "a'"), el(element_kind::one, "1")};
    r.leq.assign(6, std::vector<bool>(6, false));
    auto le = [&](int x, int y) { r.leq[x][y] = true; };
    for (int x = 0; x < 6; ++x) {
      le(x, x);
      le(0, x);
      le(x, 5);
    }
    le(1, 2);  // a <= b
    le(3, 4);  // b' <= a'
    r.ortho = {5, 4, 3, 2, 1, 0};
    r.name = "O6";
    return lattice::from_raw(std::move(r));
  }
  auto from_text = [&](const char* text) {
    lattice L = build(parse(text));
    L.set_name(std::string(name));
    return L;
  };
  if (name == "MO2") return from_text("12,34.");
  if (name == "Chain2") return from_text("1.");
  if (name.starts_with("Boolean(") && name.ends_with(")")) {
    std::string digits(name.substr(8, name.size() - 9));
    if (digits.size() == 1 && digits[0] >= '1' && digits[0] <= '6') {
      int k = digits[0] - '0';
      return from_text(std::string("123456", 0, k).append(".").c_str());
    }
  }
  throw lattice_error(lattice_errc::unknown_name,
                      "unknown builtin lattice '" + std::string(name) +
                          "' (have O6, MO2, Chain2, Boolean(1)..Boolean(6))");
}

std::string_view to_string(lattice_property p) {
  switch (p) {
    case lattice_property::ortholattice: return "Ortholattice";
    case lattice_property::orthomodular: return "Orthomodular";
    case lattice_property::modular: return "Modular";
    case lattice_property::distributive: return "Distributive";
    case lattice_property::atomistic: return "Atomistic";
    case lattice_property::superposition_a: return "SuperpositionA";
    case lattice_property::superposition_b: return "SuperpositionB";
    case lattice_property::minimal_length: return "MinimalLength";
  }
  return "?";
}

std::optional<lattice_property> parse_lattice_property(std::string_view s) {
  auto eq = [&](std::string_view t) {
    if (s.size() != t.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (std::tolower(static_cast<unsigned char>(s[i])) !=
          std::tolower(static_cast<unsigned char>(t[i])))
        return false;
    return true;
  };
  using lp = lattice_property;
  for (lp p : {lp::ortholattice, lp::orthomodular, lp::modular,
               lp::distributive, lp::atomistic, lp::superposition_a,
               lp::superposition_b, lp::minimal_length})
    if (eq(to_string(p))) return p;
  return std::nullopt;
}

namespace {

// Elements covering 0. For pasted lattices these coincide with the diagram
// atoms (except the one-atom chain, where the single atom is the top).
std::vector<int> structural_atoms(const lattice& L) {
  std::vector<int> atoms;
  for (int x = 1; x < L.size(); ++x) {
    bool atom = true;
    for (int z = 1; z < L.size() && atom; ++z)
      atom = z == x || !L.leq_unchecked(z, x);
    if (atom) atoms.push_back(x);
  }
  return atoms;
}

property_report fail_report(lattice_property p, const lattice& L,
                            std::vector<std::pair<std::string, int>> witness,
                            const std::string& detail) {
  property_report r;
  r.property = p;
  r.holds = false;
  r.witness = std::move(witness);
  std::ostringstream os;
  os << detail << " (";
  for (std::size_t i = 0; i < r.witness.size(); ++i) {
    if (i) os << ", ";
    // Label plus id: the label "1" is shared by the top and an atom named
    // '1' whenever a diagram uses that character, so ids disambiguate.
    os << r.witness[i].first << "=" << L.info(r.witness[i].second).label
       << "#" << r.witness[i].second;
  }
  os << ")";
  r.detail = os.str();
  return r;
}

property_report pass_report(lattice_property p) {
  property_report r;
  r.property = p;
  r.holds = true;
  r.detail = std::string(to_string(p)) + " holds";
  return r;
}

}  // namespace

property_report check_property(const lattice& L, lattice_property p) {
  const int n = L.size();
  using lp = lattice_property;
  switch (p) {
    case lp::ortholattice: {
      for (int x = 0; x < n; ++x) {
        if (L.ortho(L.ortho(x)) != x)
          return fail_report(p, L, {{"a", x}}, "ortho not involutive");
        if (L.meet(x, L.ortho(x)) != 0 || L.join(x, L.ortho(x)) != n - 1)
          return fail_report(p, L, {{"a", x}}, "complement laws fail");
      }
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          if (L.leq(x, y) && !L.leq(L.ortho(y), L.ortho(x)))
            return fail_report(p, L, {{"a", x}, {"b", y}},
                               "ortho not order-reversing");
          if (L.ortho(L.join(x, y)) != L.meet(L.ortho(x), L.ortho(y)))
            return fail_report(p, L, {{"a", x}, {"b", y}},
                               "De Morgan law fails");
        }
      }
      return pass_report(p);
    }
    case lp::orthomodular: {
      // a <= b must give b = a v (a' ^ b).
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (!L.leq(a, b)) continue;
          if (L.join(a, L.meet(L.ortho(a), b)) != b)
            return fail_report(p, L, {{"a", a}, {"b", b}},
                               "a v (a' ^ b) != b despite a <= b");
        }
      }
      return pass_report(p);
    }
    case lp::modular: {
      // Hypothesis-free form: (a^b) v (c^b) = ((a^b) v c) ^ b.
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          int ab = L.meet(a, b);
          for (int c = 0; c < n; ++c) {
            if (L.join(ab, L.meet(c, b)) != L.meet(L.join(ab, c), b))
              return fail_report(p, L, {{"a", a}, {"b", b}, {"c", c}},
                                 "modular law fails");
          }
        }
      }
      return pass_report(p);
    }
    case lp::distributive: {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            if (L.meet(a, L.join(b, c)) !=
                L.join(L.meet(a, b), L.meet(a, c)))
              return fail_report(p, L, {{"a", a}, {"b", b}, {"c", c}},
                                 "distributive law fails");
      return pass_report(p);
    }
    case lp::atomistic: {
      auto atoms = structural_atoms(L);
      for (int x = 0; x < n; ++x) {
        int j = 0;
        for (int t : atoms)
          if (L.leq(t, x)) j = L.join(j, t);
        if (j != x)
          return fail_report(p, L, {{"a", x}},
                             "element is not the join of the atoms below it");
      }
      return pass_report(p);
    }
    case lp::superposition_a: {
      // Distinct atoms a, b need a third atom under a v b.
      auto atoms = structural_atoms(L);
      for (int a : atoms) {
        for (int b : atoms) {
          if (a == b) continue;
          int ab = L.join(a, b);
          bool found = false;
          for (int c : atoms)
            if (c != a && c != b && L.leq(c, ab)) {
              found = true;
              break;
            }
          if (!found)
            return fail_report(p, L, {{"a", a}, {"b", b}},
                               "no third atom under a v b");
        }
      }
      return pass_report(p);
    }
    case lp::superposition_b: {
      // c a superposition of distinct a, b forces a under b v c.
      auto atoms = structural_atoms(L);
      for (int a : atoms) {
        for (int b : atoms) {
          if (a == b) continue;
          int ab = L.join(a, b);
          for (int c : atoms) {
            if (c == a || c == b || !L.leq(c, ab)) continue;
            if (!L.leq(a, L.join(b, c)))
              return fail_report(p, L, {{"a", a}, {"b", b}, {"c", c}},
                                 "superposition is not exchangeable");
          }
        }
      }
      return pass_report(p);
    }
    case lp::minimal_length: {
      // Need a chain 0 < a < b < c < 1.
      for (int b = 1; b < n - 1; ++b) {
        int below = -1, above = -1;
        for (int a = 1; a < n - 1; ++a) {
          if (a != b && L.leq(a, b)) below = a;
          if (a != b && L.leq(b, a)) above = a;
        }
        if (below >= 0 && above >= 0) {
          property_report r = pass_report(p);
          r.witness = {{"a", below}, {"b", b}, {"c", above}};
          return r;
        }
      }
      return fail_report(p, L, {}, "no chain 0 < a < b < c < 1 exists");
    }
  }
  throw lattice_error(lattice_errc::unknown_name, "unhandled property");
}

std::string lattice::dump() const {
  std::ostringstream os;
  os << "elements " << n_ << "\n";
  for (int x = 0; x < n_; ++x) {
    const auto& e = elems_[x];
    os << "e " << x << ' ' << e.label << ' ';
    switch (e.kind) {
      case element_kind::zero: os << "zero"; break;
      case element_kind::one: os << "one"; break;
      case element_kind::atom: os << "atom"; break;
      case element_kind::subset: os << "subset"; break;
    }
    if (e.block >= 0 && source_) {
      os << " block=" << e.block << " members=";
      for (std::size_t i = 0; i < e.members.size(); ++i) {
        if (i) os << ',';
        os << source_->atom_names[e.members[i]];
      }
    }
    os << "\n";
  }
  os << "ortho";
  for (int x = 0; x < n_; ++x) os << ' ' << ortho_[x];
  os << "\nleq\n";
  for (int x = 0; x < n_; ++x) {
    for (int y = 0; y < n_; ++y) os << (leq_unchecked(x, y) ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

std::string lattice::digest() const {
  // FNV-1a 64; structural only (name excluded), so renaming a lattice does
  // not invalidate cached verdicts.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : dump()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = hex[h & 15];
    h >>= 4;
  }
  return s;
}

std::string lattice::to_dot() const {
  std::ostringstream os;
  os << "digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n";
  for (int x = 0; x < n_; ++x)
    os << "  n" << x << " [label=\"" << elems_[x].label << "\"];\n";
  for (int x = 0; x < n_; ++x) {
    for (int y = 0; y < n_; ++y) {
      if (x == y || !leq_unchecked(x, y)) continue;
      bool cover = true;
      for (int z = 0; z < n_ && cover; ++z)
        cover = z == x || z == y || !leq_unchecked(x, z) ||
                !leq_unchecked(z, y);
      if (cover) os << "  n" << x << " -> n" << y << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace oml
