#include <omlattice/families.hpp>

#include <omlattice/checker.hpp>
#include <omlattice/lattice.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <utility>

namespace oml {

namespace {

using family_kind = family_id::family_kind;

[[noreturn]] void bad(const std::string& msg) {
  throw family_error(family_errc::bad_parameter, msg);
}

[[noreturn]] void not_valid(const std::string& msg) {
  throw family_error(family_errc::generator_invalid, msg);
}

std::string num_name(const char* base, int i) { return base + std::to_string(i); }

// Variables a<lo>..a<hi> as terms, in index order.
std::vector<term> var_range(term_store& st, const char* base, int lo, int hi) {
  std::vector<term> out;
  for (int i = lo; i <= hi; ++i) out.push_back(st.variable(num_name(base, i)));
  return out;
}

struct name_entry {
  family_kind kind;
  const char* name;
};

constexpr name_entry kFamilyNames[] = {
    {family_kind::oml_law, "oml"},
    {family_kind::modular, "modular"},
    {family_kind::distributive, "distributive"},
    {family_kind::noa, "noa"},
    {family_kind::noa_inference, "noa-inference"},
    {family_kind::noa_identity, "noa-identity"},
    {family_kind::oa_transitivity, "oa-transitivity"},
    {family_kind::oa3_variant, "oa3variant"},
    {family_kind::ngo, "ngo"},
    {family_kind::ngo_inference, "ngo-inference"},
    {family_kind::godowski_equivalent, "godowski-equivalent"},
    {family_kind::godowski_jk, "godowski-jk"},
    {family_kind::godowski_transitivity, "godowski-transitivity"},
    {family_kind::mge, "mge"},
    {family_kind::mge_derived, "mge-derived"},
    {family_kind::e_n, "en"},
    {family_kind::e_prime, "eprime"},
    {family_kind::e_one, "e1"},
};

const char* kind_name(family_kind k) {
  for (const name_entry& e : kFamilyNames)
    if (e.kind == k) return e.name;
  return "?";
}

int parse_int(std::string_view s, const std::string& what) {
  int value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || p != s.data() + s.size())
    bad(what + ": expected an integer, got '" + std::string(s) + "'");
  return value;
}

// Splits "x,y,z" into pieces; empty pieces are errors.
std::vector<std::string_view> split_commas(std::string_view s, const std::string& what) {
  std::vector<std::string_view> out;
  while (true) {
    std::size_t c = s.find(',');
    std::string_view piece = s.substr(0, c);
    if (piece.empty()) bad(what + ": empty parameter");
    out.push_back(piece);
    if (c == std::string_view::npos) break;
    s.remove_prefix(c + 1);
  }
  return out;
}

void require_n_at_least(int n, int least, const char* name) {
  if (n < least)
    bad(std::string(name) + " needs n >= " + std::to_string(least) + ", got " +
        std::to_string(n));
}

}  // namespace

std::string family_id::to_string() const {
  std::string out = kind_name(kind);
  switch (kind) {
    case family_kind::oml_law:
    case family_kind::modular:
    case family_kind::distributive:
      break;
    case family_kind::noa:
    case family_kind::noa_inference:
    case family_kind::noa_identity:
    case family_kind::oa_transitivity:
    case family_kind::ngo:
    case family_kind::ngo_inference:
    case family_kind::e_n:
    case family_kind::e_prime:
    case family_kind::e_one:
    case family_kind::mge_derived:
      out += ":" + std::to_string(n);
      break;
    case family_kind::oa3_variant:
      out += ":";
      out += variant;
      break;
    case family_kind::godowski_equivalent:
      out += ":";
      out += variant;
      if (n != 3) out += "," + std::to_string(n);
      break;
    case family_kind::godowski_jk:
      out += ":" + std::to_string(n) + "," + std::to_string(j) + "," + std::to_string(k);
      break;
    case family_kind::godowski_transitivity:
      out += ":" + std::to_string(n) + "," + std::to_string(j);
      break;
    case family_kind::mge:
      out += ":" + text;
      break;
  }
  return out;
}

family_id family_id::parse(std::string_view s) {
  std::size_t colon = s.find(':');
  std::string_view head = s.substr(0, colon);
  std::string_view tail = colon == std::string_view::npos ? std::string_view() : s.substr(colon + 1);
  bool has_tail = colon != std::string_view::npos;

  family_id f;
  bool found = false;
  for (const name_entry& e : kFamilyNames) {
    if (head == e.name) {
      f.kind = e.kind;
      found = true;
      break;
    }
  }
  if (!found) bad("unknown family '" + std::string(head) + "'");

  const std::string name(head);
  auto one_int = [&]() {
    if (!has_tail) bad(name + " needs a parameter, e.g. " + name + ":3");
    return parse_int(tail, name);
  };

  switch (f.kind) {
    case family_kind::oml_law:
    case family_kind::modular:
    case family_kind::distributive:
      if (has_tail) bad(name + " takes no parameters");
      break;
    case family_kind::noa:
    case family_kind::noa_inference:
    case family_kind::noa_identity:
    case family_kind::oa_transitivity:
    case family_kind::ngo:
    case family_kind::ngo_inference:
    case family_kind::e_n:
    case family_kind::e_prime:
    case family_kind::e_one:
      f.n = one_int();
      require_n_at_least(f.n, 3, name.c_str());
      break;
    case family_kind::oa3_variant: {
      if (!has_tail || tail.size() != 1 || tail[0] < 'a' || tail[0] > 'j')
        bad("oa3variant needs a single letter a..j");
      f.variant = tail[0];
      break;
    }
    case family_kind::godowski_equivalent: {
      if (!has_tail) bad("godowski-equivalent needs a variant c, d or e");
      std::vector<std::string_view> parts = split_commas(tail, name);
      if (parts.size() > 2 || parts[0].size() != 1 ||
          (parts[0][0] != 'c' && parts[0][0] != 'd' && parts[0][0] != 'e'))
        bad("godowski-equivalent needs a variant c, d or e, optionally with ,n");
      f.variant = parts[0][0];
      f.n = parts.size() == 2 ? parse_int(parts[1], name) : 3;
      require_n_at_least(f.n, 3, name.c_str());
      break;
    }
    case family_kind::godowski_jk: {
      if (!has_tail) bad("godowski-jk needs parameters n,j,k");
      std::vector<std::string_view> parts = split_commas(tail, name);
      if (parts.size() != 3) bad("godowski-jk needs exactly three parameters n,j,k");
      f.n = parse_int(parts[0], name);
      f.j = parse_int(parts[1], name);
      f.k = parse_int(parts[2], name);
      require_n_at_least(f.n, 3, name.c_str());
      if (f.j < 1 || f.j > f.n || f.k < 1 || f.k > f.n)
        bad("godowski-jk indices must lie in 1..n");
      break;
    }
    case family_kind::godowski_transitivity: {
      if (!has_tail) bad("godowski-transitivity needs parameters i,j");
      std::vector<std::string_view> parts = split_commas(tail, name);
      if (parts.size() != 2) bad("godowski-transitivity needs exactly two parameters i,j");
      f.n = parse_int(parts[0], name);
      f.j = parse_int(parts[1], name);
      if (f.n < 1 || f.j < 1) bad("godowski-transitivity indices must be >= 1");
      break;
    }
    case family_kind::mge: {
      if (!has_tail) bad("mge needs a condensed state equation, e.g. mge:ad+be+cf=db+ec+fa");
      try {
        f.text = serialize_condensed(parse_condensed(tail));
      } catch (const term_error& e) {
        bad("mge: " + std::string(e.what()));
      }
      break;
    }
    case family_kind::mge_derived:
      f.n = one_int();
      if (f.n < 1 || f.n > 4) bad("mge-derived needs a form number in 1..4");
      break;
  }
  return f;
}

namespace {

// a1 ==g(..) segment from a<p> to a<q>, inclusive, stepping by +-1: the meet
// of the arrows along the index path, closed by an arrow back to a<p>. One
// variable gives a -> a, two give both arrows.
term chain_segment(term_store& st, int p, int q) {
  if (p == q) {
    term a = st.variable(num_name("a", p));
    return st.sasaki(a, a);
  }
  std::vector<term> vs;
  int step = q > p ? 1 : -1;
  for (int i = p;; i += step) {
    vs.push_back(st.variable(num_name("a", i)));
    if (i == q) break;
  }
  if (vs.size() == 2) return st.meet(st.sasaki(vs[0], vs[1]), st.sasaki(vs[1], vs[0]));
  return st.godowski_chain(std::move(vs));
}

inference generate_noa(term_store& st, int n) {
  term a1 = st.variable("a1"), a2 = st.variable("a2");
  std::vector<term> aux = var_range(st, "a", 3, n);
  inference inf;
  inf.conclusion = conclusion_kind::leq;
  inf.lhs = st.meet(st.sasaki(a1, aux[0]), st.equiv_n(n, a1, a2, aux));
  inf.rhs = st.sasaki(a2, aux[0]);
  return inf;
}

inference generate_noa_inference(term_store& st, int n) {
  inference inf;
  int pairs = n - 1;  // hypothesis pairs a0 _|_ b0 .. a{n-2} _|_ b{n-2}
  std::vector<term> as = var_range(st, "a", 0, pairs - 1);
  std::vector<term> bs = var_range(st, "b", 0, pairs - 1);
  std::vector<term> joins;
  for (int i = 0; i < pairs; ++i) {
    inf.hypotheses.push_back(hypothesis::orthogonal(num_name("a", i), num_name("b", i)));
    joins.push_back(st.join(as[i], bs[i]));
  }

  auto jname = [](int i, int j) {
    return "J" + std::to_string(i) + "_" + std::to_string(j);
  };
  // Core term over placeholder variables J<i>_<j>. Base: J0_1. Growing the
  // arity by one replaces every J<i>_<j> with J<i>_<j> ^ (J<i>_<top> v
  // J<j>_<top>) where <top> is the new highest pair index.
  term core = st.variable(jname(0, 1));
  for (int m = 3; m < n; ++m) {
    int top = m - 1;
    std::map<std::string, term> step;
    for (int i = 0; i < top; ++i)
      for (int j = i + 1; j < top; ++j)
        step[jname(i, j)] = st.meet(
            st.variable(jname(i, j)),
            st.join(st.variable(jname(i, top)), st.variable(jname(j, top))));
    core = substitute(core, step, st);
  }
  std::map<std::string, term> fill;
  for (int i = 0; i < pairs; ++i)
    for (int j = i + 1; j < pairs; ++j)
      fill[jname(i, j)] = st.meet(st.join(as[i], as[j]), st.join(bs[i], bs[j]));
  core = substitute(core, fill, st);

  inf.conclusion = conclusion_kind::leq;
  inf.lhs = st.meet_all(joins);
  inf.rhs = st.join(bs[0], st.meet(as[0], st.join(as[1], core)));
  return inf;
}

inference generate_noa_identity(term_store& st, int n) {
  term a1 = st.variable("a1"), a2 = st.variable("a2");
  std::vector<term> aux = var_range(st, "a", 3, n);
  term last = aux.back();
  inference inf;
  inf.hypotheses.push_back(hypothesis::equal(st.equiv_n(n, a1, a2, aux), st.one()));
  inf.conclusion = conclusion_kind::eq;
  inf.lhs = st.sasaki(a1, last);
  inf.rhs = st.sasaki(a2, last);
  return inf;
}

inference generate_oa_transitivity(term_store& st, int n) {
  // All three equivalences run over one shared tail a3..an; the law reduces
  // to transitivity of "same arrow into a_n" and fails with separate tails.
  term a1 = st.variable("a1"), a2 = st.variable("a2");
  term b1 = st.variable("b1"), b2 = st.variable("b2");
  term c1 = st.variable("c1"), c2 = st.variable("c2");
  std::vector<term> aux = var_range(st, "a", 3, n);
  inference inf;
  inf.hypotheses.push_back(hypothesis::equal(a2, b1));
  inf.hypotheses.push_back(hypothesis::equal(b2, c1));
  inf.hypotheses.push_back(hypothesis::equal(c2, a1));
  inf.hypotheses.push_back(hypothesis::equal(st.equiv_n(n, a1, a2, aux), st.one()));
  inf.hypotheses.push_back(hypothesis::equal(st.equiv_n(n, b1, b2, aux), st.one()));
  inf.conclusion = conclusion_kind::eq;
  inf.lhs = st.equiv_n(n, c1, c2, aux);
  inf.rhs = st.one();
  return inf;
}

inference generate_oa3_variant(term_store& st, char variant) {
  term a1 = st.variable("a1"), a2 = st.variable("a2"), a3 = st.variable("a3");
  term eqv = st.equiv_n(3, a1, a2, {a3});
  term e1 = st.meet(st.sasaki(a1, a3), eqv);
  term e1c = st.meet(st.ortho(st.sasaki(st.ortho(a1), a3)), eqv);
  term f1 = st.meet(st.meet(a3, st.sasaki(a1, a3)), eqv);
  term r = st.sasaki(a2, a3);
  term r2 = st.meet(r, eqv);

  inference inf;
  switch (variant) {
    case 'a': inf.conclusion = conclusion_kind::commutes; inf.lhs = e1;  inf.rhs = r;  break;
    case 'b': inf.conclusion = conclusion_kind::commutes; inf.lhs = e1;  inf.rhs = r2; break;
    case 'c': inf.conclusion = conclusion_kind::leq;      inf.lhs = e1c; inf.rhs = r;  break;
    case 'd': inf.conclusion = conclusion_kind::commutes; inf.lhs = e1c; inf.rhs = r;  break;
    case 'e': inf.conclusion = conclusion_kind::commutes; inf.lhs = e1c; inf.rhs = r2; break;
    case 'f': inf.conclusion = conclusion_kind::leq;      inf.lhs = f1;  inf.rhs = r;  break;
    case 'g': inf.conclusion = conclusion_kind::commutes; inf.lhs = f1;  inf.rhs = r;  break;
    case 'h': inf.conclusion = conclusion_kind::commutes; inf.lhs = f1;  inf.rhs = r2; break;
    case 'i':
      inf.conclusion = conclusion_kind::eq;
      inf.lhs = st.sasaki(e1, a3);
      inf.rhs = st.sasaki(r2, a3);
      break;
    case 'j':
      inf.conclusion = conclusion_kind::commutes;
      inf.lhs = st.sasaki(e1, a3);
      inf.rhs = st.sasaki(r2, a3);
      break;
    default: bad("oa3variant letter must be a..j");
  }
  return inf;
}

inference generate_ngo(term_store& st, int n) {
  std::vector<term> fwd = var_range(st, "a", 1, n);
  std::vector<term> rev(fwd.rbegin(), fwd.rend());
  inference inf;
  inf.conclusion = conclusion_kind::eq;
  inf.lhs = st.godowski_chain(std::move(fwd));
  inf.rhs = st.godowski_chain(std::move(rev));
  return inf;
}

inference generate_ngo_inference(term_store& st, int n) {
  inference inf;
  std::vector<term> joins;
  for (int i = 1; i <= n; ++i) {
    int next = i == n ? 1 : i + 1;
    inf.hypotheses.push_back(hypothesis::orthogonal(num_name("a", i), num_name("b", i)));
    inf.hypotheses.push_back(hypothesis::orthogonal(num_name("b", i), num_name("a", next)));
    joins.push_back(st.join(st.variable(num_name("a", i)), st.variable(num_name("b", i))));
  }
  inf.conclusion = conclusion_kind::leq;
  inf.lhs = st.meet_all(joins);
  inf.rhs = st.join(st.variable("b1"), st.variable("a2"));
  return inf;
}

inference generate_godowski_equivalent(term_store& st, char variant, int n) {
  std::vector<term> vars = var_range(st, "a", 1, n);
  term chain = st.godowski_chain(vars);
  inference inf;
  switch (variant) {
    case 'c': {
      std::vector<term> eqs;
      for (int i = 0; i + 1 < n; ++i) eqs.push_back(st.equiv(vars[i], vars[i + 1]));
      inf.conclusion = conclusion_kind::eq;
      inf.lhs = chain;
      inf.rhs = st.meet_all(eqs);
      break;
    }
    case 'd':
      inf.conclusion = conclusion_kind::leq;
      inf.lhs = chain;
      inf.rhs = st.sasaki(vars.front(), vars.back());
      break;
    case 'e':
      inf.conclusion = conclusion_kind::eq;
      inf.lhs = st.meet(chain, st.join_all(vars));
      inf.rhs = st.meet_all(vars);
      break;
    default: bad("godowski-equivalent variant must be c, d or e");
  }
  return inf;
}

inference generate_mge_derived(term_store& st, int form) {
  term a = st.variable("a"), b = st.variable("b"), c = st.variable("c");
  auto arr = [&](const term& x, const term& y) { return st.sasaki(x, y); };
  inference inf;
  inf.conclusion = conclusion_kind::leq;
  switch (form) {
    case 1:
      inf.lhs = st.meet_all({arr(arr(a, b), arr(c, b)), arr(a, c), arr(b, a)});
      inf.rhs = arr(c, a);
      break;
    case 2: {
      term d = st.variable("d");
      inf.lhs = st.meet_all({arr(d, arr(a, b)), arr(arr(a, c), d), arr(b, c), arr(c, a)});
      inf.rhs = arr(b, a);
      break;
    }
    case 3: {
      term d = st.variable("d");
      inf.lhs = st.meet_all(
          {arr(d, st.meet(c, arr(a, b))), arr(arr(b, a), d), arr(c, a), arr(b, d)});
      inf.rhs = arr(a, c);
      break;
    }
    case 4: {
      term d = st.variable("d");
      inf.lhs = st.meet_all({arr(arr(d, a), st.ortho(arr(b, c))),
                             arr(arr(c, d), st.ortho(arr(a, b))),
                             arr(st.ortho(arr(b, a)), arr(d, c)),
                             arr(st.ortho(arr(a, d)), arr(c, b))});
      inf.rhs = arr(arr(d, c), st.ortho(arr(b, a)));
      break;
    }
    default: bad("mge-derived form must lie in 1..4");
  }
  return inf;
}

// Shared hypothesis set for the state-equation families: v _|_ b_i,
// b_i _|_ a_i, a_i _|_ a_j for i < j.
void push_state_family_hypotheses(inference& inf, int n) {
  for (int i = 1; i <= n; ++i)
    inf.hypotheses.push_back(hypothesis::orthogonal("v", num_name("b", i)));
  for (int i = 1; i <= n; ++i)
    inf.hypotheses.push_back(hypothesis::orthogonal(num_name("b", i), num_name("a", i)));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      inf.hypotheses.push_back(hypothesis::orthogonal(num_name("a", i), num_name("a", j)));
}

inference generate_e_n(term_store& st, int n) {
  inference inf;
  push_state_family_hypotheses(inf, n);
  std::vector<term> as = var_range(st, "a", 1, n);
  std::vector<term> bs = var_range(st, "b", 1, n);
  std::vector<term> joins;
  for (int i = 0; i < n; ++i) joins.push_back(st.join(as[i], bs[i]));
  inf.conclusion = conclusion_kind::eq;
  inf.lhs = st.meet(st.join_all(as), st.meet_all(joins));
  inf.rhs = st.join_all(bs);
  return inf;
}

inference generate_e_prime(term_store& st, int n) {
  inference inf;
  push_state_family_hypotheses(inf, n);
  term r = st.variable("r");
  for (int i = 1; i <= n; ++i)
    inf.hypotheses.push_back(hypothesis::orthogonal("r", num_name("a", i)));
  std::vector<term> as = var_range(st, "a", 1, n);
  std::vector<term> bs = var_range(st, "b", 1, n);
  std::vector<term> joins;
  for (int i = 0; i < n; ++i) joins.push_back(st.join(as[i], bs[i]));
  term q = st.meet_all(joins);
  inf.conclusion = conclusion_kind::leq;
  inf.lhs = st.meet(st.meet(q, st.sasaki(q, st.ortho(r))), st.join(st.join_all(as), r));
  inf.rhs = st.join_all(bs);
  return inf;
}

inference generate_e_one(term_store& st, int n) {
  inference inf;
  push_state_family_hypotheses(inf, n);
  for (int i = 1; i <= n; ++i)
    inf.hypotheses.push_back(hypothesis::orthogonal(num_name("b", i), num_name("c", i)));
  for (int i = 1; i <= n; ++i)
    inf.hypotheses.push_back(hypothesis::orthogonal(num_name("a", i), num_name("c", i)));
  for (int i = 1; i <= n; ++i)
    inf.hypotheses.push_back(hypothesis::orthogonal("u", num_name("c", i)));
  std::vector<term> as = var_range(st, "a", 1, n);
  std::vector<term> bs = var_range(st, "b", 1, n);
  std::vector<term> cs = var_range(st, "c", 1, n);
  std::vector<term> lhs_parts{st.variable("u"), st.join_all(as)};
  for (int i = 0; i < n; ++i)
    lhs_parts.push_back(st.join(st.join(as[i], bs[i]), cs[i]));
  inf.conclusion = conclusion_kind::leq;
  inf.lhs = st.meet_all(lhs_parts);
  inf.rhs = st.ortho(st.variable("v"));
  return inf;
}

}  // namespace

inference generate(const family_id& f, term_store& st) {
  inference inf;
  switch (f.kind) {
    case family_kind::oml_law: {
      term a = st.variable("a"), b = st.variable("b");
      inf.conclusion = conclusion_kind::eq;
      inf.lhs = st.join(a, st.meet(st.ortho(a), st.join(a, b)));
      inf.rhs = st.join(a, b);
      break;
    }
    case family_kind::modular: {
      term x = st.variable("x"), y = st.variable("y"), z = st.variable("z");
      inf.conclusion = conclusion_kind::eq;
      inf.lhs = st.join(st.meet(x, z), st.meet(y, z));
      inf.rhs = st.meet(st.join(st.meet(x, z), y), z);
      break;
    }
    case family_kind::distributive: {
      term x = st.variable("x"), y = st.variable("y"), z = st.variable("z");
      inf.conclusion = conclusion_kind::eq;
      inf.lhs = st.meet(x, st.join(y, z));
      inf.rhs = st.join(st.meet(x, y), st.meet(x, z));
      break;
    }
    case family_kind::noa:
      require_n_at_least(f.n, 3, "noa");
      inf = generate_noa(st, f.n);
      break;
    case family_kind::noa_inference:
      require_n_at_least(f.n, 3, "noa-inference");
      inf = generate_noa_inference(st, f.n);
      break;
    case family_kind::noa_identity:
      require_n_at_least(f.n, 3, "noa-identity");
      inf = generate_noa_identity(st, f.n);
      break;
    case family_kind::oa_transitivity:
      require_n_at_least(f.n, 3, "oa-transitivity");
      inf = generate_oa_transitivity(st, f.n);
      break;
    case family_kind::oa3_variant:
      inf = generate_oa3_variant(st, f.variant);
      break;
    case family_kind::ngo:
      require_n_at_least(f.n, 3, "ngo");
      inf = generate_ngo(st, f.n);
      break;
    case family_kind::ngo_inference:
      require_n_at_least(f.n, 3, "ngo-inference");
      inf = generate_ngo_inference(st, f.n);
      break;
    case family_kind::godowski_equivalent:
      require_n_at_least(f.n, 3, "godowski-equivalent");
      inf = generate_godowski_equivalent(st, f.variant, f.n);
      break;
    case family_kind::godowski_jk:
      require_n_at_least(f.n, 3, "godowski-jk");
      if (f.j < 1 || f.j > f.n || f.k < 1 || f.k > f.n)
        bad("godowski-jk indices must lie in 1..n");
      inf.conclusion = conclusion_kind::leq;
      inf.lhs = st.godowski_chain(var_range(st, "a", 1, f.n));
      inf.rhs = st.sasaki(st.variable(num_name("a", f.j)), st.variable(num_name("a", f.k)));
      break;
    case family_kind::godowski_transitivity:
      if (f.n < 1 || f.j < 1) bad("godowski-transitivity indices must be >= 1");
      inf.conclusion = conclusion_kind::leq;
      inf.lhs = st.meet(chain_segment(st, 1, f.n), chain_segment(st, f.n, f.j));
      inf.rhs = chain_segment(st, 1, f.j);
      break;
    case family_kind::mge: {
      condensed_state_equation c;
      try {
        c = parse_condensed(f.text);
      } catch (const term_error& e) {
        bad("mge: " + std::string(e.what()));
      }
      inf = mge_to_inference(c, st);
      assign_variables(inf);
      return inf;  // mge_to_inference already sets the canonical name
    }
    case family_kind::mge_derived:
      inf = generate_mge_derived(st, f.n);
      break;
    case family_kind::e_n:
      require_n_at_least(f.n, 3, "en");
      inf = generate_e_n(st, f.n);
      break;
    case family_kind::e_prime:
      require_n_at_least(f.n, 3, "eprime");
      inf = generate_e_prime(st, f.n);
      break;
    case family_kind::e_one:
      require_n_at_least(f.n, 3, "e1");
      inf = generate_e_one(st, f.n);
      break;
  }
  inf.name = f.to_string();
  assign_variables(inf);
  return inf;
}

inference generate(std::string_view family_text, term_store& st) {
  return generate(family_id::parse(family_text), st);
}

namespace {

std::string print_hypothesis(const hypothesis& h) {
  if (h.kind == hypothesis_kind::orthogonality) return h.var_a + " _|_ " + h.var_b;
  return to_string(h.lhs) + " = " + to_string(h.rhs);
}

// Lattices a discharged hypothesis must hold on identically. Small enough
// that an exhaustive check over 4..5 variables stays cheap, and they are
// genuinely orthomodular, so laws that fail here fail in some orthomodular
// lattice too.
const std::vector<lattice>& discharge_lattices() {
  static const std::vector<lattice> ls = [] {
    std::vector<lattice> out;
    out.push_back(build(parse("123,345,567,789,9AB,BC1,AD4.")));
    out.push_back(build(parse("1234,456.")));
    return out;
  }();
  return ls;
}

// True when lhs = rhs holds identically on every discharge lattice,
// verified exhaustively.
bool discharged(const term& lhs, const term& rhs) {
  inference probe;
  probe.conclusion = conclusion_kind::eq;
  probe.lhs = lhs;
  probe.rhs = rhs;
  assign_variables(probe);
  strategy s;
  s.mode = check_mode::exhaustive;
  for (const lattice& L : discharge_lattices()) {
    if (!check(L, probe, s).holds()) return false;
  }
  return true;
}

}  // namespace

substitution_report substitute_generators(const inference& base,
                                          const std::map<std::string, term>& subs,
                                          term_store& st) {
  substitution_report rep;
  auto replace_var = [&](const std::string& name) {
    auto it = subs.find(name);
    return it == subs.end() ? st.variable(name) : it->second;
  };

  for (const hypothesis& h : base.hypotheses) {
    hypothesis out;
    term lhs, rhs;  // the substituted constraint, as an equation
    if (h.kind == hypothesis_kind::orthogonality) {
      term sa = replace_var(h.var_a), sb = replace_var(h.var_b);
      lhs = st.meet(sa, st.ortho(sb));
      rhs = sa;
      if (sa->kind == term_kind::variable && sb->kind == term_kind::variable)
        out = hypothesis::orthogonal(sa->name, sb->name);
      else
        out = hypothesis::equal(lhs, rhs);
    } else {
      lhs = substitute(h.lhs, subs, st);
      rhs = substitute(h.rhs, subs, st);
      out = hypothesis::equal(lhs, rhs);
    }
    bool drop = discharged(lhs, rhs);
    rep.hypotheses.push_back({print_hypothesis(out), drop});
    if (!drop) rep.result.hypotheses.push_back(std::move(out));
  }

  rep.result.name = base.name.empty() ? std::string("substituted")
                                      : base.name + ":substituted";
  rep.result.conclusion = base.conclusion;
  rep.result.lhs = substitute(base.lhs, subs, st);
  rep.result.rhs = substitute(base.rhs, subs, st);
  assign_variables(rep.result);
  return rep;
}

diagram wagon_wheel(int n) {
  if (n < 3) bad("wagon wheel needs n >= 3");
  if (n > 12) bad("wagon wheel with n > 12 needs more than 61 atoms");

  // Atoms: rim junctions 0..2n-1, rim midpoints 2n..4n-1 (midpoint k sits
  // between junctions k and k+1), spoke midpoints 4n..5n-1, hub 5n.
  diagram d;
  for (int k = 0; k < 2 * n; ++k)
    d.blocks.push_back({k, 2 * n + k, (k + 1) % (2 * n)});
  for (int k = 0; k < n; ++k)
    d.blocks.push_back({2 * n + 2 * k, 4 * n + k, 5 * n});

  // Renumber atoms in first-appearance order so the diagram equals its own
  // parse(serialize(..)) round trip.
  int atoms = 5 * n + 1;
  std::vector<int> renumber(atoms, -1);
  int next = 0;
  for (std::vector<int>& blk : d.blocks)
    for (int& a : blk) {
      if (renumber[a] < 0) renumber[a] = next++;
      a = renumber[a];
    }
  d.atom_names = default_atom_names(atoms);

  validation_report vr = validate(d);
  if (!vr.pass) not_valid("wagon wheel failed diagram validation:\n" + vr.summary());
  if (!find_loops(d, 4).empty()) not_valid("wagon wheel contains a loop of order <= 4");

  lattice L = build(d);
  std::size_t want = 10 * static_cast<std::size_t>(n) + 4;
  if (L.size() != want)
    not_valid("wagon wheel lattice has " + std::to_string(L.size()) +
              " elements, expected " + std::to_string(want));

  term_store st;
  family_id violated;
  violated.kind = family_kind::ngo;
  violated.n = n;
  inference viol = generate(violated, st);
  strategy s;
  double space = std::pow(static_cast<double>(L.size()), n);
  if (space <= 2e8) {
    s.mode = check_mode::exhaustive;
  } else {
    s.mode = check_mode::counterexample_search;
    s.budget = 500'000'000;
  }
  verdict v = check(L, viol, s);
  if (!v.falsified())
    not_valid("wagon wheel admits no " + violated.to_string() + " counterexample (check " +
              to_string(v.status) + ")");

  if (n >= 4 && n <= 5) {
    family_id held;
    held.kind = family_kind::ngo;
    held.n = n - 1;
    inference pass = generate(held, st);
    strategy se;
    se.mode = check_mode::exhaustive;
    verdict vp = check(L, pass, se);
    if (!vp.holds())
      not_valid("wagon wheel fails " + held.to_string() + ", which it must satisfy");
  }
  return d;
}

namespace {

fixture make_fixture(std::string id, std::string text,
                     std::initializer_list<std::pair<const char*, bool>> claims) {
  fixture f;
  f.id = std::move(id);
  f.text = std::move(text);
  f.d = parse(f.text);
  for (const auto& [fam, holds] : claims)
    f.claims.emplace_back(family_id::parse(fam), holds);
  return f;
}

}  // namespace

const std::vector<fixture>& fixtures() {
  static const std::vector<fixture> all = [] {
    std::vector<fixture> fs;
    auto large = [&](std::string id, std::string text) {
      fs.push_back(make_fixture(std::move(id), std::move(text),
                                {{"oml", true}, {"noa:6", false}, {"noa:5", true}}));
    };
    fs.push_back(make_fixture("13-7-OMLp-oa3f", "123,345,567,789,9AB,BC1,AD4.",
                              {{"oml", true}, {"noa:3", false}}));
    large("35-23-oa5p6f#1",
          "FTV,7TY,12Z,59Z,LMX,AJL,MUY,CLP,1AS,AGV,3EV,16K,2OX,DIV,58R,6HI,8AQ,7PR,CHN,"
          "7OW,9BV,4DU,ENO.");
    large("35-23-oa5p6f#2",
          "DHN,CDY,MQS,18B,LSV,ACL,5CO,3CK,6EK,79C,1LX,9MU,4CI,4PR,FJY,8FU,28Z,EPW,16G,"
          "LTW,RSZ,GOQ,2HW.");
    large("35-23-oa5p6f#3",
          "CHX,24Y,18S,8FT,6GN,17E,68Q,9BF,8DI,14V,8JW,1HP,AOX,IKR,26M,7GR,7UZ,4AL,3TY,"
          "3KP,79O,5GL,CJZ.");
    large("35-23-oa5p6f#4",
          "123,145,267,489,6AB,8AC,1DE,ADF,2GH,4IJ,FGI,BKL,KMN,MOP,OQR,GLQ,RST,FUV,UWX,"
          "7SW,8YZ,KVY,5NW.");
    large("35-23-oa5p6f#5",
          "123,145,267,489,6AB,8CD,AEF,3CE,1GH,GIJ,IKL,68K,LMN,MOP,EJO,HQR,AST,9QS,RUV,"
          "4WX,7UW,VYZ,4MY.");
    large("36-24-oa5p6f#1",
          "4IY,14C,48Z,BNW,CUa,9PU,DHX,BEX,68S,2OX,37D,35G,9NY,7AY,CHJ,PVX,8MP,45T,GKL,"
          "5FO,KPQ,OSa,LRY,6EG.");
    large("36-24-oa5p6f#2",
          "3MW,3OQ,DTV,FNR,OPa,9NS,7KS,5EZ,MRZ,HKT,1EU,45J,CIJ,BDM,3IY,3SX,6DP,8DL,24D,"
          "49G,8FY,4AQ,17A,HRa.");
    large("36-24-oa5p6f#3",
          "1FW,2AL,4DK,CNO,8KN,8FX,5Ca,1CE,ADV,3NZ,3GY,7HQ,9HI,4Ma,25S,2IT,9UZ,RTW,ABZ,"
          "DGR,6IK,1AJ,9Pa,1QY.");
    large("36-24-oa5p6f#4",
          "123,145,267,489,68A,1BC,BDE,AFG,FHI,6JK,DHJ,4LM,LNO,2IN,OPQ,PRS,1GR,QTU,TVW,"
          "JXY,NVX,5Za,SVZ,9ET.");
    large("36-24-oa5p6f#5",
          "123,145,267,489,68A,1BC,BDE,AFG,FHI,6JK,DHJ,4LM,LNO,2IN,OPQ,PRS,1GR,2TU,TVW,"
          "NXY,CVX,9Za,JYZ,STa.");
    large("39-26-oa5p6f#1",
          "bcd,YZa,VWX,TUX,RSd,QUd,OPa,NWa,LMa,KVc,IJS,FGH,EHP,JKZ,CDE,ABN,9ad,GMT,8BR,"
          "8DM,7IO,56X,46R,35O,2FW,17U.");
    large("39-26-oa5p6f#2",
          "bcd,YZa,VWX,UXa,RST,OPQ,LMN,IJK,FGH,DEN,BCT,AXd,89Z,7EZ,56H,67c,KQW,9MW,46P,"
          "OSa,3La,2Ga,1Ja,5CX,FId,8Rd.");
    large("39-26-oa5p6f#3",
          "bcd,YZa,WXa,UVa,RST,OPQ,NQT,MSd,KLd,IJa,HLa,EFG,DMV,BCZ,APY,89L,7Ac,679,8CT,"
          "7GX,5DP,4JQ,3FI,26S,1IR,BEd.");
    large("39-26-oa5p6f#4",
          "bcd,YZa,WXa,UVa,RST,PQT,MNO,KLd,JOd,HId,FGa,ENT,DIT,CMX,ABV,89Q,9Zc,7LY,6Ta,"
          "5BO,4CI,34G,58G,2AK,3KS,12N.");
    large("39-26-oa5p6f#5",
          "bcd,Zad,WXY,TUV,QRS,NOP,LMY,KPV,JPS,HIX,EFG,CDc,BIO,APY,9Yd,BDM,8GN,7Na,56U,"
          "CFS,47R,6HR,38M,2LU,14V,5Ed.");
    return fs;
  }();
  return all;
}

}  // namespace oml
