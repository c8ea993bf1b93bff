#include "omlattice/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace oml {
namespace {

[[noreturn]] void fail(term_errc code, const std::string& what) { throw term_error(code, what); }

std::string key_of(const term_node& n) {
  // Children are interned first, so pointer identity doubles as structural
  // identity and the key stays linear in the node size.
  std::ostringstream os;
  os << static_cast<int>(n.kind) << '|' << n.n << '|' << n.name;
  for (const term& a : n.args) os << '|' << a.get();
  return os.str();
}

}  // namespace

term term_store::intern(term_node node) {
  std::string key = key_of(node);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  term t = std::make_shared<term_node>(std::move(node));
  memo_.emplace(std::move(key), t);
  return t;
}

term term_store::zero() { return intern({term_kind::zero, 0, "", {}}); }
term term_store::one() { return intern({term_kind::one, 0, "", {}}); }

term term_store::variable(std::string_view name) {
  if (name.empty()) fail(term_errc::bad_parameter, "variable name must be nonempty");
  return intern({term_kind::variable, 0, std::string(name), {}});
}

term term_store::ortho(const term& t) { return intern({term_kind::ortho, 0, "", {t}}); }
term term_store::meet(const term& a, const term& b) { return intern({term_kind::meet, 0, "", {a, b}}); }
term term_store::join(const term& a, const term& b) { return intern({term_kind::join, 0, "", {a, b}}); }
term term_store::sasaki(const term& a, const term& b) { return intern({term_kind::sasaki, 0, "", {a, b}}); }
term term_store::equiv(const term& a, const term& b) { return intern({term_kind::equiv, 0, "", {a, b}}); }

term term_store::equiv_n(int n, const term& lhs, const term& rhs, std::vector<term> aux) {
  if (n < 3) fail(term_errc::bad_parameter, "equiv_n arity must be >= 3");
  if (static_cast<int>(aux.size()) != n - 2)
    fail(term_errc::bad_parameter, "equiv_n of arity " + std::to_string(n) + " needs " +
                                       std::to_string(n - 2) + " auxiliary terms, got " +
                                       std::to_string(aux.size()));
  term_node node{term_kind::equiv_n, n, "", {lhs, rhs}};
  node.args.insert(node.args.end(), aux.begin(), aux.end());
  return intern(std::move(node));
}

term term_store::godowski_chain(std::vector<term> vars) {
  if (vars.size() < 3) fail(term_errc::bad_parameter, "godowski chain needs at least 3 variables");
  for (const term& v : vars)
    if (v->kind != term_kind::variable)
      fail(term_errc::bad_parameter, "godowski chain arguments must be variables");
  return intern({term_kind::godowski_chain, 0, "", std::move(vars)});
}

term term_store::meet_all(const std::vector<term>& ts) {
  if (ts.empty()) fail(term_errc::bad_parameter, "meet_all over empty list");
  term acc = ts[0];
  for (size_t i = 1; i < ts.size(); ++i) acc = meet(acc, ts[i]);
  return acc;
}

term term_store::join_all(const std::vector<term>& ts) {
  if (ts.empty()) fail(term_errc::bad_parameter, "join_all over empty list");
  term acc = ts[0];
  for (size_t i = 1; i < ts.size(); ++i) acc = join(acc, ts[i]);
  return acc;
}

namespace {

int sasaki_val(const lattice& L, int a, int b) { return L.join(L.ortho(a), L.meet(a, b)); }

// Def 4.1 recursion on element values; aux entries aux[0..n-3] are the third
// through n-th arguments, and level n-1 uses the prefix ending at aux[n-4].
int equiv_n_val(const lattice& L, int n, int x, int y, const std::vector<int>& aux) {
  if (n == 3) {
    int c = aux[0];
    int pos = L.meet(sasaki_val(L, x, c), sasaki_val(L, y, c));
    int neg = L.meet(sasaki_val(L, L.ortho(x), c), sasaki_val(L, L.ortho(y), c));
    return L.join(pos, neg);
  }
  int cn = aux[n - 3];
  int same = equiv_n_val(L, n - 1, x, y, aux);
  int via_x = equiv_n_val(L, n - 1, x, cn, aux);
  int via_y = equiv_n_val(L, n - 1, y, cn, aux);
  return L.join(same, L.meet(via_x, via_y));
}

int eval_rec(const term& t, const lattice& L, const assignment& a,
             std::unordered_map<const term_node*, int>& memo) {
  auto it = memo.find(t.get());
  if (it != memo.end()) return it->second;
  int v = 0;
  switch (t->kind) {
    case term_kind::zero:
      v = L.zero();
      break;
    case term_kind::one:
      v = L.one();
      break;
    case term_kind::variable: {
      auto vit = a.find(t->name);
      if (vit == a.end()) fail(term_errc::unbound_variable, "unbound variable '" + t->name + "'");
      v = vit->second;
      break;
    }
    case term_kind::ortho:
      v = L.ortho(eval_rec(t->args[0], L, a, memo));
      break;
    case term_kind::meet:
      v = L.meet(eval_rec(t->args[0], L, a, memo), eval_rec(t->args[1], L, a, memo));
      break;
    case term_kind::join:
      v = L.join(eval_rec(t->args[0], L, a, memo), eval_rec(t->args[1], L, a, memo));
      break;
    case term_kind::sasaki:
      v = sasaki_val(L, eval_rec(t->args[0], L, a, memo), eval_rec(t->args[1], L, a, memo));
      break;
    case term_kind::equiv: {
      int x = eval_rec(t->args[0], L, a, memo);
      int y = eval_rec(t->args[1], L, a, memo);
      v = L.join(L.meet(x, y), L.meet(L.ortho(x), L.ortho(y)));
      break;
    }
    case term_kind::equiv_n: {
      int x = eval_rec(t->args[0], L, a, memo);
      int y = eval_rec(t->args[1], L, a, memo);
      std::vector<int> aux(t->args.size() - 2);
      for (size_t i = 2; i < t->args.size(); ++i) aux[i - 2] = eval_rec(t->args[i], L, a, memo);
      v = equiv_n_val(L, t->n, x, y, aux);
      break;
    }
    case term_kind::godowski_chain: {
      std::vector<int> vals(t->args.size());
      for (size_t i = 0; i < t->args.size(); ++i) vals[i] = eval_rec(t->args[i], L, a, memo);
      v = sasaki_val(L, vals[0], vals[1]);
      for (size_t i = 1; i + 1 < vals.size(); ++i) v = L.meet(v, sasaki_val(L, vals[i], vals[i + 1]));
      v = L.meet(v, sasaki_val(L, vals.back(), vals[0]));
      break;
    }
  }
  memo.emplace(t.get(), v);
  return v;
}

}  // namespace

int eval(const term& t, const lattice& L, const assignment& a) {
  std::unordered_map<const term_node*, int> memo;
  return eval_rec(t, L, a, memo);
}

namespace {

term sasaki_expanded(term_store& s, const term& a, const term& b) {
  return s.join(s.ortho(a), s.meet(a, b));
}

term equiv_n_expanded(term_store& s, int n, const term& x, const term& y,
                      const std::vector<term>& aux) {
  if (n == 3) {
    const term& c = aux[0];
    term pos = s.meet(sasaki_expanded(s, x, c), sasaki_expanded(s, y, c));
    term neg = s.meet(sasaki_expanded(s, s.ortho(x), c), sasaki_expanded(s, s.ortho(y), c));
    return s.join(pos, neg);
  }
  const term& cn = aux[n - 3];
  term same = equiv_n_expanded(s, n - 1, x, y, aux);
  term via_x = equiv_n_expanded(s, n - 1, x, cn, aux);
  term via_y = equiv_n_expanded(s, n - 1, y, cn, aux);
  return s.join(same, s.meet(via_x, via_y));
}

term expand_rec(const term& t, term_store& s, std::unordered_map<const term_node*, term>& memo) {
  auto it = memo.find(t.get());
  if (it != memo.end()) return it->second;
  term out;
  switch (t->kind) {
    case term_kind::zero:
    case term_kind::one:
    case term_kind::variable:
      out = t;
      break;
    case term_kind::ortho:
      out = s.ortho(expand_rec(t->args[0], s, memo));
      break;
    case term_kind::meet:
      out = s.meet(expand_rec(t->args[0], s, memo), expand_rec(t->args[1], s, memo));
      break;
    case term_kind::join:
      out = s.join(expand_rec(t->args[0], s, memo), expand_rec(t->args[1], s, memo));
      break;
    case term_kind::sasaki:
      out = sasaki_expanded(s, expand_rec(t->args[0], s, memo), expand_rec(t->args[1], s, memo));
      break;
    case term_kind::equiv: {
      term x = expand_rec(t->args[0], s, memo);
      term y = expand_rec(t->args[1], s, memo);
      out = s.join(s.meet(x, y), s.meet(s.ortho(x), s.ortho(y)));
      break;
    }
    case term_kind::equiv_n: {
      term x = expand_rec(t->args[0], s, memo);
      term y = expand_rec(t->args[1], s, memo);
      std::vector<term> aux;
      for (size_t i = 2; i < t->args.size(); ++i) aux.push_back(expand_rec(t->args[i], s, memo));
      out = equiv_n_expanded(s, t->n, x, y, aux);
      break;
    }
    case term_kind::godowski_chain: {
      std::vector<term> vs;
      for (const term& a : t->args) vs.push_back(expand_rec(a, s, memo));
      term acc = sasaki_expanded(s, vs[0], vs[1]);
      for (size_t i = 1; i + 1 < vs.size(); ++i) acc = s.meet(acc, sasaki_expanded(s, vs[i], vs[i + 1]));
      out = s.meet(acc, sasaki_expanded(s, vs.back(), vs[0]));
      break;
    }
  }
  memo.emplace(t.get(), out);
  return out;
}

}  // namespace

term expand(const term& t, term_store& store) {
  std::unordered_map<const term_node*, term> memo;
  return expand_rec(t, store, memo);
}

namespace {

term substitute_rec(const term& t, const std::map<std::string, term>& subs, term_store& s,
                    std::unordered_map<const term_node*, term>& memo) {
  auto it = memo.find(t.get());
  if (it != memo.end()) return it->second;
  term out;
  switch (t->kind) {
    case term_kind::zero:
    case term_kind::one:
      out = t;
      break;
    case term_kind::variable: {
      auto sit = subs.find(t->name);
      out = sit == subs.end() ? t : sit->second;
      break;
    }
    case term_kind::ortho:
      out = s.ortho(substitute_rec(t->args[0], subs, s, memo));
      break;
    case term_kind::meet:
      out = s.meet(substitute_rec(t->args[0], subs, s, memo), substitute_rec(t->args[1], subs, s, memo));
      break;
    case term_kind::join:
      out = s.join(substitute_rec(t->args[0], subs, s, memo), substitute_rec(t->args[1], subs, s, memo));
      break;
    case term_kind::sasaki:
      out = s.sasaki(substitute_rec(t->args[0], subs, s, memo), substitute_rec(t->args[1], subs, s, memo));
      break;
    case term_kind::equiv:
      out = s.equiv(substitute_rec(t->args[0], subs, s, memo), substitute_rec(t->args[1], subs, s, memo));
      break;
    case term_kind::equiv_n: {
      term x = substitute_rec(t->args[0], subs, s, memo);
      term y = substitute_rec(t->args[1], subs, s, memo);
      std::vector<term> aux;
      for (size_t i = 2; i < t->args.size(); ++i) aux.push_back(substitute_rec(t->args[i], subs, s, memo));
      out = s.equiv_n(t->n, x, y, std::move(aux));
      break;
    }
    case term_kind::godowski_chain: {
      // Substituting a non-variable for a chain variable leaves chain form; it
      // must be expanded first in that case.
      std::vector<term> vs;
      bool still_vars = true;
      for (const term& a : t->args) {
        term sub = substitute_rec(a, subs, s, memo);
        still_vars = still_vars && sub->kind == term_kind::variable;
        vs.push_back(sub);
      }
      if (still_vars) {
        out = s.godowski_chain(std::move(vs));
      } else {
        term acc = s.sasaki(vs[0], vs[1]);
        for (size_t i = 1; i + 1 < vs.size(); ++i) acc = s.meet(acc, s.sasaki(vs[i], vs[i + 1]));
        out = s.meet(acc, s.sasaki(vs.back(), vs[0]));
      }
      break;
    }
  }
  memo.emplace(t.get(), out);
  return out;
}

}  // namespace

term substitute(const term& t, const std::map<std::string, term>& subs, term_store& store) {
  std::unordered_map<const term_node*, term> memo;
  return substitute_rec(t, subs, store, memo);
}

namespace {

long long occurrences_rec(const term& t, std::unordered_map<const term_node*, long long>& memo) {
  auto it = memo.find(t.get());
  if (it != memo.end()) return it->second;
  long long c = 0;
  if (t->kind == term_kind::variable) {
    c = 1;
  } else {
    for (const term& a : t->args) c += occurrences_rec(a, memo);
  }
  memo.emplace(t.get(), c);
  return c;
}

void collect_rec(const term& t, std::vector<std::string>& out, std::set<std::string>& seen,
                 std::set<const term_node*>& visited) {
  if (!visited.insert(t.get()).second) return;
  if (t->kind == term_kind::variable) {
    if (seen.insert(t->name).second) out.push_back(t->name);
    return;
  }
  for (const term& a : t->args) collect_rec(a, out, seen, visited);
}

}  // namespace

long long occurrences(const term& t) {
  std::unordered_map<const term_node*, long long> memo;
  return occurrences_rec(t, memo);
}

std::vector<std::string> collect_variables(const term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::set<const term_node*> visited;
  collect_rec(t, out, seen, visited);
  return out;
}

namespace {

// Binding strength, loosest first: == and ==(n) (1), -> (2), v (3), ^ (4),
// primaries and postfix ' (5).
int level_of(const term& t) {
  switch (t->kind) {
    case term_kind::equiv:
    case term_kind::equiv_n:
      return 1;
    case term_kind::sasaki:
      return 2;
    case term_kind::join:
      return 3;
    case term_kind::meet:
      return 4;
    default:
      return 5;
  }
}

void render(const term& t, int min_level, std::string& out) {
  bool paren = level_of(t) < min_level;
  if (paren) out += '(';
  switch (t->kind) {
    case term_kind::zero:
      out += '0';
      break;
    case term_kind::one:
      out += '1';
      break;
    case term_kind::variable:
      out += t->name;
      break;
    case term_kind::ortho:
      render(t->args[0], 5, out);
      out += '\'';
      break;
    case term_kind::meet:
      render(t->args[0], 4, out);
      out += " ^ ";
      render(t->args[1], 5, out);
      break;
    case term_kind::join:
      render(t->args[0], 3, out);
      out += " v ";
      render(t->args[1], 4, out);
      break;
    case term_kind::sasaki:
      render(t->args[0], 3, out);
      out += " -> ";
      render(t->args[1], 3, out);
      break;
    case term_kind::equiv:
      render(t->args[0], 2, out);
      out += " == ";
      render(t->args[1], 2, out);
      break;
    case term_kind::equiv_n:
      render(t->args[0], 2, out);
      out += " ==(" + std::to_string(t->n) + ") ";
      render(t->args[1], 2, out);
      out += " : ";
      for (size_t i = 2; i < t->args.size(); ++i) {
        if (i > 2) out += ", ";
        render(t->args[i], 2, out);
      }
      break;
    case term_kind::godowski_chain:
      out += "==g(";
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i > 0) out += ", ";
        out += t->args[i]->name;
      }
      out += ')';
      break;
  }
  if (paren) out += ')';
}

struct token {
  enum kind_t { ident, zero, one, apos, caret, arrow, equiv, equiv_n, gchain, lparen, rparen, colon, comma, end } kind;
  std::string text;
  int n = 0;
};

class term_parser {
 public:
  term_parser(std::string_view text, term_store& store) : store_(store) { tokenize(text); }

  term parse() {
    term t = parse_equiv();
    expect(token::end, "end of input");
    return t;
  }

 private:
  void tokenize(std::string_view s) {
    size_t i = 0;
    auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)); };
    auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '\'') { toks_.push_back({token::apos, "'"}); ++i; continue; }
      if (c == '^') { toks_.push_back({token::caret, "^"}); ++i; continue; }
      if (c == '(') { toks_.push_back({token::lparen, "("}); ++i; continue; }
      if (c == ')') { toks_.push_back({token::rparen, ")"}); ++i; continue; }
      if (c == ':') { toks_.push_back({token::colon, ":"}); ++i; continue; }
      if (c == ',') { toks_.push_back({token::comma, ","}); ++i; continue; }
      if (c == '-') {
        if (i + 1 < s.size() && s[i + 1] == '>') { toks_.push_back({token::arrow, "->"}); i += 2; continue; }
        fail(term_errc::syntax, "stray '-' at offset " + std::to_string(i));
      }
      if (c == '=') {
        if (i + 1 >= s.size() || s[i + 1] != '=')
          fail(term_errc::syntax, "single '=' at offset " + std::to_string(i));
        i += 2;
        // "==g(" begins a chain call; "==(<digits>)" with no spaces carries
        // the equiv_n arity; anything else is plain equivalence.
        if (i < s.size() && s[i] == 'g' && i + 1 < s.size() && s[i + 1] == '(') {
          toks_.push_back({token::gchain, "==g"});
          ++i;
          continue;
        }
        if (i < s.size() && s[i] == '(') {
          size_t j = i + 1, v = 0;
          bool digits = false;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
            v = v * 10 + static_cast<size_t>(s[j] - '0');
            digits = true;
            ++j;
          }
          if (digits && j < s.size() && s[j] == ')') {
            toks_.push_back({token::equiv_n, "==(n)", static_cast<int>(v)});
            i = j + 1;
            continue;
          }
        }
        toks_.push_back({token::equiv, "=="});
        continue;
      }
      if (c == '0' || c == '1') {
        if (i + 1 < s.size() && is_ident(s[i + 1]))
          fail(term_errc::syntax, "numeric literal at offset " + std::to_string(i));
        toks_.push_back({c == '0' ? token::zero : token::one, std::string(1, c)});
        ++i;
        continue;
      }
      if (is_ident_start(c)) {
        size_t j = i;
        while (j < s.size() && is_ident(s[j])) ++j;
        toks_.push_back({token::ident, std::string(s.substr(i, j - i))});
        i = j;
        continue;
      }
      fail(term_errc::syntax, std::string("unexpected character '") + c + "' at offset " + std::to_string(i));
    }
    toks_.push_back({token::end, ""});
  }

  const token& peek() const { return toks_[pos_]; }
  token take() { return toks_[pos_++]; }
  void expect(token::kind_t k, const std::string& what) {
    if (peek().kind != k) fail(term_errc::syntax, "expected " + what + ", got '" + peek().text + "'");
    ++pos_;
  }

  term parse_equiv() {
    term l = parse_sasaki();
    if (peek().kind == token::equiv) {
      take();
      return store_.equiv(l, parse_sasaki());
    }
    if (peek().kind == token::equiv_n) {
      int n = take().n;
      term r = parse_sasaki();
      expect(token::colon, "':' before equiv_n auxiliaries");
      std::vector<term> aux;
      aux.push_back(parse_sasaki());
      while (peek().kind == token::comma) {
        take();
        aux.push_back(parse_sasaki());
      }
      return store_.equiv_n(n, l, r, std::move(aux));
    }
    return l;
  }

  term parse_sasaki() {
    term l = parse_join();
    if (peek().kind == token::arrow) {
      take();
      return store_.sasaki(l, parse_join());
    }
    return l;
  }

  term parse_join() {
    term l = parse_meet();
    // A bare identifier "v" after a complete operand is the join operator;
    // in operand position it parses as a variable.
    while (peek().kind == token::ident && peek().text == "v") {
      take();
      l = store_.join(l, parse_meet());
    }
    return l;
  }

  term parse_meet() {
    term l = parse_postfix();
    while (peek().kind == token::caret) {
      take();
      l = store_.meet(l, parse_postfix());
    }
    return l;
  }

  term parse_postfix() {
    term t = parse_primary();
    while (peek().kind == token::apos) {
      take();
      t = store_.ortho(t);
    }
    return t;
  }

  term parse_primary() {
    const token& tk = peek();
    switch (tk.kind) {
      case token::zero:
        take();
        return store_.zero();
      case token::one:
        take();
        return store_.one();
      case token::ident:
        return store_.variable(take().text);
      case token::gchain: {
        take();
        expect(token::lparen, "'(' after ==g");
        std::vector<term> vars;
        if (peek().kind != token::rparen) {
          for (;;) {
            if (peek().kind != token::ident) fail(term_errc::syntax, "chain arguments must be variables");
            vars.push_back(store_.variable(take().text));
            if (peek().kind != token::comma) break;
            take();
          }
        }
        expect(token::rparen, "')' closing ==g");
        return store_.godowski_chain(std::move(vars));
      }
      case token::lparen: {
        take();
        term t = parse_equiv();
        expect(token::rparen, "')'");
        return t;
      }
      default:
        fail(term_errc::syntax, "unexpected token '" + tk.text + "'");
    }
  }

  term_store& store_;
  std::vector<token> toks_;
  size_t pos_ = 0;
};

}  // namespace

std::string to_string(const term& t) {
  std::string out;
  render(t, 1, out);
  return out;
}

term parse_term(std::string_view text, term_store& store) {
  return term_parser(text, store).parse();
}

hypothesis hypothesis::orthogonal(std::string a, std::string b) {
  hypothesis h;
  h.kind = hypothesis_kind::orthogonality;
  h.var_a = std::move(a);
  h.var_b = std::move(b);
  return h;
}

hypothesis hypothesis::equal(term l, term r) {
  hypothesis h;
  h.kind = hypothesis_kind::equality;
  h.lhs = std::move(l);
  h.rhs = std::move(r);
  return h;
}

namespace {

void add_vars(const term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  for (const std::string& v : collect_variables(t))
    if (seen.insert(v).second) out.push_back(v);
}

}  // namespace

void assign_variables(inference& inf) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const hypothesis& h : inf.hypotheses) {
    if (h.kind == hypothesis_kind::orthogonality) {
      if (seen.insert(h.var_a).second) out.push_back(h.var_a);
      if (seen.insert(h.var_b).second) out.push_back(h.var_b);
    } else {
      add_vars(h.lhs, out, seen);
      add_vars(h.rhs, out, seen);
    }
  }
  add_vars(inf.lhs, out, seen);
  add_vars(inf.rhs, out, seen);
  inf.variables = std::move(out);
}

bool variables_closed(const inference& inf) {
  std::set<std::string> have(inf.variables.begin(), inf.variables.end());
  auto covered = [&](const term& t) {
    for (const std::string& v : collect_variables(t))
      if (!have.count(v)) return false;
    return true;
  };
  for (const hypothesis& h : inf.hypotheses) {
    if (h.kind == hypothesis_kind::orthogonality) {
      if (!have.count(h.var_a) || !have.count(h.var_b)) return false;
    } else if (!covered(h.lhs) || !covered(h.rhs)) {
      return false;
    }
  }
  return covered(inf.lhs) && covered(inf.rhs);
}

std::string to_string(const inference& inf) {
  std::string out;
  for (size_t i = 0; i < inf.hypotheses.size(); ++i) {
    if (i > 0) out += " & ";
    const hypothesis& h = inf.hypotheses[i];
    if (h.kind == hypothesis_kind::orthogonality) {
      out += h.var_a + " _|_ " + h.var_b;
    } else {
      out += to_string(h.lhs) + " = " + to_string(h.rhs);
    }
  }
  if (!inf.hypotheses.empty()) out += "  |-  ";
  out += to_string(inf.lhs);
  switch (inf.conclusion) {
    case conclusion_kind::leq:
      out += " <= ";
      break;
    case conclusion_kind::eq:
      out += " = ";
      break;
    case conclusion_kind::commutes:
      out += " C ";
      break;
  }
  out += to_string(inf.rhs);
  return out;
}

bool eval_conclusion(const inference& inf, const lattice& L, const assignment& a) {
  int l = eval(inf.lhs, L, a);
  int r = eval(inf.rhs, L, a);
  switch (inf.conclusion) {
    case conclusion_kind::leq:
      return L.leq(l, r);
    case conclusion_kind::eq:
      return l == r;
    case conclusion_kind::commutes:
      return l == L.meet(L.join(l, r), L.join(l, L.ortho(r)));
  }
  return false;
}

bool eval_hypotheses(const inference& inf, const lattice& L, const assignment& a) {
  for (const hypothesis& h : inf.hypotheses) {
    if (h.kind == hypothesis_kind::orthogonality) {
      auto ia = a.find(h.var_a);
      auto ib = a.find(h.var_b);
      if (ia == a.end() || ib == a.end())
        fail(term_errc::unbound_variable, "unbound hypothesis variable");
      if (!L.orthogonal(ia->second, ib->second)) return false;
    } else {
      if (eval(h.lhs, L, a) != eval(h.rhs, L, a)) return false;
    }
  }
  return true;
}

condensed_state_equation parse_condensed(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) fail(term_errc::syntax, "empty condensed equation");
  size_t eq = s.find('=');
  if (eq == std::string::npos) fail(term_errc::syntax, "condensed equation needs '='");
  if (s.find('=', eq + 1) != std::string::npos) fail(term_errc::syntax, "multiple '=' signs");

  auto parse_side = [](std::string_view side) {
    std::vector<std::string> terms;
    std::string cur;
    auto flush = [&]() {
      if (cur.empty()) fail(term_errc::syntax, "empty term in condensed equation");
      std::set<char> seen;
      for (char c : cur)
        if (!seen.insert(c).second)
          fail(term_errc::repeated_variable_in_term,
               std::string("variable '") + c + "' repeated within term '" + cur + "'");
      terms.push_back(cur);
      cur.clear();
    };
    for (char c : side) {
      if (c == '+') {
        flush();
      } else if (c >= 'a' && c <= 'z') {
        cur += c;
      } else {
        fail(term_errc::syntax, std::string("illegal condensed variable '") + c + "'");
      }
    }
    flush();
    return terms;
  };

  condensed_state_equation c;
  c.lhs = parse_side(std::string_view(s).substr(0, eq));
  c.rhs = parse_side(std::string_view(s).substr(eq + 1));

  std::map<char, int> balance;
  for (const std::string& t : c.lhs)
    for (char v : t) ++balance[v];
  for (const std::string& t : c.rhs)
    for (char v : t) --balance[v];
  for (const auto& [v, d] : balance)
    if (d != 0)
      fail(term_errc::unbalanced, std::string("variable '") + v + "' occurs " +
                                      std::to_string(d > 0 ? d : -d) + " more time(s) on the " +
                                      (d > 0 ? "left" : "right"));
  return c;
}

std::string serialize_condensed(const condensed_state_equation& c) {
  std::string out;
  for (size_t i = 0; i < c.lhs.size(); ++i) {
    if (i > 0) out += '+';
    out += c.lhs[i];
  }
  out += '=';
  for (size_t i = 0; i < c.rhs.size(); ++i) {
    if (i > 0) out += '+';
    out += c.rhs[i];
  }
  return out;
}

inference mge_to_inference(const condensed_state_equation& c, term_store& store) {
  inference inf;
  inf.name = "mge:" + serialize_condensed(c);
  std::set<std::pair<char, char>> seen;
  auto add_pairs = [&](const std::vector<std::string>& side) {
    for (const std::string& t : side)
      for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j) {
          std::pair<char, char> key{std::min(t[i], t[j]), std::max(t[i], t[j])};
          if (seen.insert(key).second)
            inf.hypotheses.push_back(
                hypothesis::orthogonal(std::string(1, t[i]), std::string(1, t[j])));
        }
  };
  add_pairs(c.lhs);
  add_pairs(c.rhs);

  auto side_term = [&](const std::vector<std::string>& side) {
    std::vector<term> joins;
    for (const std::string& t : side) {
      std::vector<term> vars;
      for (char v : t) vars.push_back(store.variable(std::string(1, v)));
      joins.push_back(store.join_all(vars));
    }
    return store.meet_all(joins);
  };
  inf.conclusion = conclusion_kind::eq;
  inf.lhs = side_term(c.lhs);
  inf.rhs = side_term(c.rhs);
  assign_variables(inf);
  return inf;
}

}  // namespace oml
