#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "omlattice/lattice.hpp"

namespace oml {

enum class term_errc {
  unbound_variable,
  bad_parameter,
  syntax,
  unbalanced,
  repeated_variable_in_term,
};

class term_error : public std::runtime_error {
 public:
  term_error(term_errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  term_errc code() const { return code_; }

 private:
  term_errc code_;
};

enum class term_kind : std::uint8_t {
  zero,
  one,
  variable,
  ortho,
  meet,
  join,
  sasaki,          // a -> b  =  a' v (a ^ b)
  equiv,           // a == b  =  (a ^ b) v (a' ^ b')
  equiv_n,         // n-ary generalized equivalence; args = [lhs, rhs, aux...]
  godowski_chain,  // args = variables a1..ak; (a1->a2) ^ ... ^ (ak->a1)
};

struct term_node;
// Terms are immutable and shared; structural sharing keeps expanded laws
// (which repeat subterms exponentially often) evaluable in linear time.
using term = std::shared_ptr<const term_node>;

struct term_node {
  term_kind kind = term_kind::zero;
  int n = 0;          // equiv_n only: the arity (n >= 3, args.size() == n)
  std::string name;   // variable only
  std::vector<term> args;
};

// Builder that interns structurally equal terms so the DAG shares nodes.
// Not thread-safe; use one store per construction context.
class term_store {
 public:
  term zero();
  term one();
  term variable(std::string_view name);
  term ortho(const term& t);
  term meet(const term& a, const term& b);
  term join(const term& a, const term& b);
  term sasaki(const term& a, const term& b);
  term equiv(const term& a, const term& b);
  // aux holds the n-2 auxiliary terms, positionally (third, fourth, ...).
  term equiv_n(int n, const term& lhs, const term& rhs, std::vector<term> aux);
  term godowski_chain(std::vector<term> vars);

  // Left-associated folds; ts must be nonempty.
  term meet_all(const std::vector<term>& ts);
  term join_all(const std::vector<term>& ts);

 private:
  term intern(term_node node);
  std::unordered_map<std::string, term> memo_;
};

using assignment = std::map<std::string, int>;

// Evaluates t over L. Shared subterms are evaluated once per call.
int eval(const term& t, const lattice& L, const assignment& a);

// Rewrites derived connectives (sasaki, equiv, equiv_n, godowski_chain) into
// ortho/meet/join. eval(expand(t)) == eval(t) everywhere.
term expand(const term& t, term_store& store);

// Capture-free substitution of variables by terms. Variables absent from the
// map are left alone.
term substitute(const term& t, const std::map<std::string, term>& subs, term_store& store);

// Number of variable occurrences when t is read as a tree (shared nodes count
// once per path). Derived connectives count the occurrences in their
// arguments; expand first to count the elementary form.
long long occurrences(const term& t);

// Free variables in first-appearance (depth-first, argument order) order.
std::vector<std::string> collect_variables(const term& t);

// Report grammar: postfix ' (ortho), infix ^ (meet), v (join), -> (sasaki),
// == (equiv), ==(n) with ": aux,..." (equiv_n), ==g(a,b,c) (chain).
std::string to_string(const term& t);
term parse_term(std::string_view text, term_store& store);

enum class hypothesis_kind : std::uint8_t { orthogonality, equality };

struct hypothesis {
  hypothesis_kind kind = hypothesis_kind::orthogonality;
  std::string var_a, var_b;  // orthogonality: var_a _|_ var_b
  term lhs, rhs;             // equality: lhs = rhs

  static hypothesis orthogonal(std::string a, std::string b);
  static hypothesis equal(term l, term r);
};

enum class conclusion_kind : std::uint8_t { leq, eq, commutes };

struct inference {
  std::string name;  // family label used in reports
  std::vector<hypothesis> hypotheses;
  conclusion_kind conclusion = conclusion_kind::leq;
  term lhs, rhs;
  std::vector<std::string> variables;  // ordered; must cover hypotheses + conclusion
};

// Fills inf.variables with every variable of the hypotheses (in order) and the
// conclusion, by first appearance.
void assign_variables(inference& inf);

// True when inf.variables covers every variable used anywhere in inf.
bool variables_closed(const inference& inf);

std::string to_string(const inference& inf);

// Does the conclusion hold under a total assignment (hypotheses not checked)?
bool eval_conclusion(const inference& inf, const lattice& L, const assignment& a);
// Do all hypotheses hold under the assignment?
bool eval_hypotheses(const inference& inf, const lattice& L, const assignment& a);

// Condensed state equation: sides are '+'-separated juxtaposition terms over
// single-letter variables, e.g. "ad+be+cf=db+ec+fa". Within a term the
// variables are distinct; across the two sides every variable occurs equally
// often (multiset balance). Term order and variable order are preserved.
struct condensed_state_equation {
  std::vector<std::string> lhs, rhs;
  bool operator==(const condensed_state_equation&) const = default;
};

condensed_state_equation parse_condensed(std::string_view text);
std::string serialize_condensed(const condensed_state_equation& c);

// Hypotheses: within-term pairwise orthogonality, both sides, deduplicated.
// Conclusion: meet of per-term joins (lhs) = meet of per-term joins (rhs).
inference mge_to_inference(const condensed_state_equation& c, term_store& store);

}  // namespace oml
