#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omlattice/checker.hpp"
#include "omlattice/lattice.hpp"
#include "omlattice/term.hpp"

namespace oml {

enum class states_errc {
  not_greechie_backed,
  readoff_failed,
};

class states_error : public std::runtime_error {
 public:
  states_error(states_errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  states_errc code() const { return code_; }

 private:
  states_errc code_;
};

using rational = mpq_class;

// ---------------------------------------------------------------------------
// Exact linear programming: minimize objective . x subject to rows x = rhs
// and x >= 0, all coefficients rational.

enum class lp_status { optimal, infeasible, unbounded };

struct lp_problem {
  int vars = 0;
  std::vector<std::vector<rational>> rows;  // equality rows, each of length vars
  std::vector<rational> rhs;
  std::vector<rational> objective;  // minimized; empty means feasibility only

  // Plain inequality text for external cross-checking, deterministic.
  std::string dump() const;
};

struct lp_result {
  lp_status status = lp_status::infeasible;
  rational value;                // optimal objective value when optimal
  std::vector<rational> point;   // primal optimum, one entry per variable
  // One multiplier per original row. At an optimum this is a dual-feasible
  // certificate (dual . rows <= objective componentwise, dual . rhs = value);
  // on infeasibility it is a Farkas certificate (dual . rows <= 0
  // componentwise, dual . rhs > 0). Empty when unbounded.
  std::vector<rational> dual;
};

// Two-phase primal simplex with Bland's rule; exact, always terminates.
lp_result simplex_solve(const lp_problem& p);

// ---------------------------------------------------------------------------
// The state polytope of a lattice: one variable per atom, one sum-to-one row
// per block, atoms nonnegative. Every lattice element evaluates as either a
// constant (bounds) or the sum of the member atoms of a block it lives in,
// so every feasible point extends to a full state m : L -> [0,1].

class state_lp {
 public:
  // Requires block structure: a lattice built from a diagram, or the O6
  // built-in (hand-encoded rows). Throws states_error(not_greechie_backed)
  // otherwise.
  explicit state_lp(const lattice& L);

  const lattice& source() const { return *L_; }
  int vars() const { return static_cast<int>(var_names_.size()); }
  const std::vector<std::string>& var_names() const { return var_names_; }
  // Sum-to-one rows as variable index sets.
  const std::vector<std::vector<int>>& rows() const { return rows_; }

  struct valuation {
    bool constant = false;
    rational value;          // when constant (bottom and top)
    std::vector<int> vars;   // otherwise: m(e) = sum of these variables
  };
  const valuation& valuation_of(int element) const {
    return valuations_.at(element);
  }
  // Lattice element whose valuation is exactly variable v (the atom itself).
  const std::vector<int>& var_elements() const { return var_elements_; }

  // Equality-form feasibility problem (zero objective).
  lp_problem problem() const;
  // Linear objective/constraint row for one element's valuation.
  std::vector<rational> element_row(int element) const;

  rational value(const std::vector<rational>& point, int element) const;
  // Exact check that the extension of point is a state: values in [0,1],
  // m(0)=0, m(1)=1, m(x)+m(x')=1, monotone on <=, and additive on every
  // orthogonal pair. Fills why on failure when given.
  bool is_state(const std::vector<rational>& point, std::string* why = nullptr) const;

 private:
  const lattice* L_;
  std::vector<std::string> var_names_;
  std::vector<std::vector<int>> rows_;
  std::vector<valuation> valuations_;
  std::vector<int> var_elements_;
};

// Feasibility of the state polytope; the witness is one exact state.
std::optional<std::vector<rational>> admits_state(const lattice& L);

// ---------------------------------------------------------------------------
// Strong sets of states. A pair a,b with a not <= b passes the quantum test
// when some state has m(a)=1 and m(b)<1; it passes the classical test when
// one shared state does so for every pair simultaneously.

struct pair_witness {
  int a = -1;
  int b = -1;
  std::vector<rational> state;
};

struct strong_set_report {
  bool admits = false;
  // First failing ordered pair (by a*size+b) when admits is false.
  int failing_a = -1;
  int failing_b = -1;
  // True when no state at all satisfies m(failing_a)=1.
  bool failing_infeasible = false;
  // Witness states for the pairs decided before the failure (all pairs when
  // admits is true), in pair order.
  std::vector<pair_witness> witnesses;
  // The LP that decided the failing pair, with its dual certificate.
  lp_problem failing_problem;
  std::vector<rational> failing_dual;
};

strong_set_report strong_quantum(const lattice& L, int workers = 1);

struct classical_report {
  bool admits = false;
  std::vector<rational> witness;  // a single state serving every pair
  // When admits is false: the element whose strict requirement failed, or -1
  // when already the equality constraints are infeasible.
  int failing_element = -1;
};

classical_report strong_classical(const lattice& L);

// ---------------------------------------------------------------------------
// Mechanical read-off of a condensed state equation from a lattice that
// fails the strong-quantum test. Follows the failing pair's dual
// certificate: blocks with positive multiplier become left-hand terms,
// negative ones right-hand terms, atoms forced to 0 or 1 are dropped, and
// degenerate multipliers duplicate terms. Ambiguous (zero-dual) blocks are
// tried in all assignments up to a bound; the first candidate that is
// balanced and verifiably fails in the source lattice wins.

struct readoff_result {
  condensed_state_equation condensed;
  // Variable of the condensed equation -> source atom element id.
  std::vector<std::pair<char, int>> atom_of_var;
  inference derived;
  bool verified_fails_in_source = false;
};

readoff_result mge_readoff(const lattice& L, int failing_a, int failing_b,
                           term_store& store);
readoff_result mge_readoff(const lattice& L, const strong_set_report& report,
                           term_store& store);

}  // namespace oml
