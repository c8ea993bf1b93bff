#pragma once

// Independent oracle for the simplex solver: minimize c.x over {Ax = b,
// x >= 0} by adjoining t = c.x and eliminating every x variable with exact
// Fourier-Motzkin steps. Exponential in the worst case, fine for the small
// random instances the tests feed it.

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "omlattice/states.hpp"

namespace omltest {

using oml::rational;

struct fm_outcome {
  oml::lp_status status = oml::lp_status::infeasible;
  rational value;  // meaningful only when optimal
};

namespace fm_detail {

// One inequality sum coef[j] * y_j <= bound, scaled so the leading nonzero
// coefficient has magnitude one; keeps the dedupe set small. `history`
// records which original inequalities the row combines, for Chernikov's
// redundancy rule: after eliminating k variables any row combining more
// than k + 1 originals is redundant, which tames the row explosion.
struct row {
  std::vector<rational> coef;
  rational bound;
  std::uint64_t history = 0;

  void normalize() {
    rational scale;
    for (const rational& c : coef) {
      if (c != 0) {
        scale = abs(c);
        break;
      }
    }
    if (scale == 0) return;
    for (rational& c : coef) c /= scale;
    bound /= scale;
  }
};

}  // namespace fm_detail

inline fm_outcome fm_minimize(const oml::lp_problem& p) {
  using fm_detail::row;
  const int n = p.vars;

  std::vector<row> rows;
  auto add = [&](std::vector<rational> c, rational b) {
    row r{std::move(c), std::move(b), std::uint64_t{1} << (rows.size() % 64)};
    r.normalize();
    rows.push_back(std::move(r));
  };

  // Variables y_0..y_{n-1} mirror x, y_n is the objective tracker t.
  for (size_t i = 0; i < p.rows.size(); ++i) {
    std::vector<rational> c(n + 1, 0);
    for (int j = 0; j < n; ++j) c[j] = p.rows[i][j];
    add(c, p.rhs[i]);
    for (rational& v : c) v = -v;
    add(std::move(c), -p.rhs[i]);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<rational> c(n + 1, 0);
    c[j] = -1;
    add(std::move(c), 0);
  }
  {
    std::vector<rational> c(n + 1, 0);
    for (int j = 0; j < n && j < static_cast<int>(p.objective.size()); ++j)
      c[j] = p.objective[j];
    c[n] = -1;
    add(c, 0);
    for (rational& v : c) v = -v;
    add(std::move(c), 0);
  }

  for (int k = 0; k < n; ++k) {
    std::vector<row> keep, pos, neg;
    for (row& r : rows) {
      if (r.coef[k] == 0)
        keep.push_back(std::move(r));
      else if (r.coef[k] > 0)
        pos.push_back(std::move(r));
      else
        neg.push_back(std::move(r));
    }
    std::set<std::pair<std::vector<rational>, rational>> seen;
    std::vector<row> next;
    auto push = [&](row r) {
      r.normalize();
      if (seen.emplace(r.coef, r.bound).second) next.push_back(std::move(r));
    };
    for (row& r : keep) push(std::move(r));
    for (const row& pr : pos) {
      for (const row& nr : neg) {
        const std::uint64_t hist = pr.history | nr.history;
        if (std::popcount(hist) > k + 2) continue;  // Chernikov: redundant
        const rational pc = pr.coef[k];
        const rational nc = -nr.coef[k];
        row r;
        r.coef.resize(n + 1);
        for (int j = 0; j <= n; ++j)
          r.coef[j] = pr.coef[j] / pc + nr.coef[j] / nc;
        r.coef[k] = 0;
        r.bound = pr.bound / pc + nr.bound / nc;
        r.history = hist;
        push(std::move(r));
      }
    }
    rows = std::move(next);
  }

  // Only t remains. The projection is exact, so the interval it describes
  // is exactly the range of the objective over the feasible set.
  fm_outcome out;
  std::optional<rational> lower, upper;
  for (const row& r : rows) {
    const rational& a = r.coef[n];
    if (a == 0) {
      if (r.bound < 0) return out;  // 0 <= negative: infeasible
      continue;
    }
    rational bound = r.bound / a;
    if (a < 0) {
      if (!lower || bound > *lower) lower = bound;
    } else {
      if (!upper || bound < *upper) upper = bound;
    }
  }
  if (lower && upper && *lower > *upper) return out;  // empty interval
  if (!lower) {
    out.status = oml::lp_status::unbounded;
    return out;
  }
  out.status = oml::lp_status::optimal;
  out.value = *lower;
  return out;
}

}  // namespace omltest
