#pragma once

// Independent reference checker: full nested enumeration over |L|^k raw
// assignments, evaluating the original (unexpanded, uncompiled) terms. Slow
// on purpose; used to cross-check the production engine on small lattices.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omlattice/lattice.hpp"
#include "omlattice/term.hpp"

namespace omltest {

struct naive_result {
  bool holds = true;
  oml::assignment counterexample;        // first one in lexicographic order
  std::uint64_t hypothesis_consistent = 0;  // assignments satisfying all hypotheses
  std::uint64_t orthogonality_consistent = 0;  // satisfying just the orthogonality ones
};

inline naive_result naive_check(const oml::lattice& L, const oml::inference& inf) {
  naive_result res;
  const auto& vars = inf.variables;
  size_t k = vars.size();
  std::vector<int> idx(k, 0);
  oml::assignment a;
  for (;;) {
    for (size_t i = 0; i < k; ++i) a[vars[i]] = idx[i];
    bool ortho_ok = true;
    for (const oml::hypothesis& h : inf.hypotheses) {
      if (h.kind != oml::hypothesis_kind::orthogonality) continue;
      int x = a.at(h.var_a), y = a.at(h.var_b);
      if (!L.leq_unchecked(x, L.ortho_table()[static_cast<size_t>(y)])) {
        ortho_ok = false;
        break;
      }
    }
    if (ortho_ok) {
      ++res.orthogonality_consistent;
      if (oml::eval_hypotheses(inf, L, a)) {
        ++res.hypothesis_consistent;
        if (!oml::eval_conclusion(inf, L, a) && res.holds) {
          res.holds = false;
          res.counterexample = a;
        }
      }
    }
    size_t p = k;
    while (p > 0) {
      --p;
      if (++idx[p] < L.size()) break;
      idx[p] = 0;
      if (p == 0) return res;
    }
    if (k == 0) {
      // Closed inference: single empty assignment already processed.
      return res;
    }
  }
}

}  // namespace omltest
