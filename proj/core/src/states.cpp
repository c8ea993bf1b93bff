#include "omlattice/states.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace oml {

namespace {

[[noreturn]] void fail(states_errc code, const std::string& msg) {
  throw states_error(code, msg);
}

std::string frac(const rational& q) { return q.get_str(); }

}  // namespace

// ---------------------------------------------------------------------------
// lp_problem

std::string lp_problem::dump() const {
  std::ostringstream out;
  out << "min:";
  bool any = false;
  for (int j = 0; j < vars; ++j) {
    if (j < static_cast<int>(objective.size()) && objective[j] != 0) {
      out << ' ' << frac(objective[j]) << " x" << j;
      any = true;
    }
  }
  if (!any) out << " 0";
  out << '\n';
  for (size_t i = 0; i < rows.size(); ++i) {
    out << 'r' << i << ':';
    bool row_any = false;
    for (int j = 0; j < vars; ++j) {
      if (rows[i][j] != 0) {
        out << ' ' << frac(rows[i][j]) << " x" << j;
        row_any = true;
      }
    }
    if (!row_any) out << " 0";
    out << " = " << frac(rhs[i]) << '\n';
  }
  out << "x >= 0\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Two-phase primal simplex, exact rationals, Bland's rule.
//
// Tableau columns: [0, n) structural, [n, n+m) artificial, last = rhs.
// Rows with negative right-hand side are negated up front; `flipped`
// remembers the sign so dual multipliers can be reported against the
// original rows. Artificial variables never re-enter the basis: once one
// leaves, any solution of the reduced problem is a solution of the full
// phase-1 problem, so the restricted optimum is exact.

namespace {

struct tableau {
  int m = 0;
  int n = 0;
  std::vector<std::vector<rational>> row;  // m x (n + m + 1)
  std::vector<rational> cost;              // n + m + 1; last = -objective
  std::vector<int> basis;                  // column basic in each row
  std::vector<bool> flipped;

  int width() const { return n + m + 1; }
  rational& rhs(int i) { return row[i][n + m]; }

  void pivot(int pr, int pc) {
    const rational inv = 1 / row[pr][pc];
    for (rational& v : row[pr]) v *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == pr || row[i][pc] == 0) continue;
      const rational f = row[i][pc];
      for (int j = 0; j < width(); ++j) row[i][j] -= f * row[pr][j];
    }
    if (cost[pc] != 0) {
      const rational f = cost[pc];
      for (int j = 0; j < width(); ++j) cost[j] -= f * row[pr][j];
    }
    basis[pr] = pc;
  }

  // Bland: lowest-index structural column with negative reduced cost; ratio
  // test ties break on the lowest basis column. Rows whose basic variable is
  // artificial join the ratio test on any nonzero entry so an artificial can
  // never grow back above zero. Returns false when no entering column
  // remains (optimal), throws unbounded via the out-flag.
  bool step(bool* unbounded) {
    int pc = -1;
    for (int j = 0; j < n; ++j) {
      if (cost[j] < 0) {
        pc = j;
        break;
      }
    }
    if (pc < 0) return false;
    int pr = -1;
    rational best;
    for (int i = 0; i < m; ++i) {
      const rational& a = row[i][pc];
      bool eligible = a > 0 || (basis[i] >= n && a != 0);
      if (!eligible) continue;
      rational ratio = a > 0 ? rhs(i) / a : rational(0);
      if (pr < 0 || ratio < best || (ratio == best && basis[i] < basis[pr])) {
        pr = i;
        best = ratio;
      }
    }
    if (pr < 0) {
      *unbounded = true;
      return false;
    }
    pivot(pr, pc);
    return true;
  }
};

}  // namespace

lp_result simplex_solve(const lp_problem& p) {
  const int m = static_cast<int>(p.rows.size());
  const int n = p.vars;

  tableau t;
  t.m = m;
  t.n = n;
  t.row.assign(m, std::vector<rational>(n + m + 1, 0));
  t.basis.resize(m);
  t.flipped.assign(m, false);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.row[i][j] = p.rows[i][j];
    t.rhs(i) = p.rhs[i];
    if (t.rhs(i) < 0) {
      for (rational& v : t.row[i]) v = -v;
      t.flipped[i] = true;
    }
    t.row[i][n + i] = 1;
    t.basis[i] = n + i;
  }

  // Phase 1: minimize the artificial sum. Reduced costs with the all-
  // artificial basis: structural j gets -(column sum), artificials 0.
  t.cost.assign(n + m + 1, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < t.width(); ++j) t.cost[j] -= t.row[i][j];
  for (int i = 0; i < m; ++i) t.cost[n + i] += 1;

  bool unbounded = false;
  while (t.step(&unbounded)) {
  }
  assert(!unbounded);  // the phase-1 objective is bounded below by zero

  lp_result res;
  const rational phase1 = -t.cost[n + m];
  if (phase1 > 0) {
    res.status = lp_status::infeasible;
    res.dual.resize(m);
    for (int i = 0; i < m; ++i) {
      rational y = 1 - t.cost[n + i];
      res.dual[i] = t.flipped[i] ? rational(-y) : y;
    }
    return res;
  }

  // Drive leftover artificials out of the basis where possible; rows with no
  // structural support are redundant and stay inert.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (t.row[i][j] != 0) {
        t.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 with the real objective.
  std::vector<rational> c(n, 0);
  for (int j = 0; j < n && j < static_cast<int>(p.objective.size()); ++j)
    c[j] = p.objective[j];
  t.cost.assign(t.width(), 0);
  for (int j = 0; j < n; ++j) t.cost[j] = c[j];
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] >= n) continue;  // artificial stuck at zero costs nothing
    const rational f = c[t.basis[i]];
    if (f == 0) continue;
    for (int j = 0; j < t.width(); ++j) t.cost[j] -= f * t.row[i][j];
  }

  unbounded = false;
  while (t.step(&unbounded)) {
  }
  if (unbounded) {
    res.status = lp_status::unbounded;
    return res;
  }

  res.status = lp_status::optimal;
  res.point.assign(n, 0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n) res.point[t.basis[i]] = t.rhs(i);
  res.value = 0;
  for (int j = 0; j < n; ++j) res.value += c[j] * res.point[j];
  res.dual.resize(m);
  for (int i = 0; i < m; ++i) {
    rational y = -t.cost[n + i];
    res.dual[i] = t.flipped[i] ? rational(-y) : y;
  }
  return res;
}

// ---------------------------------------------------------------------------
// state_lp

state_lp::state_lp(const lattice& L) : L_(&L) {
  const int n = L.size();
  valuations_.resize(n);

  if (L.source()) {
    const diagram& d = *L.source();
    for (char c : d.atom_names) var_names_.emplace_back(1, c);
    for (const std::vector<int>& blk : d.blocks) rows_.push_back(blk);
    var_elements_ = L.atom_elements();
    for (int e = 0; e < n; ++e) {
      const element_info& info = L.info(e);
      valuation& v = valuations_[e];
      switch (info.kind) {
        case element_kind::zero:
          v.constant = true;
          v.value = 0;
          break;
        case element_kind::one:
          v.constant = true;
          v.value = 1;
          break;
        case element_kind::atom:
          v.vars = {info.atom};
          break;
        case element_kind::subset:
          v.vars = info.members;
          break;
      }
    }
    return;
  }

  // O6 is hand-built (it has no diagram), so its state description is
  // hand-encoded too: besides the complement rows, a <= b makes a and b'
  // orthogonal with join 1, which pins m(a) + m(b') = 1.
  if (L.name() == "O6" && n == 6 && L.leq(1, 2) && L.ortho(1) == 4 &&
      L.ortho(2) == 3) {
    var_names_ = {"a", "b", "a'", "b'"};
    var_elements_ = {1, 2, 4, 3};
    rows_ = {{0, 2}, {1, 3}, {0, 3}};
    valuations_[0].constant = true;
    valuations_[0].value = 0;
    valuations_[5].constant = true;
    valuations_[5].value = 1;
    valuations_[1].vars = {0};
    valuations_[2].vars = {1};
    valuations_[4].vars = {2};
    valuations_[3].vars = {3};
    return;
  }

  fail(states_errc::not_greechie_backed,
       "lattice '" + (L.name().empty() ? std::string("<unnamed>") : L.name()) +
           "' carries no block structure to define states over");
}

lp_problem state_lp::problem() const {
  lp_problem p;
  p.vars = vars();
  for (const std::vector<int>& r : rows_) {
    std::vector<rational> row(p.vars, 0);
    for (int v : r) row[v] += 1;
    p.rows.push_back(std::move(row));
    p.rhs.emplace_back(1);
  }
  return p;
}

std::vector<rational> state_lp::element_row(int element) const {
  std::vector<rational> row(vars(), 0);
  const valuation& v = valuations_.at(element);
  for (int j : v.vars) row[j] += 1;
  return row;
}

rational state_lp::value(const std::vector<rational>& point, int element) const {
  const valuation& v = valuations_.at(element);
  if (v.constant) return v.value;
  rational sum = 0;
  for (int j : v.vars) sum += point.at(j);
  return sum;
}

bool state_lp::is_state(const std::vector<rational>& point, std::string* why) const {
  auto reject = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<int>(point.size()) != vars())
    return reject("point has wrong arity");
  for (size_t i = 0; i < rows_.size(); ++i) {
    rational sum = 0;
    for (int v : rows_[i]) sum += point[v];
    if (sum != 1) return reject("row " + std::to_string(i) + " sums to " + frac(sum));
  }

  const lattice& L = *L_;
  const int n = L.size();
  std::vector<rational> m(n);
  for (int e = 0; e < n; ++e) m[e] = value(point, e);

  if (m[L.zero()] != 0) return reject("m(0) = " + frac(m[L.zero()]));
  if (m[L.one()] != 1) return reject("m(1) = " + frac(m[L.one()]));
  for (int e = 0; e < n; ++e) {
    if (m[e] < 0 || m[e] > 1)
      return reject("m(" + std::to_string(e) + ") = " + frac(m[e]) +
                    " outside [0,1]");
    if (m[e] + m[L.ortho(e)] != 1)
      return reject("m(" + std::to_string(e) + ") + m(complement) != 1");
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (L.leq(x, y) && m[x] > m[y])
        return reject("monotonicity fails at " + std::to_string(x) + " <= " +
                      std::to_string(y));
      if (L.orthogonal(x, y) && m[L.join(x, y)] != m[x] + m[y])
        return reject("additivity fails at orthogonal pair " +
                      std::to_string(x) + ", " + std::to_string(y));
    }
  }
  return true;
}

std::optional<std::vector<rational>> admits_state(const lattice& L) {
  state_lp slp(L);
  lp_result res = simplex_solve(slp.problem());
  if (res.status != lp_status::optimal) return std::nullopt;
  return res.point;
}

// ---------------------------------------------------------------------------
// strong_quantum

namespace {

struct pair_lp_outcome {
  bool pass = false;
  bool infeasible = false;
  std::vector<rational> state;
  lp_problem prob;
  std::vector<rational> dual;
};

pair_lp_outcome solve_pair(const state_lp& slp, const lp_problem& base, int a,
                           int b) {
  pair_lp_outcome out;
  lp_problem lp = base;
  const state_lp::valuation& va = slp.valuation_of(a);
  if (!va.constant) {
    lp.rows.push_back(slp.element_row(a));
    lp.rhs.emplace_back(1);
  }
  lp.objective = slp.element_row(b);
  lp_result res = simplex_solve(lp);
  out.prob = std::move(lp);
  out.dual = res.dual;
  if (res.status == lp_status::infeasible) {
    out.infeasible = true;
    return out;
  }
  assert(res.status == lp_status::optimal);  // objective >= 0 on the polytope
  const rational minimum =
      slp.valuation_of(b).constant ? slp.valuation_of(b).value : res.value;
  if (minimum < 1) {
    out.pass = true;
    out.state = std::move(res.point);
  }
  return out;
}

}  // namespace

strong_set_report strong_quantum(const lattice& L, int workers) {
  state_lp slp(L);
  const lp_problem base = slp.problem();
  const int n = L.size();

  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!L.leq(a, b)) pairs.emplace_back(a, b);

  const size_t total = pairs.size();
  std::vector<pair_lp_outcome> outcomes(total);
  std::atomic<size_t> first_fail{total};

  auto run_stripe = [&](int w, int stride) {
    for (size_t i = w; i < total; i += stride) {
      if (i > first_fail.load(std::memory_order_relaxed)) continue;
      pair_lp_outcome out = solve_pair(slp, base, pairs[i].first, pairs[i].second);
      if (!out.pass) {
        size_t cur = first_fail.load(std::memory_order_relaxed);
        while (i < cur &&
               !first_fail.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
        }
      }
      outcomes[i] = std::move(out);
    }
  };

  if (workers <= 1) {
    for (size_t i = 0; i < total; ++i) {
      outcomes[i] = solve_pair(slp, base, pairs[i].first, pairs[i].second);
      if (!outcomes[i].pass) {
        first_fail.store(i);
        break;
      }
    }
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_stripe, w, workers);
    for (std::thread& th : pool) th.join();
  }

  strong_set_report report;
  const size_t failed_at = first_fail.load();
  for (size_t i = 0; i < total && i < failed_at; ++i) {
    if (!outcomes[i].pass) continue;  // unreached stripes after a failure
    report.witnesses.push_back(
        {pairs[i].first, pairs[i].second, std::move(outcomes[i].state)});
  }
  if (failed_at == total) {
    report.admits = true;
    return report;
  }
  report.admits = false;
  report.failing_a = pairs[failed_at].first;
  report.failing_b = pairs[failed_at].second;
  report.failing_infeasible = outcomes[failed_at].infeasible;
  report.failing_problem = std::move(outcomes[failed_at].prob);
  report.failing_dual = std::move(outcomes[failed_at].dual);
  return report;
}

// ---------------------------------------------------------------------------
// strong_classical

classical_report strong_classical(const lattice& L) {
  state_lp slp(L);
  const int n = L.size();

  // Elements that must take value 1 (some b lies outside their up-set) and
  // elements that must stay below 1 (something does not reach them).
  std::vector<int> ones, stricts;
  for (int a = 0; a < n; ++a) {
    bool needed = false;
    for (int b = 0; b < n && !needed; ++b) needed = !L.leq(a, b);
    if (needed && !slp.valuation_of(a).constant) ones.push_back(a);
  }
  for (int b = 0; b < n; ++b) {
    bool needed = false;
    for (int a = 0; a < n && !needed; ++a) needed = !L.leq(a, b);
    if (needed && !slp.valuation_of(b).constant) stricts.push_back(b);
  }

  lp_problem lp = slp.problem();
  for (int a : ones) {
    lp.rows.push_back(slp.element_row(a));
    lp.rhs.emplace_back(1);
  }

  classical_report report;
  lp_result feas = simplex_solve(lp);
  if (feas.status != lp_status::optimal) return report;

  // One LP per strict requirement; any interior mix of the minimizers
  // satisfies all strict inequalities at once by convexity.
  std::vector<std::vector<rational>> points;
  for (int b : stricts) {
    lp.objective = slp.element_row(b);
    lp_result res = simplex_solve(lp);
    assert(res.status == lp_status::optimal);
    if (res.value >= 1) {
      report.failing_element = b;
      return report;
    }
    points.push_back(std::move(res.point));
  }
  if (points.empty()) points.push_back(std::move(feas.point));

  std::vector<rational> witness(slp.vars(), 0);
  for (const std::vector<rational>& pt : points)
    for (int j = 0; j < slp.vars(); ++j) witness[j] += pt[j];
  const rational k(static_cast<long>(points.size()));
  for (rational& v : witness) v /= k;

  std::string why;
  if (!slp.is_state(witness, &why))
    throw std::logic_error("averaged classical witness is not a state: " + why);
  for (int a : ones)
    if (slp.value(witness, a) != 1)
      throw std::logic_error("classical witness misses a forced value");
  for (int b : stricts)
    if (slp.value(witness, b) >= 1)
      throw std::logic_error("classical witness misses a strict bound");

  report.admits = true;
  report.witness = std::move(witness);
  return report;
}

// ---------------------------------------------------------------------------
// mge_readoff

namespace {

// Integer multipliers proportional to the block duals: scale by the common
// denominator, then divide out the gcd. Falls back to bare signs when the
// certificate is badly scaled.
std::vector<long> block_multipliers(const std::vector<rational>& dual, int nblocks) {
  std::vector<long> mult(nblocks, 0);
  mpz_class lcm = 1;
  for (int i = 0; i < nblocks; ++i)
    if (dual[i] != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), dual[i].get_den_mpz_t());
  mpz_class gcd = 0;
  std::vector<mpz_class> scaled(nblocks, 0);
  for (int i = 0; i < nblocks; ++i) {
    if (dual[i] == 0) continue;
    scaled[i] = dual[i].get_num() * (lcm / dual[i].get_den());
    mpz_class a = abs(scaled[i]);
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), a.get_mpz_t());
  }
  if (gcd == 0) return mult;
  bool oversize = false;
  for (int i = 0; i < nblocks; ++i) {
    scaled[i] /= gcd;
    if (!scaled[i].fits_slong_p() || std::abs(scaled[i].get_si()) > 16)
      oversize = true;
  }
  for (int i = 0; i < nblocks; ++i) {
    if (oversize)
      mult[i] = sgn(scaled[i]);
    else
      mult[i] = scaled[i].get_si();
  }
  return mult;
}

// Append duplicate terms until every variable occurs equally often on both
// sides, or give up. Terms are variable-index lists.
bool balance_terms(std::vector<std::vector<int>>& lhs,
                   std::vector<std::vector<int>>& rhs) {
  for (int iter = 0; iter < 8; ++iter) {
    std::map<int, int> diff;
    for (const std::vector<int>& t : lhs)
      for (int v : t) ++diff[v];
    for (const std::vector<int>& t : rhs)
      for (int v : t) --diff[v];
    bool balanced = true;
    for (const auto& [v, d] : diff) balanced = balanced && d == 0;
    if (balanced) return true;

    auto try_duplicate = [&](std::vector<std::vector<int>>& side, int want_sign) {
      for (const std::vector<int>& t : side) {
        bool fits = !t.empty();
        for (int v : t) fits = fits && (want_sign > 0 ? diff[v] < 0 : diff[v] > 0);
        if (fits) {
          side.push_back(t);
          return true;
        }
      }
      return false;
    };
    if (!try_duplicate(lhs, 1) && !try_duplicate(rhs, -1)) return false;
  }
  return false;
}

struct readoff_candidate {
  std::vector<std::vector<int>> lhs, rhs;  // terms as variable-index lists
};

// Verify that the inference fails in L: try the identity assignment (every
// equation variable at its own atom) first, then a bounded counterexample
// search, then exhaustion when small enough.
bool verify_fails(const lattice& L, const inference& inf,
                  const std::map<std::string, int>& identity) {
  bool bound = true;
  for (const std::string& v : inf.variables) bound = bound && identity.count(v);
  if (bound) {
    assignment a;
    for (const std::string& v : inf.variables) a[v] = identity.at(v);
    if (eval_hypotheses(inf, L, a) && !eval_conclusion(inf, L, a)) return true;
  }
  strategy s;
  s.mode = check_mode::counterexample_search;
  s.budget = 2'000'000;
  verdict v = check(L, inf, s);
  if (v.falsified()) return true;
  if (v.holds()) return false;
  const double cost = std::pow(static_cast<double>(L.size()),
                               static_cast<double>(inf.variables.size()));
  if (cost <= 2e7) {
    strategy ex;
    verdict full = check(L, inf, ex);
    return full.falsified();
  }
  return false;
}

}  // namespace

readoff_result mge_readoff(const lattice& L, int failing_a, int failing_b,
                           term_store& store) {
  state_lp slp(L);
  const int nblocks = static_cast<int>(slp.rows().size());
  lp_problem lp = slp.problem();
  if (!slp.valuation_of(failing_a).constant) {
    lp.rows.push_back(slp.element_row(failing_a));
    lp.rhs.emplace_back(1);
  }
  lp.objective = slp.element_row(failing_b);
  lp_result res = simplex_solve(lp);

  // Atoms pinned to 0 or 1 by the failing hypothesis drop out of the
  // equation, mirroring the hand proof that ignores them.
  const int nv = slp.vars();
  std::vector<bool> forced(nv, false);
  if (res.status == lp_status::optimal) {
    for (int j = 0; j < nv; ++j) {
      lp.objective.assign(nv, 0);
      lp.objective[j] = 1;
      lp_result lo = simplex_solve(lp);
      if (lo.status == lp_status::optimal && lo.value == 1) forced[j] = true;
      lp.objective[j] = -1;
      lp_result hi = simplex_solve(lp);
      if (hi.status == lp_status::optimal && hi.value == 0) forced[j] = true;
    }
  }

  std::vector<std::vector<int>> survivors(nblocks);
  for (int b = 0; b < nblocks; ++b)
    for (int v : slp.rows()[b])
      if (!forced[v]) survivors[b].push_back(v);

  std::vector<long> mult = block_multipliers(res.dual, nblocks);
  std::vector<int> ambiguous;
  for (int b = 0; b < nblocks; ++b)
    if (mult[b] == 0 && survivors[b].size() >= 2) ambiguous.push_back(b);

  // Candidates: the dual support as-is, then every assignment of the
  // ambiguous blocks to a side, fewest additions first, right side first.
  // More than 12 ambiguous blocks would blow past the candidate bound
  // anyway, so the tail is dropped.
  const int na = std::min<int>(static_cast<int>(ambiguous.size()), 12);
  std::vector<readoff_candidate> candidates;
  const size_t kCandidateBound = 4096;
  for (int picks = 0; picks <= na && candidates.size() < kCandidateBound; ++picks) {
    for (std::uint32_t chosen = 0; chosen < (1u << na); ++chosen) {
      if (__builtin_popcount(chosen) != picks) continue;
      std::vector<int> picked;
      for (int i = 0; i < na; ++i)
        if (chosen & (1u << i)) picked.push_back(ambiguous[i]);
      for (std::uint32_t sides = 0; sides < (1u << picks); ++sides) {
        readoff_candidate cand;
        for (int b = 0; b < nblocks; ++b) {
          if (survivors[b].size() < 2) continue;
          long k = mult[b];
          for (int i = 0; i < picks; ++i)
            if (picked[i] == b) k = (sides & (1u << i)) ? 1 : -1;
          for (long rep = 0; rep < std::labs(k); ++rep)
            (k > 0 ? cand.lhs : cand.rhs).push_back(survivors[b]);
        }
        if (!cand.lhs.empty() && !cand.rhs.empty()) candidates.push_back(std::move(cand));
        if (candidates.size() >= kCandidateBound) break;
      }
      if (candidates.size() >= kCandidateBound) break;
    }
  }

  for (readoff_candidate& cand : candidates) {
    if (!balance_terms(cand.lhs, cand.rhs)) continue;

    std::set<int> used;
    for (const std::vector<int>& t : cand.lhs) used.insert(t.begin(), t.end());
    for (const std::vector<int>& t : cand.rhs) used.insert(t.begin(), t.end());
    if (used.size() > 26) continue;  // condensed variables are 'a'..'z'
    std::map<int, char> letter;
    char next = 'a';
    for (int v : used) letter[v] = next++;

    condensed_state_equation eq;
    auto render = [&](const std::vector<std::vector<int>>& side,
                      std::vector<std::string>& out) {
      for (const std::vector<int>& t : side) {
        std::string s;
        for (int v : t) s += letter[v];
        out.push_back(s);
      }
    };
    render(cand.lhs, eq.lhs);
    render(cand.rhs, eq.rhs);

    inference inf;
    try {
      eq = parse_condensed(serialize_condensed(eq));
      inf = mge_to_inference(eq, store);
    } catch (const term_error&) {
      continue;
    }

    std::map<std::string, int> identity;
    for (int v : used)
      identity[std::string(1, letter[v])] = slp.var_elements()[v];
    if (!verify_fails(L, inf, identity)) continue;

    readoff_result out;
    out.condensed = std::move(eq);
    for (int v : used) out.atom_of_var.emplace_back(letter[v], slp.var_elements()[v]);
    out.derived = std::move(inf);
    out.verified_fails_in_source = true;
    return out;
  }

  fail(states_errc::readoff_failed,
       "no balanced equation from the certificate of pair (" +
           std::to_string(failing_a) + ", " + std::to_string(failing_b) +
           ") verifiably fails in the lattice");
}

readoff_result mge_readoff(const lattice& L, const strong_set_report& report,
                           term_store& store) {
  if (report.admits)
    fail(states_errc::readoff_failed,
         "the lattice admits a strong set of states; there is nothing to read off");
  if (report.failing_a < 0 || report.failing_b < 0)
    fail(states_errc::readoff_failed, "report carries no failing pair");
  return mge_readoff(L, report.failing_a, report.failing_b, store);
}

}  // namespace oml
