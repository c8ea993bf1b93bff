#include "omlattice/checker.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace oml {

std::string strategy::cache_key() const {
  std::string key;
  if (mode == check_mode::exhaustive) {
    key = "exhaustive";
    if (!prune_conclusion) key += ":noprune";
  } else {
    key = "search:budget=" + std::to_string(budget) + ":seed=" + std::to_string(seed);
  }
  return key;
}

std::string to_string(verdict_status s) {
  switch (s) {
    case verdict_status::holds:
      return "holds";
    case verdict_status::falsified:
      return "falsified";
    case verdict_status::inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

using clock_type = std::chrono::steady_clock;

[[noreturn]] void fail(term_errc code, const std::string& what) { throw term_error(code, what); }

// ---------------------------------------------------------------------------
// Compiled form: the inference's terms flattened to elementary table ops over
// variable classes (equal-variable hypotheses are merged up front).

struct slot_op {
  enum kind_t : std::uint8_t { k_const0, k_const1, k_var, k_ortho, k_meet, k_join } kind;
  int a = -1, b = -1;  // argument slot indices
  int pos = -1;        // k_var: enumeration position of its class
};

struct eq_check {
  int l = -1, r = -1;
};

struct prune_pair {
  int ub = -1, lb = -1;  // subtree holds when val[ub] <= val[lb]
};

struct compiled {
  int nclasses = 0;
  std::vector<std::vector<std::string>> class_members;  // per class, alias names
  std::vector<int> order;                               // position -> class
  std::vector<slot_op> slots;                           // children precede parents
  std::vector<int> sched_pre;                           // variable-free slots
  std::vector<std::vector<int>> sched;                  // per position
  std::vector<eq_check> eq_pre;
  std::vector<std::vector<eq_check>> eq_by_depth;
  std::vector<prune_pair> prune_pre;
  std::vector<std::vector<prune_pair>> prune_by_depth;
  std::vector<std::vector<int>> ortho_earlier;  // per position, earlier positions
  std::vector<bool> self_orthogonal;            // per position
  conclusion_kind ckind = conclusion_kind::leq;
  int concl_l = -1, concl_r = -1;
};

class compiler {
 public:
  compiler(const lattice& L, const inference& inf) : L_(L), inf_(inf) {}

  compiled run() {
    if (!inf_.lhs || !inf_.rhs) fail(term_errc::bad_parameter, "inference missing conclusion terms");
    if (!variables_closed(inf_))
      fail(term_errc::bad_parameter, "inference uses variables outside its variable list");
    build_classes();
    order_classes();

    compiled& c = out_;
    c.sched.resize(c.order.size());
    c.eq_by_depth.resize(c.order.size());
    c.prune_by_depth.resize(c.order.size());
    c.ortho_earlier.resize(c.order.size());
    c.self_orthogonal.assign(c.order.size(), false);

    for (const hypothesis& h : inf_.hypotheses) {
      if (h.kind != hypothesis_kind::orthogonality) continue;
      int pa = pos_of_class_[class_of_name(h.var_a)];
      int pb = pos_of_class_[class_of_name(h.var_b)];
      if (pa == pb) {
        c.self_orthogonal[static_cast<size_t>(pa)] = true;
      } else {
        int later = std::max(pa, pb), earlier = std::min(pa, pb);
        auto& lst = c.ortho_earlier[static_cast<size_t>(later)];
        if (std::find(lst.begin(), lst.end(), earlier) == lst.end()) lst.push_back(earlier);
      }
    }

    for (const hypothesis& h : inf_.hypotheses) {
      if (h.kind != hypothesis_kind::equality) continue;
      if (h.lhs->kind == term_kind::variable && h.rhs->kind == term_kind::variable)
        continue;  // folded into the classes
      eq_check chk{emit(expand(h.lhs, store_)), emit(expand(h.rhs, store_))};
      int close = std::max(depth_of(chk.l), depth_of(chk.r));
      if (close < 0)
        c.eq_pre.push_back(chk);
      else
        c.eq_by_depth[static_cast<size_t>(close)].push_back(chk);
    }

    term cl = expand(inf_.lhs, store_);
    term cr = expand(inf_.rhs, store_);
    if (inf_.conclusion == conclusion_kind::commutes) {
      // a C b means a = (a v b) ^ (a v b'), checked as an equality.
      cr = store_.meet(store_.join(cl, cr), store_.join(cl, store_.ortho(cr)));
      c.ckind = conclusion_kind::eq;
    } else {
      c.ckind = inf_.conclusion;
    }
    c.concl_l = emit(cl);
    c.concl_r = emit(cr);

    if (c.ckind == conclusion_kind::leq) collect_prunes();
    schedule();
    return std::move(out_);
  }

 private:
  int class_of_name(const std::string& name) const {
    auto it = class_index_.find(name);
    if (it == class_index_.end()) fail(term_errc::bad_parameter, "unknown variable " + name);
    return it->second;
  }

  void build_classes() {
    const auto& vars = inf_.variables;
    std::vector<int> parent(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
      while (parent[static_cast<size_t>(x)] != x) {
        parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        x = parent[static_cast<size_t>(x)];
      }
      return x;
    };
    std::map<std::string, int> var_index;
    for (size_t i = 0; i < vars.size(); ++i) var_index[vars[i]] = static_cast<int>(i);

    for (const hypothesis& h : inf_.hypotheses) {
      if (h.kind != hypothesis_kind::equality) continue;
      if (h.lhs->kind == term_kind::variable && h.rhs->kind == term_kind::variable) {
        int a = find(var_index.at(h.lhs->name));
        int b = find(var_index.at(h.rhs->name));
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
    std::map<int, int> root_to_class;
    for (size_t i = 0; i < vars.size(); ++i) {
      int r = find(static_cast<int>(i));
      auto [it, fresh] = root_to_class.try_emplace(r, out_.nclasses);
      if (fresh) {
        ++out_.nclasses;
        out_.class_members.emplace_back();
      }
      out_.class_members[static_cast<size_t>(it->second)].push_back(vars[i]);
      class_index_[vars[i]] = it->second;
    }
  }

  void order_classes() {
    // Most-constrained-first: classes touched by more hypotheses go earlier;
    // ties keep first-appearance order for determinism.
    std::vector<int> score(static_cast<size_t>(out_.nclasses), 0);
    for (const hypothesis& h : inf_.hypotheses) {
      if (h.kind == hypothesis_kind::orthogonality) {
        ++score[static_cast<size_t>(class_of_name(h.var_a))];
        ++score[static_cast<size_t>(class_of_name(h.var_b))];
      } else {
        for (const term* t : {&h.lhs, &h.rhs})
          for (const std::string& v : collect_variables(*t))
            ++score[static_cast<size_t>(class_of_name(v))];
      }
    }
    out_.order.resize(static_cast<size_t>(out_.nclasses));
    for (int i = 0; i < out_.nclasses; ++i) out_.order[static_cast<size_t>(i)] = i;
    std::stable_sort(out_.order.begin(), out_.order.end(),
                     [&](int a, int b) { return score[static_cast<size_t>(a)] > score[static_cast<size_t>(b)]; });
    pos_of_class_.assign(static_cast<size_t>(out_.nclasses), -1);
    for (size_t p = 0; p < out_.order.size(); ++p)
      pos_of_class_[static_cast<size_t>(out_.order[p])] = static_cast<int>(p);
  }

  int emit(const term& t) {
    auto it = slot_of_.find(t.get());
    if (it != slot_of_.end()) return it->second;
    slot_op op;
    switch (t->kind) {
      case term_kind::zero:
        op.kind = slot_op::k_const0;
        break;
      case term_kind::one:
        op.kind = slot_op::k_const1;
        break;
      case term_kind::variable:
        op.kind = slot_op::k_var;
        op.pos = pos_of_class_[static_cast<size_t>(class_of_name(t->name))];
        break;
      case term_kind::ortho:
        op.kind = slot_op::k_ortho;
        op.a = emit(t->args[0]);
        break;
      case term_kind::meet:
      case term_kind::join:
        op.kind = t->kind == term_kind::meet ? slot_op::k_meet : slot_op::k_join;
        op.a = emit(t->args[0]);
        op.b = emit(t->args[1]);
        break;
      default:
        fail(term_errc::bad_parameter, "expansion left a derived connective");
    }
    int idx = static_cast<int>(out_.slots.size());
    out_.slots.push_back(op);
    depth_.push_back(op.kind == slot_op::k_var
                         ? op.pos
                         : std::max(op.a >= 0 ? depth_[static_cast<size_t>(op.a)] : -1,
                                    op.b >= 0 ? depth_[static_cast<size_t>(op.b)] : -1));
    slot_of_.emplace(t.get(), idx);
    return idx;
  }

  int depth_of(int slot) const { return depth_[static_cast<size_t>(slot)]; }

  void collect_prunes() {
    std::vector<int> ubs, lbs;
    std::function<void(int, bool)> spine = [&](int s, bool meets) {
      auto& outv = meets ? ubs : lbs;
      if (std::find(outv.begin(), outv.end(), s) == outv.end()) outv.push_back(s);
      const slot_op& op = out_.slots[static_cast<size_t>(s)];
      if ((meets && op.kind == slot_op::k_meet) || (!meets && op.kind == slot_op::k_join)) {
        spine(op.a, meets);
        spine(op.b, meets);
      }
    };
    spine(out_.concl_l, true);
    spine(out_.concl_r, false);
    int last = static_cast<int>(out_.order.size()) - 1;
    for (int u : ubs)
      for (int l : lbs) {
        int close = std::max(depth_of(u), depth_of(l));
        if (close >= last && last >= 0) continue;  // the leaf check covers it
        if (close < 0)
          out_.prune_pre.push_back({u, l});
        else
          out_.prune_by_depth[static_cast<size_t>(close)].push_back({u, l});
      }
  }

  void schedule() {
    for (size_t i = 0; i < out_.slots.size(); ++i) {
      int d = depth_[i];
      if (d < 0)
        out_.sched_pre.push_back(static_cast<int>(i));
      else
        out_.sched[static_cast<size_t>(d)].push_back(static_cast<int>(i));
    }
  }

  const lattice& L_;
  const inference& inf_;
  term_store store_;
  compiled out_;
  std::map<std::string, int> class_index_;
  std::vector<int> pos_of_class_;
  std::unordered_map<const term_node*, int> slot_of_;
  std::vector<int> depth_;
};

// ---------------------------------------------------------------------------
// Enumeration engine.

int next_bit(const std::uint64_t* row, int words, int from) {
  int w = from >> 6;
  if (w >= words) return -1;
  std::uint64_t word = row[w] & (~0ULL << (from & 63));
  for (;;) {
    if (word) return (w << 6) + std::countr_zero(word);
    if (++w >= words) return -1;
    word = row[w];
  }
}

class engine {
 public:
  engine(const lattice& L, const compiled& c, const strategy& s)
      : L_(L), c_(c), s_(s), n_(L.size()), words_((L.size() + 63) / 64) {
    meet_ = L.meet_table().data();
    join_ = L.join_table().data();
    ortho_ = L.ortho_table().data();
    up_ = L.up_sets().data();
    up_words_ = L.words_per_row();

    full_.assign(static_cast<size_t>(words_), 0);
    for (int e = 0; e < n_; ++e) full_[static_cast<size_t>(e >> 6)] |= 1ULL << (e & 63);
    orth_bits_.assign(static_cast<size_t>(n_) * static_cast<size_t>(words_), 0);
    self_ok_.assign(static_cast<size_t>(words_), 0);
    for (int x = 0; x < n_; ++x) {
      int ox = ortho_[x];
      for (int y = 0; y < n_; ++y)
        if (leq(y, ox)) orth_bits_[static_cast<size_t>(x) * words_ + (y >> 6)] |= 1ULL << (y & 63);
      if (leq(x, ox)) self_ok_[static_cast<size_t>(x >> 6)] |= 1ULL << (x & 63);
    }

    slot_val_.assign(c.slots.size(), 0);
    int k = static_cast<int>(c.order.size());
    value_.assign(static_cast<size_t>(std::max(k, 1)), -1);
    cand_.assign(static_cast<size_t>(std::max(k, 1)) * words_, 0);
  }

  bool leq(int x, int y) const {
    return (up_[static_cast<size_t>(x) * up_words_ + (y >> 6)] >> (y & 63)) & 1;
  }

  // Evaluates variable-free slots and static checks. Returns a decided
  // verdict plus assignments examined when the whole problem is settled
  // without enumeration, nullopt otherwise.
  std::optional<std::pair<verdict_status, std::uint64_t>> prepare() {
    for (int si : c_.sched_pre) compute(si);
    for (const eq_check& e : c_.eq_pre)
      if (slot_val_[static_cast<size_t>(e.l)] != slot_val_[static_cast<size_t>(e.r)])
        return std::pair{verdict_status::holds, std::uint64_t{0}};  // hypotheses unsatisfiable
    if (c_.order.empty()) {
      return std::pair{conclusion_violated() ? verdict_status::falsified : verdict_status::holds,
                       std::uint64_t{1}};
    }
    if (s_.prune_conclusion)
      for (const prune_pair& p : c_.prune_pre)
        if (leq(slot_val_[static_cast<size_t>(p.ub)], slot_val_[static_cast<size_t>(p.lb)]))
          return std::pair{verdict_status::holds, std::uint64_t{0}};
    return std::nullopt;
  }

  // Exhaustive DFS over one stripe of the first variable (value % stride ==
  // offset). best_v0 carries the smallest first-variable value of any
  // counterexample found so far across workers; stripes that cannot win stop.
  struct stripe_result {
    bool found = false;
    std::vector<int> witness;  // per position
    std::uint64_t examined = 0;
  };

  stripe_result run_exhaustive(int offset, int stride, std::atomic<int>* best_v0) {
    stripe_result res;
    int k = static_cast<int>(c_.order.size());
    int last = k - 1;
    build_candidates(0);
    int p = 0;
    value_[0] = -1;
    while (p >= 0) {
      int v = next_bit(&cand_[static_cast<size_t>(p) * words_], words_, value_[static_cast<size_t>(p)] + 1);
      if (v < 0) {
        --p;
        continue;
      }
      value_[static_cast<size_t>(p)] = v;
      if (p == 0) {
        if (stride > 1 && v % stride != offset) continue;
        if (best_v0 && v >= best_v0->load(std::memory_order_relaxed)) break;
      }
      if (!step(p)) continue;
      if (p == last) {
        ++res.examined;
        if (conclusion_violated()) {
          res.found = true;
          res.witness.assign(value_.begin(), value_.begin() + k);
          if (best_v0) {
            int cur = best_v0->load(std::memory_order_relaxed);
            while (value_[0] < cur &&
                   !best_v0->compare_exchange_weak(cur, value_[0], std::memory_order_relaxed)) {
            }
          }
          break;
        }
        continue;
      }
      ++p;
      build_candidates(p);
      value_[static_cast<size_t>(p)] = -1;
    }
    return res;
  }

  // Random restarts: sample orthogonality-consistent assignments until the
  // budget is spent. Every completed or dead-ended dive costs one unit.
  stripe_result run_search(std::uint64_t budget, std::uint64_t seed, std::atomic<bool>* stop) {
    stripe_result res;
    std::mt19937_64 rng(seed);
    int k = static_cast<int>(c_.order.size());
    for (std::uint64_t dive = 0; dive < budget; ++dive) {
      if (stop && stop->load(std::memory_order_relaxed)) break;
      bool dead = false;
      for (int p = 0; p < k; ++p) {
        build_candidates(p);
        int v = pick_random(&cand_[static_cast<size_t>(p) * words_], rng);
        if (v < 0) {
          dead = true;
          break;
        }
        value_[static_cast<size_t>(p)] = v;
        if (!step(p)) {
          dead = true;
          break;
        }
      }
      if (dead) continue;
      ++res.examined;
      if (conclusion_violated()) {
        res.found = true;
        res.witness.assign(value_.begin(), value_.begin() + k);
        if (stop) stop->store(true, std::memory_order_relaxed);
        return res;
      }
    }
    return res;
  }

 private:
  void compute(int si) {
    const slot_op& op = c_.slots[static_cast<size_t>(si)];
    int v = 0;
    switch (op.kind) {
      case slot_op::k_const0:
        v = 0;
        break;
      case slot_op::k_const1:
        v = n_ - 1;
        break;
      case slot_op::k_var:
        v = value_[static_cast<size_t>(op.pos)];
        break;
      case slot_op::k_ortho:
        v = ortho_[slot_val_[static_cast<size_t>(op.a)]];
        break;
      case slot_op::k_meet:
        v = meet_[static_cast<size_t>(slot_val_[static_cast<size_t>(op.a)]) * n_ +
                  slot_val_[static_cast<size_t>(op.b)]];
        break;
      case slot_op::k_join:
        v = join_[static_cast<size_t>(slot_val_[static_cast<size_t>(op.a)]) * n_ +
                  slot_val_[static_cast<size_t>(op.b)]];
        break;
    }
    slot_val_[static_cast<size_t>(si)] = v;
  }

  // Recomputes depth-p slots and applies the depth-p hypothesis and pruning
  // checks. False means: skip this value, the subtree cannot falsify.
  bool step(int p) {
    for (int si : c_.sched[static_cast<size_t>(p)]) compute(si);
    for (const eq_check& e : c_.eq_by_depth[static_cast<size_t>(p)])
      if (slot_val_[static_cast<size_t>(e.l)] != slot_val_[static_cast<size_t>(e.r)]) return false;
    if (s_.prune_conclusion)
      for (const prune_pair& pr : c_.prune_by_depth[static_cast<size_t>(p)])
        if (leq(slot_val_[static_cast<size_t>(pr.ub)], slot_val_[static_cast<size_t>(pr.lb)]))
          return false;
    return true;
  }

  bool conclusion_violated() const {
    int l = slot_val_[static_cast<size_t>(c_.concl_l)];
    int r = slot_val_[static_cast<size_t>(c_.concl_r)];
    return c_.ckind == conclusion_kind::leq ? !leq(l, r) : l != r;
  }

  void build_candidates(int p) {
    std::uint64_t* row = &cand_[static_cast<size_t>(p) * words_];
    std::copy(full_.begin(), full_.end(), row);
    if (c_.self_orthogonal[static_cast<size_t>(p)])
      for (int w = 0; w < words_; ++w) row[w] &= self_ok_[static_cast<size_t>(w)];
    for (int e : c_.ortho_earlier[static_cast<size_t>(p)]) {
      const std::uint64_t* mask =
          &orth_bits_[static_cast<size_t>(value_[static_cast<size_t>(e)]) * words_];
      for (int w = 0; w < words_; ++w) row[w] &= mask[w];
    }
  }

  int pick_random(const std::uint64_t* row, std::mt19937_64& rng) {
    int count = 0;
    for (int w = 0; w < words_; ++w) count += std::popcount(row[w]);
    if (count == 0) return -1;
    int target = static_cast<int>(rng() % static_cast<std::uint64_t>(count));
    for (int w = 0; w < words_; ++w) {
      int pc = std::popcount(row[w]);
      if (target < pc) {
        std::uint64_t word = row[w];
        for (int i = 0; i < target; ++i) word &= word - 1;
        return (w << 6) + std::countr_zero(word);
      }
      target -= pc;
    }
    return -1;
  }

  const lattice& L_;
  const compiled& c_;
  const strategy& s_;
  int n_, words_;
  const std::uint16_t *meet_, *join_, *ortho_;
  const std::uint64_t* up_;
  int up_words_;
  std::vector<std::uint64_t> full_, self_ok_, orth_bits_, cand_;
  std::vector<int> value_;
  std::vector<int> slot_val_;
};

// ---------------------------------------------------------------------------
// Fast path for the generalized-equivalence laws: conclusion
//   (x -> z) ^ (x ==(n) y : z, c4..cn)  <=  y -> z
// with no hypotheses and all-distinct variables. For a fixed auxiliary tuple
// the n-ary equivalence is a full table over (x, y) built level by level, so
// one tuple covers every (x, y) pair at table-lookup cost.

struct noa_shape {
  int n = 0;
  std::string x, y;
  std::vector<std::string> aux;  // aux[0] is also the arrow target z
};

std::optional<noa_shape> detect_noa(const inference& inf) {
  if (!inf.hypotheses.empty() || inf.conclusion != conclusion_kind::leq) return std::nullopt;
  const term& l = inf.lhs;
  const term& r = inf.rhs;
  if (!l || !r || l->kind != term_kind::meet) return std::nullopt;
  const term& arrow = l->args[0];
  const term& eq = l->args[1];
  if (arrow->kind != term_kind::sasaki || eq->kind != term_kind::equiv_n) return std::nullopt;
  if (r->kind != term_kind::sasaki) return std::nullopt;
  auto var = [](const term& t) { return t->kind == term_kind::variable ? t->name : std::string(); };
  noa_shape sh;
  sh.n = eq->n;
  sh.x = var(eq->args[0]);
  sh.y = var(eq->args[1]);
  if (sh.x.empty() || sh.y.empty()) return std::nullopt;
  for (size_t i = 2; i < eq->args.size(); ++i) {
    std::string a = var(eq->args[i]);
    if (a.empty()) return std::nullopt;
    sh.aux.push_back(a);
  }
  if (var(arrow->args[0]) != sh.x || var(arrow->args[1]) != sh.aux[0]) return std::nullopt;
  if (var(r->args[0]) != sh.y || var(r->args[1]) != sh.aux[0]) return std::nullopt;
  std::set<std::string> names{sh.x, sh.y};
  for (const std::string& a : sh.aux)
    if (!names.insert(a).second) return std::nullopt;
  if (names.size() != inf.variables.size()) return std::nullopt;
  return sh;
}

class noa_scanner {
 public:
  noa_scanner(const lattice& L, const noa_shape& sh) : L_(L), sh_(sh), n_(L.size()) {
    meet_ = L.meet_table().data();
    join_ = L.join_table().data();
    ortho_ = L.ortho_table().data();
    up_ = L.up_sets().data();
    up_words_ = L.words_per_row();
    sas_.resize(static_cast<size_t>(n_) * n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        sas_[static_cast<size_t>(a) * n_ + b] =
            join_[static_cast<size_t>(ortho_[a]) * n_ + meet_[static_cast<size_t>(a) * n_ + b]];
    int levels = sh.n - 2;
    tab_.assign(static_cast<size_t>(levels), std::vector<std::uint16_t>(static_cast<size_t>(n_) * n_));
    tuple_.assign(static_cast<size_t>(levels), 0);
  }

  struct hit {
    int x = 0, y = 0;
    std::vector<int> aux;
  };

  std::optional<hit> sweep(const std::vector<int>& domain, std::uint64_t budget_pairs,
                           std::uint64_t& examined) {
    budget_ = budget_pairs;
    examined_ = 0;
    best_.reset();
    descend(0, domain);
    examined += examined_;
    return best_;
  }

  std::optional<hit> random_tuples(std::uint64_t budget_pairs, std::uint64_t seed,
                                   std::uint64_t& examined) {
    std::mt19937_64 rng(seed);
    int levels = sh_.n - 2;
    std::uint64_t spent = 0;
    std::uint64_t per_tuple = static_cast<std::uint64_t>(n_) * n_;
    for (;;) {
      // Random prefix, then sweep the last coordinate ascending so the upper
      // level tables are rebuilt once per n_ tuples instead of per tuple.
      for (int k = 0; k + 1 < levels; ++k) {
        tuple_[static_cast<size_t>(k)] = static_cast<int>(rng() % static_cast<std::uint64_t>(n_));
        build_level(k);
      }
      for (int c = 0; c < n_; ++c) {
        if (spent + per_tuple > budget_pairs) {
          examined += spent;
          return std::nullopt;
        }
        tuple_[static_cast<size_t>(levels - 1)] = c;
        build_level(levels - 1);
        spent += per_tuple;
        if (auto h = scan()) {
          examined += spent;
          return h;
        }
      }
      if (levels == 1) {
        // Single auxiliary: the sweep above already covered the whole space.
        examined += spent;
        return std::nullopt;
      }
    }
  }

 private:
  void build_level(int k) {
    int c = tuple_[static_cast<size_t>(k)];
    std::vector<std::uint16_t>& t = tab_[static_cast<size_t>(k)];
    if (k == 0) {
      u_.resize(static_cast<size_t>(n_));
      w_.resize(static_cast<size_t>(n_));
      for (int x = 0; x < n_; ++x) {
        u_[static_cast<size_t>(x)] = sas_[static_cast<size_t>(x) * n_ + c];
        w_[static_cast<size_t>(x)] = sas_[static_cast<size_t>(ortho_[x]) * n_ + c];
      }
      for (int x = 0; x < n_; ++x) {
        const std::uint16_t ux = u_[static_cast<size_t>(x)], wx = w_[static_cast<size_t>(x)];
        std::uint16_t* row = &t[static_cast<size_t>(x) * n_];
        for (int y = 0; y < n_; ++y)
          row[y] = join_[static_cast<size_t>(meet_[static_cast<size_t>(ux) * n_ + u_[static_cast<size_t>(y)]]) * n_ +
                         meet_[static_cast<size_t>(wx) * n_ + w_[static_cast<size_t>(y)]]];
      }
      return;
    }
    const std::vector<std::uint16_t>& prev = tab_[static_cast<size_t>(k - 1)];
    col_.resize(static_cast<size_t>(n_));
    for (int x = 0; x < n_; ++x) col_[static_cast<size_t>(x)] = prev[static_cast<size_t>(x) * n_ + c];
    for (int x = 0; x < n_; ++x) {
      const std::uint16_t cx = col_[static_cast<size_t>(x)];
      const std::uint16_t* prow = &prev[static_cast<size_t>(x) * n_];
      std::uint16_t* row = &t[static_cast<size_t>(x) * n_];
      for (int y = 0; y < n_; ++y)
        row[y] = join_[static_cast<size_t>(prow[y]) * n_ +
                       meet_[static_cast<size_t>(cx) * n_ + col_[static_cast<size_t>(y)]]];
    }
  }

  std::optional<hit> scan() {
    const std::vector<std::uint16_t>& top = tab_.back();
    for (int x = 0; x < n_; ++x) {
      const std::uint16_t ux = u_[static_cast<size_t>(x)];
      const std::uint16_t* row = &top[static_cast<size_t>(x) * n_];
      for (int y = 0; y < n_; ++y) {
        int l = meet_[static_cast<size_t>(ux) * n_ + row[y]];
        int r = u_[static_cast<size_t>(y)];
        if (!((up_[static_cast<size_t>(l) * up_words_ + (r >> 6)] >> (r & 63)) & 1)) {
          examined_ += static_cast<std::uint64_t>(x) * n_ + y + 1;
          hit h;
          h.x = x;
          h.y = y;
          h.aux = tuple_;
          return h;
        }
      }
    }
    examined_ += static_cast<std::uint64_t>(n_) * n_;
    return std::nullopt;
  }

  bool descend(int k, const std::vector<int>& domain) {
    int levels = sh_.n - 2;
    for (int c : domain) {
      tuple_[static_cast<size_t>(k)] = c;
      build_level(k);
      if (k + 1 == levels) {
        if (examined_ >= budget_) return true;
        if (auto h = scan()) {
          best_ = h;
          return true;
        }
      } else if (descend(k + 1, domain)) {
        return true;
      }
    }
    return false;
  }

  const lattice& L_;
  noa_shape sh_;
  int n_;
  const std::uint16_t *meet_, *join_, *ortho_;
  const std::uint64_t* up_;
  int up_words_;
  std::vector<std::uint16_t> sas_, u_, w_, col_;
  std::vector<std::vector<std::uint16_t>> tab_;
  std::vector<int> tuple_;
  std::uint64_t budget_ = 0, examined_ = 0;
  std::optional<hit> best_;
};

assignment witness_assignment(const compiled& c, const std::vector<int>& values) {
  assignment a;
  for (size_t p = 0; p < c.order.size(); ++p)
    for (const std::string& name : c.class_members[static_cast<size_t>(c.order[p])])
      a[name] = values[p];
  return a;
}

void verify_counterexample(const lattice& L, const inference& inf, const assignment& a) {
  if (!eval_hypotheses(inf, L, a) || eval_conclusion(inf, L, a))
    throw std::logic_error("counterexample failed re-verification; checker bug");
}

}  // namespace

verdict check(const lattice& L, const inference& inf, const strategy& s) {
  auto t0 = clock_type::now();
  auto finish = [&](verdict v) {
    v.elapsed_seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    return v;
  };

  // Table-driven scanner when the conclusion has the generalized-equivalence
  // law shape; exhaustive sweeps the full tuple space, search sweeps atom
  // tuples first and then samples random tuples.
  if (auto sh = detect_noa(inf)) {
    noa_scanner scanner(L, *sh);
    verdict v;
    auto lift = [&](const noa_scanner::hit& h) {
      v.status = verdict_status::falsified;
      v.counterexample[sh->x] = h.x;
      v.counterexample[sh->y] = h.y;
      for (size_t i = 0; i < sh->aux.size(); ++i) v.counterexample[sh->aux[i]] = h.aux[i];
      verify_counterexample(L, inf, v.counterexample);
    };
    if (s.mode == check_mode::exhaustive) {
      std::vector<int> all(static_cast<size_t>(L.size()));
      for (int i = 0; i < L.size(); ++i) all[static_cast<size_t>(i)] = i;
      if (auto h = scanner.sweep(all, std::numeric_limits<std::uint64_t>::max(),
                                 v.assignments_examined)) {
        lift(*h);
      } else {
        v.status = verdict_status::holds;
      }
      return finish(v);
    }
    std::vector<int> atoms = L.atom_elements();
    std::uint64_t half = std::min<std::uint64_t>(s.budget / 2, 2'000'000'000);
    if (auto h = scanner.sweep(atoms, half, v.assignments_examined)) {
      lift(*h);
      return finish(v);
    }
    if (auto h = scanner.random_tuples(s.budget - std::min(s.budget, v.assignments_examined),
                                       s.seed, v.assignments_examined)) {
      lift(*h);
      return finish(v);
    }
    v.status = verdict_status::inconclusive;
    return finish(v);
  }

  compiled c = compiler(L, inf).run();
  verdict v;

  {
    engine probe(L, c, s);
    if (auto decided = probe.prepare()) {
      v.status = decided->first;
      v.assignments_examined = decided->second;
      if (v.status == verdict_status::falsified) {
        verify_counterexample(L, inf, v.counterexample);
      } else if (s.mode == check_mode::counterexample_search) {
        // Search mode never reports holds, even when decidable statically.
        v.status = verdict_status::inconclusive;
      }
      return finish(v);
    }
  }

  int workers = std::max(1, s.workers);
  if (s.mode == check_mode::exhaustive) {
    std::atomic<int> best_v0{std::numeric_limits<int>::max()};
    std::vector<engine::stripe_result> results(static_cast<size_t>(workers));
    if (workers == 1) {
      engine e(L, c, s);
      e.prepare();
      results[0] = e.run_exhaustive(0, 1, &best_v0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          engine e(L, c, s);
          e.prepare();
          results[static_cast<size_t>(w)] = e.run_exhaustive(w, workers, &best_v0);
        });
      for (auto& t : pool) t.join();
    }
    const engine::stripe_result* winner = nullptr;
    for (const auto& r : results) {
      v.assignments_examined += r.examined;
      if (r.found && (!winner || r.witness[0] < winner->witness[0])) winner = &r;
    }
    if (winner) {
      v.status = verdict_status::falsified;
      v.counterexample = witness_assignment(c, winner->witness);
      verify_counterexample(L, inf, v.counterexample);
    } else {
      v.status = verdict_status::holds;
    }
    return finish(v);
  }

  std::atomic<bool> stop{false};
  std::vector<engine::stripe_result> results(static_cast<size_t>(workers));
  std::uint64_t per = s.budget / static_cast<std::uint64_t>(workers);
  if (workers == 1) {
    engine e(L, c, s);
    e.prepare();
    results[0] = e.run_search(s.budget, s.seed, &stop);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        engine e(L, c, s);
        e.prepare();
        std::uint64_t b = per + (w == 0 ? s.budget % static_cast<std::uint64_t>(workers) : 0);
        results[static_cast<size_t>(w)] = e.run_search(b, s.seed + static_cast<std::uint64_t>(w), &stop);
      });
    for (auto& t : pool) t.join();
  }
  const engine::stripe_result* found = nullptr;
  for (const auto& r : results) {
    v.assignments_examined += r.examined;
    if (r.found && !found) found = &r;
  }
  if (found) {
    v.status = verdict_status::falsified;
    v.counterexample = witness_assignment(c, found->witness);
    verify_counterexample(L, inf, v.counterexample);
  } else {
    v.status = verdict_status::inconclusive;
  }
  return finish(v);
}

// ---------------------------------------------------------------------------
// Verdict cache.

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string cache_map_key(const std::string& digest, const std::string& family,
                          const std::string& strategy_key) {
  return digest + '\x1f' + family + '\x1f' + strategy_key;
}

}  // namespace

verdict_cache::verdict_cache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    auto f = split(line, '|');
    if (f.size() != 7 || f[0] != "1") continue;  // unknown record version
    verdict v;
    if (f[4] == "holds")
      v.status = verdict_status::holds;
    else if (f[4] == "falsified")
      v.status = verdict_status::falsified;
    else if (f[4] == "inconclusive")
      v.status = verdict_status::inconclusive;
    else
      continue;
    v.assignments_examined = std::strtoull(f[5].c_str(), nullptr, 10);
    if (!f[6].empty()) {
      for (const std::string& kv : split(f[6], ';')) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos) continue;
        v.counterexample[kv.substr(0, eq)] = std::atoi(kv.c_str() + eq + 1);
      }
    }
    entries_[cache_map_key(f[1], f[2], f[3])] = v;
  }
}

std::optional<verdict> verdict_cache::lookup(const std::string& digest, const std::string& family,
                                             const std::string& strategy_key) const {
  auto it = entries_.find(cache_map_key(digest, family, strategy_key));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void verdict_cache::store(const std::string& digest, const std::string& family,
                          const std::string& strategy_key, const verdict& v) {
  entries_[cache_map_key(digest, family, strategy_key)] = v;
  std::ofstream out(path_, std::ios::app);
  out << "1|" << digest << '|' << family << '|' << strategy_key << '|' << to_string(v.status)
      << '|' << v.assignments_examined << '|';
  bool first = true;
  for (const auto& [name, val] : v.counterexample) {
    if (!first) out << ';';
    out << name << '=' << val;
    first = false;
  }
  out << '\n';
}

std::vector<matrix_entry> check_matrix(
    const std::vector<std::pair<std::string, const lattice*>>& lattices,
    const std::vector<std::pair<std::string, inference>>& families, const strategy& s,
    verdict_cache* cache) {
  std::vector<matrix_entry> out;
  std::string key = s.cache_key();
  for (const auto& [lname, L] : lattices) {
    std::string digest = L->digest();
    for (const auto& [fname, inf] : families) {
      matrix_entry e;
      e.lattice_name = lname;
      e.family = fname;
      if (cache) {
        if (auto hit = cache->lookup(digest, fname, key)) {
          e.result = *hit;
          e.from_cache = true;
          out.push_back(std::move(e));
          continue;
        }
      }
      e.result = check(*L, inf, s);
      if (cache) cache->store(digest, fname, key, e.result);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace oml
