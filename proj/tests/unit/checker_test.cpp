#include "omlattice/checker.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "naive_checker.hpp"
#include "omlattice/greechie.hpp"
#include "omlattice/lattice.hpp"
#include "test_util.hpp"

using namespace oml;

namespace {

// (a1 -> a3) ^ (a1 ==(3) a2 : a3)  <=  a2 -> a3. With canonical meet order the
// checker takes its table-driven fast path; swapping the meet hides the shape
// and forces the generic compiled engine, so both paths can be compared.
inference make_noa3(term_store& st, bool canonical) {
  term a1 = st.variable("a1"), a2 = st.variable("a2"), a3 = st.variable("a3");
  term arrow = st.sasaki(a1, a3);
  term eq = st.equiv_n(3, a1, a2, {a3});
  inference inf;
  inf.name = "noa3";
  inf.conclusion = conclusion_kind::leq;
  inf.lhs = canonical ? st.meet(arrow, eq) : st.meet(eq, arrow);
  inf.rhs = st.sasaki(a2, a3);
  assign_variables(inf);
  return inf;
}

// a v (a' ^ (a v b)) = a v b
inference make_oml_law(term_store& st) {
  term a = st.variable("a"), b = st.variable("b");
  inference inf;
  inf.name = "oml";
  inf.conclusion = conclusion_kind::eq;
  inf.lhs = st.join(a, st.meet(st.ortho(a), st.join(a, b)));
  inf.rhs = st.join(a, b);
  assign_variables(inf);
  return inf;
}

// x ^ (y v z) = (x ^ y) v (x ^ z)
inference make_distributive(term_store& st) {
  term x = st.variable("x"), y = st.variable("y"), z = st.variable("z");
  inference inf;
  inf.name = "distributive";
  inf.conclusion = conclusion_kind::eq;
  inf.lhs = st.meet(x, st.join(y, z));
  inf.rhs = st.join(st.meet(x, y), st.meet(x, z));
  assign_variables(inf);
  return inf;
}

void expect_matches_naive(const lattice& L, const inference& inf, const verdict& v,
                          const omltest::naive_result& ref) {
  CHECK(v.status != verdict_status::inconclusive);
  CHECK(v.holds() == ref.holds);
  if (v.falsified()) {
    CHECK(eval_hypotheses(inf, L, v.counterexample));
    CHECK_FALSE(eval_conclusion(inf, L, v.counterexample));
  }
}

}  // namespace

TEST_CASE("hexagon fails the three-variable orthoarguesian law") {
  lattice L = make_builtin("O6");
  term_store st;
  inference fast = make_noa3(st, true);
  inference generic = make_noa3(st, false);
  auto ref = omltest::naive_check(L, fast);
  CHECK_FALSE(ref.holds);

  verdict vf = check(L, fast);
  verdict vg = check(L, generic);
  expect_matches_naive(L, fast, vf, ref);
  expect_matches_naive(L, generic, vg, ref);

  strategy srch;
  srch.mode = check_mode::counterexample_search;
  srch.seed = 7;
  verdict vs = check(L, fast, srch);
  CHECK(vs.falsified());
  CHECK(eval_hypotheses(fast, L, vs.counterexample));
  CHECK_FALSE(eval_conclusion(fast, L, vs.counterexample));
}

TEST_CASE("pasted lattice passes the orthomodular law and fails the three-variable law") {
  lattice L = build(parse(omltest::k13_7));
  REQUIRE(L.size() == 28);
  term_store st;

  inference oml_law = make_oml_law(st);
  auto ref_oml = omltest::naive_check(L, oml_law);
  CHECK(ref_oml.holds);
  verdict v_oml = check(L, oml_law);
  CHECK(v_oml.holds());
  CHECK(v_oml.assignments_examined == 28ull * 28ull);
  CHECK(v_oml.assignments_examined == ref_oml.orthogonality_consistent);

  inference law3 = make_noa3(st, true);
  auto ref3 = omltest::naive_check(L, law3);
  CHECK_FALSE(ref3.holds);
  expect_matches_naive(L, law3, check(L, law3), ref3);
  expect_matches_naive(L, law3, check(L, make_noa3(st, false)), ref3);
}

TEST_CASE("distributivity separates the boolean cube from MO2") {
  term_store st;
  inference dist = make_distributive(st);

  lattice mo2 = make_builtin("MO2");
  auto ref_mo2 = omltest::naive_check(mo2, dist);
  CHECK_FALSE(ref_mo2.holds);
  expect_matches_naive(mo2, dist, check(mo2, dist), ref_mo2);

  lattice b3 = make_builtin("Boolean(3)");
  auto ref_b3 = omltest::naive_check(b3, dist);
  CHECK(ref_b3.holds);
  verdict v = check(b3, dist);
  CHECK(v.holds());
  CHECK(v.assignments_examined == 8ull * 8ull * 8ull);
}

TEST_CASE("enumeration visits exactly the orthogonality-consistent assignments") {
  term_store st;

  // (x v y) ^ y' <= x restates orthomodularity under the hypothesis x _|_ y:
  // holds on orthomodular lattices, fails on the hexagon.
  inference om_from_perp;
  om_from_perp.name = "om-from-perp";
  om_from_perp.hypotheses = {hypothesis::orthogonal("x", "y")};
  om_from_perp.conclusion = conclusion_kind::leq;
  om_from_perp.lhs = st.meet(st.join(st.variable("x"), st.variable("y")), st.ortho(st.variable("y")));
  om_from_perp.rhs = st.variable("x");
  assign_variables(om_from_perp);

  inference triple;
  triple.name = "triple-perp-cover";
  triple.hypotheses = {hypothesis::orthogonal("x", "y"), hypothesis::orthogonal("y", "z"),
                       hypothesis::orthogonal("x", "z")};
  triple.conclusion = conclusion_kind::leq;
  triple.lhs = st.join(st.join(st.variable("x"), st.variable("y")), st.variable("z"));
  triple.rhs = st.one();
  assign_variables(triple);

  std::vector<lattice> lats;
  lats.push_back(make_builtin("O6"));
  lats.push_back(make_builtin("MO2"));
  lats.push_back(make_builtin("Boolean(3)"));
  lats.push_back(build(parse("1234,456.")));
  lats.push_back(build(parse(omltest::k13_7)));

  for (const lattice& L : lats) {
    for (const inference* inf : {&om_from_perp, &triple}) {
      auto ref = omltest::naive_check(L, *inf);

      strategy plain;
      plain.prune_conclusion = false;
      verdict v = check(L, *inf, plain);
      CAPTURE(inf->name);
      CAPTURE(L.size());
      CHECK(v.holds() == ref.holds);
      if (v.holds()) {
        // A completed enumeration reaches exactly the assignments that pass
        // every orthogonality hypothesis.
        CHECK(v.assignments_examined == ref.orthogonality_consistent);
      } else {
        // Falsified runs stop at the first witness.
        CHECK(v.assignments_examined <= ref.orthogonality_consistent);
        CHECK(eval_hypotheses(*inf, L, v.counterexample));
        CHECK_FALSE(eval_conclusion(*inf, L, v.counterexample));
      }

      verdict pruned = check(L, *inf);
      CHECK(pruned.status == v.status);
      CHECK(pruned.counterexample == v.counterexample);
      CHECK(pruned.assignments_examined <= v.assignments_examined);
    }
  }
}

TEST_CASE("equal-variable hypotheses merge into one enumerated class") {
  lattice L = make_builtin("MO2");
  term_store st;

  inference inf;
  inf.name = "aliased-join-top";
  inf.hypotheses = {hypothesis::equal(st.variable("x"), st.variable("y"))};
  inf.conclusion = conclusion_kind::eq;
  inf.lhs = st.join(st.variable("x"), st.variable("y"));
  inf.rhs = st.one();
  assign_variables(inf);

  auto ref = omltest::naive_check(L, inf);
  CHECK_FALSE(ref.holds);
  verdict v = check(L, inf);
  CHECK(v.falsified());
  // One merged class enumerated in element order, so the witness is bottom,
  // reported under both alias names.
  REQUIRE(v.counterexample.size() == 2);
  CHECK(v.counterexample.at("x") == 0);
  CHECK(v.counterexample.at("y") == 0);
}

TEST_CASE("structural equality hypotheses prune subtrees soundly") {
  lattice L = make_builtin("MO2");
  term_store st;

  // x v y = 1 does not force y' <= x on MO2: two distinct side atoms join to
  // the top yet neither lies under the other's complement.
  inference inf;
  inf.name = "join-top-not-complement";
  inf.hypotheses = {hypothesis::equal(st.join(st.variable("x"), st.variable("y")), st.one())};
  inf.conclusion = conclusion_kind::leq;
  inf.lhs = st.ortho(st.variable("y"));
  inf.rhs = st.variable("x");
  assign_variables(inf);

  auto ref = omltest::naive_check(L, inf);
  CHECK_FALSE(ref.holds);
  verdict v = check(L, inf);
  CHECK(v.falsified());
  CHECK(eval_hypotheses(inf, L, v.counterexample));
  CHECK_FALSE(eval_conclusion(inf, L, v.counterexample));

  // Same hypothesis with a conclusion it directly implies.
  inference holds_inf;
  holds_inf.name = "join-top-restated";
  holds_inf.hypotheses = inf.hypotheses;
  holds_inf.conclusion = conclusion_kind::leq;
  holds_inf.lhs = st.one();
  holds_inf.rhs = st.join(st.variable("x"), st.variable("y"));
  assign_variables(holds_inf);
  CHECK(omltest::naive_check(L, holds_inf).holds);
  CHECK(check(L, holds_inf).holds());
}

TEST_CASE("statically decided inferences") {
  lattice L = make_builtin("MO2");
  term_store st;

  // Unsatisfiable hypothesis: vacuous pass without enumeration.
  inference vacuous;
  vacuous.name = "vacuous";
  vacuous.hypotheses = {hypothesis::equal(st.zero(), st.one())};
  vacuous.conclusion = conclusion_kind::leq;
  vacuous.lhs = st.variable("x");
  vacuous.rhs = st.zero();
  assign_variables(vacuous);
  verdict v = check(L, vacuous);
  CHECK(v.holds());
  CHECK(v.assignments_examined == 0);

  strategy srch;
  srch.mode = check_mode::counterexample_search;
  verdict vs = check(L, vacuous, srch);
  CHECK(vs.status == verdict_status::inconclusive);

  // Closed conclusions evaluate on the single empty assignment.
  inference closed_true;
  closed_true.name = "closed-true";
  closed_true.conclusion = conclusion_kind::leq;
  closed_true.lhs = st.zero();
  closed_true.rhs = st.one();
  assign_variables(closed_true);
  verdict vt = check(L, closed_true);
  CHECK(vt.holds());
  CHECK(vt.assignments_examined == 1);

  inference closed_false;
  closed_false.name = "closed-false";
  closed_false.conclusion = conclusion_kind::leq;
  closed_false.lhs = st.one();
  closed_false.rhs = st.zero();
  assign_variables(closed_false);
  verdict vf = check(L, closed_false);
  CHECK(vf.falsified());
  CHECK(vf.counterexample.empty());
}

TEST_CASE("commutation conclusions") {
  term_store st;
  inference inf;
  inf.name = "all-commute";
  inf.conclusion = conclusion_kind::commutes;
  inf.lhs = st.variable("p");
  inf.rhs = st.variable("q");
  assign_variables(inf);

  lattice b2 = make_builtin("Boolean(2)");
  auto ref_b2 = omltest::naive_check(b2, inf);
  CHECK(ref_b2.holds);
  CHECK(check(b2, inf).holds());

  lattice o6 = make_builtin("O6");
  auto ref_o6 = omltest::naive_check(o6, inf);
  CHECK_FALSE(ref_o6.holds);
  verdict v = check(o6, inf);
  CHECK(v.falsified());
  CHECK_FALSE(eval_conclusion(inf, o6, v.counterexample));
}

TEST_CASE("search mode never claims holds") {
  lattice L = build(parse(omltest::k13_7));
  term_store st;
  inference oml_law = make_oml_law(st);

  strategy srch;
  srch.mode = check_mode::counterexample_search;
  srch.budget = 1000;
  srch.seed = 3;
  verdict v = check(L, oml_law, srch);
  CHECK(v.status == verdict_status::inconclusive);
  CHECK(v.assignments_examined <= 1000);

  term_store st2;
  inference dist = make_distributive(st2);
  lattice mo2 = make_builtin("MO2");
  verdict vd = check(mo2, dist, srch);
  CHECK(vd.falsified());
  CHECK_FALSE(eval_conclusion(dist, mo2, vd.counterexample));
}

TEST_CASE("worker striping gives the same verdict and witness") {
  lattice L = make_builtin("O6");
  term_store st;
  inference generic = make_noa3(st, false);

  verdict base = check(L, generic);
  for (int workers : {2, 3}) {
    strategy s;
    s.workers = workers;
    verdict v = check(L, generic, s);
    CHECK(v.status == base.status);
    CHECK(v.counterexample == base.counterexample);
  }
}

TEST_CASE("fast path and generic engine agree across lattices") {
  term_store st;
  inference fast = make_noa3(st, true);
  inference generic = make_noa3(st, false);

  std::vector<lattice> lats;
  lats.push_back(make_builtin("O6"));
  lats.push_back(make_builtin("MO2"));
  lats.push_back(make_builtin("Boolean(3)"));
  lats.push_back(build(parse(omltest::k13_7)));

  strategy noprune;
  noprune.prune_conclusion = false;
  for (const lattice& L : lats) {
    verdict vf = check(L, fast, noprune);
    verdict vg = check(L, generic, noprune);
    CHECK(vf.status == vg.status);
    if (vf.holds()) {
      std::uint64_t n = static_cast<std::uint64_t>(L.size());
      CHECK(vf.assignments_examined == n * n * n);
      CHECK(vg.assignments_examined == n * n * n);
    }
  }
}

TEST_CASE("verdict cache round trips and resumes a matrix") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "omlattice-checker-cache-test.txt";
  fs::remove(path);

  lattice o6 = make_builtin("O6");
  lattice mo2 = make_builtin("MO2");
  term_store st;
  std::vector<std::pair<std::string, inference>> families;
  families.emplace_back("noa3", make_noa3(st, true));
  families.emplace_back("oml", make_oml_law(st));
  std::vector<std::pair<std::string, const lattice*>> lats{{"O6", &o6}, {"MO2", &mo2}};

  strategy s;
  {
    verdict_cache cache(path.string());
    auto first = check_matrix(lats, families, s, &cache);
    REQUIRE(first.size() == 4);
    for (const auto& e : first) CHECK_FALSE(e.from_cache);

    auto second = check_matrix(lats, families, s, &cache);
    for (size_t i = 0; i < second.size(); ++i) {
      CHECK(second[i].from_cache);
      CHECK(second[i].result.status == first[i].result.status);
      CHECK(second[i].result.assignments_examined == first[i].result.assignments_examined);
      CHECK(second[i].result.counterexample == first[i].result.counterexample);
    }
  }

  // A fresh instance reloads the same records from disk.
  verdict_cache reloaded(path.string());
  auto resumed = check_matrix(lats, families, s, &reloaded);
  for (const auto& e : resumed) CHECK(e.from_cache);
  auto hit = reloaded.lookup(o6.digest(), "noa3", s.cache_key());
  REQUIRE(hit.has_value());
  CHECK(hit->falsified());
  CHECK_FALSE(hit->counterexample.empty());

  // Different strategies key separate records.
  strategy srch;
  srch.mode = check_mode::counterexample_search;
  CHECK_FALSE(reloaded.lookup(o6.digest(), "noa3", srch.cache_key()).has_value());
  CHECK(s.cache_key() != srch.cache_key());

  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    CAPTURE(line);
    CHECK(line.rfind("1|", 0) == 0);
  }
  fs::remove(path);
}

TEST_CASE("unbound variables are rejected") {
  lattice L = make_builtin("MO2");
  term_store st;
  inference inf;
  inf.name = "unclosed";
  inf.conclusion = conclusion_kind::leq;
  inf.lhs = st.variable("x");
  inf.rhs = st.variable("y");
  inf.variables = {"x"};  // y deliberately missing
  CHECK_THROWS_AS(check(L, inf), term_error);
}
