#include "doctest.h"
#include "helpers.hpp"
#include "goimall/corpus.hpp"

using namespace goimall;

namespace {
MorphismValue sym2() {
  // the axiom symmetry on two unit ports
  Checked c = check_proof(p_ax(f_one()));
  return execute_point(c, PointVec{{}, {pt_star(), pt_star()}});
}
}  // namespace

TEST_CASE("axiom box is the symmetry") {
  MorphismValue v = sym2();
  CHECK_FALSE(v.zero);
  REQUIRE(v.table.size() == 2);
  CHECK(v.table.at({0, ""}) == Token{1, ""});
  CHECK(v.table.at({1, ""}) == Token{0, ""});
}

TEST_CASE("pi2 executes to the axiom symmetry") {
  ProofPtr pi2 = p_cut(p_ex(p_ax(f_one()), 0, 1), p_ax(f_one()));
  Checked c = check_proof(pi2);
  Relation rel = interp_with_cuts(c);
  REQUIRE(rel.size() == 1);
  MorphismValue v = execute_point(c, rel[0]);
  CHECK(v.table == sym2().table);
}

TEST_CASE("prologue executions: symmetry at index 1, ZERO at index 2") {
  Checked c = check_proof(testing::pi1());
  MorphismValue e1 = execute_point(c, testing::nu(1));
  MorphismValue e2 = execute_point(c, testing::nu(2));
  CHECK_FALSE(e1.zero);
  CHECK(e1.table == sym2().table);
  CHECK(e2.zero);
}

TEST_CASE("exzio: the tensor with a mismatched branch executes to ZERO on 3 ports") {
  Checked c = check_proof(testing::exzio_proof());
  REQUIRE(c.seq.ctx.size() == 3);
  Box m = build_box(c, testing::exzio_point());
  EpsilonAssignment eps = zero_action(m);
  int annihilated = 0, assoc = 0;
  for (size_t i = 0; i < m.nodes.size(); ++i) {
    if (m.nodes[i].assoc) ++assoc;
    if (eps[i]) ++annihilated;
  }
  CHECK(assoc == 2);        // the tensor's ret/coret pair
  CHECK(annihilated == 2);  // both get the zero action
  MorphismValue v = execute_point(c, testing::exzio_point());
  CHECK(v.zero);
  CHECK(v.ports.size() == 3);
}

TEST_CASE("a fully matched sigma annihilates nothing") {
  Checked c = check_proof(testing::exzio_proof());
  PointVec x = testing::nu(1);
  x.ctx = {pt_star(), pt_star(), pt_pair(pt_star(), pt_star())};
  Box m = build_box(c, x);
  EpsilonAssignment eps = zero_action(m);
  for (size_t i = 0; i < m.nodes.size(); ++i) CHECK_FALSE(eps[i]);
  CHECK_FALSE(execute_point(c, x).zero);
}

TEST_CASE("morphisms_equal") {
  MorphismValue s = sym2();
  MorphismValue z = s;
  z.zero = true;
  z.table.clear();
  CHECK(morphisms_equal(s, s));
  CHECK_FALSE(morphisms_equal(s, z));
  MorphismValue other = s;
  other.ports = {pt_star()};
  CHECK_THROWS_AS(morphisms_equal(s, other), std::invalid_argument);
}

TEST_CASE("plus is transparent for execution") {
  Checked c = check_proof(p_plus1(p_ax(f_one()), f_bot()));
  PointVec x{{}, {pt_star(), pt_in1(pt_star())}};
  MorphismValue v = denotation_morphism(c, x);
  CHECK(v.table == sym2().table);
}

TEST_CASE("denotation_morphism requires a cut-free proof") {
  Checked c = check_proof(testing::pi1());
  CHECK_THROWS_AS(denotation_morphism(c, testing::nu(1)), std::invalid_argument);
}

TEST_CASE("generalized axioms agree with eta expansion") {
  for (const auto& a : testing::formulas_up_to(4)) {
    Checked ax = check_proof(p_ax(a));
    Checked eta = check_proof(testing::eta_expand(a));
    for (const auto& pt : interp_formula(a)) {
      PointVec x{{}, {pt, pt}};
      MorphismValue va = denotation_morphism(ax, x);
      MorphismValue ve = denotation_morphism(eta, x);
      CHECK(morphisms_equal(va, ve));
    }
  }
}

TEST_CASE("cut-free executions are total bijections and never ZERO") {
  CorpusOptions opts;
  opts.max_size = 4;
  for (const auto& p : enumerate_proofs(opts)) {
    Checked c = check_proof(p);
    if (!c.seq.cuts.empty()) continue;
    for (const auto& x : interp_with_cuts(c)) {
      MorphismValue v = execute_point(c, x);
      CHECK_FALSE(v.zero);
      size_t dom = 0;
      for (const auto& pt : x.ctx) dom += addresses(pt).size();
      CHECK(v.table.size() == dom);  // total
      std::set<std::string> images;
      for (const auto& [s, t] : v.table) images.insert(to_string(t));
      CHECK(images.size() == v.table.size());  // injective
    }
  }
}

TEST_CASE("mismatched principal pairs execute to ZERO") {
  // 1&1 point (1,*) against bot+bot point 2.* through an explicit pair
  ProofPtr l = p_with(p_ex(p_ax(f_one()), 0, 1), p_ex(p_ax(f_one()), 0, 1), {});
  ProofPtr r = p_plus2(p_ax(f_one()), f_bot());
  Checked cl = check_proof(l), cr = check_proof(r);
  PointVec xl{{}, {pt_star(), pt_in1(pt_star())}};
  PointVec xr{{}, {pt_star(), pt_in2(pt_star())}};
  MorphismValue v = execute_cut_pair(cl, xl, cr, xr);
  CHECK(v.zero);
  CHECK(v.ports.size() == 2);
  // matched points do communicate
  PointVec xr2{{}, {pt_star(), pt_in1(pt_star())}};
  ProofPtr r2 = p_plus1(p_ax(f_one()), f_bot());
  MorphismValue v2 = execute_cut_pair(cl, xl, check_proof(r2), xr2);
  CHECK_FALSE(v2.zero);
}

TEST_CASE("verify_main_theorem passes on the prologue") {
  Report rep = verify_main_theorem(testing::pi1(), testing::prologue_family());
  for (const auto& l : rep.lines) CAPTURE(l);
  CHECK(rep.pass);
}

TEST_CASE("verify_main_theorem rejects non-member families") {
  IndexedFamily bad = testing::prologue_family();
  bad.v["1"].ctx[0] = pt_in1(pt_star());
  Report rep = verify_main_theorem(testing::pi1(), bad);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("dot export mentions the annihilated pair") {
  Checked c = check_proof(testing::exzio_proof());
  Box m = build_box(c, testing::exzio_point());
  std::string dot = to_dot(m, zero_action(m));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("color=red") != std::string::npos);
}

TEST_CASE("eval_token rejects malformed tokens") {
  Checked c = check_proof(p_ax(f_one()));
  Box m = build_box(c, PointVec{{}, {pt_star(), pt_star()}});
  EpsilonAssignment eps = zero_action(m);
  CHECK_THROWS_AS(eval_token(m, eps, {0, "l"}, 100), std::invalid_argument);
  CHECK_THROWS_AS(eval_token(m, eps, {99, ""}, 100), std::invalid_argument);
}

TEST_CASE("zero action rounds are reported") {
  Checked c = check_proof(testing::exzio_proof());
  Box m = build_box(c, testing::exzio_point());
  int rounds = -1;
  zero_action(m, &rounds);
  CHECK(rounds >= 1);
}
