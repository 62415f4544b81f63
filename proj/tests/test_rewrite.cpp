#include "doctest.h"
#include "helpers.hpp"
#include "goimall/corpus.hpp"

using namespace goimall;

namespace {
ProofPtr commute_with_example() {
  // cut(one, ex(with(ax bot, ax bot))): the cut formula sits beside the &
  ProofPtr w = p_with(p_ax(f_bot()), p_ax(f_bot()), {});
  return p_cut(p_one(), p_ex(w, 0, 1));
}
}  // namespace

TEST_CASE("find_redexes classifies the prologue") {
  Checked c = check_proof(testing::pi1());
  auto rs = find_redexes(c);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RK::WithPlus1);
  CHECK(rs[0].path.empty());
  CHECK(kind_string(rs[0]) == "WithPlus(1)");
}

TEST_CASE("find_redexes on cut-free proofs") {
  CHECK(find_redexes(check_proof(p_ax(f_one()))).empty());
}

TEST_CASE("the prologue reduction chain") {
  ProofPtr p = testing::pi1();
  auto rs = find_redexes(check_proof(p));
  ProofPtr pi2 = reduce_step(p, rs[0]);
  CHECK(to_string(check_proof(pi2).seq) == "|- [(1, bot)] bot, 1");
  auto rs2 = find_redexes(check_proof(pi2));
  REQUIRE(rs2.size() == 1);
  CHECK(rs2[0].kind == RK::AxCut);
  ProofPtr pi3 = reduce_step(pi2, rs2[0]);
  CHECK(to_string(check_proof(pi3).seq) == "|- [] bot, 1");
  CHECK(find_redexes(check_proof(pi3)).empty());
}

TEST_CASE("reduce_step rejects the wrong pattern") {
  ProofPtr p = testing::pi1();
  Redex wrong{{}, RK::AxCut, ""};
  CHECK_THROWS_AS(reduce_step(p, wrong), CheckError);
}

TEST_CASE("one/bot key case") {
  ProofPtr p = p_cut(p_one(), p_bot(p_one()));
  auto rs = find_redexes(check_proof(p));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RK::OneBot);
  ProofPtr r = reduce_step(p, rs[0]);
  CHECK(testing::equal_proof(r, p_one()));
}

TEST_CASE("tensor/par key case") {
  ProofPtr t = p_tensor(p_one(), p_one());                      // |- 1*1
  ProofPtr q = p_par(p_bot(p_bot(p_one())));                    // |- 1, bot par bot
  ProofPtr p = p_cut(t, q);
  auto rs = find_redexes(check_proof(p));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RK::TensorPar);
  ProofPtr r = reduce_step(p, rs[0]);
  Checked c = check_proof(r);
  CHECK(c.seq.cuts.size() == 2);
  CHECK(to_string(c.seq.ctx[0]) == "1");
  auto steps = normalize(p);
  CHECK(find_redexes(check_proof(steps.back().second)).empty());
}

TEST_CASE("commute past with duplicates the cut") {
  ProofPtr p = commute_with_example();
  auto rs = find_redexes(check_proof(p));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RK::CommuteWith);
  ProofPtr r = reduce_step(p, rs[0]);
  Checked c = check_proof(r);
  CHECK(to_string(c.seq.ctx.back()) == "(1 & 1)");
  CHECK(c.seq.cuts.size() == 2);  // one (1,bot) pair per branch
  auto steps = normalize(p);
  Checked fin = check_proof(steps.back().second);
  CHECK(fin.seq.cuts.empty());
  CHECK(to_string(fin.seq.ctx[0]) == "(1 & 1)");
}

TEST_CASE("commutations past bot, plus and tensor") {
  // ax |- 1, bot; the bot rule appends another bot; swapping the two bots puts
  // the axiom's bot (non-principal in the core) into cut position
  ProofPtr b = p_ex(p_bot(p_ax(f_one())), 1, 2);
  ProofPtr p = p_cut(p_one(), b);
  Checked c = check_proof(p);
  auto rs = find_redexes(c);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RK::CommuteOther);
  ProofPtr r = reduce_step(p, rs[0]);
  CHECK(to_string(check_proof(r).seq.ctx.back()) == to_string(c.seq.ctx.back()));
  auto steps = normalize(p);
  CHECK(check_proof(steps.back().second).seq.cuts.empty());
}

TEST_CASE("lift_step on the prologue diminishes J") {
  ProofPtr p = testing::pi1();
  IndexedFamily fam = testing::prologue_family();
  auto rs = find_redexes(check_proof(p));
  LiftStep s1 = lift_step(p, fam, rs[0]);
  CHECK(s1.fam_after.J == IndexSet{"1"});
  CHECK(s1.dropped == IndexSet{"2"});
  auto rs2 = find_redexes(check_proof(s1.after));
  LiftStep s2 = lift_step(s1.after, s1.fam_after, rs2[0]);
  CHECK(s2.fam_after.J == IndexSet{"1"});
  CHECK(s2.dropped.empty());
}

TEST_CASE("normalize_lifted trace on the prologue") {
  auto steps = normalize_lifted(testing::pi1(), testing::prologue_family());
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].redex.kind == RK::WithPlus1);
  CHECK(steps[1].redex.kind == RK::AxCut);
  CHECK(steps[0].fam_after.J == IndexSet{"1"});
  CHECK(steps[1].fam_after.J == IndexSet{"1"});
  CHECK(check_proof(steps[1].after).seq.cuts.empty());
}

TEST_CASE("axcut drops exactly the mismatched indices") {
  // cut(ax(1&1)-swapped, plus1(ax 1)): |- [(1&1, bot+bot)] (1&1)^... constructed directly:
  ProofPtr l = p_ex(p_ax(f_with(f_one(), f_one())), 0, 1);  // |- (bot+bot), (1&1)
  ProofPtr r = p_plus1(p_ax(f_one()), f_bot());             // |- 1, bot+bot
  ProofPtr p = p_cut(l, r);
  Checked c = check_proof(p);
  Relation rel = interp_with_cuts(c);
  REQUIRE(rel.size() == 2);  // axiom diagonal tags 1 and 2, plus side always 1
  IndexedFamily fam;
  fam.J = {"a", "b"};
  fam.v["a"] = rel[0];
  fam.v["b"] = rel[1];
  auto rs = find_redexes(c);
  REQUIRE(rs[0].kind == RK::AxCut);
  LiftStep s = lift_step(p, fam, rs[0]);
  CHECK(s.fam_after.J.size() == 1);
  CHECK(s.dropped.size() == 1);
}

TEST_CASE("denotational interpretation is invariant under every step") {
  CorpusOptions opts;
  opts.max_size = 5;
  for (const auto& p : enumerate_proofs(opts)) {
    Checked c = check_proof(p);
    CtxRelation before = interp_denotational(c);
    for (const auto& r : find_redexes(c)) {
      ProofPtr q = reduce_step(p, r);
      CtxRelation after = interp_denotational(check_proof(q));
      REQUIRE(before.size() == after.size());
      for (size_t i = 0; i < before.size(); ++i) CHECK(cmp(before[i], after[i]) == 0);
    }
  }
}

TEST_CASE("lifted normalization keeps decreasing J and lands in the filter set") {
  CorpusOptions opts;
  opts.max_size = 5;
  std::vector<Atom> atoms = {"1", "2", "3"};
  for (const auto& p : enumerate_proofs(opts)) {
    Checked c = check_proof(p);
    Relation rel = interp_with_cuts(c);
    if (rel.empty()) continue;
    for (const auto& fam : sample_families(rel, atoms, 6, 5)) {
      auto steps = normalize_lifted(p, fam);
      IndexSet cur = fam.J;
      for (const auto& s : steps) {
        CHECK(iset_subset(s.fam_after.J, cur));
        cur = s.fam_after.J;
      }
      IndexSet expect;
      for (const auto& j : fam.J) {
        bool ok = true;
        for (const auto& sl : fam.v.at(j).cuts)
          if (sl && !equal(sl->first, sl->second)) ok = false;
        if (ok) expect.insert(j);
      }
      CHECK(cur == expect);
    }
  }
}

TEST_CASE("crucial case 3 with a nonempty superposed stack") {
  // left premise: a plus over a proof with its own cut pair, so the
  // duplicating step superposes that pair between the two new & premises
  ProofPtr l = p_plus1(p_cut(p_one(), p_bot(p_one())), f_bot());  // |- [(1, bot)], (1 + bot)
  FormulaPtr a = f_plus(f_one(), f_bot());
  // right premise: a & whose context holds the dual of (1 + bot)
  ProofPtr x = p_ex(p_ax(a), 0, 1);  // |- (bot & 1), (1 + bot)
  ProofPtr w = p_ex(p_with(x, x, {}), 0, 1);  // |- ((1+bot) & (1+bot)), (bot & 1)
  ProofPtr p = p_cut(l, w);
  Checked c = check_proof(p);
  CHECK(c.seq.cuts.size() == 2);
  auto rs = find_redexes(c);
  // innermost first: the OneBot inside l, then the CommuteWith at the root
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].kind == RK::OneBot);
  CHECK(rs[1].kind == RK::CommuteWith);
  ProofPtr r = reduce_step(p, rs[1]);
  Checked cr = check_proof(r);
  // stack: one (A, A^perp) pair per branch plus the superposed (1, bot) pair
  CHECK(cr.seq.cuts.size() == 3);

  // lift a full family through the duplicating step: nothing is dropped
  Relation rel = interp_with_cuts(c);
  REQUIRE(rel.size() >= 2);
  IndexedFamily fam;
  fam.J = {"1", "2"};
  fam.v["1"] = rel[0];
  fam.v["2"] = rel[1];
  LiftStep s = lift_step(p, fam, rs[1]);
  CHECK(s.dropped.empty());
  CHECK(s.fam_after.J == fam.J);

  // the full lifted normalization exercises un-superposition when the
  // superposed pair is eliminated inside one branch first
  for (size_t i = 0; i < rel.size(); ++i)
    for (size_t j = 0; j < rel.size(); ++j) {
      IndexedFamily f2;
      f2.J = {"1", "2"};
      f2.v["1"] = rel[i];
      f2.v["2"] = rel[j];
      auto steps = normalize_lifted(p, f2);
      CHECK(check_proof(steps.back().after).seq.cuts.empty());
      Report rep = verify_main_theorem(p, f2);
      for (const auto& line : rep.lines) CAPTURE(line);
      CHECK(rep.pass);
    }
}

TEST_CASE("commuting a cut into a top context erases the other premise") {
  ProofPtr p = p_cut(p_one(), p_ex(p_top({f_bot()}), 0, 1));
  Checked c = check_proof(p);
  auto rs = find_redexes(c);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RK::CommuteOther);
  CHECK(rs[0].detail == "top");
  ProofPtr r = reduce_step(p, rs[0]);
  Checked cr = check_proof(r);
  CHECK(cr.seq.cuts.empty());
  CHECK(to_string(cr.seq.ctx[0]) == "top");
  CHECK(interp_with_cuts(cr).empty());
}

TEST_CASE("commuting a cut past another cut") {
  ProofPtr inner = p_cut(p_ax(f_one()), p_ax(f_bot()));  // |- [(bot, 1)], 1, bot
  ProofPtr p = p_cut(p_one(), inner);
  Checked c = check_proof(p);
  auto rs = find_redexes(c);
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].kind == RK::AxCut);  // the inner cut, innermost first
  CHECK(rs[1].kind == RK::CommuteOther);
  CHECK(rs[1].detail == "cut");
  ProofPtr r = reduce_step(p, rs[1]);
  Checked cr = check_proof(r);
  CHECK(cr.seq.cuts.size() == 2);
  CHECK(to_string(cr.seq.ctx[0]) == "1");
  auto steps = normalize(r);
  CHECK(check_proof(steps.back().second).seq.cuts.empty());
}

TEST_CASE("the step budget is enforced") {
  CHECK_THROWS_AS(normalize(testing::pi1(), 1), BudgetError);
  CHECK_THROWS_AS(normalize_lifted(testing::pi1(), testing::prologue_family(), 0), BudgetError);
}
