#include "doctest.h"
#include "helpers.hpp"
#include "goimall/corpus.hpp"

using namespace goimall;

namespace {
IndexSet J12() { return {"1", "2"}; }
}

TEST_CASE("restrict_formula clauses") {
  IFormulaPtr bot12 = if_unit(Conn::Bot, J12());
  CHECK(to_string(restrict_formula(bot12, {"1"})) == "bot{1}");
  IFormulaPtr t = if_bin(Conn::Tensor, if_unit(Conn::One, J12()), if_unit(Conn::Bot, J12()));
  IFormulaPtr tr = restrict_formula(t, {"2"});
  CHECK(to_string(tr) == "(1{2} * bot{2})");
  IFormulaPtr z = if_unit(Conn::Zero, {});
  CHECK(to_string(restrict_formula(z, {"1"})) == "0{}");
  // restriction commutes with the indexed dual
  IFormulaPtr pw = if_bin(Conn::Plus, if_unit(Conn::One, {"1"}), if_unit(Conn::One, {"2"}));
  CHECK(equal(restrict_formula(indexed_dual(pw), {"1"}), indexed_dual(restrict_formula(pw, {"1"}))));
}

TEST_CASE("translate_formula_family") {
  std::map<Atom, PointPtr> const_star = {{"1", pt_star()}, {"2", pt_star()}};
  CHECK(to_string(translate_formula_family(f_one(), const_star)) == "1{1,2}");

  std::map<Atom, PointPtr> delta = {{"1", pt_in1(pt_star())}, {"2", pt_in2(pt_star())}};
  CHECK(to_string(translate_formula_family(f_with(f_one(), f_one()), delta)) == "(1{1} & 1{2})");

  std::map<Atom, PointPtr> tau = {{"1", pt_in1(pt_star())}, {"2", pt_in1(pt_star())}};
  CHECK(to_string(translate_formula_family(f_plus(f_bot(), f_bot()), tau)) ==
        "(bot{1,2} + bot{})");

  CHECK_THROWS_AS(translate_formula_family(f_zero(), const_star), CheckError);
  CHECK(to_string(translate_formula_family(f_zero(), {})) == "0{}");
}

TEST_CASE("translate_cut_family on the prologue pair") {
  std::vector<CutPair> cuts = {{f_with(f_one(), f_one()), f_plus(f_bot(), f_bot())}};
  std::map<Atom, std::vector<CutSlot>> fam = {{"1", testing::nu(1).cuts}, {"2", testing::nu(2).cuts}};
  auto pairs = translate_cut_family(cuts, fam);
  REQUIRE(pairs.size() == 1);
  CHECK(to_string(pairs[0].left) == "(1{1} & 1{2})");
  CHECK(to_string(pairs[0].right) == "(bot{1,2} + bot{})");
  // all-absent family gives the empty-domain pair
  std::map<Atom, std::vector<CutSlot>> absent = {{"1", {std::nullopt}}};
  auto empties = translate_cut_family(cuts, absent);
  CHECK(empties[0].left->d.empty());
}

TEST_CASE("check_indexed_proof accepts the one axiom at any domain") {
  IChecked c = check_indexed_proof(ip_one({"a", "b"}));
  CHECK(to_string(c.seq) == "|-{a,b} [  ] 1{a,b}");
}

TEST_CASE("check_indexed_proof rejects overlapping with domains") {
  IProofPtr l = ip_ax(if_unit(Conn::One, {"1"}));
  IProofPtr r = ip_ax(if_unit(Conn::One, {"1"}));
  CHECK_THROWS_AS(check_indexed_proof(ip_with(l, r, {})), CheckError);
}

TEST_CASE("fl_forward on the prologue reproduces the indexed sequent") {
  Checked c = check_proof(testing::pi1());
  IndexedFamily fam = testing::prologue_family();
  ISequent s = translate_sequent(c.seq, fam);
  CHECK(to_string(s) == "|-{1,2} [ (1{1} & 1{2}, bot{1,2} + bot{}) ] bot{1,2}, 1{1,2}");
  IProofPtr rho = fl_forward(c, fam);
  IChecked rc = check_indexed_proof(rho);
  CHECK(to_string(rc.seq) == to_string(s));
  CHECK(testing::equal_proof(strip(rho), testing::pi1()));
}

TEST_CASE("restrict_proof") {
  Checked c = check_proof(testing::pi1());
  IProofPtr rho = fl_forward(c, testing::prologue_family());
  IChecked r1 = check_indexed_proof(restrict_proof(rho, {"1"}));
  CHECK(r1.seq.J == IndexSet{"1"});
  CHECK(to_string(r1.seq.ctx[0]) == "bot{1}");
  IChecked rfull = check_indexed_proof(restrict_proof(rho, J12()));
  CHECK(to_string(rfull.seq) == to_string(check_indexed_proof(rho).seq));
  CHECK(testing::equal_proof(strip(restrict_proof(rho, {})), testing::pi1()));
}

TEST_CASE("fl round trip on the prologue") {
  Checked c = check_proof(testing::pi1());
  IndexedFamily fam = testing::prologue_family();
  IProofPtr rho = fl_forward(c, fam);
  auto [fam2, p2] = fl_backward(check_indexed_proof(rho));
  CHECK(testing::equal_proof(p2, testing::pi1()));
  REQUIRE(fam2.J == fam.J);
  for (const auto& j : fam.J) CHECK(cmp(fam2.v.at(j), fam.v.at(j)) == 0);
}

TEST_CASE("fl_forward reports the offending index") {
  Checked c = check_proof(p_ax(f_one()));
  IndexedFamily bad;
  bad.J = {"7"};
  PointVec v;
  v.ctx = {pt_star(), pt_in1(pt_star())};  // not diagonal / ill-shaped
  bad.v["7"] = v;
  try {
    fl_forward(c, bad);
    FAIL("expected a membership error");
  } catch (const MembershipError& e) {
    CHECK(e.index == "7");
  }
}

TEST_CASE("fundamental lemma on a small corpus") {
  CorpusOptions opts;
  opts.max_size = 4;
  std::vector<Atom> atoms = {"1", "2", "3"};
  for (const auto& p : enumerate_proofs(opts)) {
    Checked c = check_proof(p);
    Relation rel = interp_with_cuts(c);
    for (const auto& fam : sample_families(rel, atoms, 12, 11)) {
      IProofPtr rho = fl_forward(c, fam);
      IChecked rc = check_indexed_proof(rho);
      CHECK(rc.seq.J == fam.J);
      CHECK(testing::equal_proof(strip(rho), p));
      auto [fam2, p2] = fl_backward(rc);
      CHECK(testing::equal_proof(p2, p));
      REQUIRE(fam2.J == fam.J);
      for (const auto& j : fam.J) CHECK(cmp(fam2.v.at(j), fam.v.at(j)) == 0);
      // direction (ii) -> (i): the reconstructed family is a member family
      for (const auto& j : fam2.J)
        CHECK(std::binary_search(rel.begin(), rel.end(), fam2.v.at(j)));
    }
  }
}

TEST_CASE("translations commute with restriction") {
  std::map<Atom, PointPtr> fam = {{"1", pt_in1(pt_star())},
                                  {"2", pt_in2(pt_star())},
                                  {"3", pt_in1(pt_star())}};
  FormulaPtr f = f_plus(f_one(), f_one());
  IFormulaPtr whole = translate_formula_family(f, fam);
  std::map<Atom, PointPtr> restricted = {{"1", pt_in1(pt_star())}, {"3", pt_in1(pt_star())}};
  CHECK(equal(restrict_formula(whole, {"1", "3"}), translate_formula_family(f, restricted)));
}

TEST_CASE("family json round trip") {
  IndexedFamily fam = testing::prologue_family();
  IndexedFamily fam2 = family_from_json(json_family(fam));
  REQUIRE(fam2.J == fam.J);
  for (const auto& j : fam.J) CHECK(cmp(fam2.v.at(j), fam.v.at(j)) == 0);
}
