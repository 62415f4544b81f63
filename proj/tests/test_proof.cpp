#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "goimall/corpus.hpp"

using namespace goimall;

TEST_CASE("parse_proof basics") {
  ProofPtr p = parse_proof("(ax 1)");
  CHECK(p->r == Rule::Ax);
  CHECK(equal(p->f, f_one()));
  CHECK_THROWS_AS(parse_proof("(ax)"), ParseError);
  CHECK_THROWS_AS(parse_proof("(frob 1)"), ParseError);
  // parsing does not type-check
  ProofPtr bad = parse_proof("(with (ax 1) (one) ())");
  CHECK(bad->r == Rule::WithI);
  CHECK_THROWS_AS(check_proof(bad), CheckError);
}

TEST_CASE("print/parse round trip") {
  ProofPtr p = testing::pi1();
  CHECK(testing::equal_proof(parse_proof(to_string(p)), p));
  ProofPtr t = parse_proof("(top (1 bot))");
  CHECK(testing::equal_proof(parse_proof(to_string(t)), t));
}

TEST_CASE("check_proof axiom and units") {
  Checked c = check_proof(p_ax(f_one()));
  CHECK(to_string(c.seq) == "|- [] 1, bot");
  Checked o = check_proof(p_one());
  CHECK(to_string(o.seq) == "|- [] 1");
  Checked t = check_proof(p_top({f_zero()}));
  CHECK(to_string(t.seq) == "|- [] 0, top");
}

TEST_CASE("check_proof on the prologue proof") {
  Checked c = check_proof(testing::pi1());
  CHECK(to_string(c.seq) == "|- [((1 & 1), (bot + bot))] bot, 1");
}

TEST_CASE("check_proof rejects non-dual cuts") {
  ProofPtr bad = p_cut(p_ax(f_one()), p_ax(f_one()));
  try {
    check_proof(bad);
    FAIL("expected a check error");
  } catch (const CheckError& e) {
    CHECK(std::string(e.what()).find("cut formulas not dual") != std::string::npos);
  }
}

TEST_CASE("check_proof rejects mismatched with contexts") {
  ProofPtr bad = p_with(p_ax(f_one()), p_ex(p_ax(f_one()), 0, 1), {});
  CHECK_THROWS_AS(check_proof(bad), CheckError);
  ProofPtr bad_sigma = p_with(p_ax(f_one()), p_ax(f_one()), {{0, 0}});
  CHECK_THROWS_AS(check_proof(bad_sigma), CheckError);
}

TEST_CASE("exchange preserves the context multiset") {
  CorpusOptions opts;
  opts.max_size = 4;
  for (const auto& p : enumerate_proofs(opts)) {
    Checked c = check_proof(p);
    if (c.seq.ctx.size() < 2) continue;
    Checked c2 = check_proof(p_ex(p, 0, static_cast<int>(c.seq.ctx.size()) - 1));
    auto key = [](const Sequent& s) {
      std::vector<std::string> k;
      for (const auto& f : s.ctx) k.push_back(to_string(f));
      std::sort(k.begin(), k.end());
      return k;
    };
    CHECK(key(c.seq) == key(c2.seq));
  }
}
