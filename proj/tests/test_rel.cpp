#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "goimall/corpus.hpp"

using namespace goimall;

namespace {
std::set<std::string> point_set(const std::vector<PointPtr>& v) {
  std::set<std::string> s;
  for (const auto& x : v) s.insert(to_string(x));
  return s;
}

// independent oracle for |Delta~|: build the per-pair slot choices directly
// from |C| x |C_perp| + {absent} and take the cartesian product by counting
long oracle_sublist_count(const std::vector<CutPair>& cuts) {
  long n = 1;
  for (const auto& cp : cuts)
    n *= 1 + static_cast<long>(interp_formula(cp.left).size()) *
                 static_cast<long>(interp_formula(cp.right).size());
  return n;
}
}  // namespace

TEST_CASE("interp_formula") {
  CHECK(point_set(interp_formula(f_one())) == std::set<std::string>{"*"});
  CHECK(point_set(interp_formula(f_with(f_one(), f_one()))) == std::set<std::string>{"1.*", "2.*"});
  CHECK(interp_formula(f_tensor(f_zero(), f_one())).empty());
  for (const auto& f : testing::formulas_up_to(5)) {
    // |A| = |A^perp| under the identification of * with *bar
    CHECK(point_set(interp_formula(f)) == point_set(interp_formula(dual(f))));
  }
}

TEST_CASE("sublist_space") {
  CHECK(sublist_space({}).size() == 1);
  std::vector<CutPair> one = {{f_one(), f_bot()}};
  CHECK(sublist_space(one).size() == 2);
  std::vector<CutPair> two = {{f_one(), f_bot()},
                              {f_with(f_one(), f_one()), f_plus(f_bot(), f_bot())}};
  CHECK(sublist_space(two).size() == 10);
  CHECK(static_cast<long>(sublist_space(two).size()) == oracle_sublist_count(two));
  for (const auto& f : testing::formulas_up_to(4)) {
    std::vector<CutPair> cs = {{f, dual(f)}};
    CHECK(static_cast<long>(sublist_space(cs).size()) == oracle_sublist_count(cs));
  }
}

TEST_CASE("interp_with_cuts on the prologue") {
  Checked c = check_proof(testing::pi1());
  Relation r = interp_with_cuts(c);
  REQUIRE(r.size() == 2);
  Relation expect = {testing::nu(1), testing::nu(2)};
  std::sort(expect.begin(), expect.end());
  CHECK(r == expect);

  // pi2 as a term: singleton with a matched pair
  ProofPtr pi2 = p_cut(p_ex(p_ax(f_one()), 0, 1), p_ax(f_one()));
  Relation r2 = interp_with_cuts(check_proof(pi2));
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].cuts.size() == 1);
  REQUIRE(r2[0].cuts[0].has_value());
  CHECK(equal(r2[0].cuts[0]->first, pt_star()));
  CHECK(equal(r2[0].cuts[0]->second, pt_star()));
}

TEST_CASE("axiom interpretation is the diagonal") {
  Checked c = check_proof(p_ax(f_with(f_one(), f_one())));
  Relation r = interp_with_cuts(c);
  REQUIRE(r.size() == 2);
  for (const auto& v : r) CHECK(equal(v.ctx[0], v.ctx[1]));
}

TEST_CASE("denotational interpretation") {
  CtxRelation d = interp_denotational(check_proof(testing::pi1()));
  REQUIRE(d.size() == 1);
  CHECK(to_string(d[0][0]) == "*");
  CHECK(to_string(d[0][1]) == "*");
  CtxRelation ax = interp_denotational(check_proof(p_ax(f_one())));
  REQUIRE(ax.size() == 1);
}

TEST_CASE("execute_cuts_rel drops the mismatched prologue point") {
  Checked c = check_proof(testing::pi1());
  CtxRelation kept = execute_cuts_rel(interp_with_cuts(c));
  REQUIRE(kept.size() == 1);
  CHECK(to_string(kept[0][0]) == "*");
  CHECK(execute_cuts_rel({}).empty());
}

TEST_CASE("executing cuts relationally agrees with the denotational route") {
  CorpusOptions opts;
  opts.max_size = 5;
  for (const auto& p : enumerate_proofs(opts)) {
    Checked c = check_proof(p);
    CtxRelation lhs = execute_cuts_rel(interp_with_cuts(c));
    CtxRelation rhs = interp_denotational(c);
    REQUIRE(lhs.size() == rhs.size());
    for (size_t i = 0; i < lhs.size(); ++i) CHECK(cmp(lhs[i], rhs[i]) == 0);
  }
}

TEST_CASE("pointvec json round trip") {
  PointVec v = testing::nu(2);
  PointVec v2 = pointvec_from_json(json_pointvec(v));
  CHECK(cmp(v, v2) == 0);
  PointVec w;
  w.cuts = {std::nullopt};
  w.ctx = {pt_pair(pt_in1(pt_star()), pt_star())};
  CHECK(cmp(pointvec_from_json(json_pointvec(w)), w) == 0);
}
