#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "goimall/proof.hpp"

namespace goimall {

enum class PK { Star, Pair, In1, In2 };

struct Point;
using PointPtr = std::shared_ptr<const Point>;

// x ::= * | (x,x) | (1,x) | (2,x) — a rooted tree.
struct Point {
  PK k;
  PointPtr a, b;
};

PointPtr pt_star();
PointPtr pt_pair(PointPtr a, PointPtr b);
PointPtr pt_in1(PointPtr a);
PointPtr pt_in2(PointPtr a);

int cmp(const PointPtr& x, const PointPtr& y);
bool equal(const PointPtr& x, const PointPtr& y);

std::string to_string(const PointPtr& x);
PointPtr parse_point(const std::string& s);

// Leaf addresses of the Pair structure, words over {l,r}; additive tags are
// transparent (U_(1,a) = U_(2,a) = U_a).
std::vector<std::string> addresses(const PointPtr& x);

// One Present/Absent slot per cut pair.
using CutSlot = std::optional<std::pair<PointPtr, PointPtr>>;

struct PointVec {
  std::vector<CutSlot> cuts;
  std::vector<PointPtr> ctx;
};

int cmp(const PointVec& x, const PointVec& y);
bool operator<(const PointVec& x, const PointVec& y);
bool operator==(const PointVec& x, const PointVec& y);

using Relation = std::vector<PointVec>;          // sorted, deduplicated
using CtxRelation = std::vector<std::vector<PointPtr>>;  // sorted, deduplicated

int cmp(const std::vector<PointPtr>& x, const std::vector<PointPtr>& y);

// |F|: the finite set of points of a formula.
std::vector<PointPtr> interp_formula(const FormulaPtr& f);

// |Delta~| as explicit per-pair assignments; cardinality Prod(1 + |Ci||Ci_perp|).
std::vector<std::vector<CutSlot>> sublist_space(const std::vector<CutPair>& cuts);

// Interpretation with unexecuted cuts, |p|ated <= |Delta~| x |Gamma|.
Relation interp_with_cuts(const Checked& p);

// Standard Rel semantics: cuts performed by relational composition.
// Implemented independently of interp_with_cuts (the two are cross-checked).
CtxRelation interp_denotational(const Checked& p);

// Keeps the PointVecs whose Present slots all match, then drops the cut slots.
CtxRelation execute_cuts_rel(const Relation& r);

std::string to_string(const PointVec& v);
std::string json_point(const PointPtr& x);
std::string json_pointvec(const PointVec& v);
std::string json_relation(const Relation& r);
std::string json_ctx_relation(const CtxRelation& r);

PointVec pointvec_from_json(const std::string& j);

}  // namespace goimall
