#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "goimall/rel.hpp"

namespace goimall {

using Atom = std::string;
using IndexSet = std::set<Atom>;

std::string to_string(const IndexSet& s);
IndexSet iset_union(const IndexSet& a, const IndexSet& b);
IndexSet iset_inter(const IndexSet& a, const IndexSet& b);
IndexSet iset_diff(const IndexSet& a, const IndexSet& b);
bool iset_subset(const IndexSet& a, const IndexSet& b);
bool iset_disjoint(const IndexSet& a, const IndexSet& b);

struct IFormula;
using IFormulaPtr = std::shared_ptr<const IFormula>;

// MALL(I) formula: every node carries its domain d <= I.
// Invariants: d(0)=d(top)=empty; tensor/par children share the parent domain;
// plus/with children have disjoint domains whose union is the parent domain.
struct IFormula {
  Conn k;
  IndexSet d;
  IFormulaPtr a, b;
};

IFormulaPtr if_unit(Conn k, IndexSet d);
IFormulaPtr if_bin(Conn k, IFormulaPtr a, IFormulaPtr b);  // derives + validates the domain

bool iwf(const IFormulaPtr& f);  // grammar side conditions
int cmp(const IFormulaPtr& x, const IFormulaPtr& y);
bool equal(const IFormulaPtr& x, const IFormulaPtr& y);

FormulaPtr strip(const IFormulaPtr& f);
IFormulaPtr indexed_dual(const IFormulaPtr& f);          // domains kept pointwise
IFormulaPtr all_empty(const FormulaPtr& f);              // F with every domain empty
IFormulaPtr restrict_formula(const IFormulaPtr& f, const IndexSet& k);

// Pointwise domain union of two skeleton-equal formulas with disjoint domains.
// Throws CheckError on skeleton mismatch.
IFormulaPtr merge_formula(const IFormulaPtr& x, const IFormulaPtr& y);

std::string to_string(const IFormulaPtr& f);

struct IProof;
using IProofPtr = std::shared_ptr<const IProof>;

// ProofTerm-shaped tree with index payloads per the MALL^[c](I) rules.
struct IProof {
  Rule r;
  IFormulaPtr f;                           // Ax: axiom formula; Plus1/2: injected formula (domain empty)
  IndexSet J;                              // OneI: axiom domain
  std::vector<IFormulaPtr> top_ctx;        // TopI context (domains all empty)
  IProofPtr p, q;
  std::vector<std::pair<int, int>> sigma;
  int e1 = 0, e2 = 0;
};

IProofPtr ip_ax(IFormulaPtr f);
IProofPtr ip_one(IndexSet j);
IProofPtr ip_top(std::vector<IFormulaPtr> ctx);
IProofPtr ip_bot(IProofPtr p);
IProofPtr ip_tensor(IProofPtr p, IProofPtr q);
IProofPtr ip_par(IProofPtr p);
IProofPtr ip_cut(IProofPtr p, IProofPtr q);
IProofPtr ip_with(IProofPtr p, IProofPtr q, std::vector<std::pair<int, int>> sigma);
IProofPtr ip_plus1(IProofPtr p, IFormulaPtr g);
IProofPtr ip_plus2(IProofPtr p, IFormulaPtr f);
IProofPtr ip_ex(IProofPtr p, int i, int j);

struct ICutPair {
  IFormulaPtr left, right;  // underlying duals sharing one domain
};

struct ISequent {
  IndexSet J;
  std::vector<ICutPair> cuts;
  std::vector<IFormulaPtr> ctx;
};

std::string to_string(const ISequent& s);

struct IChecked {
  IProofPtr node;
  ISequent seq;
  std::vector<IChecked> kids;
};

// Validates all MALL^[c](I) domain side conditions.
IChecked check_indexed_proof(const IProofPtr& p);

ProofPtr strip(const IProofPtr& p);  // restriction to the empty domain, as a plain term
IProofPtr restrict_proof(const IProofPtr& p, const IndexSet& k);

// J-indexed family of points of one sequent shape.
struct IndexedFamily {
  IndexSet J;
  std::map<Atom, PointVec> v;
};

std::string json_family(const IndexedFamily& f);
IndexedFamily family_from_json(const std::string& text);

// <A>_a for a family a : J -> |A|. Throws CheckError when F in {0, top} and J nonempty.
IFormulaPtr translate_formula_family(const FormulaPtr& f, const std::map<Atom, PointPtr>& fam);

// Inverse direction: the unique point of <A> selected by index j.
PointPtr read_point(const IFormulaPtr& f, const Atom& j);

// <<Delta>>_delta: one same-domain dual pair per cut pair; empty pairs kept with domain empty.
std::vector<ICutPair> translate_cut_family(const std::vector<CutPair>& cuts,
                                           const std::map<Atom, std::vector<CutSlot>>& fam);

// Full sequent translation of a member family.
ISequent translate_sequent(const Sequent& seq, const IndexedFamily& fam);

struct MembershipError : std::runtime_error {
  Atom index;
  MembershipError(Atom j, const std::string& msg)
      : std::runtime_error("index " + j + ": " + msg), index(std::move(j)) {}
};

// Fundamental lemma, direction (i) -> (ii): builds the MALL^[c](I) proof of the
// translated sequent whose empty restriction is p.
IProofPtr fl_forward(const Checked& p, const IndexedFamily& fam);

// Direction (ii) -> (i): reconstructs the member family and the plain proof.
std::pair<IndexedFamily, ProofPtr> fl_backward(const IChecked& rho);

}  // namespace goimall
