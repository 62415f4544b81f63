#pragma once

#include "goimall/indexed.hpp"

namespace goimall {

enum class RK { AxCut, OneBot, TensorPar, WithPlus1, WithPlus2, CommuteWith, CommuteOther };

struct Redex {
  Path path;
  RK kind;
  std::string detail;  // CommuteOther: the core rule commuted past
};

std::string kind_string(const Redex& r);

// All cut nodes, classified, leftmost-innermost first.
std::vector<Redex> find_redexes(const Checked& p);

// One Gentzen step at the redex. Conclusion context is preserved exactly;
// only the stack changes. Throws CheckError on pattern mismatch.
ProofPtr reduce_step(const ProofPtr& p, const Redex& r);

struct LiftStep {
  ProofPtr before, after;
  IndexedFamily fam_before, fam_after;
  Redex redex;
  IndexSet dropped;
};

// Index-diminishing lifting of one step; fam must be a member family of
// interp_with_cuts(p). The after family is checked for membership.
LiftStep lift_step(const ProofPtr& p, const IndexedFamily& fam, const Redex& r);

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Leftmost-innermost normalization. budget < 0 means 10 * size(p)^2 steps.
std::vector<std::pair<Redex, ProofPtr>> normalize(const ProofPtr& p, long budget = -1);
std::vector<LiftStep> normalize_lifted(const ProofPtr& p, const IndexedFamily& fam, long budget = -1);

// The reduction chain of a proof with its per-step data precomputed once; the
// chain is family-independent, so many families can be lifted along it.
class LiftChain {
 public:
  explicit LiftChain(ProofPtr p, long budget = -1);
  LiftChain(LiftChain&&) noexcept;
  LiftChain& operator=(LiftChain&&) noexcept;
  ~LiftChain();

  size_t steps() const;
  const ProofPtr& proof(size_t i) const;      // i in 0..steps()
  const Redex& redex(size_t k) const;         // k in 0..steps()-1
  const Checked& checked(size_t i) const;
  const Relation& relation(size_t i) const;   // interp_with_cuts of proof(i)

  // lifts one member point through step k; nullopt = the index is dropped
  std::optional<PointVec> lift(size_t k, const PointVec& x) const;

  // cached relational data of the initial proof
  const CtxRelation& denotation0() const;
  const CtxRelation& executed0() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl;
};

}  // namespace goimall
