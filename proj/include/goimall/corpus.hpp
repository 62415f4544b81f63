#pragma once

#include "goimall/rel.hpp"
#include "goimall/indexed.hpp"

namespace goimall {

// The constant signature used for exhaustive enumeration: axiom and injected
// formulas from `pool`, TopI contexts up to top_ctx_max formulas, Exch never
// directly above another Exch.
struct CorpusOptions {
  int max_size = 7;
  std::vector<FormulaPtr> pool;  // default {1, bot}
  bool unit_rules = true;
  int top_ctx_max = 1;
  bool allow_exch_chain = false;
  int max_exch = 1;  // exchange occurrences per proof; one reaches every redex kind
};

// All checked MALL^[c] proofs of size <= max_size over the signature.
std::vector<ProofPtr> enumerate_proofs(const CorpusOptions& opts);

// Up to max_count member families over the atoms (all of them when the space
// is small), deterministic in the seed. Includes the empty family.
std::vector<IndexedFamily> sample_families(const Relation& rel, const std::vector<Atom>& atoms,
                                           int max_count, uint64_t seed);

}  // namespace goimall
