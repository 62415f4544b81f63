#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "goimall/formula.hpp"

namespace goimall {

enum class Rule { Ax, OneI, TopI, BotI, TensorI, ParI, CutI, WithI, Plus1I, Plus2I, Exch };

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

// Sequent-calculus proof tree. Principal formulas are the last formulas of
// the premise contexts; occurrence bookkeeping is explicit via Exch nodes.
struct Proof {
  Rule r;
  FormulaPtr f;                             // Ax: axiom formula; Plus1/Plus2: injected side formula
  std::vector<FormulaPtr> top_ctx;          // TopI context (top itself not included)
  ProofPtr p, q;                            // premises
  std::vector<std::pair<int, int>> sigma;   // WithI superposition spec
  int e1 = 0, e2 = 0;                       // Exch positions (0-based)
};

ProofPtr p_ax(FormulaPtr f);
ProofPtr p_one();
ProofPtr p_top(std::vector<FormulaPtr> ctx);
ProofPtr p_bot(ProofPtr p);
ProofPtr p_tensor(ProofPtr p, ProofPtr q);
ProofPtr p_par(ProofPtr p);
ProofPtr p_cut(ProofPtr p, ProofPtr q);
ProofPtr p_with(ProofPtr p, ProofPtr q, std::vector<std::pair<int, int>> sigma);
ProofPtr p_plus1(ProofPtr p, FormulaPtr g);
ProofPtr p_plus2(ProofPtr p, FormulaPtr f);
ProofPtr p_ex(ProofPtr p, int i, int j);

int proof_size(const ProofPtr& p);
std::string rule_name(Rule r);

std::string to_string(const ProofPtr& p);
ProofPtr parse_proof(const std::string& text);

using Path = std::vector<int>;
std::string path_string(const Path& path);

struct CutPair {
  FormulaPtr left, right;  // right = dual(left)
};

struct Sequent {
  std::vector<CutPair> cuts;
  std::vector<FormulaPtr> ctx;
};

std::string to_string(const Sequent& s);

struct CheckError : std::runtime_error {
  Path path;
  CheckError(Path pth, const std::string& msg)
      : std::runtime_error("at " + path_string(pth) + ": " + msg), path(std::move(pth)) {}
};

// Slot bookkeeping for a WithI node: where each premise stack entry lands in
// the conclusion stack [Delta1, Delta2, Sigma].
struct WithLayout {
  std::vector<int> slot_of_p;  // premise-1 stack index -> conclusion slot
  std::vector<int> slot_of_q;  // premise-2 stack index -> conclusion slot
  int d1 = 0, d2 = 0, s = 0;   // sizes of Delta1, Delta2, Sigma
};

// Shared by the plain and indexed checkers; validates sigma index usage.
WithLayout make_with_layout(size_t n1, size_t n2, const std::vector<std::pair<int, int>>& sigma,
                            const Path& path);

struct Checked {
  ProofPtr node;
  Sequent seq;
  std::vector<Checked> kids;
  std::optional<WithLayout> with_layout;

  const Checked& at(const Path& path) const;
};

// Validates every MALL^[c] rule and returns the conclusion-annotated tree.
Checked check_proof(const ProofPtr& p);

}  // namespace goimall
