#pragma once

#include <array>
#include <map>

#include "goimall/rewrite.hpp"

namespace goimall {

struct Token {
  int port;
  std::string addr;  // word over {l,r}; additive tags consume no letters
};
bool operator<(const Token& a, const Token& b);
bool operator==(const Token& a, const Token& b);
std::string to_string(const Token& t);

// Extensional partial injection on the token domain of the conclusion ports,
// with a distinguished ZERO.
struct MorphismValue {
  bool zero = false;
  std::vector<PointPtr> ports;  // signature: one point per conclusion port
  std::map<Token, Token> table;
};

// Throws std::invalid_argument on signature mismatch.
bool morphisms_equal(const MorphismValue& a, const MorphismValue& b);
std::string to_string(const MorphismValue& v);

// A generator graph over reflexive-object ports: Sym / Ret (k: U -> U^2) /
// Coret (j: U^2 -> U) / Id occurrences wired together, with one open port per
// conclusion constituent and sigma entries pairing the cut ports.
struct Box {
  struct Node {
    char kind;  // 's' symmetry, 'r' ret, 'c' coret, 'i' id
    bool assoc = false;
    int fold_port = -1;
    std::array<int, 2> in{-1, -1}, out{-1, -1};
  };
  struct Consumer {
    int node = -2, slot = 0, port = -1;
  };
  struct PortInfo {
    PointPtr pt;
    int entry = -1, exit = -1;
    bool is_cut = false;
    int mate = -1;
    bool matched = false;
    int slot = -1;  // stack slot for cut ports
  };
  std::vector<Node> nodes;
  std::vector<Consumer> wires;
  std::vector<PortInfo> ports;
  std::vector<int> ctx_ports;
  std::vector<std::array<int, 2>> cut_pairs;  // sigma, in stack-slot order
};

// sigma_x as data: one entry per Present pair, matched = (a equals a').
struct SigmaEntry {
  int slot;
  PointPtr a, b;
  bool matched;
};
std::vector<SigmaEntry> sigma_spec(const Box& m);

Box build_box(const Checked& p, const PointVec& x);

using EpsilonAssignment = std::vector<uint8_t>;  // per node, 1 = annihilate

// Dead-wire fixpoint: assoc-rets with a forward-dead output and assoc-corets
// with a backward-dead input are annihilated; repeats until stable. rounds
// (when requested) counts the iterations that annihilated something, so a
// value above 1 means the cascade went beyond a single assignment pass.
EpsilonAssignment zero_action(const Box& m, int* rounds = nullptr);

enum class TokOutcome { Out, Absorbed, Divergent };
struct TokResult {
  TokOutcome outcome;
  Token tok;
};

struct DivergentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TokResult eval_token(const Box& m, const EpsilonAssignment& eps, const Token& t, long budget);

long default_budget(const Box& m);
long env_budget();  // GOIMALL_BUDGET override, -1 if unset

// Ex(sigma_x, x): tabulates every conclusion token; ZERO iff all absorbed.
// Throws DivergentError past the budget.
MorphismValue execute_point(const Checked& p, const PointVec& x, long budget = -1);
std::map<Atom, MorphismValue> execute_family(const Checked& p, const IndexedFamily& fam,
                                             long budget = -1, int jobs = 1);
// Comparison target on cut-free proofs (empty sigma).
MorphismValue denotation_morphism(const Checked& p, const PointVec& x, long budget = -1);

// Traces the two principal (last-context) ports of two independent boxes
// against each other; with mismatched points this must converge to ZERO.
MorphismValue execute_cut_pair(const Checked& p1, const PointVec& x1, const Checked& p2,
                               const PointVec& x2, long budget = -1);

struct Report {
  bool pass = true;
  std::vector<std::string> lines;
};

// Runs normalize_lifted and checks: per-step Ex invariance at surviving
// indices, ZERO at dropped ones, the cut-free end against denotations, and the
// relational cross-check. Failures are reported, never thrown.
Report verify_main_theorem(const ProofPtr& p, const IndexedFamily& fam, long budget = -1,
                           int jobs = 1);

// Same checks against a precomputed chain; lets one proof's chain serve many
// families.
Report verify_with_chain(const LiftChain& chain, const IndexedFamily& fam, long budget = -1,
                         int jobs = 1);

std::string to_dot(const Box& m, const EpsilonAssignment& eps);

}  // namespace goimall
