#pragma once

// Test-only constructions: the worked example proofs from the additive
// fragment, an eta-expansion oracle for generalized axioms, and small
// conveniences shared between suites.

#include "goimall/corpus.hpp"
#include "goimall/goi.hpp"

namespace goimall::testing {

// pi1 = cut(with(ax,ax), plus1(ax)): |- [(1&1, bot+bot)] bot, 1
inline ProofPtr pi1() {
  ProofPtr ax1 = p_ax(f_one());
  ProofPtr prem = p_ex(ax1, 0, 1);  // |- bot, 1
  ProofPtr left = p_with(prem, prem, {});
  ProofPtr right = p_plus1(ax1, f_bot());
  return p_cut(left, right);
}

inline PointVec nu(int tag) {
  PointPtr tagged = tag == 1 ? pt_in1(pt_star()) : pt_in2(pt_star());
  PointVec v;
  v.cuts = {std::make_pair(tagged, pt_in1(pt_star()))};
  v.ctx = {pt_star(), pt_star()};
  return v;
}

inline IndexedFamily prologue_family() {
  IndexedFamily f;
  f.J = {"1", "2"};
  f.v["1"] = nu(1);
  f.v["2"] = nu(2);
  return f;
}

// the Example (exzio) proof: a tensor between pi1 and an axiom
inline ProofPtr exzio_proof() { return p_tensor(pi1(), p_ax(f_one())); }

inline PointVec exzio_point() {
  PointVec v = nu(2);
  v.ctx = {pt_star(), pt_star(), pt_pair(pt_star(), pt_star())};
  return v;
}

// cut-free identity proof of |- A, A^perp built from unit axioms only
inline ProofPtr eta_expand(const FormulaPtr& a) {
  switch (a->k) {
    case Conn::One:
    case Conn::Bot:
    case Conn::Zero:
    case Conn::Top: return p_ax(a);
    case Conn::Tensor: {
      ProofPtr p = p_ex(eta_expand(a->a), 0, 1);  // |- B^perp, B
      ProofPtr q = p_ex(eta_expand(a->b), 0, 1);  // |- C^perp, C
      ProofPtr t = p_tensor(p, q);                // |- B^perp, C^perp, B*C
      t = p_ex(t, 0, 2);                          // |- B*C, C^perp, B^perp
      t = p_ex(t, 1, 2);                          // |- B*C, B^perp, C^perp
      return p_par(t);
    }
    case Conn::Plus: {
      ProofPtr p1 = p_ex(p_plus1(p_ex(eta_expand(a->a), 0, 1), a->b), 0, 1);
      ProofPtr p2 = p_ex(p_plus2(p_ex(eta_expand(a->b), 0, 1), a->a), 0, 1);
      return p_with(p1, p2, {});
    }
    case Conn::Par:
    case Conn::With: return p_ex(eta_expand(dual(a)), 0, 1);
  }
  throw std::logic_error("bad connective");
}

inline bool equal_proof(const ProofPtr& a, const ProofPtr& b) {
  return to_string(a) == to_string(b);
}

// all formulas over {1,bot} with at most `size` connective/unit nodes
inline std::vector<FormulaPtr> formulas_up_to(int size) {
  std::vector<std::vector<FormulaPtr>> by(static_cast<size_t>(size) + 1);
  if (size >= 1) by[1] = {f_one(), f_bot()};
  for (int n = 2; n <= size; ++n)
    for (int n1 = 1; n1 <= n - 2; ++n1)
      for (const auto& x : by[static_cast<size_t>(n1)])
        for (const auto& y : by[static_cast<size_t>(n - 1 - n1)]) {
          by[static_cast<size_t>(n)].push_back(f_tensor(x, y));
          by[static_cast<size_t>(n)].push_back(f_par(x, y));
          by[static_cast<size_t>(n)].push_back(f_plus(x, y));
          by[static_cast<size_t>(n)].push_back(f_with(x, y));
        }
  std::vector<FormulaPtr> out;
  for (const auto& row : by) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace goimall::testing
