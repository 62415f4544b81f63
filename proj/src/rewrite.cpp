#include "goimall/rewrite.hpp"

#include <algorithm>
#include <cassert>

namespace goimall {

namespace {

constexpr int kCut = -1;  // marks the consumed occurrence when tracking positions

// Exch-transparent view of a cut premise.
struct View {
  const Checked* core;
  std::vector<int> perm;  // core ctx position -> premise(top) ctx position
};

View make_view(const Checked& premise) {
  std::vector<const Checked*> chain;
  const Checked* cur = &premise;
  while (cur->node->r == Rule::Exch) {
    chain.push_back(cur);
    cur = &cur->kids[0];
  }
  std::vector<int> perm(cur->seq.ctx.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    int a = (*it)->node->e1, b = (*it)->node->e2;
    for (auto& x : perm) {
      if (x == a) x = b;
      else if (x == b) x = a;
    }
  }
  return {cur, std::move(perm)};
}

bool rule_principal(const Checked& core, int pos) {
  int last = static_cast<int>(core.seq.ctx.size()) - 1;
  switch (core.node->r) {
    case Rule::Ax:
    case Rule::OneI: return true;
    case Rule::CutI: return false;
    case Rule::Exch: throw std::logic_error("exch core");
    default: return pos == last;
  }
}

struct CutInfo {
  View vl, vr;
  int posL, posR;  // cut formula position inside each core ctx
};

CutInfo analyze(const Checked& c) {
  CutInfo ci{make_view(c.kids[0]), make_view(c.kids[1]), -1, -1};
  int lastL = static_cast<int>(c.kids[0].seq.ctx.size()) - 1;
  int lastR = static_cast<int>(c.kids[1].seq.ctx.size()) - 1;
  for (size_t j = 0; j < ci.vl.perm.size(); ++j)
    if (ci.vl.perm[j] == lastL) ci.posL = static_cast<int>(j);
  for (size_t j = 0; j < ci.vr.perm.size(); ++j)
    if (ci.vr.perm[j] == lastR) ci.posR = static_cast<int>(j);
  return ci;
}

Redex classify_cut(const Checked& c, const Path& path) {
  CutInfo ci = analyze(c);
  Rule rl = ci.vl.core->node->r, rr = ci.vr.core->node->r;
  if (rl == Rule::Ax || rr == Rule::Ax) return {path, RK::AxCut, ""};
  bool pl = rule_principal(*ci.vl.core, ci.posL);
  bool pr = rule_principal(*ci.vr.core, ci.posR);
  if (!pl || !pr) {
    Rule side = !pl ? rl : rr;
    if (side == Rule::WithI) return {path, RK::CommuteWith, ""};
    return {path, RK::CommuteOther, rule_name(side)};
  }
  auto pair = [&](Rule a, Rule b) { return (rl == a && rr == b) || (rl == b && rr == a); };
  if (pair(Rule::OneI, Rule::BotI)) return {path, RK::OneBot, ""};
  if (pair(Rule::TensorI, Rule::ParI)) return {path, RK::TensorPar, ""};
  if (pair(Rule::WithI, Rule::Plus1I)) return {path, RK::WithPlus1, ""};
  if (pair(Rule::WithI, Rule::Plus2I)) return {path, RK::WithPlus2, ""};
  throw CheckError(path, "unclassifiable cut");
}

void collect(const Checked& c, Path& path, std::vector<Redex>& out) {
  for (size_t k = 0; k < c.kids.size(); ++k) {
    path.push_back(static_cast<int>(k));
    collect(c.kids[k], path, out);
    path.pop_back();
  }
  if (c.node->r == Rule::CutI) out.push_back(classify_cut(c, path));
}

enum class Op { Copy, PairA, PairB, Untag };
struct SlotSrc {
  int old;
  Op op;
};

struct LocalRewrite {
  ProofPtr term;
  int new_slots = 0;
  std::vector<std::vector<int>> old_to_new;
  std::vector<bool> changed;
  RK kind = RK::AxCut;
  bool act_left = false;  // which premise holds the acting core
  int plus_idx = 0;
  int pair_old = 0;
  std::vector<SlotSrc> slots;                    // surgery map (all kinds but CommuteWith)
  std::vector<int> cw_map1, cw_map2;             // CommuteWith: old slot -> new slot per branch
  int cw_pair_new1 = -1, cw_pair_new2 = -1;
  int with_ctx_pos = -1;                         // CommuteWith: redex-ctx position of the & formula
};

// Term under construction with occurrence ids (redex ctx positions, kCut for
// the consumed occurrence, other negatives for intermediate principals) and
// stack slot provenance.
struct TI {
  ProofPtr t;
  std::vector<int> ids;
  std::vector<SlotSrc> slots;
};

TI swap_pos(TI x, int a, int b) {
  if (a == b) return x;
  x.t = p_ex(x.t, std::min(a, b), std::max(a, b));
  std::swap(x.ids[static_cast<size_t>(a)], x.ids[static_cast<size_t>(b)]);
  return x;
}

int find_id(const TI& x, int id) {
  for (size_t i = 0; i < x.ids.size(); ++i)
    if (x.ids[i] == id) return static_cast<int>(i);
  throw std::logic_error("occurrence id not found");
}

TI to_last(TI x, int id) {
  int i = find_id(x, id);
  int last = static_cast<int>(x.ids.size()) - 1;
  return swap_pos(std::move(x), i, last);
}

TI mk_cut(TI l, TI r, SlotSrc pair_src) {
  TI out;
  out.t = p_cut(l.t, r.t);
  out.ids.assign(l.ids.begin(), l.ids.end() - 1);
  out.ids.insert(out.ids.end(), r.ids.begin(), r.ids.end() - 1);
  out.slots = l.slots;
  out.slots.insert(out.slots.end(), r.slots.begin(), r.slots.end());
  out.slots.push_back(pair_src);
  return out;
}

TI mk_tensor(TI l, TI r, int new_id) {
  TI out;
  out.t = p_tensor(l.t, r.t);
  out.ids.assign(l.ids.begin(), l.ids.end() - 1);
  out.ids.insert(out.ids.end(), r.ids.begin(), r.ids.end() - 1);
  out.ids.push_back(new_id);
  out.slots = l.slots;
  out.slots.insert(out.slots.end(), r.slots.begin(), r.slots.end());
  return out;
}

ProofPtr permute_to_identity(TI x) {
  int n = static_cast<int>(x.ids.size());
  for (int d = 0; d < n; ++d) {
    int j = find_id(x, d);
    if (j != d) x = swap_pos(std::move(x), d, j);
  }
  return x.t;
}

struct Sides {
  const Checked* cut;
  CutInfo ci;
  int gl;  // |ctx(L)| (incl. the cut formula)
  int nL;  // |stack(L)|
  int nR;
  int pair_old;

  int id_left(int core_pos) const {
    int top = ci.vl.perm[static_cast<size_t>(core_pos)];
    return top == gl - 1 ? kCut : top;
  }
  int id_right(int core_pos) const {
    int top = ci.vr.perm[static_cast<size_t>(core_pos)];
    int lastR = static_cast<int>(cut->kids[1].seq.ctx.size()) - 1;
    return top == lastR ? kCut : (gl - 1) + top;
  }
  int id_core(bool left, int core_pos) const { return left ? id_left(core_pos) : id_right(core_pos); }

  // whole premise as a TI
  TI whole(int side) const {
    const Checked& prem = cut->kids[static_cast<size_t>(side)];
    TI x;
    x.t = prem.node;
    int n = static_cast<int>(prem.seq.ctx.size());
    for (int i = 0; i < n - 1; ++i) x.ids.push_back(side == 0 ? i : (gl - 1) + i);
    x.ids.push_back(kCut);
    int ofs = side == 0 ? 0 : nL;
    int sz = static_cast<int>(prem.seq.cuts.size());
    for (int i = 0; i < sz; ++i) x.slots.push_back({ofs + i, Op::Copy});
    return x;
  }

  // a core's premise as a TI: ids from the positions its ctx occupies inside
  // the core's conclusion, given by pos_of (premise pos -> core pos), with the
  // final `temps` entries labelled by temp ids.
  TI sub(bool left, const Checked& kid, int slot_ofs, const std::vector<int>& core_pos,
         const std::vector<int>& temps) const {
    TI x;
    x.t = kid.node;
    for (int cp : core_pos) x.ids.push_back(id_core(left, cp));
    for (int t : temps) x.ids.push_back(t);
    int sz = static_cast<int>(kid.seq.cuts.size());
    for (int i = 0; i < sz; ++i) x.slots.push_back({slot_ofs + i, Op::Copy});
    return x;
  }
};

Sides make_sides(const Checked& c, CutInfo ci) {
  Sides s{&c, std::move(ci), 0, 0, 0, 0};
  s.gl = static_cast<int>(c.kids[0].seq.ctx.size());
  s.nL = static_cast<int>(c.kids[0].seq.cuts.size());
  s.nR = static_cast<int>(c.kids[1].seq.cuts.size());
  s.pair_old = s.nL + s.nR;
  return s;
}

std::vector<int> iota(int from, int count) {
  std::vector<int> v;
  for (int i = 0; i < count; ++i) v.push_back(from + i);
  return v;
}

void finish(LocalRewrite& lw, TI x, int old_slots) {
  lw.slots = x.slots;
  lw.term = permute_to_identity(std::move(x));
  lw.new_slots = static_cast<int>(lw.slots.size());
  lw.old_to_new.assign(static_cast<size_t>(old_slots), {});
  lw.changed.assign(static_cast<size_t>(old_slots), false);
  for (size_t k = 0; k < lw.slots.size(); ++k) {
    lw.old_to_new[static_cast<size_t>(lw.slots[k].old)].push_back(static_cast<int>(k));
    if (lw.slots[k].op != Op::Copy) lw.changed[static_cast<size_t>(lw.slots[k].old)] = true;
  }
}

LocalRewrite local_rewrite(const Checked& c, const Redex& r) {
  if (c.node->r != Rule::CutI) throw CheckError(r.path, "pattern mismatch: not a cut");
  Redex expect = classify_cut(c, r.path);
  if (expect.kind != r.kind || expect.detail != r.detail)
    throw CheckError(r.path, "pattern mismatch: redex is " + kind_string(expect));
  CutInfo ci0 = analyze(c);
  Sides S = make_sides(c, std::move(ci0));
  const CutInfo& ci = S.ci;
  int old_slots = S.pair_old + 1;
  LocalRewrite lw;
  lw.kind = r.kind;
  lw.pair_old = S.pair_old;
  Rule rl = ci.vl.core->node->r, rr = ci.vr.core->node->r;

  switch (r.kind) {
    case RK::AxCut: {
      if (rr == Rule::Ax) {
        // reduct = the whole left premise; the axiom's surviving occurrence
        // stands for the left principal, at the same position.
        lw.act_left = false;
        TI x = S.whole(0);
        x.ids.back() = S.id_right(1 - ci.posR);
        finish(lw, std::move(x), old_slots);
      } else {
        lw.act_left = true;
        TI x = S.whole(1);
        x.ids.back() = S.id_left(1 - ci.posL);
        finish(lw, std::move(x), old_slots);
      }
      break;
    }
    case RK::OneBot: {
      bool bot_left = rl == Rule::BotI;
      lw.act_left = bot_left;
      const View& v = bot_left ? ci.vl : ci.vr;
      const Checked& prem = v.core->kids[0];
      int g = static_cast<int>(prem.seq.ctx.size());
      TI x = S.sub(bot_left, prem, bot_left ? 0 : S.nL, iota(0, g), {});
      finish(lw, std::move(x), old_slots);
      break;
    }
    case RK::TensorPar: {
      bool tens_left = rl == Rule::TensorI;
      lw.act_left = tens_left;
      const View& vt = tens_left ? ci.vl : ci.vr;
      const View& vp = tens_left ? ci.vr : ci.vl;
      const Checked& p1 = vt.core->kids[0];
      const Checked& p2 = vt.core->kids[1];
      const Checked& q = vp.core->kids[0];
      int g1 = static_cast<int>(p1.seq.ctx.size()) - 1;
      int g2 = static_cast<int>(p2.seq.ctx.size()) - 1;
      int gq = static_cast<int>(q.seq.ctx.size()) - 2;
      int n1 = static_cast<int>(p1.seq.cuts.size());
      int tens_ofs = tens_left ? 0 : S.nL;
      int par_ofs = tens_left ? S.nL : 0;
      TI t1 = S.sub(tens_left, p1, tens_ofs, iota(0, g1), {-2});
      TI t2 = S.sub(tens_left, p2, tens_ofs + n1, iota(g1, g2), {-3});
      TI tq = S.sub(!tens_left, q, par_ofs, iota(0, gq), {-4, -5});
      if (tens_left) {
        // cut(p1, cut(p2, q)): q ends with (A1^perp, A2^perp)
        TI inner = mk_cut(std::move(t2), std::move(tq), {S.pair_old, Op::PairB});
        TI outer = mk_cut(std::move(t1), to_last(std::move(inner), -4), {S.pair_old, Op::PairA});
        finish(lw, std::move(outer), old_slots);
      } else {
        // par on the left: q ends with (B1, B2); cut B1 against p1, then B2 against p2
        TI s1 = mk_cut(to_last(std::move(tq), -4), std::move(t1), {S.pair_old, Op::PairA});
        TI s2 = mk_cut(to_last(std::move(s1), -5), std::move(t2), {S.pair_old, Op::PairB});
        finish(lw, std::move(s2), old_slots);
      }
      break;
    }
    case RK::WithPlus1:
    case RK::WithPlus2: {
      int i = r.kind == RK::WithPlus1 ? 1 : 2;
      lw.plus_idx = i;
      bool with_left = rl == Rule::WithI;
      lw.act_left = with_left;
      const View& vw = with_left ? ci.vl : ci.vr;
      const View& vq = with_left ? ci.vr : ci.vl;
      const Checked& w = *vw.core;
      const Checked& wi = w.kids[static_cast<size_t>(i - 1)];
      const Checked& q = vq.core->kids[0];
      const WithLayout& lay = *w.with_layout;
      int with_ofs = with_left ? 0 : S.nL;
      int q_ofs = with_left ? S.nL : 0;
      int gw = static_cast<int>(wi.seq.ctx.size()) - 1;
      int gq = static_cast<int>(q.seq.ctx.size()) - 1;
      TI twi;
      twi.t = wi.node;
      for (int j = 0; j < gw; ++j) twi.ids.push_back(S.id_core(with_left, j));
      twi.ids.push_back(-2);
      const auto& map = i == 1 ? lay.slot_of_p : lay.slot_of_q;
      for (size_t l = 0; l < map.size(); ++l) twi.slots.push_back({with_ofs + map[l], Op::Copy});
      TI tq = S.sub(!with_left, q, q_ofs, iota(0, gq), {-3});
      TI red = with_left ? mk_cut(std::move(twi), std::move(tq), {S.pair_old, Op::Untag})
                         : mk_cut(std::move(tq), std::move(twi), {S.pair_old, Op::Untag});
      finish(lw, std::move(red), old_slots);
      break;
    }
    case RK::CommuteWith: {
      bool with_left = rl == Rule::WithI && !rule_principal(*ci.vl.core, ci.posL);
      lw.act_left = with_left;
      const View& vw = with_left ? ci.vl : ci.vr;
      const Checked& w = *vw.core;
      const Checked& w1 = w.kids[0];
      const Checked& w2 = w.kids[1];
      const WithLayout& lay = *w.with_layout;
      int c_pos = with_left ? ci.posL : ci.posR;
      int with_ofs = with_left ? 0 : S.nL;
      int other_ofs = with_left ? S.nL : 0;
      int n_other = with_left ? S.nR : S.nL;
      int nw1 = static_cast<int>(w1.seq.cuts.size());
      int nw2 = static_cast<int>(w2.seq.cuts.size());
      int gw = static_cast<int>(w1.seq.ctx.size()) - 1;  // shared context size
      // the & formula keeps its redex position
      int with_core_last = static_cast<int>(w.seq.ctx.size()) - 1;
      lw.with_ctx_pos = S.id_core(with_left, with_core_last);

      auto build_premise = [&](int b) -> TI {
        const Checked& wb = b == 1 ? w1 : w2;
        TI twb;
        twb.t = wb.node;
        for (int j = 0; j < gw; ++j) twb.ids.push_back(S.id_core(with_left, j));
        twb.ids.push_back(-2);  // B_b
        // move the cut formula to the last position
        TI moved = to_last(std::move(twb), kCut);
        if (with_left) {
          TI rt = S.whole(1);
          TI cutb = mk_cut(std::move(moved), std::move(rt), {S.pair_old, Op::Copy});
          return to_last(std::move(cutb), -2);
        }
        TI lt = S.whole(0);
        TI cutb = mk_cut(std::move(lt), std::move(moved), {S.pair_old, Op::Copy});
        return to_last(std::move(cutb), -2);
      };
      TI P1 = build_premise(1);
      TI P2 = build_premise(2);
      // sigma'': superpose the duplicated other-side stack and the old Sigma
      std::vector<std::pair<int, int>> sigma2;
      int sz1, sz2;
      if (with_left) {
        // premise stack = [Theta_wb, Theta_other, pair]
        for (const auto& [l, rr2] : w.node->sigma) sigma2.emplace_back(l, rr2);
        for (int u = 0; u < n_other; ++u) sigma2.emplace_back(nw1 + u, nw2 + u);
        sz1 = nw1 + n_other + 1;
        sz2 = nw2 + n_other + 1;
      } else {
        // premise stack = [Theta_other, Theta_wb, pair]
        for (int u = 0; u < n_other; ++u) sigma2.emplace_back(u, u);
        for (const auto& [l, rr2] : w.node->sigma) sigma2.emplace_back(n_other + l, n_other + rr2);
        sz1 = n_other + nw1 + 1;
        sz2 = n_other + nw2 + 1;
      }
      WithLayout lay2 = make_with_layout(static_cast<size_t>(sz1), static_cast<size_t>(sz2), sigma2,
                                         r.path);
      // maps: old redex slot -> new slot, per branch
      lw.cw_map1.assign(static_cast<size_t>(old_slots), -1);
      lw.cw_map2.assign(static_cast<size_t>(old_slots), -1);
      auto premise_pos = [&](int b, int kind, int idx) {
        // kind 0: other-side stack entry idx; kind 1: w_b stack entry idx; kind 2: pair
        int nb = b == 1 ? nw1 : nw2;
        if (with_left) return kind == 1 ? idx : (kind == 0 ? nb + idx : nb + n_other);
        return kind == 0 ? idx : (kind == 1 ? n_other + idx : n_other + nb);
      };
      for (int u = 0; u < n_other; ++u) {
        lw.cw_map1[static_cast<size_t>(other_ofs + u)] =
            lay2.slot_of_p[static_cast<size_t>(premise_pos(1, 0, u))];
        lw.cw_map2[static_cast<size_t>(other_ofs + u)] =
            lay2.slot_of_q[static_cast<size_t>(premise_pos(2, 0, u))];
      }
      for (int l = 0; l < nw1; ++l)
        lw.cw_map1[static_cast<size_t>(with_ofs + lay.slot_of_p[static_cast<size_t>(l)])] =
            lay2.slot_of_p[static_cast<size_t>(premise_pos(1, 1, l))];
      for (int l = 0; l < nw2; ++l)
        lw.cw_map2[static_cast<size_t>(with_ofs + lay.slot_of_q[static_cast<size_t>(l)])] =
            lay2.slot_of_q[static_cast<size_t>(premise_pos(2, 1, l))];
      lw.cw_pair_new1 = lay2.slot_of_p[static_cast<size_t>(premise_pos(1, 2, 0))];
      lw.cw_pair_new2 = lay2.slot_of_q[static_cast<size_t>(premise_pos(2, 2, 0))];

      TI withTI;
      withTI.t = p_with(P1.t, P2.t, sigma2);
      withTI.ids.assign(P1.ids.begin(), P1.ids.end() - 1);
      withTI.ids.push_back(lw.with_ctx_pos);
      lw.term = permute_to_identity(std::move(withTI));
      lw.new_slots = lay2.d1 + lay2.d2 + lay2.s;
      lw.old_to_new.assign(static_cast<size_t>(old_slots), {});
      lw.changed.assign(static_cast<size_t>(old_slots), false);
      for (int o = 0; o < old_slots; ++o) {
        int a = lw.cw_map1[static_cast<size_t>(o)], b = lw.cw_map2[static_cast<size_t>(o)];
        if (a >= 0) lw.old_to_new[static_cast<size_t>(o)].push_back(a);
        if (b >= 0 && b != a) lw.old_to_new[static_cast<size_t>(o)].push_back(b);
      }
      lw.old_to_new[static_cast<size_t>(S.pair_old)] = {lw.cw_pair_new1, lw.cw_pair_new2};
      return lw;
    }
    case RK::CommuteOther: {
      bool left = !rule_principal(*ci.vl.core, ci.posL) && ci.vl.core->node->r != Rule::Ax;
      // classification guarantees: if the left side is the non-principal one it acts,
      // otherwise the right side does
      Rule core_rule = left ? rl : rr;
      if (rule_name(core_rule) != r.detail) throw CheckError(r.path, "pattern mismatch");
      lw.act_left = left;
      const View& v = left ? ci.vl : ci.vr;
      const Checked& core = *v.core;
      int c_pos = left ? ci.posL : ci.posR;
      int ofs = left ? 0 : S.nL;
      int other_ofs = left ? S.nL : 0;
      auto cut_with_other = [&](TI moved, SlotSrc ps) {
        if (left) return mk_cut(std::move(moved), S.whole(1), ps);
        return mk_cut(S.whole(0), std::move(moved), ps);
      };
      switch (core_rule) {
        case Rule::BotI: {
          const Checked& prem = core.kids[0];
          int g = static_cast<int>(prem.seq.ctx.size());
          std::vector<int> ids;
          for (int j = 0; j < g; ++j) ids.push_back(j == c_pos ? kCut : S.id_core(left, j));
          TI x;
          x.t = prem.node;
          x.ids = ids;
          for (int i = 0; i < static_cast<int>(prem.seq.cuts.size()); ++i)
            x.slots.push_back({ofs + i, Op::Copy});
          TI inner = cut_with_other(to_last(std::move(x), kCut), {S.pair_old, Op::Copy});
          inner.t = p_bot(inner.t);
          inner.ids.push_back(S.id_core(left, g));
          finish(lw, std::move(inner), old_slots);
          break;
        }
        case Rule::ParI: {
          const Checked& prem = core.kids[0];
          int g = static_cast<int>(prem.seq.ctx.size()) - 2;
          std::vector<int> core_pos;
          for (int j = 0; j < g; ++j) core_pos.push_back(j);
          TI x = S.sub(left, prem, ofs, core_pos, {-2, -3});
          for (int j = 0; j < g; ++j)
            if (j == c_pos) x.ids[static_cast<size_t>(j)] = kCut;
          TI inner = cut_with_other(to_last(std::move(x), kCut), {S.pair_old, Op::Copy});
          inner = to_last(std::move(inner), -3);
          int i2 = find_id(inner, -2);
          int want = static_cast<int>(inner.ids.size()) - 2;
          inner = swap_pos(std::move(inner), i2, want);
          inner.t = p_par(inner.t);
          inner.ids.pop_back();
          inner.ids.back() = S.id_core(left, g);
          finish(lw, std::move(inner), old_slots);
          break;
        }
        case Rule::Plus1I:
        case Rule::Plus2I: {
          const Checked& prem = core.kids[0];
          int g = static_cast<int>(prem.seq.ctx.size()) - 1;
          TI x = S.sub(left, prem, ofs, iota(0, g), {-2});
          for (int j = 0; j < g; ++j)
            if (j == c_pos) x.ids[static_cast<size_t>(j)] = kCut;
          TI inner = cut_with_other(to_last(std::move(x), kCut), {S.pair_old, Op::Copy});
          inner = to_last(std::move(inner), -2);
          inner.t = core_rule == Rule::Plus1I ? p_plus1(inner.t, core.node->f)
                                              : p_plus2(inner.t, core.node->f);
          inner.ids.back() = S.id_core(left, g);
          finish(lw, std::move(inner), old_slots);
          break;
        }
        case Rule::TensorI:
        case Rule::CutI: {
          const Checked& k1 = core.kids[0];
          const Checked& k2 = core.kids[1];
          int g1 = static_cast<int>(k1.seq.ctx.size()) - 1;
          int g2 = static_cast<int>(k2.seq.ctx.size()) - 1;
          int m1 = static_cast<int>(k1.seq.cuts.size());
          int m2 = static_cast<int>(k2.seq.cuts.size());
          bool in_first = c_pos < g1;
          TI x1 = S.sub(left, k1, ofs, iota(0, g1), {-2});
          TI x2 = S.sub(left, k2, ofs + m1, iota(g1, g2), {-3});
          SlotSrc core_pair{ofs + m1 + m2, Op::Copy};  // only used for a cut core
          TI result;
          if (in_first) {
            x1.ids[static_cast<size_t>(c_pos)] = kCut;
            TI inner = cut_with_other(to_last(std::move(x1), kCut), {S.pair_old, Op::Copy});
            inner = to_last(std::move(inner), -2);
            result = core_rule == Rule::TensorI
                         ? mk_tensor(std::move(inner), std::move(x2), S.id_core(left, g1 + g2))
                         : mk_cut(std::move(inner), std::move(x2), core_pair);
          } else {
            x2.ids[static_cast<size_t>(c_pos - g1)] = kCut;
            TI inner = cut_with_other(to_last(std::move(x2), kCut), {S.pair_old, Op::Copy});
            inner = to_last(std::move(inner), -3);
            result = core_rule == Rule::TensorI
                         ? mk_tensor(std::move(x1), std::move(inner), S.id_core(left, g1 + g2))
                         : mk_cut(std::move(x1), std::move(inner), core_pair);
          }
          finish(lw, std::move(result), old_slots);
          break;
        }
        case Rule::TopI: {
          int n = static_cast<int>(c.seq.ctx.size());
          int core_last = static_cast<int>(core.seq.ctx.size()) - 1;
          int top_id = S.id_core(left, core_last);
          std::vector<FormulaPtr> ctx;
          std::vector<int> ids;
          for (int i = 0; i < n; ++i)
            if (i != top_id) {
              ctx.push_back(c.seq.ctx[static_cast<size_t>(i)]);
              ids.push_back(i);
            }
          TI x;
          x.t = p_top(std::move(ctx));
          x.ids = std::move(ids);
          x.ids.push_back(top_id);
          finish(lw, std::move(x), old_slots);
          break;
        }
        default: throw CheckError(r.path, "pattern mismatch");
      }
      break;
    }
  }
  return lw;
}

struct RebuildOut {
  ProofPtr term;
  int new_size = 0;
  std::vector<std::vector<int>> old_to_new;
  std::vector<bool> changed;
};

RebuildOut rebuild(const Checked& n, const Redex& r, size_t d, LocalRewrite* lw) {
  if (d == r.path.size()) {
    *lw = local_rewrite(n, r);
    return {lw->term, lw->new_slots, lw->old_to_new, lw->changed};
  }
  int k = r.path[d];
  if (k < 0 || static_cast<size_t>(k) >= n.kids.size()) throw CheckError(r.path, "bad redex path");
  RebuildOut sub = rebuild(n.kids[static_cast<size_t>(k)], r, d + 1, lw);
  const ProofPtr& node = n.node;
  switch (node->r) {
    case Rule::BotI: return {p_bot(sub.term), sub.new_size, sub.old_to_new, sub.changed};
    case Rule::ParI: return {p_par(sub.term), sub.new_size, sub.old_to_new, sub.changed};
    case Rule::Plus1I: return {p_plus1(sub.term, node->f), sub.new_size, sub.old_to_new, sub.changed};
    case Rule::Plus2I: return {p_plus2(sub.term, node->f), sub.new_size, sub.old_to_new, sub.changed};
    case Rule::Exch: return {p_ex(sub.term, node->e1, node->e2), sub.new_size, sub.old_to_new, sub.changed};
    case Rule::TensorI:
    case Rule::CutI: {
      int n1 = static_cast<int>(n.kids[0].seq.cuts.size());
      int n2 = static_cast<int>(n.kids[1].seq.cuts.size());
      bool is_cut = node->r == Rule::CutI;
      RebuildOut out;
      out.term = k == 0
                     ? (is_cut ? p_cut(sub.term, node->q) : p_tensor(sub.term, node->q))
                     : (is_cut ? p_cut(node->p, sub.term) : p_tensor(node->p, sub.term));
      int n1p = k == 0 ? sub.new_size : n1;
      int n2p = k == 1 ? sub.new_size : n2;
      out.new_size = n1p + n2p + (is_cut ? 1 : 0);
      int old_total = n1 + n2 + (is_cut ? 1 : 0);
      out.old_to_new.assign(static_cast<size_t>(old_total), {});
      out.changed.assign(static_cast<size_t>(old_total), false);
      for (int i = 0; i < n1; ++i) {
        if (k == 0) {
          out.old_to_new[static_cast<size_t>(i)] = sub.old_to_new[static_cast<size_t>(i)];
          out.changed[static_cast<size_t>(i)] = sub.changed[static_cast<size_t>(i)];
        } else {
          out.old_to_new[static_cast<size_t>(i)] = {i};
        }
      }
      for (int j = 0; j < n2; ++j) {
        if (k == 1) {
          for (int img : sub.old_to_new[static_cast<size_t>(j)])
            out.old_to_new[static_cast<size_t>(n1 + j)].push_back(n1p + img);
          out.changed[static_cast<size_t>(n1 + j)] = sub.changed[static_cast<size_t>(j)];
        } else {
          out.old_to_new[static_cast<size_t>(n1 + j)] = {n1p + j};
        }
      }
      if (is_cut) out.old_to_new[static_cast<size_t>(n1 + n2)] = {n1p + n2p};
      return out;
    }
    case Rule::WithI: {
      const WithLayout& lay = *n.with_layout;
      int n1 = static_cast<int>(n.kids[0].seq.cuts.size());
      int n2 = static_cast<int>(n.kids[1].seq.cuts.size());
      // remap sigma through the rewritten premise
      std::vector<std::pair<int, int>> sigma2;
      for (const auto& [l, rr] : node->sigma) {
        if (k == 0) {
          const auto& img = sub.old_to_new[static_cast<size_t>(l)];
          if (img.size() == 1 && !sub.changed[static_cast<size_t>(l)])
            sigma2.emplace_back(img[0], rr);
        } else {
          const auto& img = sub.old_to_new[static_cast<size_t>(rr)];
          if (img.size() == 1 && !sub.changed[static_cast<size_t>(rr)])
            sigma2.emplace_back(l, img[0]);
        }
      }
      ProofPtr term = k == 0 ? p_with(sub.term, node->q, sigma2) : p_with(node->p, sub.term, sigma2);
      int n1p = k == 0 ? sub.new_size : n1;
      int n2p = k == 1 ? sub.new_size : n2;
      Path none;
      WithLayout lay2 = make_with_layout(static_cast<size_t>(n1p), static_cast<size_t>(n2p), sigma2, none);
      RebuildOut out;
      out.term = term;
      out.new_size = lay2.d1 + lay2.d2 + lay2.s;
      int old_total = lay.d1 + lay.d2 + lay.s;
      out.old_to_new.assign(static_cast<size_t>(old_total), {});
      out.changed.assign(static_cast<size_t>(old_total), false);
      auto add = [&](int old_slot, int img, bool chg) {
        auto& v = out.old_to_new[static_cast<size_t>(old_slot)];
        if (std::find(v.begin(), v.end(), img) == v.end()) v.push_back(img);
        if (chg) out.changed[static_cast<size_t>(old_slot)] = true;
      };
      for (int i = 0; i < n1; ++i) {
        int old_slot = lay.slot_of_p[static_cast<size_t>(i)];
        if (k == 0) {
          for (int img : sub.old_to_new[static_cast<size_t>(i)])
            add(old_slot, lay2.slot_of_p[static_cast<size_t>(img)],
                sub.changed[static_cast<size_t>(i)]);
        } else {
          add(old_slot, lay2.slot_of_p[static_cast<size_t>(i)], false);
        }
      }
      for (int j = 0; j < n2; ++j) {
        int old_slot = lay.slot_of_q[static_cast<size_t>(j)];
        if (k == 1) {
          for (int img : sub.old_to_new[static_cast<size_t>(j)])
            add(old_slot, lay2.slot_of_q[static_cast<size_t>(img)],
                sub.changed[static_cast<size_t>(j)]);
        } else {
          add(old_slot, lay2.slot_of_q[static_cast<size_t>(j)], false);
        }
      }
      return out;
    }
    default: throw CheckError(r.path, "bad redex path");
  }
}

// --- point surgery and lifting ---

CutSlot transform_slot(const CutSlot& s, Op op) {
  if (!s) return std::nullopt;
  switch (op) {
    case Op::Copy: return s;
    case Op::PairA:
    case Op::PairB: {
      const PointPtr& l = s->first;
      const PointPtr& r = s->second;
      if (l->k != PK::Pair || r->k != PK::Pair) throw std::logic_error("pair slot expected");
      return op == Op::PairA ? CutSlot(std::make_pair(l->a, r->a))
                             : CutSlot(std::make_pair(l->b, r->b));
    }
    case Op::Untag: {
      const PointPtr& l = s->first;
      const PointPtr& r = s->second;
      if ((l->k != PK::In1 && l->k != PK::In2) || (r->k != PK::In1 && r->k != PK::In2))
        throw std::logic_error("tagged slot expected");
      return CutSlot(std::make_pair(l->a, r->a));
    }
  }
  throw std::logic_error("bad op");
}

std::optional<PointVec> surgery(const PointVec& x, const LocalRewrite& lw) {
  if (lw.kind == RK::AxCut) {
    const CutSlot& s = x.cuts[static_cast<size_t>(lw.pair_old)];
    if (s && !equal(s->first, s->second)) return std::nullopt;
  }
  if (lw.kind == RK::WithPlus1 || lw.kind == RK::WithPlus2) {
    const CutSlot& s = x.cuts[static_cast<size_t>(lw.pair_old)];
    if (!s) throw std::logic_error("redex pair must be present");
    const PointPtr& with_side = lw.act_left ? s->first : s->second;
    int tag = with_side->k == PK::In1 ? 1 : 2;
    if (tag != lw.plus_idx) return std::nullopt;
  }
  if (lw.kind == RK::CommuteWith) {
    const PointPtr& wpt = x.ctx[static_cast<size_t>(lw.with_ctx_pos)];
    bool b1 = wpt->k == PK::In1;
    const auto& map = b1 ? lw.cw_map1 : lw.cw_map2;
    PointVec out;
    out.cuts.assign(static_cast<size_t>(lw.new_slots), std::nullopt);
    for (size_t o = 0; o < map.size(); ++o) {
      if (map[o] >= 0) out.cuts[static_cast<size_t>(map[o])] = x.cuts[o];
      else if (static_cast<int>(o) != lw.pair_old && x.cuts[o])
        throw std::logic_error("erased branch slot must be absent");
    }
    out.cuts[static_cast<size_t>(b1 ? lw.cw_pair_new1 : lw.cw_pair_new2)] =
        x.cuts[static_cast<size_t>(lw.pair_old)];
    out.ctx = x.ctx;
    return out;
  }
  PointVec out;
  std::vector<bool> used(x.cuts.size(), false);
  for (const auto& src : lw.slots) {
    out.cuts.push_back(transform_slot(x.cuts[static_cast<size_t>(src.old)], src.op));
    used[static_cast<size_t>(src.old)] = true;
  }
  for (size_t o = 0; o < x.cuts.size(); ++o)
    if (!used[o] && static_cast<int>(o) != lw.pair_old && x.cuts[o])
      throw std::logic_error("dropped slot must be absent");
  out.ctx = x.ctx;
  return out;
}

std::optional<PointVec> lift_point(const Checked& on, const Checked& nn, const Path& path, size_t d,
                                   const PointVec& x, const LocalRewrite& lw) {
  if (d == path.size()) return surgery(x, lw);
  size_t k = static_cast<size_t>(path[d]);
  switch (on.node->r) {
    case Rule::BotI: {
      PointVec s = x;
      s.ctx.pop_back();
      auto r = lift_point(on.kids[0], nn.kids[0], path, d + 1, s, lw);
      if (!r) return std::nullopt;
      r->ctx.push_back(pt_star());
      return r;
    }
    case Rule::ParI: {
      PointVec s = x;
      PointPtr pr = s.ctx.back();
      s.ctx.pop_back();
      s.ctx.push_back(pr->a);
      s.ctx.push_back(pr->b);
      auto r = lift_point(on.kids[0], nn.kids[0], path, d + 1, s, lw);
      if (!r) return std::nullopt;
      PointPtr b = r->ctx.back();
      r->ctx.pop_back();
      PointPtr a = r->ctx.back();
      r->ctx.pop_back();
      r->ctx.push_back(pt_pair(a, b));
      return r;
    }
    case Rule::Plus1I:
    case Rule::Plus2I: {
      PointVec s = x;
      s.ctx.back() = s.ctx.back()->a;
      auto r = lift_point(on.kids[0], nn.kids[0], path, d + 1, s, lw);
      if (!r) return std::nullopt;
      r->ctx.back() = on.node->r == Rule::Plus1I ? pt_in1(r->ctx.back()) : pt_in2(r->ctx.back());
      return r;
    }
    case Rule::Exch: {
      PointVec s = x;
      std::swap(s.ctx[static_cast<size_t>(on.node->e1)], s.ctx[static_cast<size_t>(on.node->e2)]);
      auto r = lift_point(on.kids[0], nn.kids[0], path, d + 1, s, lw);
      if (!r) return std::nullopt;
      std::swap(r->ctx[static_cast<size_t>(on.node->e1)], r->ctx[static_cast<size_t>(on.node->e2)]);
      return r;
    }
    case Rule::TensorI:
    case Rule::CutI: {
      bool is_cut = on.node->r == Rule::CutI;
      size_t n1 = on.kids[0].seq.cuts.size();
      size_t g1 = on.kids[0].seq.ctx.size() - 1;
      PointVec s1, s2;
      s1.cuts.assign(x.cuts.begin(), x.cuts.begin() + static_cast<long>(n1));
      s1.ctx.assign(x.ctx.begin(), x.ctx.begin() + static_cast<long>(g1));
      if (is_cut) {
        s2.cuts.assign(x.cuts.begin() + static_cast<long>(n1), x.cuts.end() - 1);
        const CutSlot& pr = x.cuts.back();
        if (!pr) throw std::logic_error("cut pair must be present");
        s2.ctx.assign(x.ctx.begin() + static_cast<long>(g1), x.ctx.end());
        s1.ctx.push_back(pr->first);
        s2.ctx.push_back(pr->second);
      } else {
        s2.cuts.assign(x.cuts.begin() + static_cast<long>(n1), x.cuts.end());
        s2.ctx.assign(x.ctx.begin() + static_cast<long>(g1), x.ctx.end() - 1);
        s1.ctx.push_back(x.ctx.back()->a);
        s2.ctx.push_back(x.ctx.back()->b);
      }
      auto r = lift_point(on.kids[k], nn.kids[k], path, d + 1, k == 0 ? s1 : s2, lw);
      if (!r) return std::nullopt;
      const PointVec& a = k == 0 ? *r : s1;
      const PointVec& b = k == 0 ? s2 : *r;
      PointVec out;
      out.cuts = a.cuts;
      out.cuts.insert(out.cuts.end(), b.cuts.begin(), b.cuts.end());
      out.ctx.assign(a.ctx.begin(), a.ctx.end() - 1);
      out.ctx.insert(out.ctx.end(), b.ctx.begin(), b.ctx.end() - 1);
      if (is_cut) out.cuts.emplace_back(std::make_pair(a.ctx.back(), b.ctx.back()));
      else out.ctx.push_back(pt_pair(a.ctx.back(), b.ctx.back()));
      return out;
    }
    case Rule::WithI: {
      const WithLayout& olay = *on.with_layout;
      const WithLayout& nlay = *nn.with_layout;
      PK tag = x.ctx.back()->k;
      size_t b = tag == PK::In1 ? 0 : 1;
      const auto& omap = b == 0 ? olay.slot_of_p : olay.slot_of_q;
      PointVec s;
      for (size_t i = 0; i < omap.size(); ++i)
        s.cuts.push_back(x.cuts[static_cast<size_t>(omap[i])]);
      s.ctx.assign(x.ctx.begin(), x.ctx.end() - 1);
      s.ctx.push_back(x.ctx.back()->a);
      PointVec sub;
      if (b == k) {
        auto r = lift_point(on.kids[k], nn.kids[k], path, d + 1, s, lw);
        if (!r) return std::nullopt;
        sub = std::move(*r);
      } else {
        sub = std::move(s);
      }
      const auto& nmap = b == 0 ? nlay.slot_of_p : nlay.slot_of_q;
      PointVec out;
      out.cuts.assign(static_cast<size_t>(nlay.d1 + nlay.d2 + nlay.s), std::nullopt);
      for (size_t i = 0; i < nmap.size(); ++i)
        out.cuts[static_cast<size_t>(nmap[i])] = sub.cuts[i];
      out.ctx.assign(sub.ctx.begin(), sub.ctx.end() - 1);
      out.ctx.push_back(b == 0 ? pt_in1(sub.ctx.back()) : pt_in2(sub.ctx.back()));
      return out;
    }
    default: throw std::logic_error("bad lift path");
  }
}

long default_budget(const ProofPtr& p) {
  long n = proof_size(p);
  return 10 * n * n;
}

}  // namespace

std::string kind_string(const Redex& r) {
  switch (r.kind) {
    case RK::AxCut: return "AxCut";
    case RK::OneBot: return "OneBot";
    case RK::TensorPar: return "TensorPar";
    case RK::WithPlus1: return "WithPlus(1)";
    case RK::WithPlus2: return "WithPlus(2)";
    case RK::CommuteWith: return "CommuteWith";
    case RK::CommuteOther: return "CommuteOther(" + r.detail + ")";
  }
  return "?";
}

std::vector<Redex> find_redexes(const Checked& p) {
  std::vector<Redex> out;
  Path path;
  collect(p, path, out);
  return out;
}

ProofPtr reduce_step(const ProofPtr& p, const Redex& r) {
  Checked c = check_proof(p);
  LocalRewrite lw;
  RebuildOut out = rebuild(c, r, 0, &lw);
  Checked c2 = check_proof(out.term);  // also validates the rewrite
  if (c2.seq.ctx.size() != c.seq.ctx.size())
    throw std::logic_error("reduction changed the context length");
  for (size_t i = 0; i < c.seq.ctx.size(); ++i)
    if (!equal(c2.seq.ctx[i], c.seq.ctx[i]))
      throw std::logic_error("reduction changed the conclusion context");
  return out.term;
}

LiftStep lift_step(const ProofPtr& p, const IndexedFamily& fam, const Redex& r) {
  Checked c = check_proof(p);
  Relation rel = interp_with_cuts(c);
  for (const auto& [j, v] : fam.v)
    if (!std::binary_search(rel.begin(), rel.end(), v))
      throw MembershipError(j, "not a member point of the proof");
  LocalRewrite lw;
  RebuildOut out = rebuild(c, r, 0, &lw);
  Checked c2 = check_proof(out.term);
  LiftStep step;
  step.before = p;
  step.after = out.term;
  step.fam_before = fam;
  step.redex = r;
  Relation rel2 = interp_with_cuts(c2);
  for (const auto& [j, v] : fam.v) {
    auto lifted = lift_point(c, c2, r.path, 0, v, lw);
    if (lifted) {
      if (!std::binary_search(rel2.begin(), rel2.end(), *lifted))
        throw MembershipError(j, "lifted point is not a member of the reduct");
      step.fam_after.J.insert(j);
      step.fam_after.v[j] = std::move(*lifted);
    } else {
      step.dropped.insert(j);
    }
  }
  return step;
}

std::vector<std::pair<Redex, ProofPtr>> normalize(const ProofPtr& p, long budget) {
  if (budget < 0) budget = default_budget(p);
  std::vector<std::pair<Redex, ProofPtr>> steps;
  ProofPtr cur = p;
  for (;;) {
    Checked c = check_proof(cur);
    std::vector<Redex> rs = find_redexes(c);
    if (rs.empty()) return steps;
    if (static_cast<long>(steps.size()) >= budget)
      throw BudgetError("normalization step budget exceeded");
    cur = reduce_step(cur, rs.front());
    steps.emplace_back(rs.front(), cur);
  }
}

struct LiftChain::Impl {
  std::vector<ProofPtr> proofs;
  std::vector<Checked> checkeds;
  std::vector<Redex> redexes;
  std::vector<LocalRewrite> rewrites;
  mutable std::vector<std::optional<Relation>> rels;
  mutable std::optional<CtxRelation> denot0, kept0;

  const Relation& rel(size_t i) const {
    if (!rels[i]) rels[i] = interp_with_cuts(checkeds[i]);
    return *rels[i];
  }
};

LiftChain::LiftChain(ProofPtr p, long budget) : impl(std::make_unique<Impl>()) {
  if (budget < 0) budget = default_budget(p);
  impl->proofs.push_back(p);
  impl->checkeds.push_back(check_proof(p));
  for (;;) {
    std::vector<Redex> rs = find_redexes(impl->checkeds.back());
    if (rs.empty()) break;
    if (static_cast<long>(impl->redexes.size()) >= budget)
      throw BudgetError("normalization step budget exceeded");
    LocalRewrite lw;
    RebuildOut out = rebuild(impl->checkeds.back(), rs.front(), 0, &lw);
    impl->redexes.push_back(rs.front());
    impl->rewrites.push_back(std::move(lw));
    impl->proofs.push_back(out.term);
    impl->checkeds.push_back(check_proof(out.term));
  }
  impl->rels.assign(impl->proofs.size(), std::nullopt);
}

LiftChain::LiftChain(LiftChain&&) noexcept = default;
LiftChain& LiftChain::operator=(LiftChain&&) noexcept = default;
LiftChain::~LiftChain() = default;

size_t LiftChain::steps() const { return impl->redexes.size(); }
const ProofPtr& LiftChain::proof(size_t i) const { return impl->proofs.at(i); }
const Redex& LiftChain::redex(size_t k) const { return impl->redexes.at(k); }
const Checked& LiftChain::checked(size_t i) const { return impl->checkeds.at(i); }
const Relation& LiftChain::relation(size_t i) const { return impl->rel(i); }

std::optional<PointVec> LiftChain::lift(size_t k, const PointVec& x) const {
  return lift_point(impl->checkeds.at(k), impl->checkeds.at(k + 1), impl->redexes.at(k).path, 0, x,
                    impl->rewrites.at(k));
}

const CtxRelation& LiftChain::denotation0() const {
  if (!impl->denot0) impl->denot0 = interp_denotational(impl->checkeds[0]);
  return *impl->denot0;
}

const CtxRelation& LiftChain::executed0() const {
  if (!impl->kept0) impl->kept0 = execute_cuts_rel(impl->rel(0));
  return *impl->kept0;
}

std::vector<LiftStep> normalize_lifted(const ProofPtr& p, const IndexedFamily& fam, long budget) {
  LiftChain chain(p, budget);
  for (const auto& [j, v] : fam.v)
    if (!std::binary_search(chain.relation(0).begin(), chain.relation(0).end(), v))
      throw MembershipError(j, "not a member point of the proof");
  std::vector<LiftStep> steps;
  IndexedFamily cur = fam;
  for (size_t k = 0; k < chain.steps(); ++k) {
    LiftStep s;
    s.before = chain.proof(k);
    s.after = chain.proof(k + 1);
    s.fam_before = cur;
    s.redex = chain.redex(k);
    for (const auto& [j, v] : cur.v) {
      auto lifted = chain.lift(k, v);
      if (lifted) {
        if (!std::binary_search(chain.relation(k + 1).begin(), chain.relation(k + 1).end(), *lifted))
          throw MembershipError(j, "lifted point is not a member of the reduct");
        s.fam_after.J.insert(j);
        s.fam_after.v[j] = std::move(*lifted);
      } else {
        s.dropped.insert(j);
      }
    }
    cur = s.fam_after;
    steps.push_back(std::move(s));
  }
  return steps;
}

}  // namespace goimall
