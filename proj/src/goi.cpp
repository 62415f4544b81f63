#include "goimall/goi.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace goimall {

bool operator<(const Token& a, const Token& b) {
  if (a.port != b.port) return a.port < b.port;
  return a.addr < b.addr;
}
bool operator==(const Token& a, const Token& b) { return a.port == b.port && a.addr == b.addr; }

std::string to_string(const Token& t) {
  return "(" + std::to_string(t.port) + "," + (t.addr.empty() ? "e" : t.addr) + ")";
}

bool morphisms_equal(const MorphismValue& a, const MorphismValue& b) {
  if (a.ports.size() != b.ports.size()) throw std::invalid_argument("signature mismatch");
  for (size_t i = 0; i < a.ports.size(); ++i)
    if (!equal(a.ports[i], b.ports[i])) throw std::invalid_argument("signature mismatch");
  if (a.zero || b.zero) return a.zero == b.zero;
  return a.table == b.table;
}

std::string to_string(const MorphismValue& v) {
  if (v.zero) return "ZERO";
  std::string out;
  for (const auto& [s, t] : v.table) out += to_string(s) + " -> " + to_string(t) + "\n";
  if (out.empty()) out = "(empty domain)\n";
  return out;
}

namespace {

struct SubPort {
  int entry = -1, exit = -1;
  PointPtr pt;
  int ret = -1, coret = -1;  // fold nodes directly on this port
};

struct SubBox {
  std::vector<std::optional<std::array<SubPort, 2>>> cut_ports;  // per stack slot
  std::vector<SubPort> ctx_ports;
};

struct Builder {
  Box box;

  int wire() {
    box.wires.push_back({});
    return static_cast<int>(box.wires.size()) - 1;
  }
  int node(char kind) {
    Box::Node n;
    n.kind = kind;
    box.nodes.push_back(n);
    return static_cast<int>(box.nodes.size()) - 1;
  }
  void feed(int w, int nd, int slot) {
    box.wires[static_cast<size_t>(w)] = {nd, slot, -1};
    box.nodes[static_cast<size_t>(nd)].in[static_cast<size_t>(slot)] = w;
  }

  SubPort id_port(PointPtr pt) {
    int n = node('i');
    SubPort p;
    p.entry = wire();
    feed(p.entry, n, 0);
    p.exit = wire();
    box.nodes[static_cast<size_t>(n)].out[0] = p.exit;
    p.pt = std::move(pt);
    return p;
  }

  // folds two ports into one via a (ret, coret) pair
  SubPort fold(const SubPort& a, const SubPort& b) {
    int k = node('r');
    int j = node('c');
    SubPort p;
    p.pt = pt_pair(a.pt, b.pt);
    p.ret = k;
    p.coret = j;
    p.entry = wire();
    feed(p.entry, k, 0);
    box.nodes[static_cast<size_t>(k)].out[0] = a.entry;
    box.nodes[static_cast<size_t>(k)].out[1] = b.entry;
    feed(a.exit, j, 0);
    feed(b.exit, j, 1);
    p.exit = wire();
    box.nodes[static_cast<size_t>(j)].out[0] = p.exit;
    return p;
  }

  SubBox build(const Checked& c, const PointVec& x);
};

SubBox Builder::build(const Checked& c, const PointVec& x) {
  SubBox out;
  auto bad = [&](const std::string& m) -> void {
    throw MembershipError("", "point is not a member: " + m);
  };
  switch (c.node->r) {
    case Rule::Ax: {
      if (!equal(x.ctx[0], x.ctx[1])) bad("axiom point must be diagonal");
      int s = node('s');
      SubPort p0, p1;
      p0.pt = x.ctx[0];
      p1.pt = x.ctx[1];
      p0.entry = wire();
      feed(p0.entry, s, 0);
      p1.entry = wire();
      feed(p1.entry, s, 1);
      p0.exit = wire();
      p1.exit = wire();
      box.nodes[static_cast<size_t>(s)].out[0] = p0.exit;
      box.nodes[static_cast<size_t>(s)].out[1] = p1.exit;
      out.ctx_ports = {p0, p1};
      break;
    }
    case Rule::OneI:
      out.ctx_ports = {id_port(pt_star())};
      break;
    case Rule::TopI:
      bad("top has no points");
      break;
    case Rule::BotI: {
      PointVec s = x;
      if (s.ctx.back()->k != PK::Star) bad("bot point must be *");
      s.ctx.pop_back();
      out = build(c.kids[0], s);
      out.ctx_ports.push_back(id_port(pt_star()));
      break;
    }
    case Rule::ParI: {
      if (x.ctx.back()->k != PK::Pair) bad("par point must be a pair");
      PointVec s = x;
      PointPtr pr = s.ctx.back();
      s.ctx.pop_back();
      s.ctx.push_back(pr->a);
      s.ctx.push_back(pr->b);
      out = build(c.kids[0], s);
      SubPort b = out.ctx_ports.back();
      out.ctx_ports.pop_back();
      SubPort a = out.ctx_ports.back();
      out.ctx_ports.pop_back();
      out.ctx_ports.push_back(fold(a, b));
      break;
    }
    case Rule::TensorI:
    case Rule::CutI: {
      bool is_cut = c.node->r == Rule::CutI;
      size_t n1 = c.kids[0].seq.cuts.size();
      size_t g1 = c.kids[0].seq.ctx.size() - 1;
      PointVec s1, s2;
      s1.cuts.assign(x.cuts.begin(), x.cuts.begin() + static_cast<long>(n1));
      s1.ctx.assign(x.ctx.begin(), x.ctx.begin() + static_cast<long>(g1));
      if (is_cut) {
        s2.cuts.assign(x.cuts.begin() + static_cast<long>(n1), x.cuts.end() - 1);
        const CutSlot& pr = x.cuts.back();
        if (!pr) bad("cut pair slot must be present");
        s2.ctx.assign(x.ctx.begin() + static_cast<long>(g1), x.ctx.end());
        s1.ctx.push_back(pr->first);
        s2.ctx.push_back(pr->second);
      } else {
        if (x.ctx.back()->k != PK::Pair) bad("tensor point must be a pair");
        s2.cuts.assign(x.cuts.begin() + static_cast<long>(n1), x.cuts.end());
        s2.ctx.assign(x.ctx.begin() + static_cast<long>(g1), x.ctx.end() - 1);
        s1.ctx.push_back(x.ctx.back()->a);
        s2.ctx.push_back(x.ctx.back()->b);
      }
      SubBox b1 = build(c.kids[0], s1);
      SubBox b2 = build(c.kids[1], s2);
      out.cut_ports = b1.cut_ports;
      out.cut_ports.insert(out.cut_ports.end(), b2.cut_ports.begin(), b2.cut_ports.end());
      out.ctx_ports.assign(b1.ctx_ports.begin(), b1.ctx_ports.end() - 1);
      out.ctx_ports.insert(out.ctx_ports.end(), b2.ctx_ports.begin(), b2.ctx_ports.end() - 1);
      if (is_cut) {
        out.cut_ports.push_back(std::array<SubPort, 2>{b1.ctx_ports.back(), b2.ctx_ports.back()});
      } else {
        out.ctx_ports.push_back(fold(b1.ctx_ports.back(), b2.ctx_ports.back()));
      }
      break;
    }
    case Rule::WithI: {
      const WithLayout& lay = *c.with_layout;
      PK tag = x.ctx.back()->k;
      if (tag != PK::In1 && tag != PK::In2) bad("with point must carry a tag");
      bool left = tag == PK::In1;
      const auto& map = left ? lay.slot_of_p : lay.slot_of_q;
      const auto& other = left ? lay.slot_of_q : lay.slot_of_p;
      PointVec s;
      for (size_t i = 0; i < map.size(); ++i) s.cuts.push_back(x.cuts[static_cast<size_t>(map[i])]);
      for (size_t i = 0; i < other.size(); ++i) {
        int slot = other[i];
        if (slot < lay.d1 + lay.d2 && x.cuts[static_cast<size_t>(slot)])
          bad("erased branch slot must be absent");
      }
      s.ctx.assign(x.ctx.begin(), x.ctx.end() - 1);
      s.ctx.push_back(x.ctx.back()->a);
      SubBox sb = build(c.kids[left ? 0 : 1], s);
      out.cut_ports.assign(static_cast<size_t>(lay.d1 + lay.d2 + lay.s), std::nullopt);
      for (size_t i = 0; i < map.size(); ++i)
        out.cut_ports[static_cast<size_t>(map[i])] = sb.cut_ports[i];
      out.ctx_ports = sb.ctx_ports;
      out.ctx_ports.back().pt = left ? pt_in1(out.ctx_ports.back().pt) : pt_in2(out.ctx_ports.back().pt);
      break;
    }
    case Rule::Plus1I:
    case Rule::Plus2I: {
      PK want = c.node->r == Rule::Plus1I ? PK::In1 : PK::In2;
      if (x.ctx.back()->k != want) bad("plus point has the wrong tag");
      PointVec s = x;
      s.ctx.back() = s.ctx.back()->a;
      out = build(c.kids[0], s);
      out.ctx_ports.back().pt =
          c.node->r == Rule::Plus1I ? pt_in1(out.ctx_ports.back().pt) : pt_in2(out.ctx_ports.back().pt);
      break;
    }
    case Rule::Exch: {
      PointVec s = x;
      std::swap(s.ctx[static_cast<size_t>(c.node->e1)], s.ctx[static_cast<size_t>(c.node->e2)]);
      out = build(c.kids[0], s);
      std::swap(out.ctx_ports[static_cast<size_t>(c.node->e1)],
                out.ctx_ports[static_cast<size_t>(c.node->e2)]);
      break;
    }
  }
  return out;
}

Box finalize(Builder&& bld, const SubBox& sb) {
  Box m = std::move(bld.box);
  auto add_port = [&](const SubPort& sp, bool is_cut, int slot) {
    Box::PortInfo pi;
    pi.pt = sp.pt;
    pi.entry = sp.entry;
    pi.exit = sp.exit;
    pi.is_cut = is_cut;
    pi.slot = slot;
    int id = static_cast<int>(m.ports.size());
    m.ports.push_back(pi);
    m.wires[static_cast<size_t>(sp.exit)] = {-2, 0, id};
    if (!is_cut) {
      m.ctx_ports.push_back(id);
      if (sp.ret >= 0) {
        m.nodes[static_cast<size_t>(sp.ret)].assoc = true;
        m.nodes[static_cast<size_t>(sp.ret)].fold_port = id;
      }
      if (sp.coret >= 0) {
        m.nodes[static_cast<size_t>(sp.coret)].assoc = true;
        m.nodes[static_cast<size_t>(sp.coret)].fold_port = id;
      }
    }
    return id;
  };
  for (size_t slot = 0; slot < sb.cut_ports.size(); ++slot) {
    if (!sb.cut_ports[slot]) continue;
    const auto& pr = *sb.cut_ports[slot];
    int a = add_port(pr[0], true, static_cast<int>(slot));
    int b = add_port(pr[1], true, static_cast<int>(slot));
    m.ports[static_cast<size_t>(a)].mate = b;
    m.ports[static_cast<size_t>(b)].mate = a;
    bool matched = equal(pr[0].pt, pr[1].pt);
    m.ports[static_cast<size_t>(a)].matched = matched;
    m.ports[static_cast<size_t>(b)].matched = matched;
    m.cut_pairs.push_back({a, b});
  }
  for (const auto& sp : sb.ctx_ports) add_port(sp, false, -1);
  return m;
}

}  // namespace

std::vector<SigmaEntry> sigma_spec(const Box& m) {
  std::vector<SigmaEntry> out;
  for (const auto& pr : m.cut_pairs) {
    const auto& a = m.ports[static_cast<size_t>(pr[0])];
    const auto& b = m.ports[static_cast<size_t>(pr[1])];
    out.push_back({a.slot, a.pt, b.pt, a.matched});
  }
  return out;
}

Box build_box(const Checked& p, const PointVec& x) {
  Builder bld;
  SubBox sb = bld.build(p, x);
  return finalize(std::move(bld), sb);
}

namespace {

// token-flow successors of a wire (addresses ignored; Ret offers both outputs)
std::vector<int> successors(const Box& m, const EpsilonAssignment& eps, int w) {
  const Box::Consumer& c = m.wires[static_cast<size_t>(w)];
  if (c.port >= 0) {
    const Box::PortInfo& pi = m.ports[static_cast<size_t>(c.port)];
    if (!pi.is_cut) return {};  // open output
    if (!pi.matched) return {};
    return {m.ports[static_cast<size_t>(pi.mate)].entry};
  }
  if (c.node < 0) return {};
  const Box::Node& n = m.nodes[static_cast<size_t>(c.node)];
  if ((n.kind == 'r' || n.kind == 'c') && eps[static_cast<size_t>(c.node)]) return {};
  switch (n.kind) {
    case 's': return {n.out[static_cast<size_t>(1 - c.slot)]};
    case 'i': return {n.out[0]};
    case 'r': return {n.out[0], n.out[1]};
    case 'c': return {n.out[0]};
  }
  return {};
}

bool is_open_out(const Box& m, int w) {
  const Box::Consumer& c = m.wires[static_cast<size_t>(w)];
  return c.port >= 0 && !m.ports[static_cast<size_t>(c.port)].is_cut;
}

}  // namespace

EpsilonAssignment zero_action(const Box& m, int* rounds) {
  EpsilonAssignment eps(m.nodes.size(), 0);
  if (rounds) *rounds = 0;
  size_t nw = m.wires.size();
  for (;;) {
    // forward-alive: some open output is reachable
    std::vector<uint8_t> fwd(nw, 0);
    bool moved = true;
    for (size_t w = 0; w < nw; ++w)
      if (is_open_out(m, static_cast<int>(w))) fwd[w] = 1;
    while (moved) {
      moved = false;
      for (size_t w = 0; w < nw; ++w) {
        if (fwd[w]) continue;
        for (int s : successors(m, eps, static_cast<int>(w)))
          if (fwd[static_cast<size_t>(s)]) {
            fwd[w] = 1;
            moved = true;
            break;
          }
      }
    }
    // backward-alive: reachable from some open input
    std::vector<uint8_t> bwd(nw, 0);
    std::vector<int> stack;
    for (int p : m.ctx_ports) {
      int e = m.ports[static_cast<size_t>(p)].entry;
      if (!bwd[static_cast<size_t>(e)]) {
        bwd[static_cast<size_t>(e)] = 1;
        stack.push_back(e);
      }
    }
    while (!stack.empty()) {
      int w = stack.back();
      stack.pop_back();
      for (int s : successors(m, eps, w))
        if (!bwd[static_cast<size_t>(s)]) {
          bwd[static_cast<size_t>(s)] = 1;
          stack.push_back(s);
        }
    }
    bool changed = false;
    for (size_t i = 0; i < m.nodes.size(); ++i) {
      const Box::Node& n = m.nodes[i];
      if (!n.assoc || eps[i]) continue;
      if (n.kind == 'r') {
        if (!fwd[static_cast<size_t>(n.out[0])] || !fwd[static_cast<size_t>(n.out[1])]) {
          eps[i] = 1;
          changed = true;
        }
      } else if (n.kind == 'c') {
        if (!bwd[static_cast<size_t>(n.in[0])] || !bwd[static_cast<size_t>(n.in[1])]) {
          eps[i] = 1;
          changed = true;
        }
      }
    }
    if (!changed) return eps;
    if (rounds) ++*rounds;
  }
}

namespace {
bool addr_ok(const PointPtr& pt, const std::string& addr, size_t i = 0) {
  switch (pt->k) {
    case PK::Star: return i == addr.size();
    case PK::In1:
    case PK::In2: return addr_ok(pt->a, addr, i);
    case PK::Pair:
      if (i >= addr.size()) return false;
      if (addr[i] == 'l') return addr_ok(pt->a, addr, i + 1);
      if (addr[i] == 'r') return addr_ok(pt->b, addr, i + 1);
      return false;
  }
  return false;
}
}  // namespace

TokResult eval_token(const Box& m, const EpsilonAssignment& eps, const Token& t, long budget) {
  if (t.port < 0 || static_cast<size_t>(t.port) >= m.ports.size() ||
      m.ports[static_cast<size_t>(t.port)].is_cut ||
      !addr_ok(m.ports[static_cast<size_t>(t.port)].pt, t.addr))
    throw std::invalid_argument("malformed token");
  int w = m.ports[static_cast<size_t>(t.port)].entry;
  std::string addr = t.addr;
  while (budget-- > 0) {
    const Box::Consumer& c = m.wires[static_cast<size_t>(w)];
    if (c.port >= 0) {
      const Box::PortInfo& pi = m.ports[static_cast<size_t>(c.port)];
      if (!pi.is_cut) return {TokOutcome::Out, {c.port, addr}};
      if (!pi.matched) return {TokOutcome::Absorbed, {}};
      w = m.ports[static_cast<size_t>(pi.mate)].entry;
      continue;
    }
    if (c.node < 0) throw std::logic_error("dangling wire");
    const Box::Node& n = m.nodes[static_cast<size_t>(c.node)];
    switch (n.kind) {
      case 's': w = n.out[static_cast<size_t>(1 - c.slot)]; break;
      case 'i': w = n.out[0]; break;
      case 'r':
        if (eps[static_cast<size_t>(c.node)]) return {TokOutcome::Absorbed, {}};
        if (addr.empty()) throw std::invalid_argument("malformed token");
        w = addr.front() == 'l' ? n.out[0] : n.out[1];
        addr.erase(addr.begin());
        break;
      case 'c':
        if (eps[static_cast<size_t>(c.node)]) return {TokOutcome::Absorbed, {}};
        addr.insert(addr.begin(), c.slot == 0 ? 'l' : 'r');
        w = n.out[0];
        break;
      default: throw std::logic_error("bad node");
    }
  }
  return {TokOutcome::Divergent, {}};
}

long default_budget(const Box& m) {
  long toks = 0;
  for (int p : m.ctx_ports)
    toks += static_cast<long>(addresses(m.ports[static_cast<size_t>(p)].pt).size());
  return 4 * (static_cast<long>(m.nodes.size()) + 1) * std::max(1L, toks);
}

long env_budget() {
  const char* s = std::getenv("GOIMALL_BUDGET");
  if (!s || !*s) return -1;
  return std::atol(s);
}

namespace {

MorphismValue tabulate(const Box& m, long budget) {
  EpsilonAssignment eps = zero_action(m);
  if (budget < 0) budget = env_budget();
  if (budget < 0) budget = default_budget(m);
  MorphismValue v;
  for (int p : m.ctx_ports) v.ports.push_back(m.ports[static_cast<size_t>(p)].pt);
  bool any = false;
  for (size_t i = 0; i < m.ctx_ports.size(); ++i) {
    int p = m.ctx_ports[i];
    for (const auto& addr : addresses(m.ports[static_cast<size_t>(p)].pt)) {
      TokResult r = eval_token(m, eps, {p, addr}, budget);
      if (r.outcome == TokOutcome::Divergent) throw DivergentError("token budget exceeded");
      if (r.outcome == TokOutcome::Out) {
        any = true;
        // report ports by conclusion position
        int outPos = -1;
        for (size_t q = 0; q < m.ctx_ports.size(); ++q)
          if (m.ctx_ports[q] == r.tok.port) outPos = static_cast<int>(q);
        v.table[{static_cast<int>(i), addr}] = {outPos, r.tok.addr};
      }
    }
  }
  v.zero = !any;
  return v;
}

}  // namespace

MorphismValue execute_point(const Checked& p, const PointVec& x, long budget) {
  Box m = build_box(p, x);
  return tabulate(m, budget);
}

std::map<Atom, MorphismValue> execute_family(const Checked& p, const IndexedFamily& fam, long budget,
                                             int jobs) {
  std::map<Atom, MorphismValue> out;
  std::vector<Atom> keys;
  for (const auto& [a, _] : fam.v) keys.push_back(a);
  std::vector<MorphismValue> res(keys.size());
  std::vector<std::string> errs(keys.size());
  auto work = [&](size_t from, size_t step) {
    for (size_t i = from; i < keys.size(); i += step) {
      try {
        res[i] = execute_point(p, fam.v.at(keys[i]), budget);
      } catch (const std::exception& e) {
        errs[i] = e.what();
      }
    }
  };
  int nthreads = std::max(1, jobs);
  if (nthreads == 1 || keys.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> ts;
    for (int t = 0; t < nthreads; ++t) ts.emplace_back(work, static_cast<size_t>(t), nthreads);
    for (auto& t : ts) t.join();
  }
  for (size_t i = 0; i < keys.size(); ++i) {
    if (!errs[i].empty()) throw DivergentError(errs[i]);
    out[keys[i]] = std::move(res[i]);
  }
  return out;
}

MorphismValue denotation_morphism(const Checked& p, const PointVec& x, long budget) {
  if (!p.seq.cuts.empty()) throw std::invalid_argument("denotation requires a cut-free proof");
  return execute_point(p, x, budget);
}

MorphismValue execute_cut_pair(const Checked& p1, const PointVec& x1, const Checked& p2,
                               const PointVec& x2, long budget) {
  Builder bld;
  SubBox b1 = bld.build(p1, x1);
  SubBox b2 = bld.build(p2, x2);
  SubBox joined;
  joined.cut_ports = b1.cut_ports;
  joined.cut_ports.insert(joined.cut_ports.end(), b2.cut_ports.begin(), b2.cut_ports.end());
  joined.cut_ports.push_back(std::array<SubPort, 2>{b1.ctx_ports.back(), b2.ctx_ports.back()});
  joined.ctx_ports.assign(b1.ctx_ports.begin(), b1.ctx_ports.end() - 1);
  joined.ctx_ports.insert(joined.ctx_ports.end(), b2.ctx_ports.begin(), b2.ctx_ports.end() - 1);
  Box m = finalize(std::move(bld), joined);
  return tabulate(m, budget);
}

Report verify_with_chain(const LiftChain& chain, const IndexedFamily& fam, long budget, int jobs) {
  Report rep;
  auto fail = [&](const std::string& m) {
    rep.pass = false;
    rep.lines.push_back("FAIL: " + m);
  };
  try {
    const Relation& rel = chain.relation(0);
    for (const auto& [j, v] : fam.v)
      if (!std::binary_search(rel.begin(), rel.end(), v)) {
        fail("index " + j + " is not a member point");
        return rep;
      }
    long cascades = 0;
    auto cascade_scan = [&](const Checked& cc, const IndexedFamily& f) {
      // the zero action is a fixpoint; record when it genuinely goes past a
      // single assignment pass (the equational reading is ambiguous there)
      for (const auto& [j, v] : f.v) {
        Box m = build_box(cc, v);
        int rounds = 0;
        zero_action(m, &rounds);
        if (rounds > 1) ++cascades;
      }
    };
    std::map<Atom, MorphismValue> ex0 = execute_family(chain.checked(0), fam, budget, jobs);
    std::map<Atom, MorphismValue> ex = ex0;
    cascade_scan(chain.checked(0), fam);
    IndexedFamily cur = fam;
    for (size_t k = 0; k < chain.steps(); ++k) {
      IndexedFamily nxt;
      IndexSet dropped;
      for (const auto& [j, v] : cur.v) {
        auto lifted = chain.lift(k, v);
        if (!lifted) {
          dropped.insert(j);
          continue;
        }
        const Relation& r2 = chain.relation(k + 1);
        if (!std::binary_search(r2.begin(), r2.end(), *lifted)) {
          fail("lifted point at index " + j + " is not a member of the reduct");
          return rep;
        }
        nxt.J.insert(j);
        nxt.v[j] = std::move(*lifted);
      }
      std::map<Atom, MorphismValue> exa = execute_family(chain.checked(k + 1), nxt, budget, jobs);
      cascade_scan(chain.checked(k + 1), nxt);
      std::ostringstream line;
      line << "step " << (k + 1) << ": " << kind_string(chain.redex(k)) << "@"
           << path_string(chain.redex(k).path) << "  J: " << to_string(cur.J) << " -> "
           << to_string(nxt.J) << "  dropped: " << to_string(dropped);
      bool ok = true;
      for (const auto& j : nxt.J)
        if (!morphisms_equal(ex.at(j), exa.at(j))) {
          ok = false;
          fail("step " + std::to_string(k + 1) + ": Ex changed at surviving index " + j);
        }
      for (const auto& j : dropped)
        if (!ex.at(j).zero) {
          ok = false;
          fail("step " + std::to_string(k + 1) + ": Ex at dropped index " + j + " is not ZERO");
        }
      line << (ok ? "  ok" : "  FAIL");
      rep.lines.push_back(line.str());
      ex = std::move(exa);
      cur = std::move(nxt);
    }
    const Checked& cf = chain.checked(chain.steps());
    if (!cf.seq.cuts.empty()) {
      fail("normalization did not empty the stack");
      return rep;
    }
    // (ii): at the cut-free end, Ex is the denotation, and the surviving set is
    // exactly the nonzero one.
    for (const auto& j : cur.J) {
      MorphismValue d = denotation_morphism(cf, cur.v.at(j), budget);
      if (!morphisms_equal(ex.at(j), d)) fail("final Ex differs from the denotation at index " + j);
      if (!morphisms_equal(ex0.at(j), d)) fail("initial Ex differs from the denotation at index " + j);
    }
    for (const auto& j : fam.J) {
      bool survived = cur.J.count(j) > 0;
      if (survived == ex0.at(j).zero)
        fail("survivor set mismatch at index " + j + " (initial Ex " +
             std::string(ex0.at(j).zero ? "ZERO" : "nonzero") + ")");
    }
    // relational cross-check
    const CtxRelation& lhs = chain.executed0();
    const CtxRelation& rhs = chain.denotation0();
    if (lhs.size() != rhs.size() ||
        !std::equal(lhs.begin(), lhs.end(), rhs.begin(),
                    [](const auto& a, const auto& b) { return cmp(a, b) == 0; }))
      fail("execute_cuts_rel differs from the denotational interpretation");
    for (const auto& j : fam.J) {
      bool matched = true;
      for (const auto& s : fam.v.at(j).cuts)
        if (s && !equal(s->first, s->second)) matched = false;
      if (matched != (cur.J.count(j) > 0))
        fail("relational match predicate disagrees with survival at index " + j);
    }
    if (cascades > 0)
      rep.lines.push_back("note: zero action cascaded past a single pass at " +
                          std::to_string(cascades) + " point(s)");
    if (rep.pass) rep.lines.push_back("PASS  J: " + to_string(fam.J) + " -> " + to_string(cur.J));
  } catch (const std::exception& e) {
    fail(std::string("exception: ") + e.what());
  }
  return rep;
}

Report verify_main_theorem(const ProofPtr& p, const IndexedFamily& fam, long budget, int jobs) {
  try {
    LiftChain chain(p, -1);
    return verify_with_chain(chain, fam, budget, jobs);
  } catch (const std::exception& e) {
    Report rep;
    rep.pass = false;
    rep.lines.push_back(std::string("FAIL: exception: ") + e.what());
    return rep;
  }
}

std::string to_dot(const Box& m, const EpsilonAssignment& eps) {
  std::ostringstream o;
  o << "digraph box {\n  rankdir=LR;\n  node [fontsize=10];\n";
  for (size_t i = 0; i < m.ports.size(); ++i) {
    const auto& p = m.ports[i];
    o << "  p" << i << " [shape=ellipse,label=\"" << (p.is_cut ? "cut " : "") << to_string(p.pt)
      << "\"" << (p.is_cut ? ",style=dashed" : "") << "];\n";
  }
  for (size_t i = 0; i < m.nodes.size(); ++i) {
    const auto& n = m.nodes[i];
    std::string label, extra;
    switch (n.kind) {
      case 's': label = "s"; break;
      case 'i': label = "id"; break;
      case 'r': label = eps[i] ? "▶" : "▷"; break;  // ret, annihilated filled
      case 'c': label = eps[i] ? "◀" : "◁"; break;
    }
    if ((n.kind == 'r' || n.kind == 'c') && eps[i]) extra = ",color=red";
    o << "  n" << i << " [shape=box,label=\"" << label << "\"" << extra << "];\n";
  }
  // wires: from producer to consumer
  auto consumer_name = [&](int w) -> std::string {
    const auto& c = m.wires[static_cast<size_t>(w)];
    if (c.port >= 0) return "p" + std::to_string(c.port);
    return "n" + std::to_string(c.node);
  };
  for (size_t i = 0; i < m.nodes.size(); ++i) {
    const auto& n = m.nodes[i];
    for (int s = 0; s < 2; ++s)
      if (n.out[static_cast<size_t>(s)] >= 0)
        o << "  n" << i << " -> " << consumer_name(n.out[static_cast<size_t>(s)]) << ";\n";
  }
  for (size_t i = 0; i < m.ports.size(); ++i)
    o << "  p" << i << " -> " << consumer_name(m.ports[i].entry) << " [style=dotted];\n";
  for (const auto& pr : m.cut_pairs) {
    bool matched = m.ports[static_cast<size_t>(pr[0])].matched;
    o << "  p" << pr[0] << " -> p" << pr[1] << " [dir=both,style=dashed,label=\""
      << (matched ? "s" : "0") << "\",constraint=false];\n";
  }
  o << "}\n";
  return o.str();
}

}  // namespace goimall
