#include "goimall/indexed.hpp"

#include <algorithm>

#include "json.hpp"

namespace goimall {

std::string to_string(const IndexSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ",";
    out += a;
    first = false;
  }
  return out + "}";
}

IndexSet iset_union(const IndexSet& a, const IndexSet& b) {
  IndexSet r = a;
  r.insert(b.begin(), b.end());
  return r;
}
IndexSet iset_inter(const IndexSet& a, const IndexSet& b) {
  IndexSet r;
  for (const auto& x : a)
    if (b.count(x)) r.insert(x);
  return r;
}
IndexSet iset_diff(const IndexSet& a, const IndexSet& b) {
  IndexSet r;
  for (const auto& x : a)
    if (!b.count(x)) r.insert(x);
  return r;
}
bool iset_subset(const IndexSet& a, const IndexSet& b) {
  return std::all_of(a.begin(), a.end(), [&](const Atom& x) { return b.count(x) > 0; });
}
bool iset_disjoint(const IndexSet& a, const IndexSet& b) {
  return std::none_of(a.begin(), a.end(), [&](const Atom& x) { return b.count(x) > 0; });
}

namespace {
IFormulaPtr mkif(Conn k, IndexSet d, IFormulaPtr a = nullptr, IFormulaPtr b = nullptr) {
  return std::make_shared<IFormula>(IFormula{k, std::move(d), std::move(a), std::move(b)});
}
}  // namespace

IFormulaPtr if_unit(Conn k, IndexSet d) {
  if ((k == Conn::Zero || k == Conn::Top) && !d.empty())
    throw CheckError({}, "0/top must have empty domain");
  if (!is_unit(k)) throw std::logic_error("if_unit on non-unit");
  return mkif(k, std::move(d));
}

IFormulaPtr if_bin(Conn k, IFormulaPtr a, IFormulaPtr b) {
  if (k == Conn::Tensor || k == Conn::Par) {
    if (a->d != b->d) throw CheckError({}, "tensor/par children must share a domain");
    IndexSet d = a->d;
    return mkif(k, std::move(d), std::move(a), std::move(b));
  }
  if (k == Conn::Plus || k == Conn::With) {
    if (!iset_disjoint(a->d, b->d)) throw CheckError({}, "plus/with children domains overlap");
    IndexSet d = iset_union(a->d, b->d);
    return mkif(k, std::move(d), std::move(a), std::move(b));
  }
  throw std::logic_error("if_bin on unit");
}

bool iwf(const IFormulaPtr& f) {
  switch (f->k) {
    case Conn::Zero:
    case Conn::Top: return f->d.empty();
    case Conn::One:
    case Conn::Bot: return true;
    case Conn::Tensor:
    case Conn::Par:
      return f->a->d == f->d && f->b->d == f->d && iwf(f->a) && iwf(f->b);
    case Conn::Plus:
    case Conn::With:
      return iset_disjoint(f->a->d, f->b->d) && iset_union(f->a->d, f->b->d) == f->d && iwf(f->a) &&
             iwf(f->b);
  }
  return false;
}

int cmp(const IFormulaPtr& x, const IFormulaPtr& y) {
  if (x.get() == y.get()) return 0;
  if (x->k != y->k) return x->k < y->k ? -1 : 1;
  if (x->d != y->d) return x->d < y->d ? -1 : 1;
  if (is_unit(x->k)) return 0;
  if (int c = cmp(x->a, y->a)) return c;
  return cmp(x->b, y->b);
}

bool equal(const IFormulaPtr& x, const IFormulaPtr& y) { return cmp(x, y) == 0; }

FormulaPtr strip(const IFormulaPtr& f) {
  switch (f->k) {
    case Conn::One: return f_one();
    case Conn::Bot: return f_bot();
    case Conn::Zero: return f_zero();
    case Conn::Top: return f_top();
    case Conn::Tensor: return f_tensor(strip(f->a), strip(f->b));
    case Conn::Par: return f_par(strip(f->a), strip(f->b));
    case Conn::Plus: return f_plus(strip(f->a), strip(f->b));
    case Conn::With: return f_with(strip(f->a), strip(f->b));
  }
  throw std::logic_error("bad connective");
}

IFormulaPtr indexed_dual(const IFormulaPtr& f) {
  switch (f->k) {
    case Conn::One: return mkif(Conn::Bot, f->d);
    case Conn::Bot: return mkif(Conn::One, f->d);
    case Conn::Zero: return mkif(Conn::Top, f->d);
    case Conn::Top: return mkif(Conn::Zero, f->d);
    case Conn::Tensor: return mkif(Conn::Par, f->d, indexed_dual(f->a), indexed_dual(f->b));
    case Conn::Par: return mkif(Conn::Tensor, f->d, indexed_dual(f->a), indexed_dual(f->b));
    case Conn::Plus: return mkif(Conn::With, f->d, indexed_dual(f->a), indexed_dual(f->b));
    case Conn::With: return mkif(Conn::Plus, f->d, indexed_dual(f->a), indexed_dual(f->b));
  }
  throw std::logic_error("bad connective");
}

IFormulaPtr all_empty(const FormulaPtr& f) {
  if (is_unit(f->k)) return mkif(f->k, {});
  return mkif(f->k, {}, all_empty(f->a), all_empty(f->b));
}

IFormulaPtr restrict_formula(const IFormulaPtr& f, const IndexSet& k) {
  switch (f->k) {
    case Conn::Zero:
    case Conn::Top: return f;
    case Conn::One:
    case Conn::Bot: return mkif(f->k, iset_inter(f->d, k));
    default: {
      IFormulaPtr a = restrict_formula(f->a, k);
      IFormulaPtr b = restrict_formula(f->b, k);
      return mkif(f->k, iset_inter(f->d, k), std::move(a), std::move(b));
    }
  }
}

IFormulaPtr merge_formula(const IFormulaPtr& x, const IFormulaPtr& y) {
  if (x->k != y->k) throw CheckError({}, "merge on distinct skeletons");
  if (is_unit(x->k)) {
    if (x->k == Conn::Zero || x->k == Conn::Top) return x;
    return mkif(x->k, iset_union(x->d, y->d));
  }
  return mkif(x->k, iset_union(x->d, y->d), merge_formula(x->a, y->a), merge_formula(x->b, y->b));
}

std::string to_string(const IFormulaPtr& f) {
  switch (f->k) {
    case Conn::One: return "1" + to_string(f->d);
    case Conn::Bot: return "bot" + to_string(f->d);
    case Conn::Zero: return "0" + to_string(f->d);
    case Conn::Top: return "top" + to_string(f->d);
    case Conn::Tensor: return "(" + to_string(f->a) + " * " + to_string(f->b) + ")";
    case Conn::Par: return "(" + to_string(f->a) + " par " + to_string(f->b) + ")";
    case Conn::Plus: return "(" + to_string(f->a) + " + " + to_string(f->b) + ")";
    case Conn::With: return "(" + to_string(f->a) + " & " + to_string(f->b) + ")";
  }
  throw std::logic_error("bad connective");
}

namespace {
std::string display(const IFormulaPtr& f) {
  std::string s = to_string(f);
  if (!s.empty() && s.front() == '(' && s.back() == ')') return s.substr(1, s.size() - 2);
  return s;
}
}  // namespace

std::string to_string(const ISequent& s) {
  std::string out = "|-" + to_string(s.J) + " [ ";
  for (size_t i = 0; i < s.cuts.size(); ++i) {
    if (i) out += ", ";
    out += "(" + display(s.cuts[i].left) + ", " + display(s.cuts[i].right) + ")";
  }
  out += " ] ";
  for (size_t i = 0; i < s.ctx.size(); ++i) {
    if (i) out += ", ";
    out += display(s.ctx[i]);
  }
  return out;
}

namespace {
IProofPtr mkip(IProof&& pr) { return std::make_shared<IProof>(std::move(pr)); }
}  // namespace

IProofPtr ip_ax(IFormulaPtr f) { return mkip({Rule::Ax, std::move(f), {}, {}, nullptr, nullptr, {}, 0, 0}); }
IProofPtr ip_one(IndexSet j) { return mkip({Rule::OneI, nullptr, std::move(j), {}, nullptr, nullptr, {}, 0, 0}); }
IProofPtr ip_top(std::vector<IFormulaPtr> ctx) {
  return mkip({Rule::TopI, nullptr, {}, std::move(ctx), nullptr, nullptr, {}, 0, 0});
}
IProofPtr ip_bot(IProofPtr p) { return mkip({Rule::BotI, nullptr, {}, {}, std::move(p), nullptr, {}, 0, 0}); }
IProofPtr ip_tensor(IProofPtr p, IProofPtr q) {
  return mkip({Rule::TensorI, nullptr, {}, {}, std::move(p), std::move(q), {}, 0, 0});
}
IProofPtr ip_par(IProofPtr p) { return mkip({Rule::ParI, nullptr, {}, {}, std::move(p), nullptr, {}, 0, 0}); }
IProofPtr ip_cut(IProofPtr p, IProofPtr q) {
  return mkip({Rule::CutI, nullptr, {}, {}, std::move(p), std::move(q), {}, 0, 0});
}
IProofPtr ip_with(IProofPtr p, IProofPtr q, std::vector<std::pair<int, int>> sigma) {
  return mkip({Rule::WithI, nullptr, {}, {}, std::move(p), std::move(q), std::move(sigma), 0, 0});
}
IProofPtr ip_plus1(IProofPtr p, IFormulaPtr g) {
  return mkip({Rule::Plus1I, std::move(g), {}, {}, std::move(p), nullptr, {}, 0, 0});
}
IProofPtr ip_plus2(IProofPtr p, IFormulaPtr f) {
  return mkip({Rule::Plus2I, std::move(f), {}, {}, std::move(p), nullptr, {}, 0, 0});
}
IProofPtr ip_ex(IProofPtr p, int i, int j) {
  return mkip({Rule::Exch, nullptr, {}, {}, std::move(p), nullptr, {}, i, j});
}

namespace {

bool underlying_dual(const IFormulaPtr& a, const IFormulaPtr& b) {
  return equal(dual(strip(a)), strip(b));
}

IChecked icheck_at(const IProofPtr& p, Path& path) {
  IChecked c;
  c.node = p;
  auto fail = [&](const std::string& m) -> void { throw CheckError(path, m); };
  auto kid = [&](const IProofPtr& sub, int idx) {
    path.push_back(idx);
    c.kids.push_back(icheck_at(sub, path));
    path.pop_back();
  };
  switch (p->r) {
    case Rule::Ax:
      if (!iwf(p->f)) fail("ill-formed indexed formula");
      c.seq.J = p->f->d;
      c.seq.ctx = {p->f, indexed_dual(p->f)};
      break;
    case Rule::OneI:
      c.seq.J = p->J;
      c.seq.ctx = {if_unit(Conn::One, p->J)};
      break;
    case Rule::TopI:
      for (const auto& f : p->top_ctx)
        if (!iwf(f) || !f->d.empty()) fail("top context must live in the empty domain");
      c.seq.J = {};
      c.seq.ctx = p->top_ctx;
      c.seq.ctx.push_back(if_unit(Conn::Top, {}));
      break;
    case Rule::BotI: {
      kid(p->p, 0);
      c.seq = c.kids[0].seq;
      c.seq.ctx.push_back(if_unit(Conn::Bot, c.seq.J));
      break;
    }
    case Rule::ParI: {
      kid(p->p, 0);
      const ISequent& s = c.kids[0].seq;
      if (s.ctx.size() < 2) fail("par premise needs two formulas");
      c.seq.J = s.J;
      c.seq.cuts = s.cuts;
      c.seq.ctx.assign(s.ctx.begin(), s.ctx.end() - 2);
      c.seq.ctx.push_back(if_bin(Conn::Par, s.ctx[s.ctx.size() - 2], s.ctx.back()));
      break;
    }
    case Rule::TensorI: {
      kid(p->p, 0);
      kid(p->q, 1);
      const ISequent& s1 = c.kids[0].seq;
      const ISequent& s2 = c.kids[1].seq;
      if (s1.ctx.empty() || s2.ctx.empty()) fail("tensor premise needs a principal formula");
      if (s1.J != s2.J) fail("tensor premises must share the sequent domain");
      c.seq.J = s1.J;
      c.seq.cuts = s1.cuts;
      c.seq.cuts.insert(c.seq.cuts.end(), s2.cuts.begin(), s2.cuts.end());
      c.seq.ctx.assign(s1.ctx.begin(), s1.ctx.end() - 1);
      c.seq.ctx.insert(c.seq.ctx.end(), s2.ctx.begin(), s2.ctx.end() - 1);
      c.seq.ctx.push_back(if_bin(Conn::Tensor, s1.ctx.back(), s2.ctx.back()));
      break;
    }
    case Rule::CutI: {
      kid(p->p, 0);
      kid(p->q, 1);
      const ISequent& s1 = c.kids[0].seq;
      const ISequent& s2 = c.kids[1].seq;
      if (s1.ctx.empty() || s2.ctx.empty()) fail("cut premise needs a principal formula");
      if (s1.J != s2.J) fail("cut premises must share the sequent domain");
      if (!underlying_dual(s1.ctx.back(), s2.ctx.back())) fail("cut formulas not dual");
      if (s1.ctx.back()->d != s1.J || s2.ctx.back()->d != s1.J)
        fail("cut formulas must carry the full sequent domain");
      c.seq.J = s1.J;
      c.seq.cuts = s1.cuts;
      c.seq.cuts.insert(c.seq.cuts.end(), s2.cuts.begin(), s2.cuts.end());
      c.seq.cuts.push_back({s1.ctx.back(), s2.ctx.back()});
      c.seq.ctx.assign(s1.ctx.begin(), s1.ctx.end() - 1);
      c.seq.ctx.insert(c.seq.ctx.end(), s2.ctx.begin(), s2.ctx.end() - 1);
      break;
    }
    case Rule::WithI: {
      kid(p->p, 0);
      kid(p->q, 1);
      const ISequent& s1 = c.kids[0].seq;
      const ISequent& s2 = c.kids[1].seq;
      if (s1.ctx.empty() || s2.ctx.empty()) fail("with premise needs a principal formula");
      if (!iset_disjoint(s1.J, s2.J)) fail("with premises must have disjoint domains");
      if (s1.ctx.size() != s2.ctx.size()) fail("with premise contexts differ");
      c.seq.J = iset_union(s1.J, s2.J);
      std::vector<IFormulaPtr> merged;
      for (size_t i = 0; i + 1 < s1.ctx.size(); ++i) {
        if (!equal(strip(s1.ctx[i]), strip(s2.ctx[i]))) fail("with premise contexts differ");
        merged.push_back(merge_formula(s1.ctx[i], s2.ctx[i]));
      }
      size_t n1 = s1.cuts.size(), n2 = s2.cuts.size();
      WithLayout lay = make_with_layout(n1, n2, p->sigma, path);
      c.seq.cuts.assign(static_cast<size_t>(lay.d1 + lay.d2 + lay.s), {});
      for (size_t i = 0; i < n1; ++i)
        if (lay.slot_of_p[i] < lay.d1) c.seq.cuts[static_cast<size_t>(lay.slot_of_p[i])] = s1.cuts[i];
      for (size_t i = 0; i < n2; ++i)
        if (lay.slot_of_q[i] >= lay.d1 && lay.slot_of_q[i] < lay.d1 + lay.d2)
          c.seq.cuts[static_cast<size_t>(lay.slot_of_q[i])] = s2.cuts[i];
      for (const auto& [l, r] : p->sigma) {
        const ICutPair& e1 = s1.cuts[static_cast<size_t>(l)];
        const ICutPair& e2 = s2.cuts[static_cast<size_t>(r)];
        if (!equal(strip(e1.left), strip(e2.left)) || !equal(strip(e1.right), strip(e2.right)))
          fail("sigma pairs distinct cut entries");
        int slot = lay.slot_of_p[static_cast<size_t>(l)];
        c.seq.cuts[static_cast<size_t>(slot)] = {merge_formula(e1.left, e2.left),
                                                 merge_formula(e1.right, e2.right)};
      }
      c.seq.ctx = std::move(merged);
      c.seq.ctx.push_back(if_bin(Conn::With, s1.ctx.back(), s2.ctx.back()));
      break;
    }
    case Rule::Plus1I:
    case Rule::Plus2I: {
      kid(p->p, 0);
      const ISequent& s = c.kids[0].seq;
      if (s.ctx.empty()) fail("plus premise needs a principal formula");
      if (!iwf(p->f) || !p->f->d.empty()) fail("injected plus formula must have empty domain");
      c.seq.J = s.J;
      c.seq.cuts = s.cuts;
      c.seq.ctx.assign(s.ctx.begin(), s.ctx.end() - 1);
      c.seq.ctx.push_back(p->r == Rule::Plus1I ? if_bin(Conn::Plus, s.ctx.back(), p->f)
                                               : if_bin(Conn::Plus, p->f, s.ctx.back()));
      break;
    }
    case Rule::Exch: {
      kid(p->p, 0);
      const ISequent& s = c.kids[0].seq;
      int n = static_cast<int>(s.ctx.size());
      if (p->e1 < 0 || p->e2 < 0 || p->e1 >= n || p->e2 >= n || p->e1 == p->e2)
        fail("exchange positions invalid");
      c.seq = s;
      std::swap(c.seq.ctx[static_cast<size_t>(p->e1)], c.seq.ctx[static_cast<size_t>(p->e2)]);
      break;
    }
  }
  for (const auto& f : c.seq.ctx)
    if (f->d != c.seq.J) fail("conclusion context formula outside the sequent domain");
  for (const auto& cp : c.seq.cuts) {
    if (cp.left->d != cp.right->d || !iset_subset(cp.left->d, c.seq.J))
      fail("stack pair domains invalid");
    if (!underlying_dual(cp.left, cp.right)) fail("stack pair not dual");
  }
  return c;
}

}  // namespace

IChecked check_indexed_proof(const IProofPtr& p) {
  Path path;
  return icheck_at(p, path);
}

ProofPtr strip(const IProofPtr& p) {
  switch (p->r) {
    case Rule::Ax: return p_ax(strip(p->f));
    case Rule::OneI: return p_one();
    case Rule::TopI: {
      std::vector<FormulaPtr> ctx;
      for (const auto& f : p->top_ctx) ctx.push_back(strip(f));
      return p_top(std::move(ctx));
    }
    case Rule::BotI: return p_bot(strip(p->p));
    case Rule::TensorI: return p_tensor(strip(p->p), strip(p->q));
    case Rule::ParI: return p_par(strip(p->p));
    case Rule::CutI: return p_cut(strip(p->p), strip(p->q));
    case Rule::WithI: return p_with(strip(p->p), strip(p->q), p->sigma);
    case Rule::Plus1I: return p_plus1(strip(p->p), strip(p->f));
    case Rule::Plus2I: return p_plus2(strip(p->p), strip(p->f));
    case Rule::Exch: return p_ex(strip(p->p), p->e1, p->e2);
  }
  throw std::logic_error("bad rule");
}

IProofPtr restrict_proof(const IProofPtr& p, const IndexSet& k) {
  switch (p->r) {
    case Rule::Ax: return ip_ax(restrict_formula(p->f, k));
    case Rule::OneI: return ip_one(iset_inter(p->J, k));
    case Rule::TopI: return p;
    case Rule::BotI: return ip_bot(restrict_proof(p->p, k));
    case Rule::TensorI: return ip_tensor(restrict_proof(p->p, k), restrict_proof(p->q, k));
    case Rule::ParI: return ip_par(restrict_proof(p->p, k));
    case Rule::CutI: return ip_cut(restrict_proof(p->p, k), restrict_proof(p->q, k));
    case Rule::WithI: return ip_with(restrict_proof(p->p, k), restrict_proof(p->q, k), p->sigma);
    case Rule::Plus1I: return ip_plus1(restrict_proof(p->p, k), p->f);
    case Rule::Plus2I: return ip_plus2(restrict_proof(p->p, k), p->f);
    case Rule::Exch: return ip_ex(restrict_proof(p->p, k), p->e1, p->e2);
  }
  throw std::logic_error("bad rule");
}

std::string json_family(const IndexedFamily& f) {
  nlohmann::json j;
  j["J"] = nlohmann::json::array();
  for (const auto& a : f.J) j["J"].push_back(a);
  j["values"] = nlohmann::json::object();
  for (const auto& [a, v] : f.v) j["values"][a] = nlohmann::json::parse(json_pointvec(v));
  return j.dump();
}

IndexedFamily family_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  IndexedFamily f;
  for (const auto& a : j.at("J")) f.J.insert(a.get<std::string>());
  for (const auto& [a, v] : j.at("values").items()) f.v[a] = pointvec_from_json(v.dump());
  if (f.v.size() != f.J.size())
    throw ParseError(0, "family values must cover J exactly");
  for (const auto& a : f.J)
    if (!f.v.count(a)) throw ParseError(0, "family missing index " + a);
  return f;
}

IFormulaPtr translate_formula_family(const FormulaPtr& f, const std::map<Atom, PointPtr>& fam) {
  IndexSet J;
  for (const auto& [a, _] : fam) J.insert(a);
  switch (f->k) {
    case Conn::One:
    case Conn::Bot:
      for (const auto& [a, x] : fam)
        if (x->k != PK::Star) throw MembershipError(a, "unit point must be *");
      return if_unit(f->k, J);
    case Conn::Zero:
    case Conn::Top:
      if (!J.empty()) throw CheckError({}, "translation of 0/top undefined on a nonempty family");
      return if_unit(f->k, {});
    case Conn::Tensor:
    case Conn::Par: {
      std::map<Atom, PointPtr> fa, fb;
      for (const auto& [a, x] : fam) {
        if (x->k != PK::Pair) throw MembershipError(a, "multiplicative point must be a pair");
        fa[a] = x->a;
        fb[a] = x->b;
      }
      return if_bin(f->k, translate_formula_family(f->a, fa), translate_formula_family(f->b, fb));
    }
    case Conn::Plus:
    case Conn::With: {
      std::map<Atom, PointPtr> fa, fb;
      for (const auto& [a, x] : fam) {
        if (x->k == PK::In1) fa[a] = x->a;
        else if (x->k == PK::In2) fb[a] = x->a;
        else throw MembershipError(a, "additive point must carry a tag");
      }
      return if_bin(f->k, translate_formula_family(f->a, fa), translate_formula_family(f->b, fb));
    }
  }
  throw std::logic_error("bad connective");
}

PointPtr read_point(const IFormulaPtr& f, const Atom& j) {
  switch (f->k) {
    case Conn::One:
    case Conn::Bot: return pt_star();
    case Conn::Zero:
    case Conn::Top: throw std::logic_error("no point of 0/top");
    case Conn::Tensor:
    case Conn::Par: return pt_pair(read_point(f->a, j), read_point(f->b, j));
    case Conn::Plus:
    case Conn::With:
      if (f->a->d.count(j)) return pt_in1(read_point(f->a, j));
      return pt_in2(read_point(f->b, j));
  }
  throw std::logic_error("bad connective");
}

std::vector<ICutPair> translate_cut_family(const std::vector<CutPair>& cuts,
                                           const std::map<Atom, std::vector<CutSlot>>& fam) {
  std::vector<ICutPair> out;
  for (size_t i = 0; i < cuts.size(); ++i) {
    std::map<Atom, PointPtr> fl, fr;
    for (const auto& [a, slots] : fam) {
      const CutSlot& s = slots.at(i);
      if (s) {
        fl[a] = s->first;
        fr[a] = s->second;
      }
    }
    out.push_back({translate_formula_family(cuts[i].left, fl),
                   translate_formula_family(cuts[i].right, fr)});
  }
  return out;
}

ISequent translate_sequent(const Sequent& seq, const IndexedFamily& fam) {
  ISequent out;
  out.J = fam.J;
  std::map<Atom, std::vector<CutSlot>> cutFam;
  for (const auto& [a, v] : fam.v) {
    if (v.cuts.size() != seq.cuts.size() || v.ctx.size() != seq.ctx.size())
      throw MembershipError(a, "point shape does not match the sequent");
    cutFam[a] = v.cuts;
  }
  out.cuts = translate_cut_family(seq.cuts, cutFam);
  for (size_t i = 0; i < seq.ctx.size(); ++i) {
    std::map<Atom, PointPtr> fi;
    for (const auto& [a, v] : fam.v) fi[a] = v.ctx[i];
    out.ctx.push_back(translate_formula_family(seq.ctx[i], fi));
  }
  return out;
}

namespace {

using FamMap = std::map<Atom, PointVec>;

IProofPtr fl_fwd(const Checked& c, const FamMap& fam) {
  const Sequent& seq = c.seq;
  for (const auto& [a, v] : fam)
    if (v.cuts.size() != seq.cuts.size() || v.ctx.size() != seq.ctx.size())
      throw MembershipError(a, "point shape does not match the sequent");
  IndexSet J;
  for (const auto& [a, _] : fam) J.insert(a);
  switch (c.node->r) {
    case Rule::Ax: {
      std::map<Atom, PointPtr> pts;
      for (const auto& [a, v] : fam) {
        if (!equal(v.ctx[0], v.ctx[1])) throw MembershipError(a, "axiom point must be diagonal");
        pts[a] = v.ctx[0];
      }
      return ip_ax(translate_formula_family(c.node->f, pts));
    }
    case Rule::OneI:
      for (const auto& [a, v] : fam)
        if (v.ctx[0]->k != PK::Star) throw MembershipError(a, "unit point must be *");
      return ip_one(J);
    case Rule::TopI: {
      if (!J.empty()) throw MembershipError(*J.begin(), "top sequent has no points");
      std::vector<IFormulaPtr> ctx;
      for (const auto& f : c.node->top_ctx) ctx.push_back(all_empty(f));
      return ip_top(std::move(ctx));
    }
    case Rule::BotI: {
      FamMap sub;
      for (const auto& [a, v] : fam) {
        if (v.ctx.back()->k != PK::Star) throw MembershipError(a, "bot point must be *");
        PointVec w = v;
        w.ctx.pop_back();
        sub[a] = std::move(w);
      }
      return ip_bot(fl_fwd(c.kids[0], sub));
    }
    case Rule::ParI: {
      FamMap sub;
      for (const auto& [a, v] : fam) {
        if (v.ctx.back()->k != PK::Pair) throw MembershipError(a, "par point must be a pair");
        PointVec w = v;
        PointPtr pr = w.ctx.back();
        w.ctx.pop_back();
        w.ctx.push_back(pr->a);
        w.ctx.push_back(pr->b);
        sub[a] = std::move(w);
      }
      return ip_par(fl_fwd(c.kids[0], sub));
    }
    case Rule::TensorI:
    case Rule::CutI: {
      size_t n1 = c.kids[0].seq.cuts.size();
      size_t g1 = c.kids[0].seq.ctx.size() - 1;
      FamMap sub1, sub2;
      for (const auto& [a, v] : fam) {
        PointVec w1, w2;
        w1.cuts.assign(v.cuts.begin(), v.cuts.begin() + static_cast<long>(n1));
        PointPtr x1, x2;
        if (c.node->r == Rule::TensorI) {
          w2.cuts.assign(v.cuts.begin() + static_cast<long>(n1), v.cuts.end());
          if (v.ctx.back()->k != PK::Pair) throw MembershipError(a, "tensor point must be a pair");
          x1 = v.ctx.back()->a;
          x2 = v.ctx.back()->b;
          w1.ctx.assign(v.ctx.begin(), v.ctx.begin() + static_cast<long>(g1));
          w2.ctx.assign(v.ctx.begin() + static_cast<long>(g1), v.ctx.end() - 1);
        } else {
          w2.cuts.assign(v.cuts.begin() + static_cast<long>(n1), v.cuts.end() - 1);
          const CutSlot& pair = v.cuts.back();
          if (!pair) throw MembershipError(a, "cut pair slot must be present");
          x1 = pair->first;
          x2 = pair->second;
          w1.ctx.assign(v.ctx.begin(), v.ctx.begin() + static_cast<long>(g1));
          w2.ctx.assign(v.ctx.begin() + static_cast<long>(g1), v.ctx.end());
        }
        w1.ctx.push_back(x1);
        w2.ctx.push_back(x2);
        sub1[a] = std::move(w1);
        sub2[a] = std::move(w2);
      }
      IProofPtr r1 = fl_fwd(c.kids[0], sub1);
      IProofPtr r2 = fl_fwd(c.kids[1], sub2);
      return c.node->r == Rule::TensorI ? ip_tensor(r1, r2) : ip_cut(r1, r2);
    }
    case Rule::WithI: {
      const WithLayout& lay = *c.with_layout;
      FamMap sub1, sub2;
      for (const auto& [a, v] : fam) {
        PK tag = v.ctx.back()->k;
        if (tag != PK::In1 && tag != PK::In2) throw MembershipError(a, "with point must carry a tag");
        bool left = tag == PK::In1;
        const auto& map = left ? lay.slot_of_p : lay.slot_of_q;
        const auto& other = left ? lay.slot_of_q : lay.slot_of_p;
        PointVec w;
        for (size_t i = 0; i < map.size(); ++i) w.cuts.push_back(v.cuts[static_cast<size_t>(map[i])]);
        // the erased branch's own slots must be absent
        for (size_t i = 0; i < other.size(); ++i) {
          int slot = other[i];
          bool shared = slot >= lay.d1 + lay.d2;
          if (!shared && v.cuts[static_cast<size_t>(slot)])
            throw MembershipError(a, "absent branch slot must be absent");
        }
        w.ctx.assign(v.ctx.begin(), v.ctx.end() - 1);
        w.ctx.push_back(v.ctx.back()->a);
        (left ? sub1 : sub2)[a] = std::move(w);
      }
      return ip_with(fl_fwd(c.kids[0], sub1), fl_fwd(c.kids[1], sub2), c.node->sigma);
    }
    case Rule::Plus1I:
    case Rule::Plus2I: {
      PK want = c.node->r == Rule::Plus1I ? PK::In1 : PK::In2;
      FamMap sub;
      for (const auto& [a, v] : fam) {
        if (v.ctx.back()->k != want) throw MembershipError(a, "plus point has the wrong tag");
        PointVec w = v;
        w.ctx.back() = v.ctx.back()->a;
        sub[a] = std::move(w);
      }
      IProofPtr r = fl_fwd(c.kids[0], sub);
      IFormulaPtr g = all_empty(c.node->f);
      return c.node->r == Rule::Plus1I ? ip_plus1(r, g) : ip_plus2(r, g);
    }
    case Rule::Exch: {
      FamMap sub;
      for (const auto& [a, v] : fam) {
        PointVec w = v;
        std::swap(w.ctx[static_cast<size_t>(c.node->e1)], w.ctx[static_cast<size_t>(c.node->e2)]);
        sub[a] = std::move(w);
      }
      return ip_ex(fl_fwd(c.kids[0], sub), c.node->e1, c.node->e2);
    }
  }
  throw std::logic_error("bad rule");
}

FamMap fl_bwd(const IChecked& c) {
  FamMap out;
  switch (c.node->r) {
    case Rule::Ax:
      for (const auto& j : c.seq.J) {
        PointPtr x = read_point(c.node->f, j);
        out[j] = PointVec{{}, {x, x}};
      }
      break;
    case Rule::OneI:
      for (const auto& j : c.seq.J) out[j] = PointVec{{}, {pt_star()}};
      break;
    case Rule::TopI:
      break;
    case Rule::BotI: {
      out = fl_bwd(c.kids[0]);
      for (auto& [_, v] : out) v.ctx.push_back(pt_star());
      break;
    }
    case Rule::ParI: {
      out = fl_bwd(c.kids[0]);
      for (auto& [_, v] : out) {
        PointPtr b = v.ctx.back();
        v.ctx.pop_back();
        PointPtr a = v.ctx.back();
        v.ctx.pop_back();
        v.ctx.push_back(pt_pair(a, b));
      }
      break;
    }
    case Rule::TensorI:
    case Rule::CutI: {
      FamMap f1 = fl_bwd(c.kids[0]);
      FamMap f2 = fl_bwd(c.kids[1]);
      for (const auto& j : c.seq.J) {
        const PointVec& v1 = f1.at(j);
        const PointVec& v2 = f2.at(j);
        PointVec v;
        v.cuts = v1.cuts;
        if (c.node->r == Rule::TensorI) {
          v.cuts.insert(v.cuts.end(), v2.cuts.begin(), v2.cuts.end());
          v.ctx.assign(v1.ctx.begin(), v1.ctx.end() - 1);
          v.ctx.insert(v.ctx.end(), v2.ctx.begin(), v2.ctx.end() - 1);
          v.ctx.push_back(pt_pair(v1.ctx.back(), v2.ctx.back()));
        } else {
          v.cuts.insert(v.cuts.end(), v2.cuts.begin(), v2.cuts.end());
          v.cuts.emplace_back(std::make_pair(v1.ctx.back(), v2.ctx.back()));
          v.ctx.assign(v1.ctx.begin(), v1.ctx.end() - 1);
          v.ctx.insert(v.ctx.end(), v2.ctx.begin(), v2.ctx.end() - 1);
        }
        out[j] = std::move(v);
      }
      break;
    }
    case Rule::WithI: {
      FamMap f1 = fl_bwd(c.kids[0]);
      FamMap f2 = fl_bwd(c.kids[1]);
      size_t n1 = c.kids[0].seq.cuts.size();
      size_t n2 = c.kids[1].seq.cuts.size();
      Path none;
      WithLayout lay = make_with_layout(n1, n2, c.node->sigma, none);
      size_t slots = c.seq.cuts.size();
      for (int side = 0; side < 2; ++side) {
        const FamMap& prem = side == 0 ? f1 : f2;
        const auto& map = side == 0 ? lay.slot_of_p : lay.slot_of_q;
        for (const auto& [j, v1] : prem) {
          PointVec v;
          v.cuts.assign(slots, std::nullopt);
          for (size_t i = 0; i < v1.cuts.size(); ++i) v.cuts[static_cast<size_t>(map[i])] = v1.cuts[i];
          v.ctx.assign(v1.ctx.begin(), v1.ctx.end() - 1);
          v.ctx.push_back(side == 0 ? pt_in1(v1.ctx.back()) : pt_in2(v1.ctx.back()));
          out[j] = std::move(v);
        }
      }
      break;
    }
    case Rule::Plus1I:
    case Rule::Plus2I: {
      out = fl_bwd(c.kids[0]);
      for (auto& [_, v] : out)
        v.ctx.back() = c.node->r == Rule::Plus1I ? pt_in1(v.ctx.back()) : pt_in2(v.ctx.back());
      break;
    }
    case Rule::Exch: {
      out = fl_bwd(c.kids[0]);
      for (auto& [_, v] : out)
        std::swap(v.ctx[static_cast<size_t>(c.node->e1)], v.ctx[static_cast<size_t>(c.node->e2)]);
      break;
    }
  }
  return out;
}

}  // namespace

IProofPtr fl_forward(const Checked& p, const IndexedFamily& fam) {
  for (const auto& j : fam.J)
    if (!fam.v.count(j)) throw MembershipError(j, "family missing a value");
  return fl_fwd(p, fam.v);
}

std::pair<IndexedFamily, ProofPtr> fl_backward(const IChecked& rho) {
  IndexedFamily fam;
  fam.J = rho.seq.J;
  fam.v = fl_bwd(rho);
  return {std::move(fam), strip(rho.node)};
}

}  // namespace goimall
