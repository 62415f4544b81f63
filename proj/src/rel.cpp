#include "goimall/rel.hpp"

#include <algorithm>

#include "json.hpp"

namespace goimall {

namespace {
PointPtr mkp(PK k, PointPtr a = nullptr, PointPtr b = nullptr) {
  return std::make_shared<Point>(Point{k, std::move(a), std::move(b)});
}
}  // namespace

PointPtr pt_star() {
  static const PointPtr s = mkp(PK::Star);
  return s;
}
PointPtr pt_pair(PointPtr a, PointPtr b) { return mkp(PK::Pair, std::move(a), std::move(b)); }
PointPtr pt_in1(PointPtr a) { return mkp(PK::In1, std::move(a)); }
PointPtr pt_in2(PointPtr a) { return mkp(PK::In2, std::move(a)); }

int cmp(const PointPtr& x, const PointPtr& y) {
  if (x.get() == y.get()) return 0;
  if (x->k != y->k) return x->k < y->k ? -1 : 1;
  switch (x->k) {
    case PK::Star: return 0;
    case PK::Pair:
      if (int c = cmp(x->a, y->a)) return c;
      return cmp(x->b, y->b);
    default: return cmp(x->a, y->a);
  }
}

bool equal(const PointPtr& x, const PointPtr& y) { return cmp(x, y) == 0; }

std::string to_string(const PointPtr& x) {
  switch (x->k) {
    case PK::Star: return "*";
    case PK::Pair: return "(" + to_string(x->a) + "," + to_string(x->b) + ")";
    case PK::In1: return "1." + to_string(x->a);
    case PK::In2: return "2." + to_string(x->a);
  }
  throw std::logic_error("bad point");
}

namespace {
PointPtr parse_point_at(const std::string& s, size_t& p) {
  if (p >= s.size()) throw ParseError(p, "expected point");
  if (s[p] == '*') {
    ++p;
    return pt_star();
  }
  if (s[p] == '1' || s[p] == '2') {
    bool one = s[p] == '1';
    ++p;
    if (p >= s.size() || s[p] != '.') throw ParseError(p, "expected '.'");
    ++p;
    PointPtr a = parse_point_at(s, p);
    return one ? pt_in1(a) : pt_in2(a);
  }
  if (s[p] == '(') {
    ++p;
    PointPtr a = parse_point_at(s, p);
    if (p >= s.size() || s[p] != ',') throw ParseError(p, "expected ','");
    ++p;
    PointPtr b = parse_point_at(s, p);
    if (p >= s.size() || s[p] != ')') throw ParseError(p, "expected ')'");
    ++p;
    return pt_pair(a, b);
  }
  throw ParseError(p, "expected point");
}
}  // namespace

PointPtr parse_point(const std::string& s) {
  size_t p = 0;
  PointPtr x = parse_point_at(s, p);
  if (p != s.size()) throw ParseError(p, "trailing input");
  return x;
}

std::vector<std::string> addresses(const PointPtr& x) {
  switch (x->k) {
    case PK::Star: return {""};
    case PK::In1:
    case PK::In2: return addresses(x->a);
    case PK::Pair: {
      std::vector<std::string> out;
      for (const auto& w : addresses(x->a)) out.push_back("l" + w);
      for (const auto& w : addresses(x->b)) out.push_back("r" + w);
      return out;
    }
  }
  throw std::logic_error("bad point");
}

int cmp(const std::vector<PointPtr>& x, const std::vector<PointPtr>& y) {
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  for (size_t i = 0; i < x.size(); ++i)
    if (int c = cmp(x[i], y[i])) return c;
  return 0;
}

namespace {
int cmp_slot(const CutSlot& a, const CutSlot& b) {
  if (!a && !b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (int c = cmp(a->first, b->first)) return c;
  return cmp(a->second, b->second);
}
}  // namespace

int cmp(const PointVec& x, const PointVec& y) {
  if (x.cuts.size() != y.cuts.size()) return x.cuts.size() < y.cuts.size() ? -1 : 1;
  for (size_t i = 0; i < x.cuts.size(); ++i)
    if (int c = cmp_slot(x.cuts[i], y.cuts[i])) return c;
  return cmp(x.ctx, y.ctx);
}

bool operator<(const PointVec& x, const PointVec& y) { return cmp(x, y) < 0; }
bool operator==(const PointVec& x, const PointVec& y) { return cmp(x, y) == 0; }

std::vector<PointPtr> interp_formula(const FormulaPtr& f) {
  switch (f->k) {
    case Conn::One:
    case Conn::Bot: return {pt_star()};
    case Conn::Zero:
    case Conn::Top: return {};
    case Conn::Tensor:
    case Conn::Par: {
      std::vector<PointPtr> out;
      for (const auto& a : interp_formula(f->a))
        for (const auto& b : interp_formula(f->b)) out.push_back(pt_pair(a, b));
      return out;
    }
    case Conn::Plus:
    case Conn::With: {
      std::vector<PointPtr> out;
      for (const auto& a : interp_formula(f->a)) out.push_back(pt_in1(a));
      for (const auto& b : interp_formula(f->b)) out.push_back(pt_in2(b));
      return out;
    }
  }
  throw std::logic_error("bad connective");
}

std::vector<std::vector<CutSlot>> sublist_space(const std::vector<CutPair>& cuts) {
  std::vector<std::vector<CutSlot>> out = {{}};
  for (const auto& cp : cuts) {
    std::vector<CutSlot> slots;
    slots.push_back(std::nullopt);
    for (const auto& a : interp_formula(cp.left))
      for (const auto& b : interp_formula(cp.right)) slots.emplace_back(std::make_pair(a, b));
    std::vector<std::vector<CutSlot>> next;
    next.reserve(out.size() * slots.size());
    for (const auto& pre : out)
      for (const auto& s : slots) {
        auto v = pre;
        v.push_back(s);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

namespace {

void sort_unique(Relation& r) {
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
}

void sort_unique_ctx(CtxRelation& r) {
  auto lt = [](const std::vector<PointPtr>& a, const std::vector<PointPtr>& b) { return cmp(a, b) < 0; };
  auto eq = [](const std::vector<PointPtr>& a, const std::vector<PointPtr>& b) { return cmp(a, b) == 0; };
  std::sort(r.begin(), r.end(), lt);
  r.erase(std::unique(r.begin(), r.end(), eq), r.end());
}

}  // namespace

Relation interp_with_cuts(const Checked& c) {
  Relation out;
  switch (c.node->r) {
    case Rule::Ax:
      for (const auto& a : interp_formula(c.node->f)) out.push_back({{}, {a, a}});
      break;
    case Rule::OneI:
      out.push_back({{}, {pt_star()}});
      break;
    case Rule::TopI:
      break;  // |top| is empty
    case Rule::BotI:
      for (auto v : interp_with_cuts(c.kids[0])) {
        v.ctx.push_back(pt_star());
        out.push_back(std::move(v));
      }
      break;
    case Rule::ParI:
      for (auto v : interp_with_cuts(c.kids[0])) {
        PointPtr b = v.ctx.back();
        v.ctx.pop_back();
        PointPtr a = v.ctx.back();
        v.ctx.pop_back();
        v.ctx.push_back(pt_pair(a, b));
        out.push_back(std::move(v));
      }
      break;
    case Rule::TensorI: {
      Relation r1 = interp_with_cuts(c.kids[0]);
      Relation r2 = interp_with_cuts(c.kids[1]);
      for (const auto& v1 : r1)
        for (const auto& v2 : r2) {
          PointVec v;
          v.cuts = v1.cuts;
          v.cuts.insert(v.cuts.end(), v2.cuts.begin(), v2.cuts.end());
          v.ctx.assign(v1.ctx.begin(), v1.ctx.end() - 1);
          v.ctx.insert(v.ctx.end(), v2.ctx.begin(), v2.ctx.end() - 1);
          v.ctx.push_back(pt_pair(v1.ctx.back(), v2.ctx.back()));
          out.push_back(std::move(v));
        }
      break;
    }
    case Rule::CutI: {
      Relation r1 = interp_with_cuts(c.kids[0]);
      Relation r2 = interp_with_cuts(c.kids[1]);
      for (const auto& v1 : r1)
        for (const auto& v2 : r2) {
          PointVec v;
          v.cuts = v1.cuts;
          v.cuts.insert(v.cuts.end(), v2.cuts.begin(), v2.cuts.end());
          v.cuts.emplace_back(std::make_pair(v1.ctx.back(), v2.ctx.back()));
          v.ctx.assign(v1.ctx.begin(), v1.ctx.end() - 1);
          v.ctx.insert(v.ctx.end(), v2.ctx.begin(), v2.ctx.end() - 1);
          out.push_back(std::move(v));
        }
      break;
    }
    case Rule::WithI: {
      const WithLayout& lay = *c.with_layout;
      size_t slots = c.seq.cuts.size();
      for (int side = 0; side < 2; ++side) {
        const auto& prem = c.kids[static_cast<size_t>(side)];
        const auto& map = side == 0 ? lay.slot_of_p : lay.slot_of_q;
        for (const auto& v1 : interp_with_cuts(prem)) {
          PointVec v;
          v.cuts.assign(slots, std::nullopt);
          for (size_t i = 0; i < v1.cuts.size(); ++i) v.cuts[static_cast<size_t>(map[i])] = v1.cuts[i];
          v.ctx.assign(v1.ctx.begin(), v1.ctx.end() - 1);
          v.ctx.push_back(side == 0 ? pt_in1(v1.ctx.back()) : pt_in2(v1.ctx.back()));
          out.push_back(std::move(v));
        }
      }
      break;
    }
    case Rule::Plus1I:
      for (auto v : interp_with_cuts(c.kids[0])) {
        v.ctx.back() = pt_in1(v.ctx.back());
        out.push_back(std::move(v));
      }
      break;
    case Rule::Plus2I:
      for (auto v : interp_with_cuts(c.kids[0])) {
        v.ctx.back() = pt_in2(v.ctx.back());
        out.push_back(std::move(v));
      }
      break;
    case Rule::Exch:
      for (auto v : interp_with_cuts(c.kids[0])) {
        std::swap(v.ctx[static_cast<size_t>(c.node->e1)], v.ctx[static_cast<size_t>(c.node->e2)]);
        out.push_back(std::move(v));
      }
      break;
  }
  sort_unique(out);
  return out;
}

CtxRelation interp_denotational(const Checked& c) {
  CtxRelation out;
  switch (c.node->r) {
    case Rule::Ax:
      for (const auto& a : interp_formula(c.node->f)) out.push_back({a, a});
      break;
    case Rule::OneI:
      out.push_back({pt_star()});
      break;
    case Rule::TopI:
      break;
    case Rule::BotI:
      for (auto v : interp_denotational(c.kids[0])) {
        v.push_back(pt_star());
        out.push_back(std::move(v));
      }
      break;
    case Rule::ParI:
      for (auto v : interp_denotational(c.kids[0])) {
        PointPtr b = v.back();
        v.pop_back();
        PointPtr a = v.back();
        v.pop_back();
        v.push_back(pt_pair(a, b));
        out.push_back(std::move(v));
      }
      break;
    case Rule::TensorI: {
      CtxRelation r1 = interp_denotational(c.kids[0]);
      CtxRelation r2 = interp_denotational(c.kids[1]);
      for (const auto& v1 : r1)
        for (const auto& v2 : r2) {
          std::vector<PointPtr> v(v1.begin(), v1.end() - 1);
          v.insert(v.end(), v2.begin(), v2.end() - 1);
          v.push_back(pt_pair(v1.back(), v2.back()));
          out.push_back(std::move(v));
        }
      break;
    }
    case Rule::CutI: {
      // relational composition: keep matching witnesses, hide the cut formulas
      CtxRelation r1 = interp_denotational(c.kids[0]);
      CtxRelation r2 = interp_denotational(c.kids[1]);
      for (const auto& v1 : r1)
        for (const auto& v2 : r2) {
          if (!equal(v1.back(), v2.back())) continue;
          std::vector<PointPtr> v(v1.begin(), v1.end() - 1);
          v.insert(v.end(), v2.begin(), v2.end() - 1);
          out.push_back(std::move(v));
        }
      break;
    }
    case Rule::WithI:
      for (int side = 0; side < 2; ++side)
        for (auto v : interp_denotational(c.kids[static_cast<size_t>(side)])) {
          v.back() = side == 0 ? pt_in1(v.back()) : pt_in2(v.back());
          out.push_back(std::move(v));
        }
      break;
    case Rule::Plus1I:
      for (auto v : interp_denotational(c.kids[0])) {
        v.back() = pt_in1(v.back());
        out.push_back(std::move(v));
      }
      break;
    case Rule::Plus2I:
      for (auto v : interp_denotational(c.kids[0])) {
        v.back() = pt_in2(v.back());
        out.push_back(std::move(v));
      }
      break;
    case Rule::Exch:
      for (auto v : interp_denotational(c.kids[0])) {
        std::swap(v[static_cast<size_t>(c.node->e1)], v[static_cast<size_t>(c.node->e2)]);
        out.push_back(std::move(v));
      }
      break;
  }
  sort_unique_ctx(out);
  return out;
}

CtxRelation execute_cuts_rel(const Relation& r) {
  CtxRelation out;
  for (const auto& v : r) {
    bool keep = true;
    for (const auto& s : v.cuts)
      if (s && !equal(s->first, s->second)) {
        keep = false;
        break;
      }
    if (keep) out.push_back(v.ctx);
  }
  sort_unique_ctx(out);
  return out;
}

std::string to_string(const PointVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.cuts.size(); ++i) {
    if (i) s += ", ";
    s += v.cuts[i] ? "(" + to_string(v.cuts[i]->first) + "|" + to_string(v.cuts[i]->second) + ")" : "-";
  }
  s += "; ";
  for (size_t i = 0; i < v.ctx.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v.ctx[i]);
  }
  return s + ")";
}

std::string json_point(const PointPtr& x) { return to_string(x); }

namespace {
nlohmann::json pointvec_json(const PointVec& v) {
  nlohmann::json j;
  j["cuts"] = nlohmann::json::array();
  for (const auto& s : v.cuts)
    j["cuts"].push_back(s ? "(" + to_string(s->first) + "|" + to_string(s->second) + ")" : "-");
  j["ctx"] = nlohmann::json::array();
  for (const auto& x : v.ctx) j["ctx"].push_back(to_string(x));
  return j;
}
}  // namespace

std::string json_pointvec(const PointVec& v) { return pointvec_json(v).dump(); }

std::string json_relation(const Relation& r) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& v : r) j.push_back(pointvec_json(v));
  return j.dump();
}

std::string json_ctx_relation(const CtxRelation& r) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& v : r) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : v) row.push_back(to_string(x));
    j.push_back(row);
  }
  return j.dump();
}

PointVec pointvec_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PointVec v;
  for (const auto& s : j.at("cuts")) {
    std::string str = s.get<std::string>();
    if (str == "-") {
      v.cuts.push_back(std::nullopt);
    } else {
      if (str.size() < 2 || str.front() != '(' || str.back() != ')')
        throw ParseError(0, "bad cut slot " + str);
      std::string body = str.substr(1, str.size() - 2);
      // split at the top-level '|'
      int depth = 0;
      size_t bar = std::string::npos;
      for (size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '(') ++depth;
        else if (body[i] == ')') --depth;
        else if (body[i] == '|' && depth == 0) {
          bar = i;
          break;
        }
      }
      if (bar == std::string::npos) throw ParseError(0, "bad cut slot " + str);
      v.cuts.emplace_back(
          std::make_pair(parse_point(body.substr(0, bar)), parse_point(body.substr(bar + 1))));
    }
  }
  for (const auto& s : j.at("ctx")) v.ctx.push_back(parse_point(s.get<std::string>()));
  return v;
}

}  // namespace goimall
