#include "goimall/proof.hpp"

#include <cctype>

namespace goimall {

namespace {
ProofPtr mk(Proof&& pr) { return std::make_shared<Proof>(std::move(pr)); }
}  // namespace

ProofPtr p_ax(FormulaPtr f) { return mk({Rule::Ax, std::move(f), {}, nullptr, nullptr, {}, 0, 0}); }
ProofPtr p_one() { return mk({Rule::OneI, nullptr, {}, nullptr, nullptr, {}, 0, 0}); }
ProofPtr p_top(std::vector<FormulaPtr> ctx) {
  return mk({Rule::TopI, nullptr, std::move(ctx), nullptr, nullptr, {}, 0, 0});
}
ProofPtr p_bot(ProofPtr p) { return mk({Rule::BotI, nullptr, {}, std::move(p), nullptr, {}, 0, 0}); }
ProofPtr p_tensor(ProofPtr p, ProofPtr q) {
  return mk({Rule::TensorI, nullptr, {}, std::move(p), std::move(q), {}, 0, 0});
}
ProofPtr p_par(ProofPtr p) { return mk({Rule::ParI, nullptr, {}, std::move(p), nullptr, {}, 0, 0}); }
ProofPtr p_cut(ProofPtr p, ProofPtr q) {
  return mk({Rule::CutI, nullptr, {}, std::move(p), std::move(q), {}, 0, 0});
}
ProofPtr p_with(ProofPtr p, ProofPtr q, std::vector<std::pair<int, int>> sigma) {
  return mk({Rule::WithI, nullptr, {}, std::move(p), std::move(q), std::move(sigma), 0, 0});
}
ProofPtr p_plus1(ProofPtr p, FormulaPtr g) {
  return mk({Rule::Plus1I, std::move(g), {}, std::move(p), nullptr, {}, 0, 0});
}
ProofPtr p_plus2(ProofPtr p, FormulaPtr f) {
  return mk({Rule::Plus2I, std::move(f), {}, std::move(p), nullptr, {}, 0, 0});
}
ProofPtr p_ex(ProofPtr p, int i, int j) {
  return mk({Rule::Exch, nullptr, {}, std::move(p), nullptr, {}, i, j});
}

int proof_size(const ProofPtr& p) {
  int n = 1;
  if (p->p) n += proof_size(p->p);
  if (p->q) n += proof_size(p->q);
  return n;
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Ax: return "ax";
    case Rule::OneI: return "one";
    case Rule::TopI: return "top";
    case Rule::BotI: return "bot";
    case Rule::TensorI: return "tensor";
    case Rule::ParI: return "par";
    case Rule::CutI: return "cut";
    case Rule::WithI: return "with";
    case Rule::Plus1I: return "plus1";
    case Rule::Plus2I: return "plus2";
    case Rule::Exch: return "ex";
  }
  return "?";
}

std::string path_string(const Path& path) {
  if (path.empty()) return "/";
  std::string s;
  for (int i : path) s += "/" + std::to_string(i);
  return s;
}

std::string to_string(const ProofPtr& p) {
  switch (p->r) {
    case Rule::Ax: return "(ax " + to_string(p->f) + ")";
    case Rule::OneI: return "(one)";
    case Rule::TopI: {
      std::string s = "(top (";
      for (size_t i = 0; i < p->top_ctx.size(); ++i) {
        if (i) s += " ";
        s += to_string(p->top_ctx[i]);
      }
      return s + "))";
    }
    case Rule::BotI: return "(bot " + to_string(p->p) + ")";
    case Rule::TensorI: return "(tensor " + to_string(p->p) + " " + to_string(p->q) + ")";
    case Rule::ParI: return "(par " + to_string(p->p) + ")";
    case Rule::CutI: return "(cut " + to_string(p->p) + " " + to_string(p->q) + ")";
    case Rule::WithI: {
      std::string s = "(with " + to_string(p->p) + " " + to_string(p->q) + " (";
      for (size_t i = 0; i < p->sigma.size(); ++i) {
        if (i) s += " ";
        s += "(" + std::to_string(p->sigma[i].first) + " " + std::to_string(p->sigma[i].second) + ")";
      }
      return s + "))";
    }
    case Rule::Plus1I: return "(plus1 " + to_string(p->p) + " " + to_string(p->f) + ")";
    case Rule::Plus2I: return "(plus2 " + to_string(p->p) + " " + to_string(p->f) + ")";
    case Rule::Exch:
      return "(ex " + to_string(p->p) + " " + std::to_string(p->e1) + " " + std::to_string(p->e2) + ")";
  }
  throw std::logic_error("bad rule");
}

namespace {

void skip_ws(const std::string& s, size_t& p) {
  while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
}

void expect(const std::string& s, size_t& p, char c) {
  skip_ws(s, p);
  if (p >= s.size() || s[p] != c) throw ParseError(p, std::string("expected '") + c + "'");
  ++p;
}

std::string read_word(const std::string& s, size_t& p) {
  skip_ws(s, p);
  size_t start = p;
  while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])))) ++p;
  if (p == start) throw ParseError(p, "expected rule name");
  return s.substr(start, p - start);
}

int read_int(const std::string& s, size_t& p) {
  skip_ws(s, p);
  size_t start = p;
  while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
  if (p == start) throw ParseError(p, "expected number");
  return std::stoi(s.substr(start, p - start));
}

ProofPtr parse_proof_at(const std::string& s, size_t& p) {
  expect(s, p, '(');
  std::string w = read_word(s, p);
  ProofPtr res;
  if (w == "ax") {
    res = p_ax(parse_formula_at(s, p));
  } else if (w == "one") {
    res = p_one();
  } else if (w == "top") {
    expect(s, p, '(');
    std::vector<FormulaPtr> ctx;
    skip_ws(s, p);
    while (p < s.size() && s[p] != ')') {
      ctx.push_back(parse_formula_at(s, p));
      skip_ws(s, p);
    }
    expect(s, p, ')');
    res = p_top(std::move(ctx));
  } else if (w == "bot") {
    res = p_bot(parse_proof_at(s, p));
  } else if (w == "tensor") {
    ProofPtr a = parse_proof_at(s, p);
    res = p_tensor(a, parse_proof_at(s, p));
  } else if (w == "par") {
    res = p_par(parse_proof_at(s, p));
  } else if (w == "cut") {
    ProofPtr a = parse_proof_at(s, p);
    res = p_cut(a, parse_proof_at(s, p));
  } else if (w == "with") {
    ProofPtr a = parse_proof_at(s, p);
    ProofPtr b = parse_proof_at(s, p);
    expect(s, p, '(');
    std::vector<std::pair<int, int>> sg;
    skip_ws(s, p);
    while (p < s.size() && s[p] != ')') {
      expect(s, p, '(');
      int i = read_int(s, p);
      int j = read_int(s, p);
      expect(s, p, ')');
      sg.emplace_back(i, j);
      skip_ws(s, p);
    }
    expect(s, p, ')');
    res = p_with(a, b, std::move(sg));
  } else if (w == "plus1") {
    ProofPtr a = parse_proof_at(s, p);
    res = p_plus1(a, parse_formula_at(s, p));
  } else if (w == "plus2") {
    ProofPtr a = parse_proof_at(s, p);
    res = p_plus2(a, parse_formula_at(s, p));
  } else if (w == "ex") {
    ProofPtr a = parse_proof_at(s, p);
    int i = read_int(s, p);
    int j = read_int(s, p);
    res = p_ex(a, i, j);
  } else {
    throw ParseError(p, "unknown rule '" + w + "'");
  }
  expect(s, p, ')');
  return res;
}

}  // namespace

ProofPtr parse_proof(const std::string& text) {
  size_t p = 0;
  ProofPtr r = parse_proof_at(text, p);
  skip_ws(text, p);
  if (p != text.size()) throw ParseError(p, "trailing input");
  return r;
}

std::string to_string(const Sequent& s) {
  std::string out = "|- [";
  for (size_t i = 0; i < s.cuts.size(); ++i) {
    if (i) out += ", ";
    out += "(" + to_string(s.cuts[i].left) + ", " + to_string(s.cuts[i].right) + ")";
  }
  out += "] ";
  for (size_t i = 0; i < s.ctx.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.ctx[i]);
  }
  return out;
}

WithLayout make_with_layout(size_t n1, size_t n2, const std::vector<std::pair<int, int>>& sigma,
                            const Path& path) {
  WithLayout lay;
  std::vector<int> sig1(n1, -1), sig2(n2, -1);
  for (size_t k = 0; k < sigma.size(); ++k) {
    auto [l, r] = sigma[k];
    if (l < 0 || static_cast<size_t>(l) >= n1 || r < 0 || static_cast<size_t>(r) >= n2)
      throw CheckError(path, "sigma index out of range");
    if (sig1[static_cast<size_t>(l)] != -1 || sig2[static_cast<size_t>(r)] != -1)
      throw CheckError(path, "sigma index used twice");
    sig1[static_cast<size_t>(l)] = static_cast<int>(k);
    sig2[static_cast<size_t>(r)] = static_cast<int>(k);
  }
  lay.slot_of_p.assign(n1, -1);
  lay.slot_of_q.assign(n2, -1);
  int slot = 0;
  for (size_t i = 0; i < n1; ++i)
    if (sig1[i] == -1) {
      lay.slot_of_p[i] = slot++;
      ++lay.d1;
    }
  for (size_t i = 0; i < n2; ++i)
    if (sig2[i] == -1) {
      lay.slot_of_q[i] = slot++;
      ++lay.d2;
    }
  for (const auto& [l, r] : sigma) {
    lay.slot_of_p[static_cast<size_t>(l)] = slot;
    lay.slot_of_q[static_cast<size_t>(r)] = slot;
    ++slot;
    ++lay.s;
  }
  return lay;
}

const Checked& Checked::at(const Path& path) const {
  const Checked* c = this;
  for (int i : path) {
    if (i < 0 || static_cast<size_t>(i) >= c->kids.size()) throw std::out_of_range("bad path");
    c = &c->kids[static_cast<size_t>(i)];
  }
  return *c;
}

namespace {

Checked check_at(const ProofPtr& p, Path& path) {
  Checked c;
  c.node = p;
  auto fail = [&](const std::string& m) -> void { throw CheckError(path, m); };
  auto kid = [&](const ProofPtr& sub, int idx) {
    path.push_back(idx);
    c.kids.push_back(check_at(sub, path));
    path.pop_back();
  };
  switch (p->r) {
    case Rule::Ax:
      c.seq.ctx = {p->f, dual(p->f)};
      break;
    case Rule::OneI:
      c.seq.ctx = {f_one()};
      break;
    case Rule::TopI:
      c.seq.ctx = p->top_ctx;
      c.seq.ctx.push_back(f_top());
      break;
    case Rule::BotI: {
      kid(p->p, 0);
      c.seq = c.kids[0].seq;
      c.seq.ctx.push_back(f_bot());
      break;
    }
    case Rule::ParI: {
      kid(p->p, 0);
      const Sequent& s = c.kids[0].seq;
      if (s.ctx.size() < 2) fail("par premise needs two formulas");
      c.seq.cuts = s.cuts;
      c.seq.ctx.assign(s.ctx.begin(), s.ctx.end() - 2);
      c.seq.ctx.push_back(f_par(s.ctx[s.ctx.size() - 2], s.ctx.back()));
      break;
    }
    case Rule::TensorI: {
      kid(p->p, 0);
      kid(p->q, 1);
      const Sequent& s1 = c.kids[0].seq;
      const Sequent& s2 = c.kids[1].seq;
      if (s1.ctx.empty() || s2.ctx.empty()) fail("tensor premise needs a principal formula");
      c.seq.cuts = s1.cuts;
      c.seq.cuts.insert(c.seq.cuts.end(), s2.cuts.begin(), s2.cuts.end());
      c.seq.ctx.assign(s1.ctx.begin(), s1.ctx.end() - 1);
      c.seq.ctx.insert(c.seq.ctx.end(), s2.ctx.begin(), s2.ctx.end() - 1);
      c.seq.ctx.push_back(f_tensor(s1.ctx.back(), s2.ctx.back()));
      break;
    }
    case Rule::CutI: {
      kid(p->p, 0);
      kid(p->q, 1);
      const Sequent& s1 = c.kids[0].seq;
      const Sequent& s2 = c.kids[1].seq;
      if (s1.ctx.empty() || s2.ctx.empty()) fail("cut premise needs a principal formula");
      if (!equal(dual(s1.ctx.back()), s2.ctx.back())) fail("cut formulas not dual");
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
      const Sequent& s1 = c.kids[0].seq;
      const Sequent& s2 = c.kids[1].seq;
      if (s1.ctx.empty() || s2.ctx.empty()) fail("with premise needs a principal formula");
      if (s1.ctx.size() != s2.ctx.size()) fail("with premise contexts differ");
      for (size_t i = 0; i + 1 < s1.ctx.size(); ++i)
        if (!equal(s1.ctx[i], s2.ctx[i])) fail("with premise contexts differ");
      size_t n1 = s1.cuts.size(), n2 = s2.cuts.size();
      WithLayout lay = make_with_layout(n1, n2, p->sigma, path);
      for (const auto& [l, r] : p->sigma)
        if (!equal(s1.cuts[static_cast<size_t>(l)].left, s2.cuts[static_cast<size_t>(r)].left) ||
            !equal(s1.cuts[static_cast<size_t>(l)].right, s2.cuts[static_cast<size_t>(r)].right))
          fail("sigma pairs distinct cut entries");
      // conclusion stack order: [Delta1, Delta2, Sigma]
      c.seq.cuts.assign(static_cast<size_t>(lay.d1 + lay.d2 + lay.s), {});
      for (size_t i = 0; i < n1; ++i)
        c.seq.cuts[static_cast<size_t>(lay.slot_of_p[i])] = s1.cuts[i];
      for (size_t i = 0; i < n2; ++i)
        if (lay.slot_of_q[i] < lay.d1 + lay.d2)
          c.seq.cuts[static_cast<size_t>(lay.slot_of_q[i])] = s2.cuts[i];
      c.with_layout = std::move(lay);
      c.seq.ctx.assign(s1.ctx.begin(), s1.ctx.end() - 1);
      c.seq.ctx.push_back(f_with(s1.ctx.back(), s2.ctx.back()));
      break;
    }
    case Rule::Plus1I: {
      kid(p->p, 0);
      const Sequent& s = c.kids[0].seq;
      if (s.ctx.empty()) fail("plus premise needs a principal formula");
      c.seq.cuts = s.cuts;
      c.seq.ctx.assign(s.ctx.begin(), s.ctx.end() - 1);
      c.seq.ctx.push_back(f_plus(s.ctx.back(), p->f));
      break;
    }
    case Rule::Plus2I: {
      kid(p->p, 0);
      const Sequent& s = c.kids[0].seq;
      if (s.ctx.empty()) fail("plus premise needs a principal formula");
      c.seq.cuts = s.cuts;
      c.seq.ctx.assign(s.ctx.begin(), s.ctx.end() - 1);
      c.seq.ctx.push_back(f_plus(p->f, s.ctx.back()));
      break;
    }
    case Rule::Exch: {
      kid(p->p, 0);
      const Sequent& s = c.kids[0].seq;
      int n = static_cast<int>(s.ctx.size());
      if (p->e1 < 0 || p->e2 < 0 || p->e1 >= n || p->e2 >= n || p->e1 == p->e2)
        fail("exchange positions invalid");
      c.seq = s;
      std::swap(c.seq.ctx[static_cast<size_t>(p->e1)], c.seq.ctx[static_cast<size_t>(p->e2)]);
      break;
    }
  }
  return c;
}

}  // namespace

Checked check_proof(const ProofPtr& p) {
  Path path;
  return check_at(p, path);
}

}  // namespace goimall
