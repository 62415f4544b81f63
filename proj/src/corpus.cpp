#include "goimall/corpus.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace goimall {

namespace {

struct Entry {
  ProofPtr p;
  Sequent seq;
  bool top_exch;
  int n_exch;
};

std::vector<std::vector<std::pair<int, int>>> enumerate_sigmas(const std::vector<CutPair>& t1,
                                                               const std::vector<CutPair>& t2) {
  // all matchings of formula-equal entries, including the empty one
  std::vector<std::vector<std::pair<int, int>>> out = {{}};
  std::function<void(size_t, std::vector<int>&, std::vector<std::pair<int, int>>&)> go =
      [&](size_t l, std::vector<int>& used2, std::vector<std::pair<int, int>>& acc) {
        if (l == t1.size()) {
          if (!acc.empty()) out.push_back(acc);
          return;
        }
        go(l + 1, used2, acc);  // leave entry l unmatched
        for (size_t r = 0; r < t2.size(); ++r) {
          if (used2[r]) continue;
          if (!equal(t1[l].left, t2[r].left) || !equal(t1[l].right, t2[r].right)) continue;
          used2[r] = 1;
          acc.emplace_back(static_cast<int>(l), static_cast<int>(r));
          go(l + 1, used2, acc);
          acc.pop_back();
          used2[r] = 0;
        }
      };
  std::vector<int> used2(t2.size(), 0);
  std::vector<std::pair<int, int>> acc;
  go(0, used2, acc);
  return out;
}

}  // namespace

std::vector<ProofPtr> enumerate_proofs(const CorpusOptions& opts) {
  std::vector<FormulaPtr> pool = opts.pool;
  if (pool.empty()) pool = {f_one(), f_bot()};
  std::vector<std::vector<Entry>> table(static_cast<size_t>(opts.max_size) + 1);
  auto add = [&](int size, ProofPtr p, int n_exch) {
    Checked c = check_proof(p);
    table[static_cast<size_t>(size)].push_back({p, c.seq, p->r == Rule::Exch, n_exch});
  };
  // leaves
  for (const auto& f : pool) add(1, p_ax(f), 0);
  if (opts.unit_rules) {
    add(1, p_one(), 0);
    std::vector<std::vector<FormulaPtr>> ctxs = {{}};
    for (int len = 1; len <= opts.top_ctx_max; ++len) {
      std::vector<std::vector<FormulaPtr>> next;
      for (const auto& c : ctxs)
        if (static_cast<int>(c.size()) == len - 1)
          for (const auto& f : pool) {
            auto c2 = c;
            c2.push_back(f);
            next.push_back(c2);
          }
      for (auto& c : next) ctxs.push_back(std::move(c));
    }
    for (const auto& c : ctxs) add(1, p_top(c), 0);
  }
  for (int n = 2; n <= opts.max_size; ++n) {
    // unary rules
    for (const Entry& e : table[static_cast<size_t>(n - 1)]) {
      if (opts.unit_rules) add(n, p_bot(e.p), e.n_exch);
      if (e.seq.ctx.size() >= 2) add(n, p_par(e.p), e.n_exch);
      for (const auto& g : pool) {
        add(n, p_plus1(e.p, g), e.n_exch);
        add(n, p_plus2(e.p, g), e.n_exch);
      }
      if ((opts.allow_exch_chain || !e.top_exch) && e.n_exch < opts.max_exch) {
        int m = static_cast<int>(e.seq.ctx.size());
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j) add(n, p_ex(e.p, i, j), e.n_exch + 1);
      }
    }
    // binary rules
    for (int n1 = 1; n1 <= n - 2; ++n1) {
      int n2 = n - 1 - n1;
      for (const Entry& e1 : table[static_cast<size_t>(n1)])
        for (const Entry& e2 : table[static_cast<size_t>(n2)]) {
          int ne = e1.n_exch + e2.n_exch;
          if (ne > opts.max_exch) continue;
          add(n, p_tensor(e1.p, e2.p), ne);
          if (equal(dual(e1.seq.ctx.back()), e2.seq.ctx.back())) add(n, p_cut(e1.p, e2.p), ne);
          bool ctx_eq = e1.seq.ctx.size() == e2.seq.ctx.size();
          for (size_t i = 0; ctx_eq && i + 1 < e1.seq.ctx.size(); ++i)
            ctx_eq = equal(e1.seq.ctx[i], e2.seq.ctx[i]);
          if (ctx_eq)
            for (auto& sg : enumerate_sigmas(e1.seq.cuts, e2.seq.cuts))
              add(n, p_with(e1.p, e2.p, sg), ne);
        }
    }
  }
  std::vector<ProofPtr> out;
  for (const auto& row : table)
    for (const auto& e : row) out.push_back(e.p);
  return out;
}

std::vector<IndexedFamily> sample_families(const Relation& rel, const std::vector<Atom>& atoms,
                                           int max_count, uint64_t seed) {
  std::vector<IndexedFamily> out;
  out.push_back({});  // the empty family
  if (rel.empty() || max_count <= 1) return out;
  // count the total number of families to decide exhaustive vs sampled
  double total = 0;
  std::vector<std::vector<int>> subsets;
  int na = static_cast<int>(atoms.size());
  for (int mask = 1; mask < (1 << na); ++mask) {
    std::vector<int> s;
    for (int b = 0; b < na; ++b)
      if (mask & (1 << b)) s.push_back(b);
    subsets.push_back(s);
    double v = 1;
    for (size_t i = 0; i < s.size(); ++i) v *= static_cast<double>(rel.size());
    total += v;
  }
  if (total <= static_cast<double>(max_count - 1)) {
    for (const auto& s : subsets) {
      std::vector<size_t> idx(s.size(), 0);
      for (;;) {
        IndexedFamily f;
        for (size_t i = 0; i < s.size(); ++i) {
          const Atom& a = atoms[static_cast<size_t>(s[i])];
          f.J.insert(a);
          f.v[a] = rel[idx[i]];
        }
        out.push_back(std::move(f));
        size_t k = 0;
        for (; k < idx.size(); ++k) {
          if (++idx[k] < rel.size()) break;
          idx[k] = 0;
        }
        if (k == idx.size()) break;
      }
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::set<std::string> seen;
  int guard = max_count * 50;
  while (static_cast<int>(out.size()) < max_count && guard-- > 0) {
    const auto& s = subsets[rng() % subsets.size()];
    IndexedFamily f;
    std::string key;
    for (int b : s) {
      const Atom& a = atoms[static_cast<size_t>(b)];
      size_t i = rng() % rel.size();
      f.J.insert(a);
      f.v[a] = rel[i];
      key += a + ":" + std::to_string(i) + ";";
    }
    if (seen.insert(key).second) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace goimall
