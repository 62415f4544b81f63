// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.

#include <atomic>
#include <chrono>
#include <iostream>
#include <functional>
#include <mutex>
#include <thread>

#include "helpers.hpp"
#include "goimall/corpus.hpp"
#include "goimall/goi.hpp"
#include "goimall/pinj.hpp"

using namespace goimall;
using Clock = std::chrono::steady_clock;

namespace {

std::atomic<long> g_divergences{0};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool mentions_divergence(const Report& r) {
  for (const auto& l : r.lines)
    if (l.find("token budget exceeded") != std::string::npos) return true;
  return false;
}

struct Corpus {
  std::vector<ProofPtr> proofs;      // full corpus, unit rules included
  std::vector<ProofPtr> goi_proofs;  // the paper-interpretable fragment
  std::vector<Atom> atoms = {"1", "2", "3", "4"};
  int fams_per_proof = 100;
  uint64_t seed = 20260810;
};

Corpus the_corpus;

void parallel_over(const std::vector<ProofPtr>& proofs,
                   const std::function<void(const ProofPtr&)>& fn) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= proofs.size()) return;
      fn(proofs[i]);
    }
  };
  std::vector<std::thread> ts;
  for (unsigned t = 0; t < n; ++t) ts.emplace_back(work);
  for (auto& t : ts) t.join();
}

std::vector<IndexedFamily> families_for(const ProofPtr& p, const Relation& rel) {
  uint64_t seed = the_corpus.seed ^ fnv1a(to_string(p));
  return sample_families(rel, the_corpus.atoms, the_corpus.fams_per_proof, seed);
}

bool criterion1(std::string& detail) {
  auto t0 = Clock::now();
  ProofPtr p = testing::pi1();
  Checked c = check_proof(p);
  Relation rel = interp_with_cuts(c);
  if (rel.size() != 2) {
    detail = "|pi1| has " + std::to_string(rel.size()) + " points";
    return false;
  }
  MorphismValue e1 = execute_point(c, testing::nu(1));
  MorphismValue e2 = execute_point(c, testing::nu(2));
  Checked ax = check_proof(p_ax(f_one()));
  MorphismValue sym = execute_point(ax, PointVec{{}, {pt_star(), pt_star()}});
  if (e1.zero || e1.table != sym.table) {
    detail = "Ex_1 is not the axiom symmetry";
    return false;
  }
  if (!e2.zero) {
    detail = "Ex_2 is not ZERO";
    return false;
  }
  auto steps = normalize_lifted(p, testing::prologue_family());
  if (steps.size() != 2 || steps[0].redex.kind != RK::WithPlus1 ||
      steps[1].redex.kind != RK::AxCut) {
    detail = "trace is not WithPlus(1); AxCut";
    return false;
  }
  if (!(steps[0].fam_after.J == IndexSet{"1"}) || !(steps[1].fam_after.J == IndexSet{"1"})) {
    detail = "J chain is not {1,2} -> {1} -> {1}";
    return false;
  }
  Checked fin = check_proof(steps[1].after);
  if (!fin.seq.cuts.empty() || to_string(fin.seq) != "|- [] bot, 1") {
    detail = "final proof is not the cut-free axiom sequent";
    return false;
  }
  MorphismValue d = denotation_morphism(fin, steps[1].fam_after.v.at("1"));
  if (d.table != e1.table) {
    detail = "final denotation differs from Ex_1";
    return false;
  }
  Report rep = verify_main_theorem(p, testing::prologue_family());
  if (!rep.pass) {
    detail = "verify_main_theorem FAIL";
    return false;
  }
  double dt = seconds_since(t0);
  detail = "trace pi1 > pi2 > pi3, J {1,2}->{1}->{1}, " + std::to_string(dt) + "s";
  return dt < 1.0;
}

bool criterion2(std::string& detail) {
  auto t0 = Clock::now();
  Checked c = check_proof(testing::exzio_proof());
  MorphismValue v = execute_point(c, testing::exzio_point());
  double dt = seconds_since(t0);
  detail = "ZERO on " + std::to_string(v.ports.size()) + " ports, " + std::to_string(dt) + "s";
  return v.zero && v.ports.size() == 3 && dt < 1.0;
}

bool criterion3(std::string& detail) {
  auto t0 = Clock::now();
  std::atomic<long> fams{0}, fails{0}, cascades{0};
  std::mutex mu;
  std::vector<std::string> witnesses;
  parallel_over(the_corpus.goi_proofs, [&](const ProofPtr& p) {
    try {
      LiftChain chain(p);
      for (const auto& fam : families_for(p, chain.relation(0))) {
        Report rep = verify_with_chain(chain, fam);
        ++fams;
        for (const auto& l : rep.lines)
          if (l.find("cascaded past") != std::string::npos) ++cascades;
        if (mentions_divergence(rep)) ++g_divergences;
        if (!rep.pass) {
          ++fails;
          std::lock_guard<std::mutex> lk(mu);
          if (witnesses.size() < 5) witnesses.push_back(to_string(p) + " " + json_family(fam));
        }
      }
    } catch (const std::exception& e) {
      ++fails;
      std::lock_guard<std::mutex> lk(mu);
      if (witnesses.size() < 5) witnesses.push_back(to_string(p) + " exception " + e.what());
    }
  });
  double dt = seconds_since(t0);
  detail = std::to_string(the_corpus.goi_proofs.size()) + " proofs, " + std::to_string(fams.load()) +
           " families, " + std::to_string(fails.load()) + " failures, " +
           std::to_string(cascades.load()) + " cascade notes, " + std::to_string(dt) + "s";
  for (const auto& w : witnesses) detail += "\n      witness: " + w;
  return fails == 0 && dt < 600.0;
}

bool criterion4(std::string& detail) {
  auto t0 = Clock::now();
  std::atomic<long> fams{0}, fails{0};
  parallel_over(the_corpus.proofs, [&](const ProofPtr& p) {
    Checked c = check_proof(p);
    Relation rel = interp_with_cuts(c);
    for (const auto& fam : families_for(p, rel)) {
      ++fams;
      try {
        IProofPtr rho = fl_forward(c, fam);
        IChecked rc = check_indexed_proof(rho);
        if (!(rc.seq.J == fam.J)) throw std::runtime_error("domain mismatch");
        if (to_string(strip(rho)) != to_string(p))
          throw std::runtime_error("empty restriction differs");
        auto [fam2, p2] = fl_backward(rc);
        if (to_string(p2) != to_string(p) || !(fam2.J == fam.J))
          throw std::runtime_error("round trip differs");
        for (const auto& j : fam.J)
          if (cmp(fam2.v.at(j), fam.v.at(j)) != 0) throw std::runtime_error("family differs");
      } catch (const std::exception&) {
        ++fails;
      }
    }
  });
  double dt = seconds_since(t0);
  detail = std::to_string(fams.load()) + " round trips, " + std::to_string(fails.load()) +
           " failures, " + std::to_string(dt) + "s";
  return fails == 0 && dt < 300.0;
}

bool criterion5(std::string& detail) {
  auto t0 = Clock::now();
  std::atomic<long> checks{0}, fails{0};
  parallel_over(the_corpus.proofs, [&](const ProofPtr& p) {
    try {
      Checked c = check_proof(p);
      CtxRelation lhs = execute_cuts_rel(interp_with_cuts(c));
      CtxRelation rhs = interp_denotational(c);
      ++checks;
      bool same = lhs.size() == rhs.size();
      for (size_t i = 0; same && i < lhs.size(); ++i) same = cmp(lhs[i], rhs[i]) == 0;
      if (!same) {
        ++fails;
        return;
      }
      for (const auto& r : find_redexes(c)) {
        ProofPtr q = reduce_step(p, r);
        CtxRelation after = interp_denotational(check_proof(q));
        ++checks;
        bool inv = rhs.size() == after.size();
        for (size_t i = 0; inv && i < rhs.size(); ++i) inv = cmp(rhs[i], after[i]) == 0;
        if (!inv) ++fails;
      }
    } catch (const std::exception&) {
      ++fails;
    }
  });
  double dt = seconds_since(t0);
  detail = std::to_string(checks.load()) + " checks, " + std::to_string(fails.load()) +
           " failures, " + std::to_string(dt) + "s";
  return fails == 0;
}

bool criterion6(std::string& detail) {
  auto t0 = Clock::now();
  AxiomSuiteResult ax = run_axiom_suite(1000, the_corpus.seed);
  bool gy = check_generalized_yanking(1000, the_corpus.seed);
  bool tz = check_tracing_zero(4);
  bool vz = check_vanishing_with_zero(1000, the_corpus.seed);
  // zero convergence on random mismatched proof pairs
  std::vector<std::pair<const ProofPtr*, PointVec>> pool;
  for (const auto& p : the_corpus.goi_proofs) {
    Checked c = check_proof(p);
    Relation rel = interp_with_cuts(c);
    for (const auto& x : rel) {
      bool live = true;  // only points whose own pairs all match can feed a new cut
      for (const auto& s : x.cuts)
        if (s && !equal(s->first, s->second)) live = false;
      if (live) pool.emplace_back(&p, x);
      if (pool.size() > 4000) break;
    }
    if (pool.size() > 4000) break;
  }
  std::mt19937_64 rng(the_corpus.seed);
  long done = 0, zc_fail = 0;
  std::map<std::string, Checked> cache;
  auto checked_of = [&](const ProofPtr& p) -> const Checked& {
    std::string k = to_string(p);
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, check_proof(p)).first;
    return it->second;
  };
  int guard = 40000;
  while (done < 200 && guard-- > 0) {
    const auto& [p1, x1] = pool[rng() % pool.size()];
    const auto& [p2, x2] = pool[rng() % pool.size()];
    if (equal(x1.ctx.back(), x2.ctx.back())) continue;
    try {
      MorphismValue v = execute_cut_pair(checked_of(*p1), x1, checked_of(*p2), x2);
      if (!v.zero) ++zc_fail;
    } catch (const DivergentError&) {
      ++g_divergences;
      ++zc_fail;
    }
    ++done;
  }
  double dt = seconds_since(t0);
  int npass = 0;
  for (const auto& [_, ok] : ax.families) npass += ok ? 1 : 0;
  detail = std::to_string(npass) + "/7 axiom families, gen-yanking " + (gy ? "ok" : "FAIL") +
           ", tracing-zero " + (tz ? "ok" : "FAIL") + ", vanishing-with-zero " +
           (vz ? "ok" : "FAIL") + ", zero-convergence " + std::to_string(done - zc_fail) + "/" +
           std::to_string(done) + ", " + std::to_string(dt) + "s";
  return ax.pass && gy && tz && vz && zc_fail == 0 && done >= 200 && dt < 120.0;
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  CorpusOptions opts;
  opts.max_size = 7;
  opts.top_ctx_max = 0;
  the_corpus.proofs = enumerate_proofs(opts);
  CorpusOptions goi_opts = opts;
  goi_opts.unit_rules = false;  // the fragment Def. (endopartia) interprets
  the_corpus.goi_proofs = enumerate_proofs(goi_opts);
  std::cout << "corpus: " << the_corpus.proofs.size() << " proofs of size <= " << opts.max_size
            << " (" << the_corpus.goi_proofs.size()
            << " over the axiom-based GoI fragment) in " << seconds_since(t0) << "s\n";

  struct Crit {
    const char* name;
    bool (*fn)(std::string&);
  };
  const Crit crits[] = {
      {"criterion 1 (prologue reproduction)", criterion1},
      {"criterion 2 (zero action example)", criterion2},
      {"criterion 3 (main theorem suite)", criterion3},
      {"criterion 4 (fundamental lemma round trip)", criterion4},
      {"criterion 5 (relational coherence)", criterion5},
      {"criterion 6 (trace axiom suite)", criterion6},
  };
  bool all = true;
  for (const auto& cr : crits) {
    std::string detail;
    bool ok = false;
    try {
      ok = cr.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    all = all && ok;
    std::cout << cr.name << ": " << (ok ? "PASS" : "FAIL") << " (" << detail << ")\n";
  }
  bool c7 = g_divergences.load() == 0;
  all = all && c7;
  std::cout << "criterion 7 (nilpotency, no DIVERGENT): " << (c7 ? "PASS" : "FAIL") << " ("
            << g_divergences.load() << " divergences)\n";
  std::cout << (all ? "ALL PASS" : "FAILURES") << " in " << seconds_since(t0) << "s\n";
  return all ? 0 : 1;
}
