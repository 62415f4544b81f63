#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "goimall/corpus.hpp"
#include "goimall/goi.hpp"
#include "goimall/pinj.hpp"
#include "json.hpp"

using namespace goimall;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IndexedFamily load_family(const std::string& path) { return family_from_json(read_file(path)); }

Checked load_checked(const std::string& path) { return check_proof(parse_proof(read_file(path))); }

int run_check(const std::string& file, bool json) {
  Checked c = load_checked(file);
  if (json) {
    nlohmann::json j;
    j["ok"] = true;
    j["sequent"] = to_string(c.seq);
    j["size"] = proof_size(c.node);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << to_string(c.seq) << "\n";
  }
  return 0;
}

int run_interp(const std::string& file, const std::string& mode, bool json) {
  Checked c = load_checked(file);
  if (mode == "cutlist") {
    Relation r = interp_with_cuts(c);
    if (json) {
      std::cout << json_relation(r) << "\n";
    } else {
      for (const auto& v : r) std::cout << to_string(v) << "\n";
      std::cout << r.size() << " point(s)\n";
    }
  } else if (mode == "denot") {
    CtxRelation r = interp_denotational(c);
    if (json) {
      std::cout << json_ctx_relation(r) << "\n";
    } else {
      for (const auto& v : r) {
        for (size_t i = 0; i < v.size(); ++i) std::cout << (i ? ", " : "(") << to_string(v[i]);
        std::cout << ")\n";
      }
      std::cout << r.size() << " point(s)\n";
    }
  } else {
    throw CLI::ValidationError("--mode must be cutlist or denot");
  }
  return 0;
}

int run_translate(const std::string& file, const std::string& fam_path, bool json) {
  Checked c = load_checked(file);
  IndexedFamily fam = load_family(fam_path);
  ISequent s = translate_sequent(c.seq, fam);
  IProofPtr rho = fl_forward(c, fam);
  IChecked rc = check_indexed_proof(rho);
  if (json) {
    nlohmann::json j;
    j["sequent"] = to_string(s);
    j["proof_conclusion"] = to_string(rc.seq);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << to_string(s) << "\n";
  }
  return 0;
}

int run_normalize(const std::string& file, const std::string& fam_path, bool trace, bool json) {
  ProofPtr p = parse_proof(read_file(file));
  check_proof(p);
  nlohmann::json out = nlohmann::json::array();
  if (fam_path.empty()) {
    auto steps = normalize(p);
    for (size_t k = 0; k < steps.size(); ++k) {
      std::ostringstream line;
      line << "step " << (k + 1) << ": " << kind_string(steps[k].first) << "@"
           << path_string(steps[k].first.path);
      if (trace && !json) std::cout << line.str() << "\n";
      if (json) out.push_back(line.str());
    }
    ProofPtr fin = steps.empty() ? p : steps.back().second;
    if (json) {
      nlohmann::json j;
      j["steps"] = out;
      j["normal_form"] = to_string(fin);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << to_string(fin) << "\n";
    }
    return 0;
  }
  IndexedFamily fam = load_family(fam_path);
  auto steps = normalize_lifted(p, fam);
  IndexSet curJ = fam.J;
  for (size_t k = 0; k < steps.size(); ++k) {
    const LiftStep& s = steps[k];
    std::ostringstream line;
    line << "step " << (k + 1) << ": " << kind_string(s.redex) << "@" << path_string(s.redex.path)
         << "  J: " << to_string(curJ) << " -> " << to_string(s.fam_after.J)
         << "  dropped: " << to_string(s.dropped);
    if (trace && !json) std::cout << line.str() << "\n";
    if (json) out.push_back(line.str());
    curJ = s.fam_after.J;
  }
  ProofPtr fin = steps.empty() ? p : steps.back().after;
  IndexedFamily ffin = steps.empty() ? fam : steps.back().fam_after;
  if (json) {
    nlohmann::json j;
    j["steps"] = out;
    j["normal_form"] = to_string(fin);
    j["family"] = nlohmann::json::parse(json_family(ffin));
    std::cout << j.dump() << "\n";
  } else {
    std::cout << to_string(fin) << "\n";
    std::cout << json_family(ffin) << "\n";
  }
  return 0;
}

int run_exec(const std::string& file, const std::string& fam_path, bool json, int jobs) {
  Checked c = load_checked(file);
  IndexedFamily fam = load_family(fam_path);
  auto ex = execute_family(c, fam, env_budget(), jobs);
  if (json) {
    nlohmann::json j;
    for (const auto& [a, v] : ex) {
      if (v.zero) {
        j[a] = "ZERO";
      } else {
        nlohmann::json t = nlohmann::json::array();
        for (const auto& [s, d] : v.table) t.push_back(to_string(s) + " -> " + to_string(d));
        j[a] = t;
      }
    }
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& [a, v] : ex) {
      std::cout << "index " << a << ":\n" << to_string(v);
    }
  }
  return 0;
}

int run_verify_one(const std::string& file, const std::string& fam_path, bool json, int jobs) {
  ProofPtr p = parse_proof(read_file(file));
  IndexedFamily fam = load_family(fam_path);
  Report rep = verify_main_theorem(p, fam, env_budget(), jobs);
  if (json) {
    nlohmann::json j;
    j["pass"] = rep.pass;
    j["lines"] = rep.lines;
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& l : rep.lines) std::cout << l << "\n";
    std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
  }
  return rep.pass ? 0 : 1;
}

int run_verify_enum(int n, int fams, uint64_t seed, bool units, bool json, int jobs) {
  CorpusOptions opts;
  opts.max_size = n;
  // the execution-formula interpretation covers the axiom-based fragment;
  // unit rule nodes are opt-in for exploration
  opts.unit_rules = units;
  std::vector<ProofPtr> corpus = enumerate_proofs(opts);
  std::vector<Atom> atoms = {"1", "2", "3", "4"};
  long proofs = 0, families = 0, failures = 0;
  std::vector<std::string> failed;
  for (const auto& p : corpus) {
    uint64_t s = seed + static_cast<uint64_t>(std::hash<std::string>{}(to_string(p)));
    ++proofs;
    LiftChain chain(p);
    for (const auto& fam : sample_families(chain.relation(0), atoms, fams, s)) {
      ++families;
      Report rep = verify_with_chain(chain, fam, env_budget(), jobs);
      if (!rep.pass) {
        ++failures;
        if (failed.size() < 10) failed.push_back(to_string(p) + "  family " + json_family(fam));
      }
    }
  }
  if (json) {
    nlohmann::json j;
    j["proofs"] = proofs;
    j["families"] = families;
    j["failures"] = failures;
    j["failed"] = failed;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "verified " << families << " families over " << proofs << " proofs: "
              << (failures == 0 ? "PASS" : "FAIL (" + std::to_string(failures) + ")") << "\n";
    for (const auto& f : failed) std::cout << "  " << f << "\n";
  }
  return failures == 0 ? 0 : 1;
}

int run_axioms(int samples, uint64_t seed, bool json) {
  AxiomSuiteResult res = run_axiom_suite(samples, seed);
  int npass = 0;
  for (const auto& [name, ok] : res.families) npass += ok ? 1 : 0;
  if (json) {
    nlohmann::json j;
    for (const auto& [name, ok] : res.families) j[name] = ok;
    j["pass"] = res.pass;
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& [name, ok] : res.families)
      std::cout << name << ": " << (ok ? "PASS" : "FAIL") << "\n";
    std::cout << npass << "/" << res.families.size() << " axiom families PASS\n";
  }
  return res.pass ? 0 : 1;
}

int run_diagram(const std::string& file, const std::string& fam_path, const std::string& index,
                const std::string& out_path) {
  Checked c = load_checked(file);
  IndexedFamily fam = load_family(fam_path);
  if (!fam.v.count(index)) throw std::runtime_error("family has no index " + index);
  Box m = build_box(c, fam.v.at(index));
  EpsilonAssignment eps = zero_action(m);
  std::string dot = to_dot(m, eps);
  if (out_path.empty() || out_path == "-") {
    std::cout << dot;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << dot;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"indexed GoI pipeline for MALL with cut stacks"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  int jobs = 1;
  app.add_flag("--json", json, "machine-readable output");
  app.add_option("--jobs", jobs, "parallel per-index workers");

  std::string file, fam, mode = "cutlist", index, out = "-";
  bool trace = false, units = false;
  int enum_n = 0, samples = 1000, fams = 100;
  uint64_t seed = 0;

  auto* c_check = app.add_subcommand("check", "check a proof file");
  c_check->add_option("file", file)->required();

  auto* c_interp = app.add_subcommand("interp", "relational interpretation");
  c_interp->add_option("file", file)->required();
  c_interp->add_option("--mode", mode, "cutlist|denot");

  auto* c_tr = app.add_subcommand("translate", "translate a member family to MALL(I)");
  c_tr->add_option("file", file)->required();
  c_tr->add_option("--family", fam)->required();

  auto* c_norm = app.add_subcommand("normalize", "cut elimination (optionally index-lifted)");
  c_norm->add_option("file", file)->required();
  c_norm->add_option("--family", fam);
  c_norm->add_flag("--trace", trace);

  auto* c_exec = app.add_subcommand("exec", "run the execution formula per index");
  c_exec->add_option("file", file)->required();
  c_exec->add_option("--family", fam)->required();

  auto* c_ver = app.add_subcommand("verify", "verify invariance and index diminution");
  c_ver->add_option("file", file);
  c_ver->add_option("--family", fam);
  c_ver->add_option("--enumerate", enum_n, "verify all proofs up to this size");
  c_ver->add_option("--families", fams, "sampled member families per proof");
  c_ver->add_flag("--units", units, "include unit rule nodes in the enumeration");
  c_ver->add_option("--seed", seed);

  auto* c_ax = app.add_subcommand("axioms", "trace-axiom property suite");
  c_ax->add_option("--samples", samples);
  c_ax->add_option("--seed", seed);

  auto* c_diag = app.add_subcommand("diagram", "DOT export of a box");
  c_diag->add_option("file", file)->required();
  c_diag->add_option("--family", fam)->required();
  c_diag->add_option("--index", index)->required();
  c_diag->add_option("-o,--output", out);

  try {
    app.parse(argc, argv);
    if (c_check->parsed()) return run_check(file, json);
    if (c_interp->parsed()) return run_interp(file, mode, json);
    if (c_tr->parsed()) return run_translate(file, fam, json);
    if (c_norm->parsed()) return run_normalize(file, fam, trace, json);
    if (c_exec->parsed()) return run_exec(file, fam, json, jobs);
    if (c_ver->parsed()) {
      if (enum_n > 0) return run_verify_enum(enum_n, fams, seed, units, json, jobs);
      if (file.empty() || fam.empty())
        throw CLI::ValidationError("verify needs FILE --family F.json or --enumerate N");
      return run_verify_one(file, fam, json, jobs);
    }
    if (c_ax->parsed()) return run_axioms(samples, seed, json);
    if (c_diag->parsed()) return run_diagram(file, fam, index, out);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CheckError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
