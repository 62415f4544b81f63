#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "goimall/corpus.hpp"
#include "goimall/goi.hpp"
#include "goimall/pinj.hpp"

namespace py = pybind11;
using namespace goimall;

namespace {

std::string py_parse_formula(const std::string& s) { return to_string(parse_formula(s)); }
std::string py_dual(const std::string& s) { return to_string(dual(parse_formula(s))); }

std::string py_check(const std::string& proof) {
  return to_string(check_proof(parse_proof(proof)).seq);
}

std::string py_interp(const std::string& proof, const std::string& mode) {
  Checked c = check_proof(parse_proof(proof));
  if (mode == "denot") return json_ctx_relation(interp_denotational(c));
  return json_relation(interp_with_cuts(c));
}

std::string py_translate(const std::string& proof, const std::string& family_json) {
  Checked c = check_proof(parse_proof(proof));
  IndexedFamily fam = family_from_json(family_json);
  IProofPtr rho = fl_forward(c, fam);
  return to_string(check_indexed_proof(rho).seq);
}

py::dict py_normalize(const std::string& proof, const py::object& family_json) {
  ProofPtr p = parse_proof(proof);
  check_proof(p);
  py::dict out;
  py::list steps;
  if (family_json.is_none()) {
    auto trace = normalize(p);
    for (const auto& [r, q] : trace) steps.append(kind_string(r) + "@" + path_string(r.path));
    out["normal_form"] = to_string(trace.empty() ? p : trace.back().second);
  } else {
    IndexedFamily fam = family_from_json(family_json.cast<std::string>());
    auto trace = normalize_lifted(p, fam);
    for (const auto& s : trace)
      steps.append(kind_string(s.redex) + "@" + path_string(s.redex.path) + " dropped " +
                   to_string(s.dropped));
    out["normal_form"] = to_string(trace.empty() ? p : trace.back().after);
    out["family"] = json_family(trace.empty() ? fam : trace.back().fam_after);
  }
  out["steps"] = steps;
  return out;
}

py::dict py_execute(const std::string& proof, const std::string& family_json) {
  Checked c = check_proof(parse_proof(proof));
  IndexedFamily fam = family_from_json(family_json);
  py::dict out;
  for (const auto& [a, v] : execute_family(c, fam)) out[py::str(a)] = to_string(v);
  return out;
}

py::tuple py_verify(const std::string& proof, const std::string& family_json) {
  Report rep = verify_main_theorem(parse_proof(proof), family_from_json(family_json));
  return py::make_tuple(rep.pass, rep.lines);
}

py::tuple py_axioms(int samples, uint64_t seed) {
  AxiomSuiteResult res = run_axiom_suite(samples, seed);
  py::dict fams;
  for (const auto& [name, ok] : res.families) fams[py::str(name)] = ok;
  return py::make_tuple(res.pass, fams);
}

size_t py_enumerate_count(int max_size) {
  CorpusOptions opts;
  opts.max_size = max_size;
  return enumerate_proofs(opts).size();
}

}  // namespace

PYBIND11_MODULE(_goimall, m) {
  m.doc() = "indexed GoI pipeline for MALL with cut stacks";
  m.def("parse_formula", &py_parse_formula, py::arg("text"));
  m.def("dual", &py_dual, py::arg("text"));
  m.def("check_proof", &py_check, py::arg("proof"));
  m.def("interp", &py_interp, py::arg("proof"), py::arg("mode") = "cutlist");
  m.def("translate", &py_translate, py::arg("proof"), py::arg("family"));
  m.def("normalize", &py_normalize, py::arg("proof"), py::arg("family") = py::none());
  m.def("execute", &py_execute, py::arg("proof"), py::arg("family"));
  m.def("verify", &py_verify, py::arg("proof"), py::arg("family"));
  m.def("axioms", &py_axioms, py::arg("samples") = 1000, py::arg("seed") = 0);
  m.def("enumerate_count", &py_enumerate_count, py::arg("max_size"));
}
