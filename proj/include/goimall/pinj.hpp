#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace goimall {

struct PTok {
  int port;
  std::string w;
};
bool operator<(const PTok& a, const PTok& b);
bool operator==(const PTok& a, const PTok& b);

using PortDoms = std::vector<std::vector<std::string>>;

// Finite partial injection between explicit token domains; the concrete traced
// category with zero the box machine lives in, in extensional form.
struct PInj {
  PortDoms dom, cod;
  std::map<PTok, PTok> m;
};

PInj pinj_id(const PortDoms& x);
PInj pinj_zero(const PortDoms& x, const PortDoms& y);
PInj pinj_sym(const PortDoms& a, const PortDoms& b);  // A (x) B -> B (x) A
PInj tensor(const PInj& f, const PInj& g);
PInj compose(const PInj& g, const PInj& f);  // g after f
bool pinj_equal(const PInj& f, const PInj& g);

// Tr over the last n_z ports; feedback by iteration, cycles are undefined.
PInj trace(const PInj& f, int n_z);

using Rng = std::mt19937_64;

PortDoms random_doms(Rng& rng, int max_ports, int max_words);
PInj random_pinj(Rng& rng, const PortDoms& x, const PortDoms& y);

struct AxiomSuiteResult {
  std::vector<std::pair<std::string, bool>> families;
  bool pass = true;
};

// The seven trace axioms, each checked on `samples` random morphisms.
AxiomSuiteResult run_axiom_suite(int samples, uint64_t seed);

bool check_generalized_yanking(int samples, uint64_t seed);
bool check_tracing_zero(int max_ports);                       // exact, 1 <= n <= max_ports
bool check_vanishing_with_zero(int samples, uint64_t seed);

}  // namespace goimall
