// Runs the ten acceptance criteria at their stated sample counts and prints
// one PASS/FAIL line per criterion. Usage: dsim_acceptance [seed]
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "dsim/verify.hpp"

namespace {

struct Check {
  const char* property;
  std::size_t samples;  // 0 = default count
};

struct Criterion {
  const char* title;
  std::vector<Check> checks;
};

const std::vector<Criterion> kCriteria = {
    {"factorization", {{"iwasawa_roundtrip", 3000}, {"left_right_b_identity", 3000}}},
    {"r-matrix", {{"antisymmetry", 500}, {"cartan_kernel", 500}, {"cdybe", 500}, {"coth_matches_torus_formula", 500}}},
    {"reduced brackets", {{"reduced_matches_unreduced", 200}}},
    {"model map", {{"model_map_is_poisson", 200}, {"model_map_derivative_identities", 0}}},
    {"flows",
     {{"exact_flow_group_law", 0},
      {"cotangent_invariants_of_J_conserved", 0},
      {"heisenberg_W_spectrum_conserved", 0},
      {"quasi_pair_conserved", 0},
      {"conserved_constancy", 0}}},
    {"projection method", {{"projection_method", 1}}},
    {"spin Sutherland", {{"spin_sutherland_identity", 500}}},
    {"quasi-Poisson", {{"quasi_jacobi_on_invariants", 0}, {"quasi_jacobi_fails_generically", 0}, {"quasi_casimir", 0}}},
    {"SL(2,Z)", {{"sl2z_relations", 0}, {"sl2z_preserves_brackets", 0}}},
    {"dressing and averages",
     {{"dressing_derivative_equivariance", 0}, {"transformed_initial_value", 0}, {"haar_average_flow_constant", 10000}}},
};

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 20240601ULL;
  const auto start = std::chrono::steady_clock::now();
  int failed = 0;
  for (std::size_t c = 0; c < kCriteria.size(); ++c) {
    bool ok = true;
    std::string detail;
    for (const auto& chk : kCriteria[c].checks) {
      const dsim::PropertyRecord r = dsim::run_property(chk.property, seed, chk.samples);
      ok = ok && r.pass;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s%s=%.3g (%s %.0e, n=%zu)%s", detail.empty() ? "" : "; ", r.name.c_str(),
                    r.max_residual, r.comparison == "above" ? ">" : "<", r.tolerance, r.samples,
                    r.note.empty() ? "" : (" " + r.note).c_str());
      detail += buf;
    }
    if (!ok) ++failed;
    std::printf("%s %2zu %s: %s\n", ok ? "PASS" : "FAIL", c + 1, kCriteria[c].title, detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed, seed %llu, %.1f s\n", static_cast<int>(kCriteria.size()) - failed,
              kCriteria.size(), static_cast<unsigned long long>(seed), secs);
  return failed == 0 ? 0 : 1;
}
