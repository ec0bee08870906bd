#pragma once

// JSON-level operations shared by the command line tool and the Python module.
// Inputs are validated here; anything malformed raises Schema.

#include <optional>
#include <string>
#include <vector>

#include "dsim/io.hpp"

namespace dsim {

struct SimulateRequest {
  std::string space;
  std::string form;    // "unreduced" or "reduced"; empty infers it from the space
  std::string family;  // optional; checked against the Hamiltonian words
  Json hamiltonian;    // word object or array of words
  Json point;          // initial point; null draws one from `seed`
  std::size_t n = 2;
  std::string variant = "su";
  double t_max = 1.0, dt = 1e-3;
  std::size_t stride = 1;
  std::uint64_t seed = 0;
  bool restore = true;
};

/// Trajectory JSON plus "space", "family", "form" and "hamiltonian_words".
/// An interrupted run still returns its samples, with "completed": false.
Json simulate(const SimulateRequest& req);

/// {kind, point, value, residuals{antisymmetry, finite_difference[, unreduced]}}.
Json evaluate_bracket(const std::string& kind, const Json& f1, const Json& f2, const Json& point, std::size_t n = 2,
                      const std::string& variant = "su", std::uint64_t seed = 0);

/// Drift report of the constants of motion along a trajectory written by simulate.
/// Empty `kinds` selects every kind defined on the trajectory's space.
Json invariants_report(const Json& trajectory, const std::vector<std::string>& kinds = {});

/// Random point of a space as JSON.
Json random_point_json(const std::string& space, std::size_t n, const std::string& variant, std::uint64_t seed);

}  // namespace dsim
