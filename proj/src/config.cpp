#include "dsim/config.hpp"

#include <cstdlib>
#include <fstream>

#include "json.hpp"

namespace dsim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularInput: return "singular input";
    case ErrorCode::NotPositiveDefinite: return "not positive definite";
    case ErrorCode::ContractViolation: return "contract violation";
    case ErrorCode::Regularity: return "regularity";
    case ErrorCode::BoundedInput: return "bounded input";
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::MissingFlavor: return "missing flavor";
    case ErrorCode::WrongSpace: return "wrong space";
  }
  return "unknown";
}

namespace {
Tolerances& mutable_tolerances() {
  static Tolerances tol;
  return tol;
}
}  // namespace

const Tolerances& tolerances() { return mutable_tolerances(); }

void set_tolerances(const Tolerances& tol) { mutable_tolerances() = tol; }

Tolerances load_tolerances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Schema, "cannot open tolerance file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("tolerance file: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Schema, "tolerance file must hold an object");

  Tolerances tol = tolerances();
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw Error(ErrorCode::Schema, "tolerance '" + key + "' is not a number");
    double v = value.get<double>();
    if (key == "structure") tol.structure = v;
    else if (key == "subspace") tol.subspace = v;
    else if (key == "pivot") tol.pivot = v;
    else if (key == "posdef") tol.posdef = v;
    else if (key == "regular") tol.regular = v;
    else if (key == "exp_norm_bound") tol.exp_norm_bound = v;
    else if (key == "fd_step") tol.fd_step = v;
    else if (key == "fd_step_second") tol.fd_step_second = v;
    else if (key == "restore_trigger") tol.restore_trigger = v;
    else if (key == "jacobi_max_sweeps") tol.jacobi_max_sweeps = static_cast<int>(v);
    else throw Error(ErrorCode::Schema, "unknown tolerance '" + key + "'");
  }
  return tol;
}

void apply_tolerance_env() {
  if (const char* path = std::getenv("DSIM_TOLERANCES"); path && *path) {
    set_tolerances(load_tolerances(path));
  }
}

}  // namespace dsim
