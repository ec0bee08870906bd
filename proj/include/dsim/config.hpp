#pragma once

#include <stdexcept>
#include <string>

namespace dsim {

/// Failure categories reported by the library. The CLI maps `Schema` and
/// `Usage` to exit status 2 and everything else to exit status 1.
enum class ErrorCode {
  SingularInput,
  NotPositiveDefinite,
  ContractViolation,
  Regularity,
  BoundedInput,
  Usage,
  Schema,
  MissingFlavor,
  WrongSpace,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/**
 * Numerical thresholds used across the library.
 *
 * A single instance (`tolerances()`) is consulted by every guard; it can be
 * replaced at startup from a JSON file (see `load_tolerances`).
 */
struct Tolerances {
  double structure = 1e-10;       // unitary / Hermitian / anti-Hermitian tag checks
  double subspace = 1e-12;        // subspace membership of algebra elements
  double pivot = 1e-12;           // relative pivot floor for QR
  double posdef = 1e-12;          // relative eigenvalue floor for Cholesky / log
  double regular = 1e-8;          // eigenvalue / phase gap for regularity
  double exp_norm_bound = 600.0;  // 1-norm bound accepted by mat_exp
  double fd_step = 1e-5;          // first-derivative finite-difference step
  double fd_step_second = 1e-4;   // step for finite differences of bracket values
  double restore_trigger = 1e-9;  // structure residual that triggers restoration in RK4
  int jacobi_max_sweeps = 100;
};

const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

/// Reads a JSON object whose keys are a subset of the `Tolerances` field names.
Tolerances load_tolerances(const std::string& path);

/// Applies `load_tolerances($DSIM_TOLERANCES)` when that variable is set.
void apply_tolerance_env();

}  // namespace dsim
