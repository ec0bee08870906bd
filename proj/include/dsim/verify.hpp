#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsim/io.hpp"

namespace dsim {

/// One checked identity. `max_residual` is compared against `tolerance` with
/// `comparison`: "below" for identities, "above" for negative controls that
/// must show a clearly nonzero effect.
struct PropertyRecord {
  std::string name;
  std::string suite;
  std::string about;  // what the identity expresses
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string comparison = "below";
  bool pass = false;
  std::string note;  // set when a sample threw
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<PropertyRecord> properties;
  bool all_pass() const;
};

struct PropertyInfo {
  std::string name, suite, about;
  std::size_t default_samples = 0;
  double tolerance = 0.0;
  std::string comparison;
};

/// Suites in execution order: cxmat lie doubles observables rmatrix brackets flows conserved.
std::vector<std::string> suite_names();
/// Every registered property, grouped by suite.
std::vector<PropertyInfo> property_catalog();

/// Runs one property. Each property draws from its own generator seeded by
/// (seed, name), so a property gives the same record alone or inside a suite.
/// samples = 0 uses the default count.
PropertyRecord run_property(const std::string& name, std::uint64_t seed, std::size_t samples = 0);

/// Runs a suite, or every suite for "all". Unknown names raise Usage.
VerifyReport run_suite(const std::string& suite, std::uint64_t seed);

/// Report with sorted keys and environment metadata; no timestamps, so equal
/// (suite, seed) pairs give byte-identical output.
Json to_json(const VerifyReport& r);
Json to_json(const PropertyRecord& r);

}  // namespace dsim
