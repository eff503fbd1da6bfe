#ifndef SPARSESPEC_HARNESS_HPP
#define SPARSESPEC_HARNESS_HPP

#include <string>

#include "sparsespec/json_io.hpp"

namespace sparsespec {

inline constexpr const char* artifact_version = "0.1.0";

// Executes one subcommand (check-condition, synthesize, certify,
// counterexample, verify-multiplier, scaling-study) against a JSON config and
// returns the report.  All file side effects (out/csv/samples paths named in
// the config) happen here.  Throws Error on bad input, violated mathematical
// preconditions, or solver divergence.
json run_command(const std::string& command, json config);

} // namespace sparsespec

#endif
