#pragma once

#include <string>
#include <vector>

#include "varfield/catalog.hpp"
#include "varfield/report.hpp"

namespace varfield {

/// Names of the available check suites.
std::vector<std::string> suite_names();

/// Runs the selected suites against a problem. Checks whose required data
/// the problem does not carry are skipped silently; numeric failures inside
/// a check are recorded as check failures and the run continues.
/// Deterministic for a fixed (problem, suites, seed, tol_scale); honors the
/// VARFIELD_THREADS environment variable as a parallelism cap.
Report run_suite(const ProblemSpec& problem, const std::vector<std::string>& suites,
                 std::uint64_t seed, double tol_scale = 1.0);

}  // namespace varfield
