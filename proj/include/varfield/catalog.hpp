#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varfield/canonical.hpp"
#include "varfield/conditions.hpp"
#include "varfield/excess.hpp"
#include "varfield/geometry.hpp"

namespace varfield {

/// A fully assembled verification problem. Not every field is meaningful
/// for every problem; suites only run the checks whose data is present.
struct ProblemSpec {
  std::string name;
  int n = 1;
  int nu = 1;
  int k = 1;

  std::optional<Lagrangian> lagrangian;
  std::optional<SlopeField> slope;
  std::optional<ActionFunctions> actions;
  std::optional<HamiltonianData> hamiltonian;
  std::optional<BlocksProvider> hamiltonian_blocks;  // analytic, when available
  std::optional<QuadFormTensor> quadform;

  VectorXd t_lo, t_hi;  // domain box, base coordinates
  VectorXd x_lo, x_hi;  // domain box, fiber coordinates
  int samples = 5;      // lattice points per axis
  std::uint64_t seed = 1;
  bool geodesic_expected = true;  // verdict the slope field should earn

  std::string variant;  // "", "hopf3", "hopf7"

  std::vector<std::pair<VectorXd, VectorXd>> sample_points() const;
};

/// Names of the built-in problems, in listing order.
std::vector<std::string> catalog_names();

/// Loads a built-in problem by name; throws std::invalid_argument for
/// unknown names.
ProblemSpec load_catalog_problem(const std::string& name);

/// Parses a user problem file (JSON). Malformed input raises
/// std::runtime_error with a line-numbered message.
ProblemSpec load_problem_file(const std::string& path);

/// Resolves a name-or-path argument against the catalog, then the
/// filesystem.
ProblemSpec resolve_problem(const std::string& name_or_path);

}  // namespace varfield
