#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace varfield {

struct CheckRecord {
  std::string name;            // unique within a report
  std::string law;             // stable identifier of the verified relation
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::ordered_json witness;  // optional diagnostic payload
  std::string note;
};

struct Report {
  std::string problem;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  std::vector<CheckRecord> checks;

  bool overall_pass() const;
  /// Deterministic serialization: checks sorted by name, fixed key order,
  /// no timestamps.
  nlohmann::ordered_json to_json() const;
  std::string human_summary() const;
};

}  // namespace varfield
