#include "varfield/report.hpp"

#include <algorithm>
#include <sstream>

namespace varfield {

bool Report::overall_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["environment"] = {
      {"library", "varfield"},
#if defined(__clang__)
      {"compiler", "clang"},
#elif defined(__GNUC__)
      {"compiler", "gcc"},
#else
      {"compiler", "unknown"},
#endif
  };
  j["problem"] = problem;
  j["seed"] = seed;
  j["tol_scale"] = tol_scale;
  std::vector<CheckRecord> sorted = checks;
  std::sort(sorted.begin(), sorted.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : sorted) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["law"] = c.law;
    cj["max_residual"] = c.max_residual;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    if (!c.note.empty()) cj["note"] = c.note;
    if (!c.witness.is_null()) cj["witness"] = c.witness;
    j["checks"].push_back(cj);
  }
  j["overall_pass"] = overall_pass();
  return j;
}

std::string Report::human_summary() const {
  std::ostringstream os;
  std::vector<CheckRecord> sorted = checks;
  std::sort(sorted.begin(), sorted.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  for (const auto& c : sorted) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << "  residual " << c.max_residual
       << "  tol " << c.tolerance;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
  }
  os << (overall_pass() ? "OVERALL PASS" : "OVERALL FAIL") << " (" << checks.size()
     << " checks, problem " << problem << ", seed " << seed << ")\n";
  return os.str();
}

}  // namespace varfield
