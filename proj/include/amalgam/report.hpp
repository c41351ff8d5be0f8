#ifndef AMALGAM_REPORT_HPP
#define AMALGAM_REPORT_HPP

#include <map>
#include <string>

#include "json.hpp"

namespace amalgam {

/// Deterministic command report; object keys are kept sorted.
struct Report {
  std::string command;
  std::map<std::string, std::string> inputs;  // path -> digest
  nlohmann::json verdicts = nlohmann::json::object();
  nlohmann::json witnesses = nlohmann::json::object();
  nlohmann::json timings = nlohmann::json::object();  // milliseconds, emitted only on request

  nlohmann::json tree(bool with_timings) const;
  std::string json_text(bool with_timings) const;
  /// Indented "key: value" lines.
  std::string text(bool with_timings) const;
};

std::string render_text(const nlohmann::json& tree);

}  // namespace amalgam

#endif  // AMALGAM_REPORT_HPP
