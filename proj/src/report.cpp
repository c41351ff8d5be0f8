#include "amalgam/report.hpp"

#include <algorithm>
#include <sstream>

namespace amalgam {

using nlohmann::json;

json Report::tree(bool with_timings) const {
  json t = json::object();
  t["command"] = command;
  t["inputs"] = json(inputs);
  t["verdicts"] = verdicts;
  t["witnesses"] = witnesses;
  if (with_timings) t["timings"] = timings;
  return t;
}

std::string Report::json_text(bool with_timings) const { return tree(with_timings).dump(2) + "\n"; }

std::string Report::text(bool with_timings) const { return render_text(tree(with_timings)); }

namespace {

bool is_leaf(const json& j) { return !j.is_object() && !j.is_array(); }

std::string leaf(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void emit(std::ostringstream& os, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  auto line = [&](const std::string& key, const json& v) {
    if (is_leaf(v)) {
      os << pad << key << ": " << leaf(v) << "\n";
    } else if (v.empty()) {
      os << pad << key << ": " << (v.is_array() ? "[]" : "{}") << "\n";
    } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_leaf)) {
      os << pad << key << ": [";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << leaf(v[i]);
      os << "]\n";
    } else {
      os << pad << key << ":\n";
      emit(os, v, indent + 1);
    }
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) line(it.key(), it.value());
  } else {
    for (std::size_t i = 0; i < j.size(); ++i) line("- " + std::to_string(i), j[i]);
  }
}

}  // namespace

std::string render_text(const json& tree) {
  std::ostringstream os;
  emit(os, tree, 0);
  return os.str();
}

}  // namespace amalgam
