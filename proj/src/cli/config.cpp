#include "ipslab/cli/config.hpp"

#include <cstdlib>
#include <sstream>

namespace ipslab::cli {

unsigned default_guard_vars() {
  if (const char* env = std::getenv("IPSLAB_MAX_VARS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 40) return static_cast<unsigned>(v);
  }
  return kDefaultGuardVars;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["command"] = command;
  Json p = Json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  j["field"] = field;
  j["seed"] = seed;
  j["trials"] = trials;
  j["guard_vars"] = guard_vars;
  j["out"] = out;
  j["format"] = format;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string render_csv(const ExperimentConfig& cfg, const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "# " << kToolName << ' ' << kToolVersion << " config=" << cfg.to_json().dump() << '\n';
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << csv_field(r.family) << ',' << r.n << ',' << csv_field(r.field) << ',' << r.seed << ',' << csv_field(r.quantity)
       << ',' << csv_field(r.value) << ',' << csv_field(r.bound) << ','
       << (r.satisfied ? (*r.satisfied ? "true" : "false") : "") << '\n';
  }
  return os.str();
}

Json wrap_output(const ExperimentConfig& cfg, Json result) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = cfg.to_json();
  j["result"] = std::move(result);
  return j;
}

}  // namespace ipslab::cli
