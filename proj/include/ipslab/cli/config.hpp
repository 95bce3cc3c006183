#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipslab/io/json.hpp"

namespace ipslab::cli {

inline constexpr const char* kToolName = "ipslab";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr unsigned kDefaultGuardVars = 24;

/// IPSLAB_MAX_VARS when set to a positive integer, else kDefaultGuardVars.
unsigned default_guard_vars();

/// Reproducibility record written into every output.
struct ExperimentConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::string field = "Q";
  std::uint64_t seed = 0;
  unsigned trials = 0;
  unsigned guard_vars = kDefaultGuardVars;
  std::string out;
  std::string format = "json";

  Json to_json() const;
};

struct CsvRow {
  std::string family;
  std::uint64_t n = 0;
  std::string field;
  std::uint64_t seed = 0;
  std::string quantity;
  std::string value;
  std::string bound;
  std::optional<bool> satisfied;
};

inline const char* kCsvHeader = "family,n,field,seed,quantity,value,bound,satisfied";

std::string csv_field(const std::string& s);
/// "# <tool> <version> config=<compact json>" then the header and the rows.
std::string render_csv(const ExperimentConfig& cfg, const std::vector<CsvRow>& rows);
/// {"tool": ..., "version": ..., "config": ..., "result": ...}
Json wrap_output(const ExperimentConfig& cfg, Json result);

}  // namespace ipslab::cli
