#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ipslab/algebra/field.hpp"
#include "ipslab/cli/config.hpp"
#include "ipslab/hypercube/inverse.hpp"
#include "ipslab/measures/measures.hpp"
#include "ipslab/roabp/roabp.hpp"

namespace ipslab::cli {

/// Raw quantities plus the pass/fail of every exact check; ok is their conjunction.
struct PipelineResult {
  Json json;
  std::vector<CsvRow> rows;
  bool ok = true;
  /// weakness: one CSV row per trial.
  std::string trials_csv;
};

Json containment_to_json(const SparsePoly& f, const SupportContainmentReport& sc);

struct Theorem1Options {
  std::uint64_t n = 4;
  Field field;
  bool inclusive = true;
  unsigned guard_vars = kDefaultGuardVars;
  /// Targeted mode: random non-product supports checked against the zero rule.
  unsigned zero_rule_samples = 64;
  std::uint64_t seed = 0;
};

/// Full interpolation when 2n fits the guard, targeted coefficients otherwise.
PipelineResult theorem1_pipeline(const Theorem1Options& opts);

struct ConstdegOptions {
  std::uint64_t n = 4;
  std::uint64_t c = 4;
  Field field;
  std::optional<std::uint64_t> pi_seed;
  std::uint64_t seed = 0;
};

PipelineResult constdeg_pipeline(const ConstdegOptions& opts);

struct FstwOptions {
  std::uint64_t n = 2;
  unsigned trials = kDefaultRankTrials;
  std::uint64_t prime = kDefaultRankPrime;
  std::uint64_t seed = 0;
  /// Sampled balanced partitions for n = 3; n <= 2 enumerates them all.
  unsigned partitions = 3;
  unsigned guard_vars = kDefaultGuardVars;
};

/// n in {1, 2, 3}; GuardError from n = 4 on.
PipelineResult fstw_pipeline(const FstwOptions& opts);

struct WeaknessOptions {
  std::size_t n = 16;
  std::size_t t = 2;
  std::size_t width = 4;
  unsigned q = 4;
  unsigned r = 4;
  unsigned trials = 200;
  std::uint64_t seed = 0;
  std::size_t sampler_samples = 10000;
  /// Generated over F_p (p = kDefaultRankPrime) when absent.
  std::optional<SumRoabp> sum;
};

PipelineResult weakness_pipeline(const WeaknessOptions& opts);

}  // namespace ipslab::cli
