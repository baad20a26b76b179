#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "awd/verify.hpp"

namespace awd {

struct BenchEntry {
  std::string name;
  std::string file;    // resolved against the manifest directory
  std::string target;
  std::optional<Verdict> expected;
  std::map<std::string, std::pair<double, double>> box_overrides;
};

struct BenchmarkManifest {
  std::vector<BenchEntry> entries;
  std::string base_dir;
};

// One JSON object per line: {"file": ..., "target": ..., "name"?,
// "expected"?: "REA"|"UNR", "box"?: {input: [lo, hi]}}.
BenchmarkManifest load_manifest(const std::string& path);

struct SuiteEntryResult {
  std::string name;
  std::optional<Verdict> expected;
  std::optional<Verdict> verdict;  // absent when the entry failed to run
  std::string error;
  bool soundness_failure = false;
  double min_value = 0.0;
  std::vector<double> witness;
  std::size_t paths_explored = 0;
  bool truncated = false;
  double wall_time_s = 0.0;
};

struct SuiteReport {
  std::vector<SuiteEntryResult> entries;
  int with_expectation = 0;
  int correct = 0;
  bool accuracy_defined = false;
  double accuracy = 0.0;
  double mean_wall_time_s = 0.0;
};

// Runs entries on a bounded worker pool.  Per-entry failures are recorded
// and the suite continues; the report order matches the manifest.
SuiteReport run_suite(const BenchmarkManifest& manifest,
                      const VerifyOptions& base, int jobs,
                      std::uint64_t base_seed);

std::string suite_table(const SuiteReport& report);

nlohmann::json suite_json(const SuiteReport& report, bool include_timings);

}  // namespace awd
