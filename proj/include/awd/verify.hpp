#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "awd/exec.hpp"
#include "awd/optimize.hpp"
#include "awd/paths.hpp"

namespace awd {

enum class Verdict { Reachable, Unreachable };

const char* to_string(Verdict v);

struct PathOutcome {
  PartialPath path;
  MinimizationResult result;
};

struct VerifyReport {
  Verdict verdict = Verdict::Unreachable;
  double min_value = 0.0;
  std::vector<double> witness;  // non-empty only for Reachable
  bool caveat = true;           // Unreachable is evidence, not proof
  std::size_t paths_explored = 0;
  bool truncated = false;
  double wall_time_s = 0.0;
  std::vector<PathOutcome> per_path;
};

// A zero minimum whose witness fails replay: indicates an internal defect
// and must never occur.
class SoundnessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Target exists but no branch prefix could be enumerated for it.
class VerifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyOptions {
  SynthesisConfig synth;
  OptimizerConfig opt;
  ExecLimits limits;
};

Box input_box(const SourceProgram& prog);

// Objective for one expected path: the depth-weighted distance, with
// evaluation errors mapped to the finite penalty (|path|+1) * kDepthWeight.
// The program must outlive the returned callable.
Objective make_awd_objective(const SourceProgram& prog, PartialPath path,
                             ExecLimits limits = {});

// Ablation: the damped operand distance of the next unmet branch alone,
// without the depth term.
Objective make_operand_gap_objective(const SourceProgram& prog,
                                     PartialPath path, ExecLimits limits = {});

// Ablation: squared operand gap of a single guarding branch site, evaluated
// wherever execution last reached it; no path decomposition.
Objective make_guard_gap_objective(const SourceProgram& prog, int site,
                                   ExecLimits limits = {});

// End-to-end check: enumerate branch prefixes to the target, minimize each
// path objective until one attains zero, validate the witness by replay.
VerifyReport verify(const SourceProgram& prog, const std::string& target,
                    const VerifyOptions& opts = {});

// Brute-force check over a uniform grid per dimension, fortified with values
// harvested from program constants.  Limited to 2 inputs and 1e7 points.
VerifyReport oracle_verify(const SourceProgram& prog,
                           const std::string& target, long long grid_per_dim,
                           const ExecLimits& limits = {});

nlohmann::json report_json(const VerifyReport& report, bool include_timings);

}  // namespace awd
