#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "awd/cfg.hpp"

namespace awd {

struct BranchStep {
  int label = -1;
  bool taken = false;

  friend auto operator<=>(const BranchStep&, const BranchStep&) = default;
};

// A branch prefix ending at the target marker.  Loop-carried branch sites
// never appear: enumeration walks over loop headers via their false edge
// without recording a step.
struct PartialPath {
  std::string target;
  std::vector<BranchStep> steps;
};

struct SynthesisConfig {
  int max_depth = 64;
  int max_paths = 4096;
};

struct SynthesisResult {
  std::vector<PartialPath> paths;
  bool truncated = false;
};

class SynthesisError : public std::runtime_error {
 public:
  enum class Kind { UnknownTarget, TargetInsideLoop };

  SynthesisError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Enumerates every distinct branch prefix from entry to the target, bounded
// by the config limits (and an internal walk budget); hitting any bound sets
// `truncated`.  A target absent from the graph or located inside a loop body
// throws SynthesisError.  Paths come back sorted by length, then by (label,
// taken) with false ordered before true.
SynthesisResult synthesize_paths(const Cfg& cfg, const std::string& target,
                                 const SynthesisConfig& config = {});

nlohmann::json path_to_json(const PartialPath& path);

}  // namespace awd
