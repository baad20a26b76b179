#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "awd/affinity.hpp"
#include "awd/ast.hpp"
#include "awd/paths.hpp"

namespace awd {

struct ExecLimits {
  long long max_steps = 10'000'000;
};

// Divergence point between the expected path and the realized execution.
struct Fork {
  std::size_t step_index = 0;  // position in the expected path
  int site = -1;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AwdOutcome {
  double d = 0.0;
  bool fully_matched = false;
  Affinity affinity;            // (u, raw v) behind d; (0, 0) on full match
  std::optional<Fork> fork;
  std::vector<BranchStep> realized;  // non-loop branch outcomes, in order
};

class EvalError : public std::runtime_error {
 public:
  enum class Kind { DomainError, StepBudget };

  EvalError(Kind kind, const std::string& msg,
            std::vector<BranchStep> realized)
      : std::runtime_error(msg), kind_(kind), realized_(std::move(realized)) {}

  Kind kind() const { return kind_; }
  const std::vector<BranchStep>& realized() const { return realized_; }

 private:
  Kind kind_;
  std::vector<BranchStep> realized_;
};

struct RunResult {
  std::vector<BranchStep> realized;
  std::set<std::string> reached;
  // Last operand values seen at each branch site (loop sites included).
  std::map<int, std::pair<double, double>> last_operands;
};

// Clamps x into the declared input box coordinate-wise; NaN collapses to the
// lower bound.  Integer flooring happens inside the interpreter, not here.
std::vector<double> clamp_to_box(const SourceProgram& prog,
                                 std::span<const double> x);

// Interprets the program on x with the branch sentinel armed for `path`.
// Strict IEEE-754 double semantics; builtin domain violations and exhausted
// step budgets throw EvalError.
AwdOutcome awd_evaluate(const SourceProgram& prog, const PartialPath& path,
                        std::span<const double> x,
                        const ExecLimits& limits = {});

// Uninstrumented run collecting the realized trace, reached markers, and the
// operands last seen at every branch site.
RunResult run_program(const SourceProgram& prog, std::span<const double> x,
                      const ExecLimits& limits = {});

// True iff the target marker executes when running the program on x.
bool replay(const SourceProgram& prog, std::span<const double> x,
            const std::string& target, const ExecLimits& limits = {});

}  // namespace awd
