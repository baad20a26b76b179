#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace awd {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dims() const { return lo.size(); }
};

using Objective = std::function<double(std::span<const double>)>;

struct OptimizerConfig {
  int hops = 200;
  double step_scale = 0.25;       // fraction of box width per perturbation
  double temperature = 1.0;
  double powell_tol = 1e-10;      // sweep improvement below this stops Powell
  int powell_max_iters = 100;     // direction sweeps
  int restarts = 4;
  std::uint64_t rng_seed = 0;
  std::optional<std::vector<double>> start;  // overrides the first start point
};

enum class StopReason { FoundZero, HopBudget, Stalled };

struct MinimizationResult {
  std::vector<double> best_x;
  double best_value = 0.0;
  long long evaluations = 0;
  StopReason reason = StopReason::Stalled;
};

// Derivative-free local minimization: line minimizations along an adaptive
// direction set, followed by a last-bits descent that walks each coordinate
// by representable-value steps.  Never returns a point worse than x0; exact
// zeros stop the search immediately.
MinimizationResult powell_minimize(const Objective& objective,
                                   std::span<const double> x0, const Box& box,
                                   const OptimizerConfig& cfg);

// Stochastic global minimization: seeded restarts, per-hop coordinate
// perturbations reflected into the box, Powell refinement, and
// Metropolis-style acceptance.  Deterministic for a fixed rng_seed.
MinimizationResult basinhopping(const Objective& objective, const Box& box,
                                const OptimizerConfig& cfg);

// Stable stream/index seed derivation for parallel workers.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index);

}  // namespace awd
