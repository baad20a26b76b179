#pragma once

#include <cstdint>

#include "awd/compare.hpp"

namespace awd {

// Weight that separates branch depth from operand distance in the search
// objective.  It has to exceed the damped distance ceiling damp(2^64), about
// 44.36, so that one unmet branch always outweighs any operand gap.
inline constexpr double kDepthWeight = 128.0;

// Stand-in operand distance for non-finite comparison operands.  damp() sends
// it to the distance ceiling (the cast to double rounds it up to 2^64).
inline constexpr std::uint64_t kMaxOperandDistance = ~std::uint64_t{0};

// Number of representable doubles in [min(a, b), max(a, b)).  -0.0 counts as
// +0.0, so numerically equal operands always give 0.  Throws std::domain_error
// for NaN or infinite arguments.
std::uint64_t ulp_distance(double a, double b);

// Distance between the operands of an unmet comparison: the ULP gap for the
// closed relations {<=, >=, ==}, one more than the gap for the open ones
// {<, >}, and a constant 1 for !=, where any perturbation can satisfy it.
std::uint64_t operand_distance(Cmp op, double lhs, double rhs);

// Logarithmic damping ln(1 + raw); maps the whole distance range into
// [0, kDepthWeight) while preserving order.
double damp(std::uint64_t raw);

// Scalar objective u * kDepthWeight + v for an unmet branch u levels deep
// with damped operand gap v.  Requires 0 <= v < kDepthWeight.
double encode(std::uint64_t u, double damped_v);

// How far execution diverged from a chosen branch sequence: u counts the
// branches still unmet starting at the divergence point, v_raw is the
// un-damped operand distance there.  (0, 0) means no divergence.
struct Affinity {
  std::uint64_t u = 0;
  std::uint64_t v_raw = 0;

  friend bool operator==(const Affinity&, const Affinity&) = default;
};

// Lexicographic order on (u, v); negative / zero / positive like strcmp.
int lex_compare(const Affinity& a, const Affinity& b);
int lex_compare(std::uint64_t u1, double v1, std::uint64_t u2, double v2);

}  // namespace awd
