#include "awd/affinity.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace awd {

namespace {

// Signed count of doubles between +0.0 and x.  Monotone over all finite
// doubles once -0.0 is collapsed onto +0.0.
std::int64_t ulp_index(double x) {
  if (x == 0.0) return 0;
  const auto bits = std::bit_cast<std::uint64_t>(x);
  if (bits >> 63) return -static_cast<std::int64_t>(bits & 0x7fffffffffffffffULL);
  return static_cast<std::int64_t>(bits);
}

}  // namespace

std::uint64_t ulp_distance(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("ulp_distance: non-finite argument");
  const std::int64_t ia = ulp_index(a);
  const std::int64_t ib = ulp_index(b);
  const std::int64_t lo = ia < ib ? ia : ib;
  const std::int64_t hi = ia < ib ? ib : ia;
  // The true difference always fits in 64 unsigned bits, so wrap-around
  // subtraction is exact.
  return static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
}

std::uint64_t operand_distance(Cmp op, double lhs, double rhs) {
  switch (op) {
    case Cmp::Le:
    case Cmp::Ge:
    case Cmp::Eq:
      return ulp_distance(lhs, rhs);
    case Cmp::Lt:
    case Cmp::Gt:
      return ulp_distance(lhs, rhs) + 1;
    case Cmp::Ne:
      return 1;
  }
  return 0;
}

double damp(std::uint64_t raw) {
  return std::log1p(static_cast<double>(raw));
}

double encode(std::uint64_t u, double damped_v) {
  if (!(damped_v >= 0.0 && damped_v < kDepthWeight))
    throw std::invalid_argument("encode: damped distance outside [0, depth weight)");
  return static_cast<double>(u) * kDepthWeight + damped_v;
}

int lex_compare(const Affinity& a, const Affinity& b) {
  if (a.u != b.u) return a.u < b.u ? -1 : 1;
  if (a.v_raw != b.v_raw) return a.v_raw < b.v_raw ? -1 : 1;
  return 0;
}

int lex_compare(std::uint64_t u1, double v1, std::uint64_t u2, double v2) {
  if (u1 != u2) return u1 < u2 ? -1 : 1;
  if (v1 != v2) return v1 < v2 ? -1 : 1;
  return 0;
}

}  // namespace awd
