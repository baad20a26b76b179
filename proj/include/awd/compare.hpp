#pragma once

#include <string>

namespace awd {

enum class Cmp { Lt, Le, Gt, Ge, Eq, Ne };

// IEEE-754 comparison; NaN operands make every relation except Ne false.
bool eval_compare(Cmp op, double lhs, double rhs);

// Logical negation: negate(Lt) == Ge, negate(Eq) == Ne, ...
Cmp negate(Cmp op);

std::string to_string(Cmp op);

}  // namespace awd
