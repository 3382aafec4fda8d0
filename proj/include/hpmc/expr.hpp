#pragma once

// Small arithmetic grammar over (x, y) for sources and boundary data:
// +, -, *, /, ^, parentheses, variables x, y, r (= sqrt(x^2+y^2)),
// numeric literals and sin/cos/exp/sqrt. Parsed once into a closure.

#include <functional>
#include <string>

#include "hpmc/types.hpp"

namespace hpmc {

using Expr = std::function<double(double, double)>;

/// Throws ConfigError on malformed input.
Expr parse_expression(const std::string& text);

}  // namespace hpmc
