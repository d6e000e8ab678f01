#pragma once

#include <string_view>

#include "nasp/qpoly.hpp"

namespace nasp {

/// Parses a phase expression over Q in variables x1..xn: integers, rationals
/// via '/', + - * ^ and parentheses. Division is only defined by nonzero
/// constants; a variable in a denominator raises errc::non_polynomial.
/// Syntax errors carry line/column positions. nvars == 0 infers the arity
/// from the highest variable index used (at least 1).
QPoly parse_phase(std::string_view src, int nvars = 0);

} // namespace nasp
