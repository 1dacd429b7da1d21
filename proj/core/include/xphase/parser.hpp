#pragma once

#include <string_view>

#include "xphase/polynomial.hpp"

namespace xphase {

/// Parses the expression grammar:
///
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := primary ['^' integer]
///   primary:= rational | 'i' | variable | '(' expr ')'
///
/// Rational literals are `3`, `3/2`; `i` is the imaginary unit. Variables
/// follow the context naming (`q0`, `p0`, aliases `q`, `p` when n = 1,
/// `l_q0`-style lambda names, `c0`, `cb0`, `hbar`). Whitespace is
/// insignificant. Throws ParseError with a byte offset on bad input,
/// unknown variables, negative exponents, or a ghost raised past 1.
GradedPolynomial parse(std::string_view text, const ContextPtr& ctx);

}  // namespace xphase
