#pragma once

#include <string>
#include <vector>

#include "soscert/polynomial.hpp"

namespace soscert {

// Grammar: sums of products of rational literals, declared variable names,
// parenthesised subexpressions and nonnegative integer powers. Literals may be
// integers, decimals or a/b fractions. `line` is only used for diagnostics.
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars,
                            int line = 0);

Rational parse_rational(const std::string& text, int line = 0);

bool is_identifier(const std::string& s);

}  // namespace soscert
