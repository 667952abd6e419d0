#pragma once

#include <string>
#include <string_view>

#include "odekit/expression.hpp"

namespace odekit {

// Parses an expression over the coordinates x, y, the coefficient letters
// P, Q, R, S, and jet variables L[p,q].  Errors carry byte offsets.
RationalExpression parse_expression(std::string_view text);

// Canonical text form: terms grlex-descending, coefficients as n or n/m,
// "(num)/(den)" when the denominator is not 1.  Output containing no
// auxiliary symbols re-parses to an equal expression.
std::string to_string(const Polynomial& p);
std::string to_string(const RationalExpression& r);

}  // namespace odekit
