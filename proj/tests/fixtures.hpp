#pragma once

#include "odekit/jet.hpp"

namespace odekit::fixtures {

// Reference equations used across the test suite, written as the coefficient
// quadruple (P, Q, R, S) of y'' = P + 3 Q y' + 3 R y'^2 + S y'^3.

inline OdeCoefficients trivial() {                     // E1
    return OdeCoefficients::parse("0", "0", "0", "0");
}

inline OdeCoefficients quadratic_rhs() {               // E2
    return OdeCoefficients::parse("y^2", "0", "0", "0");
}

inline OdeCoefficients generic_cubic() {               // E3
    return OdeCoefficients::parse("y^2", "0", "0", "x^2");
}

inline OdeCoefficients constant_r() {                  // E4
    return OdeCoefficients::parse("y^2", "0", "1", "0");
}

// Equation with F5 == 0, alpha != 0, M != 0 and nonvanishing skew term, so
// both fine classification branches apply and the two-route scalar check is
// well posed on it.
inline OdeCoefficients fine_branch() {                 // E5
    return OdeCoefficients::parse("y^2/3 - y^5/8", "y^2/2", "-1/(3*y)", "0");
}

// constant_r() rewritten in sheared coordinates (new x = x + y, new y = y),
// derived by hand with the chain rule.  Same geometry, but both components
// of the alpha covector are nonzero, giving an instance where the two branch
// formulas must agree.
inline OdeCoefficients sheared_constant_r() {          // E6
    return OdeCoefficients::parse("y^2", "-y^2", "1 + y^2", "-y^2 - 3");
}

// fine_branch() in the same sheared coordinates: still F5 == 0, M != 0, with
// both branch denominators nonzero AND a nonvanishing skew scalar, which the
// printed-variant arbitration checks require.
inline OdeCoefficients sheared_fine_branch() {         // E7
    return OdeCoefficients::parse(
        "y^2/3 - y^5/8",
        "y^2/6 + y^5/8",
        "-1/(3*y) - 2*y^2/3 - y^5/8",
        "1/y + 7*y^2/6 + y^5/8");
}

}  // namespace odekit::fixtures
