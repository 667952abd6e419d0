#pragma once

#include <map>
#include <string>

#include "odekit/expression.hpp"

namespace odekit {

// Direction of a total derivative on jet expressions.
enum class Direction { X, Y };

inline VariableId jet(CoeffLetter letter, std::uint32_t p, std::uint32_t q) {
    return VariableId::jet(letter, p, q);
}

// Jet variable as an expression (J(L, p, q) stands for d^{p+q} L / dx^p dy^q).
RationalExpression jet_expr(CoeffLetter letter, std::uint32_t p, std::uint32_t q);

// Total derivative: base coordinates differentiate to 0/1, a jet variable
// L[p,q] differentiates to L[p+1,q] (X) or L[p,q+1] (Y), auxiliary symbols
// to zero.
Polynomial total_derivative(const Polynomial& p, Direction dir);
RationalExpression total_derivative(const RationalExpression& e, Direction dir);

// Largest p+q over the jet variables occurring in an expression.
std::uint32_t max_jet_order(const RationalExpression& e);

// Concrete coefficient functions of one equation
//   y'' = P(x,y) + 3 Q(x,y) y' + 3 R(x,y) y'^2 + S(x,y) y'^3.
// Each entry may only involve the coordinates x and y.
struct OdeCoefficients {
    RationalExpression P, Q, R, S;

    OdeCoefficients(RationalExpression P_, RationalExpression Q_,
                    RationalExpression R_, RationalExpression S_);

    static OdeCoefficients parse(const std::string& P_, const std::string& Q_,
                                 const std::string& R_, const std::string& S_);

    const RationalExpression& letter(CoeffLetter l) const;
};

// Replaces jet variables by derivatives of concrete coefficient functions.
// Derivative tables are memoized per instance.
class Instantiator {
public:
    explicit Instantiator(OdeCoefficients coeffs);

    const OdeCoefficients& coefficients() const { return coeffs_; }

    // d^{p+q} L / dx^p dy^q as an expression in x and y.
    const RationalExpression& jet_value(CoeffLetter letter, std::uint32_t p,
                                        std::uint32_t q);

    // Fully symbolic instantiation: the result involves only x and y.
    RationalExpression instantiate(const RationalExpression& e);

    // Numeric instantiation at a point; throws PoleError on poles of any
    // needed jet value and MissingBindingError never (bindings are derived).
    BigRational evaluate(const RationalExpression& e, const BigRational& x0,
                         const BigRational& y0);

private:
    OdeCoefficients coeffs_;
    std::map<VariableId, RationalExpression> table_;
};

}  // namespace odekit
