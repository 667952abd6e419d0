#pragma once

#include <map>

#include "odekit/polynomial.hpp"

namespace odekit {

// Quotient of two polynomials kept in canonical reduced form:
//   * numerator and denominator are coprime,
//   * the denominator has coprime integer coefficients and positive leading
//     coefficient (so a constant denominator is always exactly 1).
// Equality of canonical forms is therefore structural equality.
class RationalExpression {
public:
    RationalExpression() : num_(), den_(Polynomial::constant(1)) {}
    RationalExpression(Polynomial numerator, Polynomial denominator);

    static RationalExpression from_polynomial(Polynomial p);
    static RationalExpression constant(BigRational c);
    static RationalExpression constant(long c) { return constant(BigRational(c)); }
    static RationalExpression variable(VariableId v);

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    BigRational constant_value() const { return num_.constant_value(); }

    std::size_t term_count() const { return num_.term_count() + den_.term_count(); }

    RationalExpression operator-() const;
    RationalExpression operator+(const RationalExpression& other) const;
    RationalExpression operator-(const RationalExpression& other) const;
    RationalExpression operator*(const RationalExpression& other) const;
    RationalExpression operator/(const RationalExpression& other) const;
    RationalExpression& operator+=(const RationalExpression& o) { return *this = *this + o; }
    RationalExpression& operator-=(const RationalExpression& o) { return *this = *this - o; }
    RationalExpression& operator*=(const RationalExpression& o) { return *this = *this * o; }
    RationalExpression& operator/=(const RationalExpression& o) { return *this = *this / o; }

    RationalExpression pow(std::int64_t e) const;

    // Formal partial derivative with respect to one variable.
    RationalExpression derivative(VariableId v) const;

    // Full evaluation; throws MissingBindingError / PoleError.
    BigRational evaluate(const std::map<VariableId, BigRational>& bindings) const;

    // Simultaneous substitution; unmapped variables are kept.  Throws
    // PoleError when a denominator collapses to zero.
    RationalExpression substitute(
        const std::map<VariableId, RationalExpression>& map) const;

    bool operator==(const RationalExpression& other) const {
        return num_ == other.num_ && den_ == other.den_;
    }

private:
    static RationalExpression normalized(Polynomial num, Polynomial den);
    static RationalExpression reduced_trusted(Polynomial num, Polynomial den);

    Polynomial num_;
    Polynomial den_;
};

RationalExpression operator+(const Polynomial& p, const RationalExpression& r);
RationalExpression operator*(const BigRational& c, const RationalExpression& r);

// Substitutes rational expressions into a polynomial.
RationalExpression substitute_rational(
    const Polynomial& p, const std::map<VariableId, RationalExpression>& map);

}  // namespace odekit
