#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "odekit/rational.hpp"
#include "odekit/variable.hpp"

namespace odekit {

// Power product of variables.  Factors are kept sorted by ascending
// VariableId with strictly positive exponents; the total degree is cached.
class Monomial {
public:
    using Factor = std::pair<VariableId, std::uint32_t>;

    Monomial() = default;
    explicit Monomial(std::vector<Factor> factors);

    static Monomial one() { return Monomial(); }
    static Monomial variable(VariableId v, std::uint32_t e = 1);

    bool is_one() const { return factors_.empty(); }
    std::uint64_t total_degree() const { return degree_; }
    std::uint32_t exponent_of(VariableId v) const;
    const std::vector<Factor>& factors() const { return factors_; }

    Monomial operator*(const Monomial& other) const;
    bool divides(const Monomial& other) const;     // this | other
    Monomial divide(const Monomial& other) const;  // this / other (must divide)
    static Monomial gcd(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial& other) const {
        return degree_ == other.degree_ && factors_ == other.factors_;
    }

    // Graded lexicographic comparison: total degree first, ties broken by the
    // first variable (in ascending precedence order) whose exponents differ,
    // higher exponent winning.  Returns <0, 0, >0.
    static int compare(const Monomial& a, const Monomial& b);

private:
    std::vector<Factor> factors_;
    std::uint64_t degree_ = 0;
};

// Map comparator placing the grlex-largest monomial first.
struct MonomialGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::compare(a, b) > 0;
    }
};

// Sparse multivariate polynomial with exact rational coefficients, stored in
// canonical form: no zero coefficients, terms ordered grlex-descending so
// begin() is the leading term.
class Polynomial {
public:
    using Terms = std::map<Monomial, BigRational, MonomialGreater>;

    Polynomial() = default;

    static Polynomial constant(BigRational c);
    static Polynomial constant(long c) { return constant(BigRational(c)); }
    static Polynomial variable(VariableId v);
    static Polynomial term(Monomial m, BigRational c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Value of a constant polynomial (0 for the zero polynomial).
    BigRational constant_value() const;
    std::size_t term_count() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    std::uint64_t total_degree() const;
    std::uint32_t degree_in(VariableId v) const;
    bool contains(VariableId v) const;
    std::vector<VariableId> variables() const;

    const Monomial& leading_monomial() const { return terms_.begin()->first; }
    const BigRational& leading_coefficient() const { return terms_.begin()->second; }

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Polynomial& other);
    Polynomial& operator*=(const BigRational& c);

    Polynomial pow(std::uint32_t e) const;

    // Formal partial derivative with respect to one variable.
    Polynomial derivative(VariableId v) const;

    // Full evaluation; throws MissingBindingError when a variable is unbound.
    BigRational evaluate(const std::map<VariableId, BigRational>& bindings) const;

    // Simultaneous substitution; variables absent from the map are kept.
    Polynomial substitute(const std::map<VariableId, Polynomial>& map) const;

    // Adds c * m to this polynomial.
    void add_term(const Monomial& m, const BigRational& c);

    bool operator==(const Polynomial& other) const { return terms_ == other.terms_; }

private:
    Terms terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(Polynomial a, const BigRational& c);
Polynomial operator*(const BigRational& c, Polynomial a);

// Exact division: on success sets `quotient` with a == b * quotient and
// returns true; returns false when b does not divide a.  b must be nonzero.
bool try_divide(const Polynomial& a, const Polynomial& b, Polynomial& quotient);

// Writes p as content * primitive where primitive has coprime integer
// coefficients and positive leading coefficient.  p == 0 maps to (0, 0).
std::pair<BigRational, Polynomial> primitive_decomposition(const Polynomial& p);

// Greatest common divisor, normalized integer-primitive with positive
// leading coefficient; gcd of two nonzero coprime polynomials is 1.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

}  // namespace odekit
