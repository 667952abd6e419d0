#include "odekit/expression.hpp"

#include "odekit/error.hpp"

namespace odekit {

namespace {

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
    Polynomial q;
    if (!try_divide(a, b, q)) throw Error("internal: exact division failed");
    return q;
}

}  // namespace

RationalExpression RationalExpression::normalized(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw DivisionByZeroError("zero denominator");
    if (num.is_zero()) return RationalExpression();
    Polynomial g = poly_gcd(num, den);
    if (!g.is_constant()) {
        num = exact_divide(num, g);
        den = exact_divide(den, g);
    }
    return reduced_trusted(std::move(num), std::move(den));
}

// Normalizes the denominator convention for a fraction already known to be
// in lowest terms.
RationalExpression RationalExpression::reduced_trusted(Polynomial num,
                                                       Polynomial den) {
    auto [content, primitive] = primitive_decomposition(den);
    RationalExpression out;
    BigRational inv = BigRational(1) / content;
    num *= inv;
    out.num_ = std::move(num);
    out.den_ = std::move(primitive);
    return out;
}

RationalExpression::RationalExpression(Polynomial numerator, Polynomial denominator) {
    *this = normalized(std::move(numerator), std::move(denominator));
}

RationalExpression RationalExpression::from_polynomial(Polynomial p) {
    RationalExpression out;
    out.num_ = std::move(p);
    return out;
}

RationalExpression RationalExpression::constant(BigRational c) {
    return from_polynomial(Polynomial::constant(std::move(c)));
}

RationalExpression RationalExpression::variable(VariableId v) {
    return from_polynomial(Polynomial::variable(v));
}

RationalExpression RationalExpression::operator-() const {
    RationalExpression out;
    out.num_ = -num_;
    out.den_ = den_;
    return out;
}

RationalExpression RationalExpression::operator+(const RationalExpression& other) const {
    if (is_zero()) return other;
    if (other.is_zero()) return *this;
    // a/b + c/d with both sides reduced; split off g = gcd(b, d) so the
    // final reduction only has to examine the small cofactor g.
    const Polynomial& b = den_;
    const Polynomial& d = other.den_;
    Polynomial g = poly_gcd(b, d);
    if (g.is_constant()) {
        Polynomial num = num_ * d + other.num_ * b;
        if (num.is_zero()) return RationalExpression();
        return reduced_trusted(std::move(num), b * d);
    }
    Polynomial b1 = exact_divide(b, g);
    Polynomial d1 = exact_divide(d, g);
    Polynomial t = num_ * d1 + other.num_ * b1;
    if (t.is_zero()) return RationalExpression();
    Polynomial h = poly_gcd(t, g);
    if (h.is_constant()) return reduced_trusted(std::move(t), b1 * d1 * g);
    t = exact_divide(t, h);
    Polynomial den = b1 * d1 * exact_divide(g, h);
    return reduced_trusted(std::move(t), std::move(den));
}

RationalExpression RationalExpression::operator-(const RationalExpression& other) const {
    return *this + (-other);
}

RationalExpression RationalExpression::operator*(const RationalExpression& other) const {
    if (is_zero() || other.is_zero()) return RationalExpression();
    // (a/b)(c/d): cancel gcd(a, d) and gcd(c, b) before multiplying.
    Polynomial a = num_, b = den_, c = other.num_, d = other.den_;
    Polynomial g1 = poly_gcd(a, d);
    if (!g1.is_constant()) {
        a = exact_divide(a, g1);
        d = exact_divide(d, g1);
    }
    Polynomial g2 = poly_gcd(c, b);
    if (!g2.is_constant()) {
        c = exact_divide(c, g2);
        b = exact_divide(b, g2);
    }
    return reduced_trusted(a * c, b * d);
}

RationalExpression RationalExpression::operator/(const RationalExpression& other) const {
    if (other.is_zero()) throw DivisionByZeroError("division by zero expression");
    if (is_zero()) return RationalExpression();
    RationalExpression inv;
    inv.num_ = other.den_;
    inv.den_ = other.num_;
    RationalExpression flipped = reduced_trusted(std::move(inv.num_), std::move(inv.den_));
    return *this * flipped;
}

RationalExpression RationalExpression::pow(std::int64_t e) const {
    if (e == 0) return RationalExpression::constant(1);
    if (e < 0) {
        if (is_zero()) throw DivisionByZeroError("negative power of zero");
        RationalExpression inv = reduced_trusted(den_, num_);
        return inv.pow(-e);
    }
    RationalExpression out;
    out.num_ = num_.pow(static_cast<std::uint32_t>(e));
    out.den_ = den_.pow(static_cast<std::uint32_t>(e));
    // Powers of a reduced fraction stay reduced; only the denominator sign /
    // content convention needs re-asserting.
    return reduced_trusted(std::move(out.num_), std::move(out.den_));
}

RationalExpression RationalExpression::derivative(VariableId v) const {
    if (den_.is_constant()) return from_polynomial(num_.derivative(v));
    Polynomial n = num_.derivative(v) * den_ - num_ * den_.derivative(v);
    if (n.is_zero()) return RationalExpression();
    return normalized(std::move(n), den_ * den_);
}

BigRational RationalExpression::evaluate(
    const std::map<VariableId, BigRational>& bindings) const {
    BigRational d = den_.evaluate(bindings);
    if (d == 0) throw PoleError("denominator vanishes at evaluation point");
    return num_.evaluate(bindings) / d;
}

RationalExpression substitute_rational(
    const Polynomial& p, const std::map<VariableId, RationalExpression>& map) {
    std::map<VariableId, std::vector<RationalExpression>> powers;
    auto power_of = [&](VariableId v, std::uint32_t e) -> const RationalExpression& {
        std::vector<RationalExpression>& tab = powers[v];
        if (tab.empty()) {
            tab.push_back(RationalExpression::constant(1));
            tab.push_back(map.at(v));
        }
        while (tab.size() <= e) tab.push_back(tab.back() * tab[1]);
        return tab[e];
    };

    RationalExpression out;
    for (const auto& [m, c] : p.terms()) {
        Monomial kept;
        RationalExpression replaced = RationalExpression::constant(c);
        for (const auto& [v, e] : m.factors()) {
            if (map.count(v)) {
                replaced *= power_of(v, e);
            } else {
                kept = kept * Monomial::variable(v, e);
            }
        }
        if (!kept.is_one())
            replaced *= RationalExpression::from_polynomial(
                Polynomial::term(kept, BigRational(1)));
        out += replaced;
    }
    return out;
}

RationalExpression RationalExpression::substitute(
    const std::map<VariableId, RationalExpression>& map) const {
    RationalExpression n = substitute_rational(num_, map);
    RationalExpression d = substitute_rational(den_, map);
    if (d.is_zero()) throw PoleError("substitution sends denominator to zero");
    return n / d;
}

RationalExpression operator+(const Polynomial& p, const RationalExpression& r) {
    return RationalExpression::from_polynomial(p) + r;
}

RationalExpression operator*(const BigRational& c, const RationalExpression& r) {
    return RationalExpression::constant(c) * r;
}

}  // namespace odekit
