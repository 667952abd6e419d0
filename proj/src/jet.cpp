#include "odekit/jet.hpp"

#include "odekit/error.hpp"
#include "odekit/parser.hpp"

namespace odekit {

RationalExpression jet_expr(CoeffLetter letter, std::uint32_t p, std::uint32_t q) {
    return RationalExpression::variable(jet(letter, p, q));
}

namespace {

// Derivative of a single variable under the total derivative.
Polynomial variable_rate(VariableId v, Direction dir) {
    switch (v.kind()) {
        case VariableId::Kind::Base:
            if (v.is_base_x()) return Polynomial::constant(dir == Direction::X ? 1 : 0);
            return Polynomial::constant(dir == Direction::Y ? 1 : 0);
        case VariableId::Kind::Jet: {
            std::uint32_t p = v.jet_p() + (dir == Direction::X ? 1 : 0);
            std::uint32_t q = v.jet_q() + (dir == Direction::Y ? 1 : 0);
            return Polynomial::variable(VariableId::jet(v.jet_letter(), p, q));
        }
        case VariableId::Kind::Symbol:
            return Polynomial();
    }
    return Polynomial();
}

}  // namespace

Polynomial total_derivative(const Polynomial& p, Direction dir) {
    Polynomial out;
    for (VariableId v : p.variables()) {
        Polynomial rate = variable_rate(v, dir);
        if (rate.is_zero()) continue;
        out += p.derivative(v) * rate;
    }
    return out;
}

RationalExpression total_derivative(const RationalExpression& e, Direction dir) {
    if (e.is_polynomial()) {
        Polynomial n = total_derivative(e.numerator(), dir);
        BigRational inv = BigRational(1) / e.denominator().constant_value();
        return RationalExpression::from_polynomial(n * inv);
    }
    Polynomial n = total_derivative(e.numerator(), dir) * e.denominator() -
                   e.numerator() * total_derivative(e.denominator(), dir);
    if (n.is_zero()) return RationalExpression();
    return RationalExpression(std::move(n), e.denominator() * e.denominator());
}

std::uint32_t max_jet_order(const RationalExpression& e) {
    std::uint32_t best = 0;
    for (const Polynomial* p : {&e.numerator(), &e.denominator()})
        for (VariableId v : p->variables())
            if (v.kind() == VariableId::Kind::Jet)
                best = std::max(best, v.jet_p() + v.jet_q());
    return best;
}

namespace {

void check_coordinates_only(const RationalExpression& e, const char* which) {
    for (const Polynomial* p : {&e.numerator(), &e.denominator()})
        for (VariableId v : p->variables())
            if (v.kind() != VariableId::Kind::Base)
                throw Error(std::string("coefficient ") + which +
                            " may only involve x and y, found " + variable_name(v));
}

}  // namespace

OdeCoefficients::OdeCoefficients(RationalExpression P_, RationalExpression Q_,
                                 RationalExpression R_, RationalExpression S_)
    : P(std::move(P_)), Q(std::move(Q_)), R(std::move(R_)), S(std::move(S_)) {
    check_coordinates_only(P, "P");
    check_coordinates_only(Q, "Q");
    check_coordinates_only(R, "R");
    check_coordinates_only(S, "S");
}

OdeCoefficients OdeCoefficients::parse(const std::string& P_, const std::string& Q_,
                                       const std::string& R_, const std::string& S_) {
    return OdeCoefficients(parse_expression(P_), parse_expression(Q_),
                           parse_expression(R_), parse_expression(S_));
}

const RationalExpression& OdeCoefficients::letter(CoeffLetter l) const {
    switch (l) {
        case CoeffLetter::P: return P;
        case CoeffLetter::Q: return Q;
        case CoeffLetter::R: return R;
        case CoeffLetter::S: return S;
    }
    return P;
}

Instantiator::Instantiator(OdeCoefficients coeffs) : coeffs_(std::move(coeffs)) {}

const RationalExpression& Instantiator::jet_value(CoeffLetter letter,
                                                  std::uint32_t p, std::uint32_t q) {
    VariableId key = jet(letter, p, q);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;

    RationalExpression value;
    if (p == 0 && q == 0) {
        value = coeffs_.letter(letter);
    } else if (p > 0) {
        value = jet_value(letter, p - 1, q).derivative(VariableId::base_x());
    } else {
        value = jet_value(letter, p, q - 1).derivative(VariableId::base_y());
    }
    return table_.emplace(key, std::move(value)).first->second;
}

RationalExpression Instantiator::instantiate(const RationalExpression& e) {
    std::map<VariableId, RationalExpression> map;
    for (const Polynomial* p : {&e.numerator(), &e.denominator()})
        for (VariableId v : p->variables())
            if (v.kind() == VariableId::Kind::Jet)
                map.emplace(v, jet_value(v.jet_letter(), v.jet_p(), v.jet_q()));
    if (map.empty()) return e;
    return e.substitute(map);
}

BigRational Instantiator::evaluate(const RationalExpression& e, const BigRational& x0,
                                   const BigRational& y0) {
    std::map<VariableId, BigRational> bindings = {{VariableId::base_x(), x0},
                                                  {VariableId::base_y(), y0}};
    std::map<VariableId, BigRational> point = bindings;
    for (const Polynomial* p : {&e.numerator(), &e.denominator()})
        for (VariableId v : p->variables())
            if (v.kind() == VariableId::Kind::Jet && !bindings.count(v))
                bindings.emplace(
                    v, jet_value(v.jet_letter(), v.jet_p(), v.jet_q()).evaluate(point));
    return e.evaluate(bindings);
}

}  // namespace odekit
