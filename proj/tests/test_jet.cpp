#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "odekit/jet.hpp"
#include "odekit/parser.hpp"

using namespace odekit;

namespace {

Polynomial random_jet_polynomial(std::mt19937_64& rng) {
    std::vector<VariableId> vars = {
        VariableId::base_x(),  VariableId::base_y(),
        jet(CoeffLetter::P, 0, 0), jet(CoeffLetter::Q, 1, 0),
        jet(CoeffLetter::R, 0, 1), jet(CoeffLetter::S, 1, 1)};
    std::uniform_int_distribution<int> nterms(1, 4);
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    std::uniform_int_distribution<int> expo(0, 2);
    Polynomial p;
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Monomial m;
        for (int f = 0; f < 2; ++f) {
            int e = expo(rng);
            if (e > 0) m = m * Monomial::variable(vars[pick(rng)], e);
        }
        p.add_term(m, BigRational(coeff(rng)));
    }
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("jet");

TEST_CASE("total derivatives in the two directions commute") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        Polynomial p = random_jet_polynomial(rng);
        Polynomial xy = total_derivative(total_derivative(p, Direction::X), Direction::Y);
        Polynomial yx = total_derivative(total_derivative(p, Direction::Y), Direction::X);
        CHECK(xy == yx);
    }
}

TEST_CASE("total derivative expands products and shifts jets") {
    // d/dx of (R[1,0] - Q[0,1] + P*S - Q*R)
    RationalExpression a1 = parse_expression("R[1,0] - Q[0,1] + P*S - Q*R");
    RationalExpression expect = parse_expression(
        "R[2,0] - Q[1,1] + P[1,0]*S + P*S[1,0] - Q[1,0]*R - Q*R[1,0]");
    CHECK(total_derivative(a1, Direction::X) == expect);

    RationalExpression w = RationalExpression::variable(intern_symbol("w"));
    CHECK(total_derivative(w, Direction::X).is_zero());
    CHECK(total_derivative(RationalExpression::variable(VariableId::base_x()),
                           Direction::X) == RationalExpression::constant(1));
    CHECK(total_derivative(RationalExpression::variable(VariableId::base_x()),
                           Direction::Y).is_zero());
}

TEST_CASE("quotient rule holds for rational jet expressions") {
    RationalExpression f = parse_expression("(P + Q[1,0])/(R - 1)");
    RationalExpression numerator = parse_expression(
        "(P[1,0] + Q[2,0])*(R - 1) - (P + Q[1,0])*R[1,0]");
    RationalExpression expect = numerator / parse_expression("(R-1)^2");
    CHECK(total_derivative(f, Direction::X) == expect);
}

TEST_CASE("instantiation commutes with differentiation") {
    std::vector<OdeCoefficients> corpus = {
        fixtures::quadratic_rhs(), fixtures::generic_cubic(), fixtures::constant_r(),
        fixtures::fine_branch(),
        OdeCoefficients::parse("x*y", "x+1", "y^2-x", "2")};
    std::mt19937_64 rng(77);
    for (OdeCoefficients& coeffs : corpus) {
        Instantiator inst(coeffs);
        for (int i = 0; i < 20; ++i) {
            RationalExpression p =
                RationalExpression::from_polynomial(random_jet_polynomial(rng));
            for (Direction dir : {Direction::X, Direction::Y}) {
                VariableId base = dir == Direction::X ? VariableId::base_x()
                                                      : VariableId::base_y();
                RationalExpression lhs = inst.instantiate(total_derivative(p, dir));
                RationalExpression rhs = inst.instantiate(p).derivative(base);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("derivative tables give concrete jet values") {
    Instantiator e2(fixtures::quadratic_rhs());
    CHECK(e2.jet_value(CoeffLetter::P, 0, 2) == RationalExpression::constant(2));
    CHECK(e2.jet_value(CoeffLetter::P, 0, 1) == parse_expression("2*y"));
    CHECK(e2.jet_value(CoeffLetter::P, 1, 0).is_zero());
    CHECK(e2.jet_value(CoeffLetter::S, 3, 2).is_zero());

    Instantiator e4(fixtures::constant_r());
    CHECK(e4.jet_value(CoeffLetter::R, 0, 0) == RationalExpression::constant(1));
    CHECK(e4.jet_value(CoeffLetter::R, 1, 0).is_zero());

    Instantiator e5(fixtures::fine_branch());
    CHECK(e5.jet_value(CoeffLetter::R, 0, 1) == parse_expression("1/(3*y^2)"));
}

TEST_CASE("numeric and symbolic instantiation agree") {
    Instantiator inst(fixtures::fine_branch());
    RationalExpression expr =
        parse_expression("R[0,1]*P - Q[1,0] + S + y*R^2 + P[0,1]^2");
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    for (int i = 0; i < 25; ++i) {
        BigRational x0(num(rng), den(rng));
        BigRational y0(num(rng), den(rng));
        if (y0 == 0) continue;
        std::map<VariableId, BigRational> at = {{VariableId::base_x(), x0},
                                                {VariableId::base_y(), y0}};
        CHECK(inst.evaluate(expr, x0, y0) == inst.instantiate(expr).evaluate(at));
    }
}

TEST_CASE("coefficients are restricted to the coordinates") {
    CHECK_THROWS_AS(OdeCoefficients::parse("P", "0", "0", "0"), Error);
    CHECK_THROWS_AS(OdeCoefficients::parse("0", "Q[1,0]", "0", "0"), Error);
    CHECK(max_jet_order(parse_expression("Q[1,2]*S[3,0] + P")) == 3);
}

TEST_SUITE_END();
