#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "odekit/expression.hpp"
#include "odekit/invariants.hpp"
#include "odekit/jet.hpp"
#include "odekit/rational.hpp"

namespace odekit {

// An invertible coordinate change (x, y) -> (xt(x, y), yt(x, y)).  The
// inverse pair, when present, is written in the same two variable names,
// read as the new coordinates.
//
// Inverses are derived in closed form for affine maps and for triangular
// maps (one component depends on a single variable affinely, the other is
// affine in the complementary variable); anything else needs a user-supplied
// inverse, which is validated by exact symbolic composition.
class PointTransformation {
public:
    PointTransformation(RationalExpression xt, RationalExpression yt);
    PointTransformation(RationalExpression xt, RationalExpression yt,
                        RationalExpression x_inv, RationalExpression y_inv);

    static PointTransformation identity();
    static PointTransformation parse(const std::string& xt,
                                     const std::string& yt);
    static PointTransformation parse(const std::string& xt,
                                     const std::string& yt,
                                     const std::string& x_inv,
                                     const std::string& y_inv);

    const RationalExpression& xt() const { return xt_; }
    const RationalExpression& yt() const { return yt_; }

    bool has_inverse() const { return inverse_.has_value(); }
    // Throws InvalidTransformationError when no inverse is available.
    const std::array<RationalExpression, 2>& inverse() const;

    // e(new coordinates) composed with the map: a function of the old ones.
    RationalExpression pullback(const RationalExpression& e) const;
    // e(old coordinates) composed with the inverse: a function of the new
    // ones.  Requires the inverse.
    RationalExpression pushforward(const RationalExpression& e) const;

    // Numeric image of a point; throws PoleError on poles of the map.
    std::pair<BigRational, BigRational> apply(const BigRational& x0,
                                              const BigRational& y0) const;

private:
    void validate_and_complete();

    RationalExpression xt_, yt_;
    std::optional<std::array<RationalExpression, 2>> inverse_;
};

// Jacobi matrices of a coordinate change: T is the matrix of the direct map
// (entries are functions of the old coordinates), S the matrix of the
// inverse map.  S is realized as adj(T)/det(T), which keeps S.T = identity
// an exact algebraic fact and never needs the inverse map itself.
struct JacobianPair {
    std::array<std::array<RationalExpression, 2>, 2> t;
    std::array<std::array<RationalExpression, 2>, 2> s;
    RationalExpression det_t;

    static JacobianPair of(const PointTransformation& map);
};

// The coefficient quadruple of the equation satisfied by the images of the
// solutions, written in the new coordinates.  Derived on the spot by the
// chain rule: the slope transforms through the Jacobian, the second
// derivative picks up curvature terms of the map, and matching the cubic's
// coefficients gives an exact 4x4 linear solve.  Requires an invertible map
// with an available inverse; throws InvalidTransformationError otherwise.
OdeCoefficients transform_ode(const OdeCoefficients& ode,
                              const PointTransformation& map);

// Right-hand side of the pseudotensor change-of-coordinates law: takes a
// field's components in the new coordinates and produces its predicted
// components in the old ones,
//   F^{i..}_{j..} = det(T)^m  sum  S^{i}_{p} .. T^{q}_{j} .. Ftilde^{p..}_{q..} ,
// built exactly; comparisons against directly computed components are then
// made at sample points.
PseudoTensor transform_pseudotensor(const PseudoTensor& new_components,
                                    const PointTransformation& map,
                                    const JacobianPair& jac);

// Result of the numeric check of the covector correction rule
//   phi_i = sum_j T^j_i phitilde_j - d/dx^i ln det T .
struct PhiRuleReport {
    bool pass = false;
    int points_tested = 0;
    std::string detail;  // witness data when the check fails
};

// Verifies the rule at `trials` admissible sample points.  The equation must
// have identically vanishing fifth-order scalar (the stratum on which the
// covector exists); otherwise throws CaseViolationError.
PhiRuleReport check_phi_rule(const OdeCoefficients& ode,
                             const PointTransformation& map,
                             std::uint64_t seed = 0, int trials = 20);

}  // namespace odekit
