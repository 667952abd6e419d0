#include "odekit/transform.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "odekit/error.hpp"
#include "odekit/parser.hpp"
#include "odekit/sampling.hpp"
#include "odekit/variable.hpp"

namespace odekit {

namespace {

const VariableId kX = VariableId::base_x();
const VariableId kY = VariableId::base_y();

RationalExpression x_expr() { return RationalExpression::variable(kX); }
RationalExpression y_expr() { return RationalExpression::variable(kY); }

bool nonzero_constant(const RationalExpression& e) {
    return e.is_constant() && !e.is_zero();
}

// Exact 4x4 linear solve by Gaussian elimination with symbolic pivoting.
std::array<RationalExpression, 4> solve4(
    std::array<std::array<RationalExpression, 4>, 4> m,
    std::array<RationalExpression, 4> rhs) {
    for (int k = 0; k < 4; ++k) {
        int pivot = -1;
        for (int r = k; r < 4; ++r)
            if (!m[r][k].is_zero()) { pivot = r; break; }
        if (pivot < 0)
            throw InvalidTransformationError(
                "coefficient matching system is singular");
        std::swap(m[k], m[pivot]);
        std::swap(rhs[k], rhs[pivot]);
        for (int r = k + 1; r < 4; ++r) {
            if (m[r][k].is_zero()) continue;
            const RationalExpression f = m[r][k] / m[k][k];
            for (int c = k; c < 4; ++c) m[r][c] -= f * m[k][c];
            rhs[r] -= f * rhs[k];
        }
    }
    std::array<RationalExpression, 4> out;
    for (int k = 3; k >= 0; --k) {
        RationalExpression acc = rhs[k];
        for (int c = k + 1; c < 4; ++c) acc -= m[k][c] * out[c];
        out[k] = acc / m[k][k];
    }
    return out;
}

}  // namespace

PointTransformation::PointTransformation(RationalExpression xt,
                                         RationalExpression yt)
    : xt_(std::move(xt)), yt_(std::move(yt)) {
    validate_and_complete();
}

PointTransformation::PointTransformation(RationalExpression xt,
                                         RationalExpression yt,
                                         RationalExpression x_inv,
                                         RationalExpression y_inv)
    : xt_(std::move(xt)), yt_(std::move(yt)),
      inverse_(std::array<RationalExpression, 2>{std::move(x_inv),
                                                 std::move(y_inv)}) {
    validate_and_complete();
}

PointTransformation PointTransformation::identity() {
    return PointTransformation(x_expr(), y_expr());
}

PointTransformation PointTransformation::parse(const std::string& xt,
                                               const std::string& yt) {
    return PointTransformation(parse_expression(xt), parse_expression(yt));
}

PointTransformation PointTransformation::parse(const std::string& xt,
                                               const std::string& yt,
                                               const std::string& x_inv,
                                               const std::string& y_inv) {
    return PointTransformation(parse_expression(xt), parse_expression(yt),
                               parse_expression(x_inv),
                               parse_expression(y_inv));
}

void PointTransformation::validate_and_complete() {
    for (const RationalExpression* e : {&xt_, &yt_})
        for (const Polynomial* part : {&e->numerator(), &e->denominator()})
            for (VariableId v : part->variables())
                if (v != kX && v != kY)
                    throw InvalidTransformationError(
                        "map components may only involve the two coordinates");

    const RationalExpression a = xt_.derivative(kX);
    const RationalExpression b = xt_.derivative(kY);
    const RationalExpression c = yt_.derivative(kX);
    const RationalExpression d = yt_.derivative(kY);
    if ((a * d - b * c).is_zero())
        throw InvalidTransformationError(
            "Jacobian determinant vanishes identically");

    if (!inverse_) {
        if (a.is_constant() && b.is_constant() && c.is_constant() &&
            d.is_constant()) {
            // Affine map: invert the linear part exactly.
            const RationalExpression e0 = xt_ - a * x_expr() - b * y_expr();
            const RationalExpression f0 = yt_ - c * x_expr() - d * y_expr();
            const RationalExpression det = a * d - b * c;
            inverse_ = {{(d * (x_expr() - e0) - b * (y_expr() - f0)) / det,
                         (a * (y_expr() - f0) - c * (x_expr() - e0)) / det}};
        } else if (b.is_zero() && nonzero_constant(a) && nonzero_constant(d)) {
            // Triangular: xt = a x + b0 depends on x alone, yt = d y + g(x).
            const RationalExpression b0 = xt_ - a * x_expr();
            if (b0.is_constant()) {
                const RationalExpression x_inv = (x_expr() - b0) / a;
                const RationalExpression g = yt_ - d * y_expr();
                const RationalExpression g_at =
                    g.substitute({{kX, x_inv}});
                inverse_ = {{x_inv, (y_expr() - g_at) / d}};
            }
        } else if (c.is_zero() && nonzero_constant(d) && nonzero_constant(a)) {
            // Triangular the other way: yt = d y + e0, xt = a x + f(y).
            const RationalExpression e0 = yt_ - d * y_expr();
            if (e0.is_constant()) {
                const RationalExpression y_inv = (y_expr() - e0) / d;
                const RationalExpression f = xt_ - a * x_expr();
                const RationalExpression f_at =
                    f.substitute({{kY, y_inv}});
                inverse_ = {{(x_expr() - f_at) / a, y_inv}};
            }
        }
    }

    if (inverse_) {
        // Exact composition check: map(inverse) must be the identity pair.
        const std::map<VariableId, RationalExpression> sub{
            {kX, (*inverse_)[0]}, {kY, (*inverse_)[1]}};
        try {
            if (!(xt_.substitute(sub) == x_expr()) ||
                !(yt_.substitute(sub) == y_expr()))
                throw InvalidTransformationError(
                    "inverse pair does not compose to the identity");
        } catch (const PoleError&) {
            throw InvalidTransformationError(
                "inverse pair hits a pole of the map");
        }
    }
}

const std::array<RationalExpression, 2>& PointTransformation::inverse() const {
    if (!inverse_)
        throw InvalidTransformationError(
            "no closed-form inverse available; supply one explicitly");
    return *inverse_;
}

RationalExpression PointTransformation::pullback(
    const RationalExpression& e) const {
    return e.substitute({{kX, xt_}, {kY, yt_}});
}

RationalExpression PointTransformation::pushforward(
    const RationalExpression& e) const {
    const auto& inv = inverse();
    return e.substitute({{kX, inv[0]}, {kY, inv[1]}});
}

std::pair<BigRational, BigRational> PointTransformation::apply(
    const BigRational& x0, const BigRational& y0) const {
    const std::map<VariableId, BigRational> at{{kX, x0}, {kY, y0}};
    return {xt_.evaluate(at), yt_.evaluate(at)};
}

JacobianPair JacobianPair::of(const PointTransformation& map) {
    JacobianPair jac;
    jac.t[0][0] = map.xt().derivative(kX);
    jac.t[0][1] = map.xt().derivative(kY);
    jac.t[1][0] = map.yt().derivative(kX);
    jac.t[1][1] = map.yt().derivative(kY);
    jac.det_t = jac.t[0][0] * jac.t[1][1] - jac.t[0][1] * jac.t[1][0];
    jac.s[0][0] = jac.t[1][1] / jac.det_t;
    jac.s[0][1] = -(jac.t[0][1] / jac.det_t);
    jac.s[1][0] = -(jac.t[1][0] / jac.det_t);
    jac.s[1][1] = jac.t[0][0] / jac.det_t;
    return jac;
}

OdeCoefficients transform_ode(const OdeCoefficients& ode,
                              const PointTransformation& map) {
    const JacobianPair jac = JacobianPair::of(map);
    const RationalExpression& a = jac.t[0][0];
    const RationalExpression& b = jac.t[0][1];
    const RationalExpression& c = jac.t[1][0];
    const RationalExpression& d = jac.t[1][1];
    const RationalExpression& det = jac.det_t;

    // Second derivatives of the map components.
    const RationalExpression xt_xx = a.derivative(kX);
    const RationalExpression xt_xy = a.derivative(kY);
    const RationalExpression xt_yy = b.derivative(kY);
    const RationalExpression yt_xx = c.derivative(kX);
    const RationalExpression yt_xy = c.derivative(kY);
    const RationalExpression yt_yy = d.derivative(kY);

    // Along a solution with slope w, the new slope is N1/D1 with
    // N1 = c + d w and D1 = a + b w.  Differentiating once more and
    // substituting the equation for y'' turns the transformed equation,
    // cleared of denominators, into an identity of cubics in w:
    //   det (P + 3Q w + 3R w^2 + S w^3)
    //     + (yt_xx + 2 yt_xy w + yt_yy w^2) D1
    //     - (xt_xx + 2 xt_xy w + xt_yy w^2) N1
    //   = Pt D1^3 + 3 Qt N1 D1^2 + 3 Rt N1^2 D1 + St N1^3 ,
    // where the right-hand coefficients are the new quadruple composed with
    // the map.  Matching the powers of w gives a 4x4 linear system.
    const RationalExpression three = RationalExpression::constant(3);
    const RationalExpression two = RationalExpression::constant(2);

    std::array<RationalExpression, 4> rhs;
    rhs[0] = det * ode.P + yt_xx * a - xt_xx * c;
    rhs[1] = det * three * ode.Q + yt_xx * b + two * yt_xy * a - xt_xx * d -
             two * xt_xy * c;
    rhs[2] = det * three * ode.R + two * yt_xy * b + yt_yy * a -
             two * xt_xy * d - xt_yy * c;
    rhs[3] = det * ode.S + yt_yy * b - xt_yy * d;

    std::array<std::array<RationalExpression, 4>, 4> m;
    m[0] = {a.pow(3), three * c * a * a, three * c * c * a, c.pow(3)};
    m[1] = {three * a * a * b, three * (two * a * b * c + a * a * d),
            three * (two * a * c * d + b * c * c), three * c * c * d};
    m[2] = {three * a * b * b, three * (b * b * c + two * a * b * d),
            three * (a * d * d + two * b * c * d), three * c * d * d};
    m[3] = {b.pow(3), three * b * b * d, three * b * d * d, d.pow(3)};

    const std::array<RationalExpression, 4> composed = solve4(m, rhs);
    return OdeCoefficients(map.pushforward(composed[0]),
                           map.pushforward(composed[1]),
                           map.pushforward(composed[2]),
                           map.pushforward(composed[3]));
}

PseudoTensor transform_pseudotensor(const PseudoTensor& new_components,
                                    const PointTransformation& map,
                                    const JacobianPair& jac) {
    const int r = new_components.rank_up;
    const int n = new_components.slots();
    const std::size_t count = std::size_t(1) << n;

    std::vector<RationalExpression> pulled(count);
    for (std::size_t i = 0; i < count; ++i)
        pulled[i] = map.pullback(new_components.comps[i]);

    const RationalExpression wfactor =
        jac.det_t.pow(new_components.weight);

    PseudoTensor out(new_components.rank_up, new_components.rank_down,
                     new_components.weight);
    for (std::size_t tgt = 0; tgt < count; ++tgt) {
        RationalExpression sum;
        for (std::size_t src = 0; src < count; ++src) {
            RationalExpression term = pulled[src];
            for (int slot = 0; slot < n; ++slot) {
                const int ti = int(tgt >> slot) & 1;
                const int si = int(src >> slot) & 1;
                // Upper slots contract with the inverse matrix, lower slots
                // with the direct one.
                term *= (slot < r) ? jac.s[ti][si] : jac.t[si][ti];
            }
            sum += term;
        }
        out.comps[tgt] = wfactor * sum;
    }
    return out;
}

PhiRuleReport check_phi_rule(const OdeCoefficients& ode,
                             const PointTransformation& map,
                             std::uint64_t seed, int trials) {
    {
        Engine probe = Engine::for_ode(ode, Branch::A);
        if (!probe.f5().value.is_zero())
            throw CaseViolationError(
                "fifth-order scalar does not vanish identically; the "
                "covector rule lives on the degenerate stratum");
    }
    Engine eng = Engine::for_ode(ode, select_branch(ode, seed));
    const OdeCoefficients moved = transform_ode(ode, map);
    Engine eng_new =
        Engine::for_ode(moved, select_branch(moved, seed ^ 0x5851f42dull));

    const JacobianPair jac = JacobianPair::of(map);
    const std::array<RationalExpression, 2>& phi = eng.phi();
    const std::array<RationalExpression, 2>& phi_new = eng_new.phi();

    // Right side of the rule as a function of the old coordinates:
    //   sum_j T^j_i (phi_new_j o map) - d_i(det T)/det T .
    std::array<RationalExpression, 2> rhs;
    for (int i = 0; i < 2; ++i) {
        const VariableId xi = (i == 0) ? kX : kY;
        rhs[i] = jac.t[0][i] * map.pullback(phi_new[0]) +
                 jac.t[1][i] * map.pullback(phi_new[1]) -
                 jac.det_t.derivative(xi) / jac.det_t;
    }

    PhiRuleReport report;
    PointSampler sampler(seed);
    for (int k = 0; k < trials; ++k) {
        for (int attempt = 0;; ++attempt) {
            if (attempt >= PointSampler::kRetryCap)
                throw PoleError("no admissible sample point for the covector rule");
            const auto [x0, y0] = sampler.point();
            const std::map<VariableId, BigRational> at{{kX, x0}, {kY, y0}};
            try {
                bool ok = true;
                for (int i = 0; i < 2 && ok; ++i)
                    ok = (phi[i].evaluate(at) == rhs[i].evaluate(at));
                ++report.points_tested;
                if (!ok) {
                    std::ostringstream msg;
                    msg << "mismatch at x = " << rational_string(x0)
                        << ", y = " << rational_string(y0);
                    report.detail = msg.str();
                    return report;
                }
                break;
            } catch (const PoleError&) {
                continue;  // resample
            }
        }
    }
    report.pass = true;
    return report;
}

}  // namespace odekit
