#pragma once

#include <cstdint>
#include <map>
#include <shared_mutex>

#include "odekit/expression.hpp"
#include "odekit/jet.hpp"

namespace odekit {

// Rewrite system for the constrained unit chart: the fourth coefficient
// function vanishes identically (every S-jet rewrites to zero) and the two
// second-order constraints, solved for the leading jets P[0,2] and Q[0,2],
// eliminate every P- and Q-jet with q >= 2 after prolongation by total
// derivatives.  R-jets, P/Q-jets with q <= 1, and the base variables stay
// free.
//
// Elimination ranking (strictly decreasing under every rewrite): letter class
// S over P over Q, then total order p+q, then q.  Each solved form mentions
// only strictly lower-ranked eliminated jets, so normal forms are reached in
// finitely many steps whatever the application order; a randomized-order
// variant is exposed for the confluence check.
//
// Prolonged rules are generated on demand and memoized; the store only grows.
// Concurrent readers are fine, insertion is serialized.
class ReductionSystem {
public:
    ReductionSystem();

    // True iff v is a jet the system rewrites (S-jets; P/Q-jets with q >= 2).
    static bool eliminated(VariableId v);

    // The solved right side for one eliminated jet, itself in normal form.
    RationalExpression solved_form(VariableId jet) const;

    // Rewrites until no eliminated jet remains, highest-ranked first.
    // Numerator and denominator reduce separately (substitution is a ring
    // map); throws PoleError when the denominator lies in the constraint
    // ideal, since the fraction has no value on the constraint variety.
    RationalExpression normal_form(const RationalExpression& e) const;

    // Same result through a genuinely different route: one eliminated jet at
    // a time in a seed-determined random order, each replaced by its RAW
    // prolonged rule (a total derivative of the parent rule, not reduced), so
    // intermediate right sides still contain lower-ranked eliminated jets.
    // Agreement with normal_form is the confluence check.
    RationalExpression normal_form_randomized(const RationalExpression& e,
                                              std::uint64_t seed) const;

    // True iff e vanishes identically on the constraint variety (away from
    // denominator poles): the reduced numerator is the zero polynomial.
    bool vanishes(const RationalExpression& e) const;

    // Decides lhs == rhs modulo the constraints by cross-multiplication,
    // so no denominator inversion happens inside the ideal.
    bool equal_mod(const RationalExpression& lhs,
                   const RationalExpression& rhs) const;

private:
    RationalExpression reduce(const RationalExpression& e,
                              std::uint64_t* rng_state) const;
    RationalExpression raw_rule(VariableId jet) const;

    mutable std::map<VariableId, RationalExpression> rules_;
    mutable std::map<VariableId, RationalExpression> raw_rules_;
    mutable std::shared_mutex mutex_;
};

// Result of comparing an engine-computed quantity against its expected
// constrained-chart value: pass iff the reduced difference vanishes; the
// residual (zero on pass) is kept for diagnosis.
struct SpecialValueCheck {
    bool pass;
    RationalExpression residual;
};

SpecialValueCheck check_special_value(const ReductionSystem& system,
                                      const RationalExpression& computed,
                                      const RationalExpression& expected);

}  // namespace odekit
