#include "odekit/reduction.hpp"

#include <algorithm>
#include <mutex>
#include <vector>

#include "odekit/error.hpp"

namespace odekit {

namespace {

RationalExpression rc(long num, long den = 1) {
    return RationalExpression::constant(BigRational(num, den));
}

// Deterministic 64-bit mix step (same generator family as the point
// sampler); used only to randomize rewrite order in the confluence check.
std::uint64_t mix_step(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<VariableId> eliminated_in(const RationalExpression& e) {
    std::vector<VariableId> out;
    for (const Polynomial* part : {&e.numerator(), &e.denominator()})
        for (VariableId v : part->variables())
            if (ReductionSystem::eliminated(v)) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

ReductionSystem::ReductionSystem() = default;

bool ReductionSystem::eliminated(VariableId v) {
    if (v.kind() != VariableId::Kind::Jet) return false;
    switch (v.jet_letter()) {
        case CoeffLetter::S: return true;
        case CoeffLetter::P:
        case CoeffLetter::Q: return v.jet_q() >= 2;
        case CoeffLetter::R: return false;
    }
    return false;
}

RationalExpression ReductionSystem::solved_form(VariableId jet) const {
    if (!eliminated(jet))
        throw Error("no rewrite rule for free variable " + variable_name(jet));
    {
        std::shared_lock lock(mutex_);
        auto it = rules_.find(jet);
        if (it != rules_.end()) return it->second;
    }

    RationalExpression rhs;
    const CoeffLetter letter = jet.jet_letter();
    const std::uint32_t p = jet.jet_p();
    const std::uint32_t q = jet.jet_q();
    if (letter == CoeffLetter::S) {
        rhs = RationalExpression();  // zero
    } else if (p == 0 && q == 2) {
        if (letter == CoeffLetter::P) {
            // Solved first constraint.
            rhs = rc(1) + rc(2) * jet_expr(CoeffLetter::Q, 1, 1) -
                  jet_expr(CoeffLetter::R, 2, 0) +
                  rc(3) * jet_expr(CoeffLetter::P, 0, 0) *
                      jet_expr(CoeffLetter::R, 0, 1) +
                  rc(3) * jet_expr(CoeffLetter::R, 0, 0) *
                      jet_expr(CoeffLetter::P, 0, 1) +
                  rc(3) * jet_expr(CoeffLetter::Q, 0, 0) *
                      jet_expr(CoeffLetter::R, 1, 0) -
                  rc(6) * jet_expr(CoeffLetter::Q, 0, 0) *
                      jet_expr(CoeffLetter::Q, 0, 1);
        } else {
            // Solved second constraint.
            rhs = rc(2) * jet_expr(CoeffLetter::R, 1, 1) -
                  rc(3) * jet_expr(CoeffLetter::R, 0, 0) *
                      jet_expr(CoeffLetter::Q, 0, 1) +
                  rc(6) * jet_expr(CoeffLetter::R, 0, 0) *
                      jet_expr(CoeffLetter::R, 1, 0);
        }
    } else {
        // Prolong from the next-lower rule by one total derivative.  Every
        // jet this introduces ranks strictly below `jet`, so reducing the
        // derivative terminates.
        rhs = normal_form(raw_rule(jet));
    }

    std::unique_lock lock(mutex_);
    auto [it, inserted] = rules_.emplace(jet, std::move(rhs));
    (void)inserted;  // a concurrent duplicate computes the same value
    return it->second;
}

RationalExpression ReductionSystem::raw_rule(VariableId jet) const {
    if (jet.jet_letter() == CoeffLetter::S) return RationalExpression();
    const std::uint32_t p = jet.jet_p();
    const std::uint32_t q = jet.jet_q();
    if (p == 0 && q == 2) return solved_form(jet);  // base rules are raw
    {
        std::shared_lock lock(mutex_);
        auto it = raw_rules_.find(jet);
        if (it != raw_rules_.end()) return it->second;
    }
    const bool step_x = p > 0;
    const VariableId parent =
        step_x ? VariableId::jet(jet.jet_letter(), p - 1, q)
               : VariableId::jet(jet.jet_letter(), p, q - 1);
    RationalExpression rhs = total_derivative(
        raw_rule(parent), step_x ? Direction::X : Direction::Y);
    std::unique_lock lock(mutex_);
    auto [it, inserted] = raw_rules_.emplace(jet, std::move(rhs));
    (void)inserted;
    return it->second;
}

RationalExpression ReductionSystem::reduce(const RationalExpression& e,
                                           std::uint64_t* rng_state) const {
    RationalExpression cur = e;
    for (;;) {
        std::vector<VariableId> vars = eliminated_in(cur);
        if (vars.empty()) return cur;
        if (rng_state == nullptr) {
            // Every solved form is itself fully reduced, so one simultaneous
            // substitution of everything present finishes the job.
            std::map<VariableId, RationalExpression> all;
            for (VariableId v : vars) all.emplace(v, solved_form(v));
            cur = cur.substitute(all);
        } else {
            // Raw rules keep lower-ranked eliminated jets in their right
            // sides; the loop keeps rewriting until none remain.  Each step
            // replaces one jet by strictly lower-ranked material, so the
            // multiset of eliminated jets decreases and the loop terminates.
            const std::size_t pick =
                std::size_t(mix_step(*rng_state) % vars.size());
            const VariableId v = vars[pick];
            cur = cur.substitute({{v, raw_rule(v)}});
        }
    }
}

RationalExpression ReductionSystem::normal_form(
    const RationalExpression& e) const {
    return reduce(e, nullptr);
}

RationalExpression ReductionSystem::normal_form_randomized(
    const RationalExpression& e, std::uint64_t seed) const {
    std::uint64_t state = seed;
    return reduce(e, &state);
}

bool ReductionSystem::vanishes(const RationalExpression& e) const {
    const RationalExpression den =
        normal_form(RationalExpression::from_polynomial(e.denominator()));
    if (den.is_zero())
        throw PoleError(
            "denominator lies in the constraint ideal; the expression has no "
            "value on the constraint variety");
    return normal_form(RationalExpression::from_polynomial(e.numerator()))
        .is_zero();
}

bool ReductionSystem::equal_mod(const RationalExpression& lhs,
                                const RationalExpression& rhs) const {
    // Cross-multiplied so nothing is inverted modulo the ideal.
    const RationalExpression cross = RationalExpression::from_polynomial(
        lhs.numerator() * rhs.denominator() -
        rhs.numerator() * lhs.denominator());
    for (const Polynomial* den : {&lhs.denominator(), &rhs.denominator()})
        if (normal_form(RationalExpression::from_polynomial(*den)).is_zero())
            throw PoleError(
                "denominator lies in the constraint ideal; equality modulo "
                "the constraints is undefined");
    return normal_form(cross).is_zero();
}

SpecialValueCheck check_special_value(const ReductionSystem& system,
                                      const RationalExpression& computed,
                                      const RationalExpression& expected) {
    const RationalExpression cross = RationalExpression::from_polynomial(
        computed.numerator() * expected.denominator() -
        expected.numerator() * computed.denominator());
    SpecialValueCheck result;
    result.residual = system.normal_form(cross);
    result.pass = result.residual.is_zero() &&
                  !system
                       .normal_form(RationalExpression::from_polynomial(
                           computed.denominator()))
                       .is_zero() &&
                  !system
                       .normal_form(RationalExpression::from_polynomial(
                           expected.denominator()))
                       .is_zero();
    return result;
}

}  // namespace odekit
