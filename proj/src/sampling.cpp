#include "odekit/sampling.hpp"

#include "odekit/error.hpp"
#include "odekit/variable.hpp"

namespace odekit {

namespace {

// splitmix64 step: a fully specified generator, so sampled points are
// byte-identical across platforms and standard-library versions.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

PointSampler::PointSampler(std::uint64_t seed) : state_(seed) {}

std::uint64_t PointSampler::next_raw() { return splitmix64(state_); }

BigRational PointSampler::rational(bool allow_zero) {
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
        const std::uint64_t raw = next_raw();
        const long numerator = static_cast<long>(raw % 19) - 9;   // [-9, 9]
        const long denominator = static_cast<long>((raw >> 8) % 9) + 1;  // [1, 9]
        if (numerator == 0 && !allow_zero) continue;
        return BigRational(numerator, denominator);
    }
    return BigRational(1);  // unreachable in practice: 0 has chance 1/19 per draw
}

std::pair<BigRational, BigRational> PointSampler::point() {
    return {rational(), rational()};
}

std::pair<BigRational, BigRational> PointSampler::point_where(
    const std::function<bool(const BigRational&, const BigRational&)>& admissible) {
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
        auto candidate = point();
        if (admissible(candidate.first, candidate.second)) return candidate;
    }
    throw PoleError("no admissible sample point found within " +
                    std::to_string(kRetryCap) + " attempts");
}

BigRational evaluate_at_point(const RationalExpression& expr, const BigRational& x,
                              const BigRational& y) {
    std::map<VariableId, BigRational> bindings;
    bindings[VariableId::base_x()] = x;
    bindings[VariableId::base_y()] = y;
    return expr.evaluate(bindings);
}

bool nonzero_at_point(const RationalExpression& expr, const BigRational& x,
                      const BigRational& y) {
    try {
        return evaluate_at_point(expr, x, y) != 0;
    } catch (const PoleError&) {
        return false;
    }
}

}  // namespace odekit
