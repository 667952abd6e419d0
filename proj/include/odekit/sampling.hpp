#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "odekit/expression.hpp"
#include "odekit/rational.hpp"

namespace odekit {

// Deterministic source of small rational sample points for numeric checks.
// All draws are reproducible from the seed; predicates that keep rejecting
// every candidate are cut off after a fixed retry cap so poles or accidental
// zero loci cannot hang a run.
class PointSampler {
public:
    static constexpr int kRetryCap = 100;

    explicit PointSampler(std::uint64_t seed);

    // One rational with numerator in [-9, 9] and denominator in [1, 9],
    // excluding 0 unless `allow_zero` is set.
    BigRational rational(bool allow_zero = false);

    // A plane point (both coordinates nonzero, to dodge the most common
    // coordinate-axis degenerations).
    std::pair<BigRational, BigRational> point();

    // First sampled point satisfying `admissible`; throws PoleError after
    // kRetryCap rejections.
    std::pair<BigRational, BigRational> point_where(
        const std::function<bool(const BigRational&, const BigRational&)>& admissible);

private:
    std::uint64_t next_raw();

    std::uint64_t state_;
};

// Evaluates a concrete expression (variables `x` and `y` only) at a point.
// Throws PoleError on a vanishing denominator and MissingBindingError if the
// expression still contains other variables.
BigRational evaluate_at_point(const RationalExpression& expr, const BigRational& x,
                              const BigRational& y);

// True when the expression is defined and nonzero at the point.
bool nonzero_at_point(const RationalExpression& expr, const BigRational& x,
                      const BigRational& y);

}  // namespace odekit
