#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "odekit/jet.hpp"
#include "odekit/rational.hpp"

namespace odekit {

// Symbolic zero pattern of one classifying quantity.  "Generic" means as a
// function: a quantity that vanishes only along a curve is still generically
// nonzero, and such pointwise degenerations are reported as zero-locus
// warnings rather than case changes.
enum class ZeroPattern { IdenticallyZero, GenericallyNonzero };

inline const char* zero_pattern_name(ZeroPattern p) {
    return p == ZeroPattern::IdenticallyZero ? "identically-zero"
                                             : "generically-nonzero";
}

struct Witness {
    BigRational x, y;
};

// Flag for one quantity: its symbolic pattern, a sample point where it is
// nonzero (for generically nonzero ones), and, when the quantity is
// non-constant and a small rational point of its zero set exists, one such
// point as a warning.
struct QuantityFlag {
    ZeroPattern pattern = ZeroPattern::IdenticallyZero;
    std::optional<Witness> witness;
    std::optional<Witness> zero_locus_point;

    bool nonzero() const { return pattern == ZeroPattern::GenericallyNonzero; }
};

struct ClassificationReport {
    // Raw flags.  The fifth-order scalar and the two covector components are
    // always defined; the branch quantities M, Omega, N exist only when the
    // covector is nonzero, hence the optionals.
    QuantityFlag f5;
    QuantityFlag alpha_component_a;
    QuantityFlag alpha_component_b;
    bool alpha_zero = false;  // both components identically zero
    std::optional<QuantityFlag> m_flag;
    std::optional<QuantityFlag> omega_flag;
    std::optional<QuantityFlag> n_flag;

    // Labels.  shr_label is one of {ShrGP, ShrID1, ShrID2-7-unresolved,
    // ShrMD}; bgd_label one of {BgdET1, BgdET2, BgdET-other-unresolved,
    // BgdET9}.
    std::string shr_label;
    std::string bgd_label;

    // Membership in the second-type class under the two published readings
    // of its translated conditions (see `notes`): the contextual reading
    // requires the fifth-order scalar to vanish, the literal one requires it
    // not to.  bgd_label follows the contextual reading.
    bool second_type_contextual = false;
    bool second_type_literal = false;

    // Overlap of the first intermediate case with the second-type class,
    // with the same contextual reading.
    bool overlap = false;

    std::string branch_used;  // "A", "B", or "" when undefined

    // Classification-relevant remarks: the reading discrepancy note and any
    // zero-locus warnings, as human-readable strings.
    std::vector<std::string> notes;
};

// Assigns the equation to one case of each classification from the
// zero/nonzero pattern of its fifth-order scalar, covector components, and
// branch quantities.  `seed` drives witness sampling only; the patterns are
// decided symbolically.
ClassificationReport classify(const OdeCoefficients& ode,
                              std::uint64_t seed = 0);

struct CorrespondenceRow {
    const char* shr;
    const char* bgd;
    const char* caveat;  // empty when the classes match exactly
};

// The static pairing of the two label systems, with the caveat that the
// first intermediate case and the second-type class overlap substantially
// but do not coincide.
const std::vector<CorrespondenceRow>& correspondence_table();

}  // namespace odekit
