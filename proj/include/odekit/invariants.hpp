#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <vector>

#include "odekit/expression.hpp"
#include "odekit/jet.hpp"

namespace odekit {

// Which component of the fundamental covector alpha = (A, B) divides in the
// relative-invariant formulas: branch A assumes A != 0, branch B assumes
// B != 0.  Both branches describe the same geometry where both apply.
enum class Branch { A, B };

inline const char* branch_name(Branch b) { return b == Branch::A ? "A" : "B"; }

// A geometric object with r upper and s lower two-valued indices whose
// components transform with an extra power `weight` of the Jacobian
// determinant.  Components are stored flat: slot t of the index tuple
// (upper slots first) contributes bit t, with index value 1 -> bit 0 and
// index value 2 -> bit 1.
struct PseudoTensor {
    int rank_up = 0;
    int rank_down = 0;
    int weight = 0;
    std::vector<RationalExpression> comps;

    PseudoTensor(int ru, int rd, int w)
        : rank_up(ru), rank_down(rd), weight(w),
          comps(std::size_t(1) << (ru + rd)) {}

    int slots() const { return rank_up + rank_down; }

    static std::size_t flat_index(std::initializer_list<int> indices) {
        std::size_t idx = 0;
        int t = 0;
        for (int v : indices) idx |= std::size_t(v - 1) << t++;
        return idx;
    }

    RationalExpression& at(std::initializer_list<int> indices) {
        return comps[flat_index(indices)];
    }
    const RationalExpression& at(std::initializer_list<int> indices) const {
        return comps[flat_index(indices)];
    }

    bool is_zero() const {
        for (const auto& c : comps)
            if (!c.is_zero()) return false;
        return true;
    }
};

// A single quantity transforming with the given power of the Jacobian
// determinant (weight 0 = honest scalar invariant).
struct ScalarField {
    RationalExpression value;
    int weight = 0;
};

// The symmetric array of second-order relative invariants, eq-numbered
// entries (alpha0, alpha1, alpha2) arranged as a symmetric 2x2 array.
struct OmegaArray {
    RationalExpression o11, o12, o22;  // o21 == o12
};

// The full ladder of scalar relative invariants built by repeated
// differentiation, in the order they are constructed.
struct BagderinaLadder {
    RationalExpression alpha0, alpha1, alpha2;
    RationalExpression beta1, beta2;
    RationalExpression gamma10, gamma11, gamma20, gamma21;
    RationalExpression cap_gamma0, cap_gamma1;
    RationalExpression delta10, delta20, delta30, delta11, delta21, delta31;
    RationalExpression eps10, eps20, eps11;
    RationalExpression lambda10;
    OmegaArray omega_array;
};

// Upper-triangular-free part of the affine connection: a weightless symmetric
// spray of coefficients theta^k_ij.  The default choice packs the equation's
// coefficient functions into a trace-free array; any override must keep the
// i<->j symmetry.
struct Theta {
    // coeff[k][i][j] with zero-based indices for k,i,j in {1,2}.
    std::array<std::array<std::array<RationalExpression, 2>, 2>, 2> coeff;

    static Theta standard();
};

// Connection data actually used by covariant differentiation.
struct ConnectionCoefficients {
    // gamma[k][i][j]: Gamma^k_ij (symmetric in i,j).
    std::array<std::array<std::array<RationalExpression, 2>, 2>, 2> gamma;
    Theta theta;
    std::array<RationalExpression, 2> phi;
};

// Moving-frame connection coefficients: hat[k][i][j] is the alpha-component
// (k=1) or gamma-component (k=2) of the derivative of frame field j in frame
// direction i (1 = along alpha, 2 = along gamma).  Each entry carries its own
// weight.
struct FrameCoefficients {
    std::array<std::array<std::array<ScalarField, 2>, 2>, 2> hat;

    const ScalarField& at(int k, int i, int j) const {
        return hat[k - 1][i - 1][j - 1];
    }
};

// Curvature of the weighted connection.
struct CurvatureData {
    PseudoTensor riemann;      // R^k_rij, type (1,3), weight 0
    PseudoTensor trace_form;   // sum_k R^k_kij, type (0,2), weight 0
    PseudoTensor r_matrix;     // R^k_q = R^k_{q12}, type (1,1), weight 1
    ScalarField tr_r;          // weight 1
    ScalarField det_r;         // weight 2

    CurvatureData()
        : riemann(1, 3, 0), trace_form(0, 2, 0), r_matrix(1, 1, 1),
          tr_r{RationalExpression(), 1}, det_r{RationalExpression(), 2} {}
};

// Symbolic engine for every invariant-theoretic quantity attached to one
// equation class.  Two modes share all formulas:
//   * generic mode (default construction): quantities are universal
//     expressions in the jet variables L[p,q];
//   * concrete mode (for_ode): every jet variable is instantiated with the
//     derivative of a concrete coefficient function, so all cached values are
//     rational functions of x and y alone.
// An optional simplifier hook is applied to every cached intermediate, which
// is also how constrained-chart normal forms are threaded through the same
// formulas.  Engines memoize aggressively and are cheap to copy before first
// use; one engine must not be shared between threads.
class Engine {
public:
    using Simplifier = std::function<RationalExpression(const RationalExpression&)>;

    explicit Engine(Branch branch = Branch::A, Theta theta = Theta::standard(),
                    Simplifier simplify = {});

    // Concrete mode: all jets bound to derivatives of `ode`'s coefficients.
    // Construction never throws for degenerate equations; the branch guards
    // fire lazily on first use of a branch-dependent quantity.
    static Engine for_ode(const OdeCoefficients& ode, Branch branch,
                          Theta theta = Theta::standard());

    Branch branch() const { return branch_; }
    bool concrete() const { return static_cast<bool>(ode_); }
    const OdeCoefficients& ode() const;

    // --- fundamental skew form ------------------------------------------
    static PseudoTensor d_lower();  // d_ij  = [[0,1],[-1,0]], weight -1
    static PseudoTensor d_upper();  // d^ij  = [[0,1],[-1,0]], weight +1

    // --- coefficient-letter jets and ladder ------------------------------
    const BagderinaLadder& ladder() const;

    const RationalExpression& coeff_a() const;  // A (fifth-order part 1)
    const RationalExpression& coeff_b() const;  // B (fifth-order part 2)
    const RationalExpression& g_quantity() const;  // G
    const RationalExpression& h_quantity() const;  // H

    const PseudoTensor& alpha_covector() const;  // (A, B), weight 1
    const PseudoTensor& alpha_vector() const;    // (B, -A), weight 2
    const PseudoTensor& beta_covector() const;   // (-H, G), weight 3
    const PseudoTensor& beta_vector() const;     // (G, H), weight 4

    const ScalarField& f5() const;  // F^5 (weight 5, i.e. F has weight 1)
    const ScalarField& J0() const;  // the degree-5 determinant polynomial

    // --- branch quantities ------------------------------------------------
    const ScalarField& n_field() const;                    // N, weight 2
    const std::array<RationalExpression, 2>& phi() const;  // covector-like
    const ScalarField& m_field() const;                    // M, weight 4
    const PseudoTensor& gamma_covector() const;            // weight 2
    const PseudoTensor& gamma_vector() const;              // weight 3
    const ScalarField& omega_field() const;                // Omega, weight 1

    // Curl form of phi and the scalar it contracts to (must agree with
    // omega_field; exposed separately so the agreement stays checkable).
    const PseudoTensor& phi_curl() const;      // type (0,2), weight 0
    ScalarField omega_from_phi_curl() const;   // weight 1

    // --- connection, curvature, covariant derivative ----------------------
    const ConnectionCoefficients& connection() const;
    const CurvatureData& curvature() const;

    // Weighted covariant derivative in coordinate direction k in {1, 2}.
    ScalarField covariant_derivative(const ScalarField& f, int k) const;
    PseudoTensor covariant_derivative(const PseudoTensor& t, int k) const;

    // --- directional derivations -------------------------------------------
    ScalarField nabla_alpha(const ScalarField& f) const;
    ScalarField nabla_gamma(const ScalarField& f) const;
    PseudoTensor nabla_alpha(const PseudoTensor& t) const;
    PseudoTensor nabla_gamma(const PseudoTensor& t) const;

    // First canonical invariant differentiation: nabla_alpha / (3 Omega)^2.
    ScalarField d1_apply(const ScalarField& f) const;
    // Second canonical invariant differentiation, in its frame expansion.
    ScalarField d2_apply(const ScalarField& f) const;
    // Coordinate coefficients (c1, c2) of D2 = c1 nabla_1 + c2 nabla_2 in the
    // tensorial form.
    std::array<RationalExpression, 2> d2_coefficients() const;
    // Coefficients of the literal printed chain for D2 (exposed for
    // arbitration against the tensorial form; see the identity suite).
    std::array<RationalExpression, 2> d2_coefficients_printed() const;
    const ScalarField& e1_quantity() const;   // printed auxiliary e1
    const ScalarField& mu2_quantity() const;  // printed auxiliary mu2

    // --- moving frame -------------------------------------------------------
    const FrameCoefficients& frame() const;
    // Commutator [alpha, gamma] as a vector field (weight 5).
    const PseudoTensor& frame_commutator() const;
    // Curvature operator in the frame: entries F^k_j of the 2x2 matrix, and
    // its determinant (equals det of r_matrix; checked by the suite).
    const std::array<ScalarField, 4>& f_matrix() const;  // F11, F21, F12, F22
    ScalarField det_f() const;

    // --- scalar differential invariants -------------------------------------
    // The sixth-order scalar, in the reading that satisfies j0 = -3*Omega on
    // every chart (the last factor of its second term ends in gamma10).
    const ScalarField& j0() const;
    // Literal printed reading (gamma11 repeated in the last factor): violates
    // the trace identity whenever beta2 != 0; kept as a regression guard.
    const ScalarField& j0_printed() const;
    const ScalarField& j1() const;
    const ScalarField& j2() const;
    const ScalarField& j3() const;
    const ScalarField& j4() const;
    const ScalarField& j5() const;

    const ScalarField& invariant(int k) const;  // I_1 .. I_9 (weight 0)
    // Same-named quantity with the final exponent dropped (regression guard
    // for a known misprint; must NOT equal invariant(3) generically).
    ScalarField invariant3_dropped_exponent() const;

    const ScalarField& i1_bgd() const;  // first comparison invariant
    const ScalarField& i2_bgd() const;  // second comparison invariant
    // Comparison invariant computed through j0^2 with either j0 reading.
    ScalarField i2_bgd_via_j0(bool printed_reading) const;

private:
    struct Cache;

    RationalExpression simp(RationalExpression e) const;
    RationalExpression dx(const RationalExpression& e) const;
    RationalExpression dy(const RationalExpression& e) const;
    RationalExpression dk(const RationalExpression& e, int k) const;
    RationalExpression letter(CoeffLetter l) const;

    // Branch guards (concrete mode only): throw MaximalDegenerationError when
    // alpha vanishes identically, CaseViolationError when the selected branch
    // denominator does.
    const RationalExpression& branch_denominator() const;
    void require_nonzero(const RationalExpression& value, const char* condition) const;

    ScalarField scalar(RationalExpression v, int w) const;

    Branch branch_;
    Theta theta_;
    Simplifier simplify_;
    std::optional<OdeCoefficients> ode_;
    std::shared_ptr<Cache> cache_;
};

// The connection and its curvature are meaningful for ANY covector paired
// with a symmetric trace-free theta, and the trace identities checked by the
// suite hold across that whole family.  These free functions build both from
// explicit parts; the engine delegates to them with its branch covector, and
// the identity suite also calls them with polynomial stand-ins, which keeps
// the unconditional expansion checks denominator-free.
ConnectionCoefficients make_connection(
    const Theta& theta, const std::array<RationalExpression, 2>& phi,
    const Engine::Simplifier& simplify = {});
CurvatureData curvature_of(const ConnectionCoefficients& conn,
                           const Engine::Simplifier& simplify = {});
// Weighted covariant derivative in coordinate direction k with explicit
// connection data (one direction slice, same shape as the input).
PseudoTensor covariant_slice(const ConnectionCoefficients& conn,
                             const PseudoTensor& t, int k,
                             const Engine::Simplifier& simplify = {});

// Chooses the branch whose denominator is nonzero at a seeded sample point
// (preferring branch A), falling back to symbolic nonvanishing; throws
// MaximalDegenerationError when alpha vanishes identically.
Branch select_branch(const OdeCoefficients& ode, std::uint64_t seed);

}  // namespace odekit
