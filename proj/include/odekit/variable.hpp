#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "odekit/error.hpp"

namespace odekit {

// The four coefficient functions of a cubic-in-first-derivative equation.
enum class CoeffLetter : std::uint32_t { P = 0, Q = 1, R = 2, S = 3 };

inline char letter_char(CoeffLetter l) {
    switch (l) {
        case CoeffLetter::P: return 'P';
        case CoeffLetter::Q: return 'Q';
        case CoeffLetter::R: return 'R';
        case CoeffLetter::S: return 'S';
    }
    return '?';
}

// Identifies one variable.  Three kinds exist:
//   base    the independent coordinates x (index 0) and y (index 1)
//   jet     L[p,q], the p-fold x / q-fold y derivative of L in {P,Q,R,S}
//   symbol  an interned auxiliary symbol (fresh unknowns, slope markers, ...)
// The packed integer code defines the global variable precedence used by the
// monomial order: x < y < P[0,0] < ... < S[p,q] < symbols, jets ordered by
// (letter, p, q).
class VariableId {
public:
    enum class Kind : std::uint32_t { Base = 0, Jet = 1, Symbol = 2 };

    static constexpr std::uint32_t kMaxJetOrder = 1023;

    static VariableId base_x() { return VariableId(0); }
    static VariableId base_y() { return VariableId(1); }

    static VariableId jet(CoeffLetter letter, std::uint32_t p, std::uint32_t q) {
        if (p > kMaxJetOrder || q > kMaxJetOrder)
            throw Error("jet order out of range");
        return VariableId((1u << 28) | (static_cast<std::uint32_t>(letter) << 20) |
                          (p << 10) | q);
    }

    static VariableId from_code(std::uint32_t code) { return VariableId(code); }

    Kind kind() const { return static_cast<Kind>(code_ >> 28); }
    std::uint32_t code() const { return code_; }

    bool is_base_x() const { return code_ == 0; }
    bool is_base_y() const { return code_ == 1; }

    CoeffLetter jet_letter() const {
        return static_cast<CoeffLetter>((code_ >> 20) & 0x3u);
    }
    std::uint32_t jet_p() const { return (code_ >> 10) & 0x3ffu; }
    std::uint32_t jet_q() const { return code_ & 0x3ffu; }

    std::uint32_t symbol_index() const { return code_ & 0x0fffffffu; }

    auto operator<=>(const VariableId&) const = default;

private:
    explicit VariableId(std::uint32_t code) : code_(code) {}
    std::uint32_t code_;
};

// Interns `name` into the global symbol table (idempotent) and returns its id.
VariableId intern_symbol(const std::string& name);

// Human-readable name of any variable ("x", "y", "Q[1,0]", "w", ...).
std::string variable_name(VariableId v);

}  // namespace odekit
