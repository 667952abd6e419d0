#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace odekit {

// Arbitrary-precision integers and rationals.  cpp_rational keeps values in
// lowest terms with a positive denominator, which is exactly the canonical
// form the rest of the library assumes.
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline std::string rational_string(const BigRational& r) {
    const BigInt& num = boost::multiprecision::numerator(r);
    const BigInt& den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace odekit
