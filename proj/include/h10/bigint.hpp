#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace h10 {

// Exact integer arithmetic for polynomial evaluation.  Diophantine values
// are squared and can exceed any fixed-width type long before the search
// space is exhausted, so all symbolic work stays exact.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Largest integer magnitude a double represents exactly.
inline const BigInt kDoubleExactMax = BigInt(1) << 53;

// Convert to double, saturating at +/-2^53.  `*saturated` is set (never
// cleared) when |v| exceeds the exactly-representable range, so callers can
// surface the loss of exactness instead of silently rounding.
inline double to_double_saturating(const BigInt& v, bool* saturated) {
    if (v > kDoubleExactMax) {
        if (saturated) *saturated = true;
        return 9007199254740992.0;
    }
    if (v < -kDoubleExactMax) {
        if (saturated) *saturated = true;
        return -9007199254740992.0;
    }
    return static_cast<double>(v);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace h10
