#pragma once

#include "h10/bigint.hpp"
#include "h10/errors.hpp"

#include <utility>
#include <vector>

namespace h10::boosting {

// Largest width served by the exact rational path; a double-derived q has a
// 53-bit denominator, so wider tails cost seconds each.
inline constexpr int kExactWidthMax = 2501;

// Probability that a strict majority of l independent runs, each succeeding
// with probability q, succeeds.  Exact binomial tail in rational
// arithmetic; l must be odd so "majority" is unambiguous.
BigRat majority_success_exact(const BigRat& q, int l);

// Same, returned as a double.  The exact path is bounded at kExactWidthMax
// to keep the rational cost sane; beyond that use majority_success_approx.
double majority_success(double q, int l);

// Log-space floating evaluation of the same tail, usable at any width; off
// the exact path by rounding only (~1e-12 relative).
double majority_success_approx(double q, int l);

struct WidthResult {
    long l = 0;          // smallest odd width reaching the target
    double fitted_c = 0; // constant in l ~ -C log eps', fitted over a sweep
    bool exact = false;  // endpoints confirmed in rational arithmetic
};

// Smallest odd l with majority_success(q, l) >= 1 - epsilon_prime.
// Requires q > 0.5 (no amplification otherwise) and epsilon_prime in
// (0, 0.5).  Widths inside the exact budget are confirmed exactly (both
// that l reaches the target and that l-2 does not).
WidthResult min_width(double q, double epsilon_prime);

// Least-squares slope of log(1 - majority_success) over odd l in
// [l_from, l_to]; negative for any q > 0.5.
double fitted_failure_slope(double q, int l_from, int l_to);

}  // namespace h10::boosting
