#include "h10/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace h10::boosting {

namespace {

// Exactness in rational arithmetic is the whole point of this module, but
// a double-derived q carries a 53-bit denominator and the tail at width l
// works with numbers of order 53*l bits.  Past this width the exact sum
// stops being desk-scale, so refuse instead of silently approximating.
constexpr int kExactMax = kExactWidthMax;

void check_width(int l) {
    if (l < 1) throw ConfigError("majority voting needs a positive width");
    if (l % 2 == 0)
        throw ConfigError("majority voting needs an odd width, got " + std::to_string(l));
}

BigRat rat_pow(BigRat base, int e) {
    BigRat out = 1;
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

BigRat majority_success_exact(const BigRat& q, int l) {
    check_width(l);
    if (q < 0 || q > 1) throw ConfigError("per-run success probability must lie in [0, 1]");
    if (l > kExactMax)
        throw ConfigError("exact majority tail is limited to widths <= " +
                          std::to_string(kExactMax) + "; use the approximate path");
    if (q == 0) return 0;
    if (q == 1) return 1;
    const BigRat p = 1 - q;
    const int hi = (l + 1) / 2;
    // Walk the tail downward from k = l; the term recurrence stays exact and
    // never materialises the full table of powers.
    BigRat term = rat_pow(q, l);
    BigRat acc = term;
    for (int k = l - 1; k >= hi; --k) {
        term *= BigRat(k + 1);
        term /= BigRat(l - k);
        term *= p;
        term /= q;
        acc += term;
    }
    return acc;
}

double majority_success(double q, int l) {
    if (!(q >= 0.0 && q <= 1.0))
        throw ConfigError("per-run success probability must lie in [0, 1]");
    return majority_success_exact(BigRat(q), l).convert_to<double>();
}

double majority_success_approx(double q, int l) {
    check_width(l);
    if (!(q >= 0.0 && q <= 1.0))
        throw ConfigError("per-run success probability must lie in [0, 1]");
    if (q == 0.0) return 0.0;
    if (q == 1.0) return 1.0;
    const int hi = (l + 1) / 2;
    const double lq = std::log(q);
    const double lp = std::log1p(-q);
    std::vector<double> logs;
    logs.reserve(l - hi + 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (int k = hi; k <= l; ++k) {
        double lt = log_choose(l, k) + k * lq + (l - k) * lp;
        peak = std::max(peak, lt);
        logs.push_back(lt);
    }
    double sum = 0.0;
    for (double lt : logs) sum += std::exp(lt - peak);
    return std::min(1.0, std::exp(peak) * sum);
}

namespace {

// The search runs on the floating tail throughout -- an exact evaluation
// with a double-derived q costs seconds near the width budget, and the
// search may probe dozens of widths.  min_width re-confirms the endpoints
// exactly afterwards when they fit the budget.
long smallest_odd_width(double q, double target) {
    const auto tail = [q](long l) { return majority_success_approx(q, static_cast<int>(l)); };
    if (tail(1) >= target) return 1;
    long lo = 1;  // fails
    long hi = 3;
    while (tail(hi) < target) {
        lo = hi;
        hi = 2 * hi + 1;  // stays odd
        if (hi > (1L << 30))
            throw NumericsError("majority width exceeded 2^30 without reaching the target");
    }
    while (hi - lo > 2) {
        long mid = lo + (hi - lo) / 2;
        if (mid % 2 == 0) ++mid;
        if (mid == hi) mid -= 2;
        if (tail(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

WidthResult min_width(double q, double epsilon_prime) {
    if (!(q > 0.5) || !(q <= 1.0))
        throw ConfigError("majority voting amplifies only when q > 1/2");
    if (!(epsilon_prime > 0.0) || !(epsilon_prime < 0.5))
        throw ConfigError("target failure probability must lie in (0, 1/2)");

    WidthResult out;
    out.l = smallest_odd_width(q, 1.0 - epsilon_prime);
    if (out.l + 2 <= kExactMax) {
        // The search ran on doubles; pin the answer down in exact arithmetic.
        const BigRat qr(q), target = 1 - BigRat(epsilon_prime);
        while (out.l + 2 <= kExactMax &&
               majority_success_exact(qr, static_cast<int>(out.l)) < target)
            out.l += 2;
        while (out.l > 2 && majority_success_exact(qr, static_cast<int>(out.l - 2)) >= target)
            out.l -= 2;
        out.exact = out.l + 2 <= kExactMax;
    }

    // Fit l ~ -C log eps' over a geometric sweep of targets, least squares
    // through the origin.  Widths past the exact budget contribute via the
    // approximate tail; the fit is diagnostic, not load-bearing.
    double num = 0.0, den = 0.0;
    for (int j = 2; j <= 10; ++j) {
        const double eps = std::pow(2.0, -j);
        const double x = -std::log(eps);
        const double lj = static_cast<double>(smallest_odd_width(q, 1.0 - eps));
        num += x * lj;
        den += x * x;
    }
    out.fitted_c = num / den;
    return out;
}

double fitted_failure_slope(double q, int l_from, int l_to) {
    if (!(q > 0.5) || !(q <= 1.0))
        throw ConfigError("failure decay is defined for q > 1/2");
    if (l_from < 1 || l_to <= l_from)
        throw ConfigError("slope fit needs an increasing width range");
    if (l_from % 2 == 0) ++l_from;
    std::vector<double> xs, ys;
    for (int l = l_from; l <= l_to; l += 2) {
        const double fail = 1.0 - (l <= kExactMax ? majority_success(q, l)
                                                  : majority_success_approx(q, l));
        if (fail <= 0.0) break;  // underflow: the remaining points carry no signal
        xs.push_back(static_cast<double>(l));
        ys.push_back(std::log(fail));
    }
    if (xs.size() < 2) throw NumericsError("slope fit ran out of resolvable failure points");
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace h10::boosting
