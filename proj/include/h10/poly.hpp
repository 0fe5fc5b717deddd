#pragma once

#include "h10/bigint.hpp"
#include "h10/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace h10::poly {

struct Monomial {
    BigInt coeff;                     // nonzero in canonical form
    std::vector<std::uint32_t> exps;  // one exponent per variable
};

// Multivariate polynomial with exact integer coefficients.  Variables are
// indexed by first appearance in the source equation; that order is part of
// the value (it fixes the meaning of assignment vectors and the mode order
// of every operator built from the polynomial).
struct Polynomial {
    std::vector<std::string> vars;    // size K >= 1
    std::vector<Monomial> monomials;  // canonical: graded-lex order, no zero coefficients

    std::size_t num_vars() const { return vars.size(); }
    std::uint32_t degree() const;  // total degree; 0 for the zero polynomial
};

bool operator==(const Polynomial& a, const Polynomial& b);

struct ParseOptions {
    // Bound on exponents applied to parenthesized sums, which expand
    // multiplicatively; larger powers are rejected rather than expanded.
    std::uint32_t max_expansion_degree = 16;
};

// Parse "lhs = rhs" (or a bare expression, read as "lhs = 0") and return
// D = lhs - rhs.  Grammar:
//   equation := expr ["=" expr]
//   expr     := ["+"|"-"] term { ("+"|"-") term }
//   term     := factor { "*" factor }
//   factor   := base ["^" uint]
//   base     := uint | identifier | "(" expr ")"
// Throws ParseError (with byte position) on malformed input, on an equation
// with no variables, and on expansion-bound violations.
Polynomial parse_equation(const std::string& text, const ParseOptions& opts = {});

// Canonical text form.  parse_equation(print(p)) == p, including variable
// names and order; variables that would otherwise be lost (zero polynomial,
// or an order the term layout cannot express) are pinned by explicit
// zero-coefficient markers.
std::string print(const Polynomial& p);

using Assignment = std::vector<BigInt>;

// Occupancy tuples from the simulator side are plain machine integers.
Assignment to_assignment(const std::vector<std::int64_t>& occupancy);

BigInt evaluate(const Polynomial& p, const Assignment& a);
BigInt evaluate_squared(const Polynomial& p, const Assignment& a);

struct BruteForceResult {
    BigInt min_value;                 // min of D(n)^2 over the box
    std::vector<Assignment> argmins;  // every attaining point, lexicographic order
    std::uint64_t points_scanned;
};

// Exhaustive minimization of D(n)^2 over [0,c_1) x ... x [0,c_K).  Throws
// ConfigError when the box volume exceeds `budget`.  `parallel` selects the
// chunked OpenMP scan; the serial reference path is kept for testing and
// benchmarks and produces identical results.
BruteForceResult brute_force_min(const Polynomial& p, const std::vector<std::int64_t>& cutoffs,
                                 std::uint64_t budget = 10000000, bool parallel = true);

}  // namespace h10::poly
