#include "h10/decide.hpp"

#include <doctest.h>

#include <cmath>

using namespace h10;
using namespace h10::decide;

namespace {

SolveConfig base_config(std::vector<std::int64_t> cutoffs, std::vector<std::int64_t> refs,
                        std::uint64_t seed = 42) {
    SolveConfig c;
    c.cutoffs = std::move(cutoffs);
    c.ref_cutoffs = std::move(refs);
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("solvable linear equation: exact witness") {
    auto p = poly::parse_equation("x - 3");
    auto v = solve(p, base_config({12}, {24}));
    CHECK(v.kind == VerdictKind::HasSolution);
    REQUIRE(v.witness.has_value());
    REQUIRE(v.witness->size() == 1);
    CHECK((*v.witness)[0] == 3);
    CHECK(poly::evaluate(p, *v.witness) == 0);
    CHECK(v.iterations.size() == 1);
    CHECK(v.iterations[0].candidate == std::vector<std::int64_t>{3});
    CHECK(v.iterations[0].candidate_probability > 0.5);
    CHECK(v.max_norm_drift < 1e-9);
    CHECK(v.auto_time);
    CHECK(v.initial_total_time > 0);
    CHECK(v.diagnostics_dense);
    CHECK(to_string(v.kind) == "HAS_SOLUTION");
}

TEST_CASE("unsolvable linear equation: ground energy pinned at one") {
    auto p = poly::parse_equation("3 * x - 2");
    auto v = solve(p, base_config({12}, {24}));
    CHECK(v.kind == VerdictKind::NoSolution);
    CHECK_FALSE(v.witness.has_value());
    CHECK(std::abs(v.e_g_estimate - 1.0) < 0.1);
    CHECK(v.estimate.converged);
    CHECK(v.estimate.e_c == 1);
    CHECK(std::abs(v.estimate.delta) < 0.5);
    CHECK(v.qualification.find("[0,12)") != std::string::npos);
    CHECK(v.max_norm_drift < 1e-9);
    // The stability window needs at least two basis sizes.
    const auto& sizes = v.iterations.back().basis_sizes;
    CHECK(sizes.size() >= 2);
    for (std::size_t i = 1; i < sizes.size(); ++i) CHECK(sizes[i] >= sizes[i - 1]);
    CHECK(sizes.back() > sizes.front());
}

TEST_CASE("zero test: integer separation gates the decision") {
    GroundStateEstimate e;
    e.basis_size = 8;
    e.converged = true;
    e.e_c = 0;
    e.e_g_prime = 0.03;
    e.delta = 0.03;
    CHECK(zero_test(e));

    e.e_c = 1;
    e.e_g_prime = 0.97;
    e.delta = -0.03;
    CHECK_FALSE(zero_test(e));

    e.e_g_prime = 0.4;
    CHECK_THROWS_AS(zero_test(e), NumericsError);

    e.converged = false;
    e.e_g_prime = 0.97;
    CHECK_THROWS_AS(zero_test(e), ConfigError);
}

TEST_CASE("verdicts agree with the brute-force oracle over the same box") {
    const std::vector<std::string> eqs = {"x - 3", "3 * x - 2", "x^2 - 4", "x + 1", "2 * x - 7"};
    for (const auto& text : eqs) {
        CAPTURE(text);
        auto p = poly::parse_equation(text);
        auto v = solve(p, base_config({10}, {20}, 7));
        auto bf = poly::brute_force_min(p, {10});
        if (bf.min_value == 0) {
            CHECK(v.kind == VerdictKind::HasSolution);
            REQUIRE(v.witness.has_value());
            CHECK(poly::evaluate(p, *v.witness) == 0);
        } else {
            CHECK(v.kind == VerdictKind::NoSolution);
        }
    }
}

TEST_CASE("two unknowns: witness on a hyperbola-like equation") {
    auto p = poly::parse_equation("x * y - 2");
    auto v = solve(p, base_config({6, 6}, {12, 12}, 11));
    CHECK(v.kind == VerdictKind::HasSolution);
    REQUIRE(v.witness.has_value());
    CHECK(poly::evaluate(p, *v.witness) == 0);
}

TEST_CASE("apparatus saturation surfaces as an inconclusive verdict") {
    // The solution n = 3 is the boundary level of a cutoff-4 reference, so
    // the evolved state must pile mass on the truncation edge.
    auto p = poly::parse_equation("x - 3");
    auto v = solve(p, base_config({3}, {4}));
    CHECK(v.kind == VerdictKind::Inconclusive);
    CHECK(v.truncation_flagged);
    CHECK(v.qualification.find("truncation") != std::string::npos);
    CHECK(to_string(v.kind) == "INCONCLUSIVE");
}

TEST_CASE("configuration errors") {
    auto p = poly::parse_equation("x - 3");
    auto cfg = base_config({12, 12}, {24, 24});
    CHECK_THROWS_AS(solve(p, cfg), ConfigError);  // arity mismatch

    cfg = base_config({12}, {12});
    CHECK_THROWS_AS(solve(p, cfg), ConfigError);  // no strict dominance

    cfg = base_config({12}, {24});
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(solve(p, cfg), ConfigError);

    cfg = base_config({12}, {24});
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(solve(p, cfg), ConfigError);

    cfg = base_config({12}, {24});
    cfg.initial_time_cap = -1.0;
    CHECK_THROWS_AS(solve(p, cfg), ConfigError);
}

TEST_CASE("auto-sized time respects the first-pass cap") {
    auto p = poly::parse_equation("x - 3");
    auto cfg = base_config({12}, {24});
    cfg.initial_time_cap = 5.0;
    auto v = solve(p, cfg);
    CHECK(v.auto_time);
    CHECK(v.initial_total_time == 5.0);
    CHECK(v.iterations[0].note.find("capped") != std::string::npos);

    cfg.initial_time_cap = 0.0;  // disabled: the raw bound flows through
    auto w = solve(p, cfg);
    CHECK(w.initial_total_time > 5.0);
}

TEST_CASE("identical configuration and seed reproduce the run") {
    auto p = poly::parse_equation("3 * x - 2");
    auto cfg = base_config({10}, {20}, 2024);
    auto a = solve(p, cfg);
    auto b = solve(p, cfg);
    CHECK(a.kind == b.kind);
    CHECK(a.e_g_estimate == b.e_g_estimate);
    CHECK(a.initial_total_time == b.initial_total_time);
    REQUIRE(a.iterations.size() == b.iterations.size());
    for (std::size_t i = 0; i < a.iterations.size(); ++i) {
        CHECK(a.iterations[i].histogram.counts == b.iterations[i].histogram.counts);
        CHECK(a.iterations[i].sup_distances == b.iterations[i].sup_distances);
        CHECK(a.iterations[i].basis_sizes == b.iterations[i].basis_sizes);
    }
}

TEST_CASE("explicit evolution time is honored") {
    auto p = poly::parse_equation("x - 3");
    auto cfg = base_config({12}, {24});
    cfg.total_time = 25.0;
    auto v = solve(p, cfg);
    CHECK_FALSE(v.auto_time);
    CHECK(v.initial_total_time == 25.0);
    CHECK(v.iterations[0].total_time == 25.0);
}
