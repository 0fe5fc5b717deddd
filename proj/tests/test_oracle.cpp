#include "h10/oracle.hpp"

#include "h10/parallel.hpp"

#include <doctest.h>

#include <cmath>

using namespace h10;
using namespace h10::oracle;
using fock::FockSpace;
using fock::cplx;
using Eigen::VectorXcd;

namespace {

Distribution point_mass(const FockSpace& s, std::int64_t idx) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(s.dim);
    p[idx] = 1.0;
    return {s, std::move(p)};
}

}  // namespace

TEST_CASE("repetition law and override recording") {
    CHECK(law_repetitions(0.1, 0.8) == 500);
    CHECK(law_repetitions(0.5, 0.5) == 8);

    auto plan = make_plan(0.1, 0.8, 7);
    CHECK(plan.repetitions == 500);
    CHECK_FALSE(plan.overridden);

    auto forced = make_plan(0.1, 0.8, 7, 50);
    CHECK(forced.repetitions == 50);
    CHECK(forced.overridden);

    auto generous = make_plan(0.1, 0.8, 7, 1000);
    CHECK(generous.repetitions == 1000);
    CHECK_FALSE(generous.overridden);

    CHECK_THROWS_AS(law_repetitions(0.0, 0.8), ConfigError);
    CHECK_THROWS_AS(law_repetitions(0.1, 1.0), ConfigError);
}

TEST_CASE("point-mass distribution gives a point-mass histogram") {
    auto s = FockSpace::make({5});
    auto dist = point_mass(s, 3);
    auto plan = make_plan(0.1, 0.8, 123, 64);
    auto h = draw_histogram(dist, plan);
    CHECK(h.total == 64);
    CHECK(h.counts.size() == 1);
    CHECK(h.counts.at({3}) == 64);
    CHECK(h.frequency({3}) == 1.0);
    CHECK(h.frequency({0}) == 0.0);

    auto p = poly::parse_equation("x - 1");
    auto c = pick_candidate(p, h);
    CHECK(c.occupancy == std::vector<std::int64_t>{3});
    CHECK(c.squared_value == BigInt(4));
}

TEST_CASE("sampling is a pure function of seed and repetition index") {
    auto s = FockSpace::make({8});
    auto c = fock::coherent_state(s, {cplx(1)});
    auto dist = evolve::distribution(c);

    auto plan = make_plan(0.1, 0.8, 42, 4000);
    auto h1 = draw_histogram(dist, plan);

    // Identical across repeats and across thread budgets.
    for (int budget : {1, 2, 5}) {
        par::set_thread_budget(budget);
        auto h2 = draw_histogram(dist, plan);
        CHECK(h2.counts == h1.counts);
    }
    par::set_thread_budget(0);
    auto serial = draw_histogram(dist, plan, /*parallel=*/false);
    CHECK(serial.counts == h1.counts);

    // A different seed moves at least one count.
    auto other = draw_histogram(dist, make_plan(0.1, 0.8, 43, 4000));
    CHECK(other.counts != h1.counts);
}

TEST_CASE("empirical distance: identity, disjoint points, off-space outcomes") {
    auto s = FockSpace::make({6});
    auto d3 = point_mass(s, 3);
    auto d4 = point_mass(s, 4);

    Histogram h3;
    h3.counts[{3}] = 10;
    h3.total = 10;
    CHECK(empirical_distance(h3, d3) == 0.0);
    CHECK(empirical_distance(h3, d4) == 1.0);

    // Half the mass observed beyond the model's space counts against it.
    Histogram spill;
    spill.counts[{3}] = 5;
    spill.counts[{9}] = 5;
    spill.total = 10;
    CHECK(empirical_distance(spill, d3) == 0.5);
}

TEST_CASE("law of large numbers on the truncated Poisson distribution") {
    auto s = FockSpace::make({32});
    auto dist = evolve::distribution(fock::coherent_state(s, {cplx(1)}));
    auto plan = make_plan(0.1, 0.8, 2024, 100000);
    auto h = draw_histogram(dist, plan);
    CHECK(empirical_distance(h, dist) < 0.02);
}

TEST_CASE("statistical acceptance: the law's L meets its own confidence target") {
    auto s = FockSpace::make({16});
    auto dist = evolve::distribution(fock::coherent_state(s, {cplx(1)}));
    const double eps = 0.1, p = 0.8;
    int hits = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto plan = make_plan(eps, p, 1000 + std::uint64_t(trial));
        auto h = draw_histogram(dist, plan);
        if (empirical_distance(h, dist) <= eps) ++hits;
    }
    CHECK(hits >= 160);  // at least p of 200 trials
}

TEST_CASE("apparatus end to end on the solvable instance") {
    auto p = poly::parse_equation("x - 3");
    auto s = FockSpace::make({16});
    auto hs = hamiltonian::build(p, s, {cplx(1)});
    auto d = hamiltonian::diagnostics(hs);
    auto sched = evolve::default_schedule(d.t_bound, d.norm, hs.problem_diagonal.maxCoeff());

    auto plan = make_plan(0.1, 0.8, 7, 400);
    auto r = run_apparatus(p, {cplx(1)}, {16}, {8}, sched, plan);
    CHECK(r.histogram.total == 400);
    CHECK(r.candidate.occupancy == std::vector<std::int64_t>{3});
    CHECK(r.candidate.squared_value == BigInt(0));
    CHECK(r.boundary_mass < 1e-6);
    CHECK(r.reference_distribution.prob_of({3}) > 0.9);

    // Reference truncation must strictly dominate the loop's.
    CHECK_THROWS_AS(run_apparatus(p, {cplx(1)}, {16}, {16}, sched, plan), ConfigError);
    CHECK_THROWS_AS(run_apparatus(p, {cplx(1)}, {16}, {8, 8}, sched, plan), ConfigError);
}
