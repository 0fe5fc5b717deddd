#include "h10/hamiltonian.hpp"

#include "h10/parallel.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace h10;
using namespace h10::hamiltonian;
using fock::FockSpace;
using fock::cplx;

TEST_CASE("problem diagonal: exact squared values in tuple order") {
    auto p = poly::parse_equation("x - 3");
    auto s = FockSpace::make({8});
    auto [diag, sat] = problem_diagonal(p, s);
    CHECK_FALSE(sat);
    double want[] = {9, 4, 1, 0, 1, 4, 9, 16};
    for (int i = 0; i < 8; ++i) CHECK(diag[i] == want[i]);

    auto q = poly::parse_equation("x^2 + y^2 - z^2");
    auto s3 = FockSpace::make({4, 4, 4});
    auto [d3, sat3] = problem_diagonal(q, s3);
    CHECK_FALSE(sat3);
    CHECK(d3[s3.index({0, 0, 0})] == 0.0);
    CHECK(d3[s3.index({1, 1, 1})] == 1.0);
    CHECK(d3[s3.index({3, 0, 3})] == 0.0);
    CHECK(d3[s3.index({2, 3, 1})] == 144.0);  // (4 + 9 - 1)^2
}

TEST_CASE("problem diagonal: serial and parallel kernels agree bitwise") {
    auto p = poly::parse_equation("(x+1)^3 + (y+1)^3 - (z+1)^3 = 5*x*y*z");
    auto s = FockSpace::make({5, 4, 6});
    auto [ds, sat_s] = problem_diagonal(p, s, false);
    for (int threads : {1, 3}) {
        par::set_thread_budget(threads);
        auto [dp, sat_p] = problem_diagonal(p, s, true);
        CHECK(sat_s == sat_p);
        CHECK((ds - dp).norm() == 0.0);
    }
    par::set_thread_budget(0);
}

TEST_CASE("problem diagonal saturates at 2^53 with a flag") {
    auto p = poly::parse_equation("9999999*x^4 - 1");
    auto s = FockSpace::make({16});
    auto [diag, sat] = problem_diagonal(p, s);
    CHECK(sat);
    CHECK(diag[15] == 9007199254740992.0);
    auto hs = build(p, s, {cplx(1)});
    CHECK(hs.problem_saturated);
    auto small = build(poly::parse_equation("x - 3"), FockSpace::make({8}), {cplx(1)});
    CHECK_FALSE(small.problem_saturated);
}

TEST_CASE("initial Hamiltonian: Hermitian, positive, coherent ground state") {
    auto p = poly::parse_equation("x - 3");
    auto s = FockSpace::make({24});
    auto hs = build(p, s, {cplx(1)});
    CHECK(fock::hermiticity_residual(hs.h_initial) == 0.0);
    CHECK(fock::hermiticity_residual(hs.h_problem) == 0.0);

    auto coh = fock::coherent_state(s, {cplx(1)});
    CHECK(std::abs(fock::expectation(hs.h_initial, coh)) < 1e-6);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs.h_initial.dense());
    CHECK(std::abs(es.eigenvalues()[0]) < 1e-6);        // ground energy 0
    CHECK(std::abs(es.eigenvalues()[1] - 1.0) < 1e-3);  // unit level spacing
    // Ground eigenvector is the coherent state.
    CHECK(std::abs(std::abs(es.eigenvectors().col(0).dot(coh.amp)) - 1.0) < 1e-6);
}

TEST_CASE("number operators commute with the problem Hamiltonian") {
    auto p = poly::parse_equation("x^2 + y^2 - z^2");
    auto s = FockSpace::make({4, 4, 4});
    auto hs = build(p, s, std::vector<cplx>(3, cplx(1)));
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(fock::commutator(fock::number_op(s, j), hs.h_problem).dense().norm() == 0.0);
}

TEST_CASE("interpolation endpoints are exact") {
    auto p = poly::parse_equation("x - 3");
    auto s = FockSpace::make({10});
    auto hs = build(p, s, {cplx(1)});
    CHECK((hs.at(0.0).dense() - hs.h_initial.dense()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((hs.at(1.0).dense() - hs.h_problem.dense()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXcd mid = hs.at(0.5).dense();
    Eigen::MatrixXcd want = 0.5 * hs.h_initial.dense() + 0.5 * hs.h_problem.dense();
    CHECK((mid - want).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(hs.at(-0.01), ConfigError);
    CHECK_THROWS_AS(hs.at(1.01), ConfigError);
}

TEST_CASE("diagnostics on a solvable single-mode instance") {
    auto p = poly::parse_equation("x - 3");
    auto s = FockSpace::make({16});
    auto hs = build(p, s, {cplx(1)});
    auto d = diagnostics(hs, 21);
    CHECK(d.s_grid.size() == 21);
    CHECK(d.s_grid.front() == 0.0);
    CHECK(d.s_grid.back() == 1.0);
    CHECK(d.gap > 0.0);
    CHECK(d.norm > 0.0);
    CHECK_FALSE(d.degenerate_endpoint);
    CHECK_FALSE(d.interior_degeneracy);
    CHECK(d.t_bound == doctest::Approx(10.0 * d.norm / (d.gap * d.gap)).epsilon(1e-12));
    // Ground level at the endpoints: 0 for H_I, 0 for H_P (solution exists).
    CHECK(std::abs(d.ground.front()) < 1e-6);
    CHECK(std::abs(d.ground.back()) < 1e-9);

    // Refinement keeps every original point: the gap cannot increase and
    // the norm cannot decrease.
    auto d41 = diagnostics(hs, 41);
    CHECK(d41.gap <= d.gap);
    CHECK(d41.norm >= d.norm);
}

TEST_CASE("diagnostics flags a degenerate final ground space") {
    auto p = poly::parse_equation("x^2 + y^2 - z^2");
    auto s = FockSpace::make({5, 5, 5});
    auto hs = build(p, s, std::vector<cplx>(3, cplx(1)));
    auto d = diagnostics(hs, 11);
    CHECK(d.degenerate_endpoint);  // many solutions below the cutoff
    CHECK(d.gap > 0.0);
    CHECK(std::isfinite(d.t_bound));
}

TEST_CASE("degenerate schedule: vanishing norm gives vanishing time bound") {
    auto s = FockSpace::make({6});
    Eigen::VectorXd vals(6);
    vals << 0, 1, 2, 3, 4, 5;
    fock::SpMat m(6, 6);
    for (int i = 0; i < 6; ++i) m.insert(i, i) = vals[i];
    m.makeCompressed();
    auto hs = custom_set(s, m, m);
    auto d = diagnostics(hs, 9);
    CHECK(d.norm == 0.0);
    CHECK(d.gap == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.t_bound == 0.0);
}

TEST_CASE("diagnostics rejects oversized spaces and fully degenerate spectra") {
    auto p = poly::parse_equation("x - 1");
    auto s = FockSpace::make({32});
    auto hs = build(p, s, {cplx(1)});
    CHECK_THROWS_AS(diagnostics(hs, 21, 10.0, /*max_dense_dim=*/16), ConfigError);

    fock::SpMat z(3, 3);
    auto flat = custom_set(FockSpace::make({3}), z, z);
    // Degenerate everywhere: interior degeneracy is flagged and the bound
    // blows up; with only endpoints on the grid there is nothing left to
    // take the minimum over.
    auto d = diagnostics(flat, 5);
    CHECK(d.interior_degeneracy);
    CHECK(d.degenerate_endpoint);
    CHECK(std::isinf(d.t_bound));
    CHECK_THROWS_AS(diagnostics(flat, 2), ConfigError);  // grid must have >= 3 points
}

TEST_CASE("custom sets and perturbations validate Hermiticity") {
    auto s = FockSpace::make({4});
    fock::SpMat bad(4, 4);
    bad.insert(0, 1) = cplx(0, 1);  // i, not mirrored
    bad.makeCompressed();
    fock::SpMat good(4, 4);
    good.insert(0, 0) = 1.0;
    good.makeCompressed();
    CHECK_THROWS_AS(custom_set(s, bad, good), ConfigError);
    CHECK_THROWS_AS(custom_set(s, good, bad), ConfigError);

    auto hs = build(poly::parse_equation("x - 1"), s, {cplx(0.5)});
    auto bad_fn = [&](double) { return fock::OperatorMatrix{s, bad}; };
    CHECK_THROWS_AS(perturbed(hs, bad_fn, 0.5, 1.0), ConfigError);

    // K(t) = sin(t) X scales with time and is added on top of H(t/T).
    auto x = fock::position_op(s, 0);
    auto k_fn = [&](double t) {
        fock::SpMat m = std::sin(t) * x.mat;
        return fock::OperatorMatrix{s, std::move(m)};
    };
    auto hp = perturbed(hs, k_fn, 1.0, 4.0);
    Eigen::MatrixXcd want = hs.at(0.25).dense() + std::sin(1.0) * x.dense();
    CHECK((hp.dense() - want).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(perturbed(hs, k_fn, 5.0, 4.0), ConfigError);

    // A zero perturbation reproduces H(t/T) exactly.
    auto zero_fn = [&](double) {
        fock::SpMat m(4, 4);
        return fock::OperatorMatrix{s, std::move(m)};
    };
    auto h0 = perturbed(hs, zero_fn, 2.0, 4.0);
    CHECK((h0.dense() - hs.at(0.5).dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interpolation must traverse the schedule") {
    auto s = FockSpace::make({3});
    fock::SpMat z(3, 3);
    z.setIdentity();
    auto broken = [](double) { return ScheduleWeights{0.5, 0.5}; };
    CHECK_THROWS_AS(custom_set(s, z, z, {}, broken), ConfigError);
}
