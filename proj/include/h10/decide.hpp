#pragma once

#include "h10/gapest.hpp"
#include "h10/oracle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace h10::decide {

using fock::cplx;

// Step-6 output: ground data of the problem Hamiltonian projected onto the
// displaced truncated basis, side by side with the exact value at the
// measured candidate.
struct GroundStateEstimate {
    long basis_size = 0;         // accepted basis vectors M
    fock::StateVector g_prime;   // approximate ground state, Fock coordinates
    double e_g_prime = 0;
    BigInt e_c;                  // exact D(n_c)^2 of the measured candidate
    double delta = 0;            // e_g_prime - e_c
    bool converged = false;      // stable across a basis enlargement
};

// True iff the exact candidate value is zero.  Requires a converged
// estimate; the float energy must sit within the half-unit separation of
// the integer spectrum from the exact value, else NumericsError.
bool zero_test(const GroundStateEstimate& e);

enum class VerdictKind { HasSolution, NoSolution, Inconclusive };
std::string to_string(VerdictKind k);

struct SolveConfig {
    double epsilon = 0.1;   // distribution accuracy, also the stability window
    double p_success = 0.8; // per-run confidence target of the sampling law
    std::vector<cplx> alphas;                // default: 1 per mode
    std::vector<std::int64_t> cutoffs;       // classical-loop truncation
    std::vector<std::int64_t> ref_cutoffs;   // apparatus truncation; default 2x cutoffs
    double total_time = 0;                   // 0: size T from the gap diagnostics
    double initial_time_cap = 100;           // cap on the auto-sized first T; 0 disables
    std::uint64_t seed = 1;
    int max_iterations = 12;
    long repetitions = 0;                    // 0: the sampling law; smaller values recorded
    double max_total_time = 1e4;             // clamp on step-7 refreshes (wall-clock honesty)
    std::int64_t max_dense_dim = 4096;       // above this, gap setup goes variational
    bool parallel = true;
};

// One outer pass: apparatus run, basis ladder, ground estimate, next T.
struct IterationTrace {
    int index = 0;  // 1-based
    double total_time = 0;
    std::uint64_t seed = 0;
    long repetitions = 0;
    bool repetitions_overridden = false;
    std::vector<std::int64_t> candidate;
    BigInt candidate_squared;
    double candidate_probability = 0;  // exact mass of the candidate at time T
    double boundary_mass = 0;
    std::vector<long> basis_sizes;      // Step-5 ladder
    std::vector<double> sup_distances;  // empirical distance per rung
    double e_g_prime = 0;
    double delta = 0;
    bool converged = false;
    bool consistent = true;  // |delta| < 1/2 against the integer spectrum
    double gap_truncated = 0;
    double norm_truncated = 0;
    double next_total_time = 0;
    double max_norm_drift = 0;
    oracle::Histogram histogram;
    evolve::Distribution estimated;  // final projected distribution, loop space
    std::string note;
    double seconds = 0;
};

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::optional<poly::Assignment> witness;  // present iff HasSolution; exact zero
    double e_g_estimate = 0;
    GroundStateEstimate estimate;
    // NO_SOLUTION holds only over the explored truncation; INCONCLUSIVE
    // carries its cause here.
    std::string qualification;
    std::vector<IterationTrace> iterations;
    hamiltonian::SpectralDiagnostics schedule_diagnostics;  // loop space, dense path
    bool diagnostics_dense = false;
    gapest::GapEstimate variational;  // used above max_dense_dim
    bool used_variational = false;
    double initial_total_time = 0;
    bool auto_time = false;
    double max_norm_drift = 0;      // worst unit-norm drift over every evolution
    bool truncation_flagged = false;
    bool problem_saturated = false;
    double seconds = 0;
};

// The full decision loop over a Diophantine equation.
Verdict solve(const poly::Polynomial& p, const SolveConfig& config);

}  // namespace h10::decide
