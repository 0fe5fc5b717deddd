#pragma once

#include "h10/hamiltonian.hpp"

#include <functional>

namespace h10::evolve {

using fock::FockSpace;
using fock::SpMat;
using fock::StateVector;
using hamiltonian::HamiltonianSet;

// Discretization of the interpolated evolution over total physical time T:
// N product-formula factors exp(-i H(tau_k) T dtau), tau_k at the midpoints
// of N equal subintervals of [0, 1], N * dtau = 1.  `inner_steps` further
// subdivides each factor when it is applied iteratively (the
// eigendecomposition path applies factors exactly, making it a no-op
// there).
struct Schedule {
    double total_time = 0;  // T
    int outer_steps = 1;    // N
    int inner_steps = 1;    // m
    // The diagnostics norm this schedule was sized against; when nonzero,
    // propagation enforces dtau * norm <= 0.1.
    double norm_bound = 0;

    double dtau() const { return 1.0 / outer_steps; }
};

// N = ceil(10 * norm) and m = ceil(10 * T * dtau * energy_scale), both at
// least 1; `energy_scale` should bound the spectral radius of H(s) over the
// schedule.
Schedule default_schedule(double total_time, double norm, double energy_scale);

// Row-sum bound on the spectral radius; the usual energy scale for sizing
// inner steps.
double gershgorin_bound(const fock::SpMat& m);

struct EvolveStats {
    int outer_steps = 0;
    long matvecs = 0;
    double max_norm_drift = 0;  // max | ||psi|| - 1 | over checkpoints
    long reference_steps = 0;
};

struct EvolveOptions {
    // Densely eigendecompose factors at or below this dimension; use the
    // Lanczos exponential propagator above it.
    std::int64_t dense_dim_limit = 1200;
    int max_krylov = 64;
    double krylov_tol = 1e-10;
    bool parallel = true;
};

// Product-formula propagation of a unit state through the schedule.
StateVector evolve_product_formula(const HamiltonianSet& hs, const StateVector& psi0,
                                   const Schedule& sched, EvolveStats* stats = nullptr,
                                   const EvolveOptions& opts = {});

// Reference integrator: classic fourth-order Runge-Kutta applied to
// d psi/dt = -i H(t/T) psi, step count doubled until the final state moves
// by less than 1e-6 (throws NumericsError if that never happens).
// steps == 0 sizes the integrator from a Gershgorin bound automatically.
StateVector evolve_reference(const HamiltonianSet& hs, const StateVector& psi0, double total_time,
                             long steps = 0, EvolveStats* stats = nullptr);

// The same integrator for an arbitrary (piecewise-smooth, Hermitian)
// generator given as a callback over absolute time in [0, T]; used for
// perturbed-evolution and matched-resolution studies.  steps == 0 sizes
// the integrator from a probed Gershgorin bound and applies the same
// step-halving convergence check as evolve_reference.
StateVector evolve_generator(const FockSpace& space, const std::function<SpMat(double)>& h_of_t,
                             const StateVector& psi0, double total_time, long steps = 0,
                             EvolveStats* stats = nullptr);

// The exact generator the product formula integrates: H frozen at the
// midpoint of whichever of the N intervals contains t.  Feeding this to
// evolve_generator gives a reference run at matched resolution, isolating
// integrator error from discretization error.
std::function<SpMat(double)> midpoint_generator(const HamiltonianSet& hs, const Schedule& sched);

// Reference integration of the midpoint generator with steps aligned to
// the interval boundaries (the generator jumps there, and a straddling
// step would wreck the integrator's convergence order).  Same step-halving
// convergence check as evolve_reference.
StateVector evolve_reference_matched(const HamiltonianSet& hs, const StateVector& psi0,
                                     const Schedule& sched, EvolveStats* stats = nullptr);

// Measurement statistics of a unit state in the number basis.
struct Distribution {
    FockSpace space;
    Eigen::VectorXd probs;

    double prob_of(const std::vector<std::int64_t>& occupancy) const {
        return probs[space.index(occupancy)];
    }
};

// Throws NumericsError unless the probabilities sum to 1 within 1e-9.
Distribution distribution(const StateVector& psi);

double sup_distance(const Distribution& a, const Distribution& b);

}  // namespace h10::evolve
