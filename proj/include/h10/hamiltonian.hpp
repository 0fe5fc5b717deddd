#pragma once

#include "h10/fock.hpp"
#include "h10/poly.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace h10::hamiltonian {

using fock::cplx;
using fock::FockSpace;
using fock::OperatorMatrix;
using fock::SpMat;

// Weights of the two Hamiltonians at schedule position s in [0, 1].
struct ScheduleWeights {
    double initial;
    double problem;
};
using Interpolation = std::function<ScheduleWeights(double)>;

// (1-s, s): the default straight-line schedule.
Interpolation linear_interpolation();

// The pair (H_I, H_P) on a common truncated space plus the schedule between
// them.  H_P is diagonal in the number basis with entries D(n)^2; H_I is
// sum_j (a_j^dag - conj(alpha_j))(a_j - alpha_j), whose ground state is the
// coherent state |alpha_1 ... alpha_K>.
struct HamiltonianSet {
    FockSpace space;
    std::vector<cplx> alphas;
    OperatorMatrix h_initial;
    OperatorMatrix h_problem;
    Eigen::VectorXd problem_diagonal;  // double image of the exact D(n)^2
    bool problem_saturated = false;    // some D(n)^2 exceeded 2^53 and was clamped
    Interpolation interpolation;

    // H(s) with weights from the schedule.
    OperatorMatrix at(double s) const;
};

HamiltonianSet build(const poly::Polynomial& p, const FockSpace& space,
                     const std::vector<cplx>& alphas);

// Assemble a set from explicit matrices (both must be Hermitian to 1e-12);
// used for degenerate schedules and perturbation studies.
HamiltonianSet custom_set(const FockSpace& space, SpMat h_initial, SpMat h_problem,
                          std::vector<cplx> alphas = {},
                          Interpolation interp = linear_interpolation());

// Exact D(n)^2 per basis state, converted to double with saturation at
// 2^53 (flag in .second).  `parallel` selects the OpenMP kernel; both
// kernels produce identical output.
std::pair<Eigen::VectorXd, bool> problem_diagonal(const poly::Polynomial& p,
                                                  const FockSpace& space, bool parallel = true);

// A time-dependent perturbation K(t) over absolute time.
using Perturbation = std::function<OperatorMatrix(double)>;

// H(t/T) + K(t) for robustness studies; K(t) must act on the same space
// and be Hermitian to 1e-10.
OperatorMatrix perturbed(const HamiltonianSet& hs, const Perturbation& k_fn, double t, double T);

struct SpectralDiagnostics {
    std::vector<double> s_grid;
    std::vector<double> ground;    // E_g(s)
    std::vector<double> excited;   // E_e(s)
    std::vector<double> coupling;  // |<e(s)| (H_I - H_P) |g(s)>|

    double gap = 0;     // min over included grid points of E_e - E_g
    double norm = 0;    // max over the grid of the coupling
    double t_bound = 0; // margin * norm / gap^2
    double margin = 10;
    // Endpoint excluded from the gap because its levels are degenerate
    // below 1e-8 (expected when the equation has several solutions).
    bool degenerate_endpoint = false;
    // Some interior point is degenerate below 1e-12; the run cannot be
    // certified and callers should treat results as inconclusive.
    bool interior_degeneracy = false;
};

// Dense two-level diagnostics over a uniform s-grid.  Throws ConfigError
// when the dimension exceeds `max_dense_dim` (the variational gap estimate
// is the intended fallback) and NumericsError when every grid point is
// degenerate.  Refining the grid to 2n-1 points keeps every original point,
// so the reported gap is non-increasing under refinement.
SpectralDiagnostics diagnostics(const HamiltonianSet& hs, int grid_points = 21,
                                double margin = 10.0, std::int64_t max_dense_dim = 4096);

// Same computation from explicit dense matrices; used for problems
// projected into a truncated basis.
SpectralDiagnostics diagnostics_pair(const Eigen::MatrixXcd& h_initial,
                                     const Eigen::MatrixXcd& h_problem, const Interpolation& interp,
                                     int grid_points = 21, double margin = 10.0);

}  // namespace h10::hamiltonian
