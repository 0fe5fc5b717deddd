#pragma once

#include "h10/hamiltonian.hpp"

#include <vector>

namespace h10::gapest {

using hamiltonian::HamiltonianSet;

// Normal-ordered coefficients of H(s) in the squeezed frame with per-mode
// angles theta (u = cosh theta, v = sinh theta): the scalar E_b, the
// quadratic diagonal G_i, and the pair-creation coefficient K_i.  All are
// realized as matrix elements between squeezed frame states, not by
// symbolic operator algebra.
struct WickCoefficients {
    double e_b = 0;
    std::vector<double> g;
    std::vector<fock::cplx> k;
};

WickCoefficients wick_coefficients(const HamiltonianSet& hs, double s,
                                   const std::vector<double>& thetas);

// Independent route to G_i through the transformed ladder matrices
// c_i = u a_i + v a_i^dag; used to cross-check the frame-state route.
std::vector<double> g_via_operators(const HamiltonianSet& hs, double s,
                                    const std::vector<double>& thetas);

// One squeezed frame fixed at schedule position s.
struct BogoliubovFrame {
    double s = 0;
    std::vector<double> thetas;   // u_i = cosh, v_i = sinh: canonicity by construction
    double e_b = 0;
    std::vector<double> g;
    std::vector<double> k_resid;  // |K_i| after solving
    bool unreliable = false;      // no root and no interior |K| minimum, or residual too large
};

enum class FrameMode { root, minimize };

// "root": zero each K_i by bracketed bisection of theta_i in [-5, 5]
// (coordinate sweeps couple the modes), falling back to the interior
// minimizer of |K_i| when the bracket has no sign change.  "minimize":
// coordinate descent on E_b to tolerance 1e-8, K residuals recorded as-is.
BogoliubovFrame solve_frame(const HamiltonianSet& hs, double s, FrameMode mode = FrameMode::root);

struct GapEstimate {
    double g_est = 0;
    double t_est = 0;
    double norm = 0;          // coupling norm used for t_est
    bool norm_from_exact = false;  // true when dense diagnostics supplied it
    std::vector<BogoliubovFrame> frames;
    bool warning = false;     // some frame is unreliable
};

// min_i |G_i(s)| over a uniform s grid as the gap indicator, and the
// matching evolution-time suggestion T = margin * norm / g^2.  The norm
// comes from dense diagnostics when the dimension allows it, otherwise
// from the squeezed-frame transition element |<1_ci|(H_I - H_P)|0_c>|.
GapEstimate estimate_gap_and_T(const HamiltonianSet& hs, int s_grid_size = 21,
                               FrameMode mode = FrameMode::root, double margin = 10.0,
                               std::int64_t max_dense_dim = 4096);

}  // namespace h10::gapest
