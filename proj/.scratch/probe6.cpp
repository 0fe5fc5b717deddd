#include "h10/decide.hpp"
#include <chrono>
#include <cstdio>
using namespace h10;
int main() {
    auto p = poly::parse_equation("(x+1)^3 + (y+1)^3 - (z+1)^3");
    auto space = fock::FockSpace::make({5, 5, 5});
    std::vector<fock::cplx> al(3, 1.0);
    auto hs = hamiltonian::build(p, space, al);
    auto t0 = std::chrono::steady_clock::now();
    auto d = hamiltonian::diagnostics(hs);
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("loop (5,5,5): dim=%lld norm=%.2f gap=%.4f t_bound=%.1f diagsec=%.2f\n",
                (long long)space.dim, d.norm, d.gap, d.t_bound, sec);
    // max |D^2| scale
    double mx = hs.problem_diagonal.maxCoeff();
    std::printf("max D^2 = %.0f  H_I gersh approx\n", mx);
    // what schedule would the apparatus get at T=100?
    auto sched = evolve::default_schedule(100.0, d.norm, mx);
    std::printf("sched: N=%d m=%d\n", sched.outer_steps, sched.inner_steps);
    // projected coupling norm at a small basis
    auto basis = fock::displaced_number_basis(space, al, 8);
    const auto& B = basis.states;
    Eigen::MatrixXcd hi_r = B.adjoint() * (hs.h_initial.mat * B);
    Eigen::MatrixXcd hp_r = B.adjoint() * (hs.h_problem.mat * B);
    Eigen::MatrixXcd hi = 0.5 * (hi_r + hi_r.adjoint());
    Eigen::MatrixXcd hp = 0.5 * (hp_r + hp_r.adjoint());
    auto dp = hamiltonian::diagnostics_pair(hi, hp, hs.interpolation);
    std::printf("proj m=%ld: norm=%.2f gap=%.4f t_bound=%.1f\n", (long)B.cols(), dp.norm, dp.gap,
                dp.t_bound);
    return 0;
}
