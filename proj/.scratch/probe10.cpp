#include "h10/gapest.hpp"
#include "h10/evolve.hpp"
#include <cstdio>
using namespace h10;
int main() {
    auto p = poly::parse_equation("x - 3");
    auto space = fock::FockSpace::make({16});
    auto hs = hamiltonian::build(p, space, {fock::cplx(1.0)});
    for (double s : {0.0, 0.5, 1.0}) {
        auto fr = gapest::solve_frame(hs, s, gapest::FrameMode::root);
        auto w = gapest::wick_coefficients(hs, s, fr.thetas);
        auto g2 = gapest::g_via_operators(hs, s, fr.thetas);
        std::printf("s=%.2f theta=%.6e k_resid=%.3e |K|=%.3e g=%.8f g2=%.8f diff=%.3e\n", s,
                    fr.thetas[0], fr.k_resid[0], std::abs(w.k[0]), w.g[0], g2[0],
                    std::abs(w.g[0] - g2[0]));
        auto sp24 = fock::FockSpace::make({24});
        auto hs24 = hamiltonian::build(p, sp24, {fock::cplx(1.0)});
        auto w3 = gapest::wick_coefficients(hs24, s, {0.2});
        auto g3 = gapest::g_via_operators(hs24, s, {0.2});
        std::printf("   at theta=0.2 (cutoff 24): |K|=%.3e g=%.8f g2=%.8f diff=%.3e\n",
                    std::abs(w3.k[0]), w3.g[0], g3[0], std::abs(w3.g[0] - g3[0]));
    }
    // criterion 7 scaling: N multiplier vs sup distance
    for (const char* eq : {"x - 3", "3 * x - 2"}) {
        auto pp = poly::parse_equation(eq);
        auto sp = fock::FockSpace::make({32});
        auto h2 = hamiltonian::build(pp, sp, {fock::cplx(1.0)});
        auto d = hamiltonian::diagnostics(h2);
        const double T = 37.9566;
        const double scale = std::max(evolve::gershgorin_bound(h2.h_initial.mat),
                                      evolve::gershgorin_bound(h2.h_problem.mat));
        auto psi0 = fock::coherent_state(sp, {fock::cplx(1.0)});
        auto rk = evolve::evolve_reference(h2, psi0, T, 0, nullptr);
        auto rd = evolve::distribution(rk);
        std::printf("%s: norm=%.2f N0=%d\n", eq, d.norm, (int)std::ceil(10 * d.norm));
        for (int mult : {1, 4, 16, 64}) {
            auto sched = evolve::default_schedule(T, d.norm, scale);
            sched.outer_steps *= mult;
            auto pf = evolve::evolve_product_formula(h2, psi0, sched, nullptr);
            std::printf("  N=%5d sup=%.3e\n", sched.outer_steps,
                        evolve::sup_distance(evolve::distribution(pf), rd));
        }
    }
    return 0;
}
