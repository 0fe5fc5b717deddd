#include "h10/decide.hpp"
#include <chrono>
#include <cstdio>
using namespace h10;
static void show(const char* tag, const decide::Verdict& v) {
    std::printf("%s: %s iters=%zu T0=%.1f e_g=%.4f sat=%d trunc=%d qual=%s\n", tag,
                decide::to_string(v.kind).c_str(), v.iterations.size(), v.initial_total_time,
                v.estimate.e_g_prime, (int)v.problem_saturated, (int)v.truncation_flagged,
                v.qualification.c_str());
    for (const auto& it : v.iterations) {
        std::printf("  it%d T=%.1f cand=(", it.index, it.total_time);
        for (auto c : it.candidate) std::printf("%lld,", (long long)c);
        std::printf(") p=%.3f bm=%.2e sizes=[", it.candidate_probability, it.boundary_mass);
        for (auto b : it.basis_sizes) std::printf("%zu,", (size_t)b);
        std::printf("] d=[");
        for (auto d : it.sup_distances) std::printf("%.3f,", d);
        std::printf("] e'=%.4f conv=%d sec=%.1f note=%s\n", it.e_g_prime, (int)it.converged,
                    it.seconds, it.note.c_str());
    }
    std::printf("  total=%.1fs witness=", v.seconds);
    if (v.witness) { for (auto w : *v.witness) std::printf("%lld,", (long long)w); }
    std::printf("\n");
}
int main(int argc, char** argv) {
    int which = argc > 1 ? std::atoi(argv[1]) : 4;
    if (which == 4) {
        decide::SolveConfig c;
        c.cutoffs = {5, 5, 5};
        c.ref_cutoffs = {6, 6, 6};
        c.alphas = {0.5, 0.5, 0.5};
        c.seed = 42;
        auto v = decide::solve(poly::parse_equation("(x+1)^3 + (y+1)^3 - (z+1)^3"), c);
        show("fermat a=.5 ref6", v);
    } else if (which == 3) {
        decide::SolveConfig c;
        c.cutoffs = {6, 6, 6};
        c.ref_cutoffs = {7, 7, 7};
        c.alphas = {0.5, 0.5, 0.5};
        c.seed = 42;
        auto v = decide::solve(poly::parse_equation("x^2 + y^2 - z^2"), c);
        show("pyth a=.5 ref7", v);
    }
    return 0;
}
