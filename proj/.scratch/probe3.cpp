#include "h10/decide.hpp"
#include <cstdio>
using namespace h10;
int main() {
    {
        auto p = poly::parse_equation("x^2 + y^2 - z^2");
        decide::SolveConfig c;
        c.cutoffs = {6, 6, 6};
        c.ref_cutoffs = {7, 7, 7};
        c.seed = 42;
        auto v = decide::solve(p, c);
        std::printf("pyth: %s iters=%zu T0=%.3f deg_end=%d ", decide::to_string(v.kind).c_str(),
                    v.iterations.size(), v.initial_total_time,
                    (int)v.schedule_diagnostics.degenerate_endpoint);
        if (v.witness) {
            std::printf("witness=(");
            for (auto& w : *v.witness) std::printf("%s,", to_string(w).c_str());
            std::printf(") ");
        }
        std::printf("e_g=%.4f sec=%.2f\n", v.e_g_estimate, v.seconds);
    }
    {
        auto p = poly::parse_equation("(x+1)^3 + (y+1)^3 - (z+1)^3");
        decide::SolveConfig c;
        c.cutoffs = {5, 5, 5};
        c.ref_cutoffs = {6, 6, 6};
        c.seed = 42;
        auto v = decide::solve(p, c);
        std::printf("fermat: %s iters=%zu T0=%.3f e_g=%.4f qual=%s sec=%.2f\n",
                    decide::to_string(v.kind).c_str(), v.iterations.size(), v.initial_total_time,
                    v.e_g_estimate, v.qualification.c_str(), v.seconds);
        auto bf = poly::brute_force_min(p, {5, 5, 5});
        std::printf("fermat brute min=%s\n", to_string(bf.min_value).c_str());
    }
    return 0;
}
