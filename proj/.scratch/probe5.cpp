#include "h10/decide.hpp"
#include <chrono>
#include <cstdio>
#include <cstdlib>
using namespace h10;
int main(int argc, char** argv) {
    double T = argc > 1 ? std::atof(argv[1]) : 100.0;
    {
        auto p = poly::parse_equation("x^2 + y^2 - z^2");
        for (std::int64_t r : {7, 8}) {
            decide::SolveConfig c;
            c.cutoffs = {6, 6, 6};
            c.ref_cutoffs = {r, r, r};
            c.seed = 42;
            c.total_time = T;
            auto t0 = std::chrono::steady_clock::now();
            auto v = decide::solve(p, c);
            double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("pyth ref=%lld T=%.0f: %s", (long long)r, T, decide::to_string(v.kind).c_str());
            if (v.witness) {
                std::printf(" witness=(");
                for (auto& w : *v.witness) std::printf("%s,", to_string(w).c_str());
                std::printf(")");
            }
            std::printf(" deg_end=%d bmass=%.2e sec=%.1f qual=%.60s\n",
                        (int)v.schedule_diagnostics.degenerate_endpoint,
                        v.iterations.empty() ? -1.0 : v.iterations.back().boundary_mass, sec,
                        v.qualification.c_str());
        }
    }
    {
        auto p = poly::parse_equation("(x+1)^3 + (y+1)^3 - (z+1)^3");
        decide::SolveConfig c;
        c.cutoffs = {5, 5, 5};
        c.ref_cutoffs = {6, 6, 6};
        c.seed = 42;
        c.total_time = T;
        auto t0 = std::chrono::steady_clock::now();
        auto v = decide::solve(p, c);
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("fermat T=%.0f: %s e_g=%.4f conv=%d sec=%.1f qual=%.80s\n", T,
                    decide::to_string(v.kind).c_str(), v.e_g_estimate,
                    (int)v.estimate.converged, sec, v.qualification.c_str());
    }
    return 0;
}
