#include "h10/decide.hpp"
#include <cstdio>
using namespace h10;
int main() {
    {
        decide::SolveConfig c;
        c.cutoffs = {16};
        c.ref_cutoffs = {32};
        c.alphas = {1.0};
        c.seed = 42;
        auto v = decide::solve(poly::parse_equation("x - 3"), c);
        std::printf("c1 x-3: %s T0=%.2f witness=%s p_cand=%.4f e_g=%.4f sec=%.1f\n",
                    decide::to_string(v.kind).c_str(), v.initial_total_time,
                    v.witness ? (*v.witness)[0].str().c_str() : "-",
                    v.iterations.back().candidate_probability, v.estimate.e_g_prime, v.seconds);
    }
    {
        decide::SolveConfig c;
        c.cutoffs = {16};
        c.ref_cutoffs = {32};
        c.alphas = {1.0};
        c.seed = 42;
        auto v = decide::solve(poly::parse_equation("3 * x - 2"), c);
        std::printf("c2 3x-2: %s T0=%.2f e_g=%.4f iters=%zu sec=%.1f\n",
                    decide::to_string(v.kind).c_str(), v.initial_total_time, v.estimate.e_g_prime,
                    v.iterations.size(), v.seconds);
    }
    return 0;
}
