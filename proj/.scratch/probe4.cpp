#include "h10/decide.hpp"
#include <cstdio>
using namespace h10;
static void dump(const decide::Verdict& v) {
    std::printf("  kind=%s qual=%s\n", decide::to_string(v.kind).c_str(), v.qualification.c_str());
    for (const auto& it : v.iterations) {
        std::printf("  it%d T=%.2f cand=(", it.index, it.total_time);
        for (auto c : it.candidate) std::printf("%lld,", (long long)c);
        std::printf(") D2=%s pcand=%.3f bmass=%.2e eg=%.4f conv=%d cons=%d note=%s\n",
                    to_string(it.candidate_squared).c_str(), it.candidate_probability,
                    it.boundary_mass, it.e_g_prime, (int)it.converged, (int)it.consistent,
                    it.note.c_str());
        std::printf("    sizes/dists:");
        for (std::size_t i = 0; i < it.basis_sizes.size(); ++i)
            std::printf(" %ld:%.3f", it.basis_sizes[i], it.sup_distances[i]);
        std::printf("\n");
    }
}
int main() {
    auto p = poly::parse_equation("x^2 + y^2 - z^2");
    decide::SolveConfig c;
    c.cutoffs = {6, 6, 6};
    c.ref_cutoffs = {7, 7, 7};
    c.seed = 42;
    auto v = decide::solve(p, c);
    std::printf("pyth T0=%.1f gap=%.4f norm=%.3f\n", v.initial_total_time,
                v.schedule_diagnostics.gap, v.schedule_diagnostics.norm);
    dump(v);
    return 0;
}
