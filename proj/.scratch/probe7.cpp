#include "h10/decide.hpp"
#include <chrono>
#include <cstdio>
using namespace h10;
int main() {
    auto p = poly::parse_equation("(x+1)^3 + (y+1)^3 - (z+1)^3");
    for (double a : {1.0, 0.75, 0.5}) {
        auto space = fock::FockSpace::make({5, 5, 5});
        std::vector<fock::cplx> al(3, a);
        auto hs = hamiltonian::build(p, space, al);
        auto d = hamiltonian::diagnostics(hs);
        auto ref = fock::FockSpace::make({6, 6, 6});
        auto psi = fock::coherent_state(ref, al);
        double bm = fock::boundary_mass(psi);
        std::printf("alpha=%.2f: norm=%.1f N=%d gap=%.4f t_bound=%.1f  ref6 initial boundary=%.2e\n",
                    a, d.norm, (int)std::ceil(10.0 * d.norm), d.gap, d.t_bound, bm);
    }
    return 0;
}
