// Serial-vs-OpenMP timing for the hot kernels.  Every parallel kernel in the
// library keeps a serial reference path and guarantees bit-identical output,
// so each row below times both paths on the same input and verifies the
// results agree exactly.  Exits nonzero on any disagreement.

#include "h10/decide.hpp"
#include "h10/oracle.hpp"
#include "h10/parallel.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

namespace {

using h10::fock::cplx;

double seconds(const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

int g_mismatches = 0;

void row(const std::string& name, double serial_s, double parallel_s, bool match) {
    if (!match) ++g_mismatches;
    std::printf("%-28s %10.3f s %10.3f s   x%-6.2f %s\n", name.c_str(), serial_s, parallel_s,
                parallel_s > 0 ? serial_s / parallel_s : 0.0, match ? "identical" : "MISMATCH");
}

void bench_brute_force() {
    auto p = h10::poly::parse_equation("x^2 + y^2 - z^2");
    const std::vector<std::int64_t> box = {90, 90, 90};
    h10::poly::BruteForceResult rs, rp;
    const double ts = seconds([&] { rs = h10::poly::brute_force_min(p, box, 1000000, false); });
    const double tp = seconds([&] { rp = h10::poly::brute_force_min(p, box, 1000000, true); });
    row("brute_force_min 90^3", ts, tp,
        rs.min_value == rp.min_value && rs.argmins == rp.argmins &&
            rs.points_scanned == rp.points_scanned);
}

void bench_evolution() {
    auto p = h10::poly::parse_equation("x + y - 3");
    auto space = h10::fock::FockSpace::make({40, 40});
    auto hs = h10::hamiltonian::build(p, space, {cplx(1.0), cplx(1.0)});
    h10::evolve::Schedule sched;
    sched.total_time = 0.2;
    sched.outer_steps = 1200;
    sched.inner_steps = 10;
    sched.norm_bound = 0;  // throughput run; skip the adiabatic-quality check
    auto psi0 = h10::fock::coherent_state(space, {cplx(1.0), cplx(1.0)});

    h10::evolve::EvolveOptions serial_opts, parallel_opts;
    serial_opts.parallel = false;
    parallel_opts.parallel = true;
    h10::fock::StateVector out_s = psi0, out_p = psi0;
    const double ts = seconds(
        [&] { out_s = h10::evolve::evolve_product_formula(hs, psi0, sched, nullptr, serial_opts); });
    const double tp = seconds(
        [&] { out_p = h10::evolve::evolve_product_formula(hs, psi0, sched, nullptr, parallel_opts); });
    row("product formula dim 1600", ts, tp,
        h10::evolve::sup_distance(h10::evolve::distribution(out_s),
                                  h10::evolve::distribution(out_p)) == 0.0);
}

void bench_diagnostics() {
    auto p = h10::poly::parse_equation("x * y - 6");
    auto space = h10::fock::FockSpace::make({18, 18});
    auto hs = h10::hamiltonian::build(p, space, {cplx(1.0), cplx(1.0)});
    h10::hamiltonian::SpectralDiagnostics ds, dp;
    h10::par::set_thread_budget(1);
    const double ts = seconds([&] { ds = h10::hamiltonian::diagnostics(hs, 21); });
    h10::par::set_thread_budget(0);
    const double tp = seconds([&] { dp = h10::hamiltonian::diagnostics(hs, 21); });
    row("diagnostics 21 pts dim 324", ts, tp, ds.gap == dp.gap && ds.norm == dp.norm);
}

void bench_sampling() {
    auto space = h10::fock::FockSpace::make({12});
    auto psi = h10::fock::coherent_state(space, {cplx(1.2)});
    auto dist = h10::evolve::distribution(psi);
    auto plan = h10::oracle::make_plan(0.1, 0.8, 42, 4000000);
    h10::oracle::Histogram hser, hpar;
    const double ts = seconds([&] { hser = h10::oracle::draw_histogram(dist, plan, false); });
    const double tp = seconds([&] { hpar = h10::oracle::draw_histogram(dist, plan, true); });
    row("histogram 4e6 draws", ts, tp, hser.counts == hpar.counts && hser.total == hpar.total);
}

}  // namespace

int main() {
    std::printf("thread budget: %d\n", h10::par::thread_budget());
    std::printf("%-28s %12s %12s   %-7s %s\n", "kernel", "serial", "parallel", "ratio", "check");
    bench_brute_force();
    bench_evolution();
    bench_diagnostics();
    bench_sampling();
    return g_mismatches == 0 ? 0 : 1;
}
