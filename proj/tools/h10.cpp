#include "h10/boosting.hpp"
#include "h10/parallel.hpp"
#include "h10/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace h10;
using report::json;

struct OutputOpts {
    std::string path;        // --out: write the JSON report here
    bool json_stdout = false;// --json: print the JSON report instead of the summary
};

void add_output_opts(CLI::App* cmd, OutputOpts& out) {
    cmd->add_option("--out", out.path, "write the JSON report to this file");
    cmd->add_flag("--json", out.json_stdout, "print the JSON report on stdout");
}

void deliver(const json& j, const OutputOpts& out, const std::string& summary) {
    if (!out.path.empty()) {
        std::ofstream f(out.path);
        if (!f) throw ConfigError("cannot open output file: " + out.path);
        f << report::render(j);
    }
    if (out.json_stdout)
        std::cout << report::render(j);
    else
        std::cout << summary;
}

// 0: verdict reached (NO_SOLUTION included).  2: no verdict (inconclusive or
// a runtime numerics/truncation failure, reported as a structured error).
// 1: the caller's fault (usage, parse, configuration).
int guarded(const OutputOpts& out, const std::function<int()>& body) {
    std::string kind;
    int code = 2;
    try {
        return body();
    } catch (const ParseError& e) {
        kind = "ParseError";
        code = 1;
        std::cerr << kind << ": " << e.what() << "\n";
        deliver(report::error_json(kind, e.what()), out, "");
        return code;
    } catch (const ConfigError& e) {
        kind = "ConfigError";
        code = 1;
        std::cerr << kind << ": " << e.what() << "\n";
        deliver(report::error_json(kind, e.what()), out, "");
        return code;
    } catch (const TruncationError& e) {
        kind = "TruncationError";
        std::cerr << kind << ": " << e.what() << "\n";
        deliver(report::error_json(kind, e.what()), out, "");
        return code;
    } catch (const NumericsError& e) {
        kind = "NumericsError";
        std::cerr << kind << ": " << e.what() << "\n";
        deliver(report::error_json(kind, e.what()), out, "");
        return code;
    } catch (const Error& e) {
        kind = "Error";
        std::cerr << kind << ": " << e.what() << "\n";
        deliver(report::error_json(kind, e.what()), out, "");
        return code;
    }
}

double parse_time(const std::string& s) {
    if (s == "auto") return 0.0;
    try {
        std::size_t done = 0;
        double t = std::stod(s, &done);
        if (done != s.size() || !(t > 0)) throw std::invalid_argument("");
        return t;
    } catch (const std::exception&) {
        throw ConfigError("--time expects a positive number or \"auto\", got \"" + s + "\"");
    }
}

template <typename T>
std::vector<T> broadcast(std::vector<T> v, std::size_t k, const std::string& what) {
    if (v.size() == 1 && k > 1) v.assign(k, v[0]);
    if (v.size() != k)
        throw ConfigError(what + " needs one entry, or one per unknown (" + std::to_string(k) +
                          ")");
    return v;
}

std::vector<fock::cplx> to_alphas(const std::vector<double>& a) {
    return {a.begin(), a.end()};
}

std::string tuple_str(const std::vector<std::int64_t>& t) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << t[i];
    os << ")";
    return os.str();
}

std::string witness_str(const poly::Assignment& a) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << a[i].str();
    os << ")";
    return os.str();
}

// Shared flags of every equation-driven subcommand.
struct EquationOpts {
    std::string eq;
    std::vector<std::int64_t> cutoffs{16};
    std::vector<double> alphas{1.0};

    void add_to(CLI::App* cmd) {
        cmd->add_option("--eq", eq, "Diophantine equation, e.g. \"x^2 + y^2 - z^2\" or \"x = 3\"")
            ->required();
        cmd->add_option("--cutoffs", cutoffs,
                        "per-mode truncation cutoffs (one value is broadcast)")
            ->delimiter(',');
        cmd->add_option("--alpha", alphas, "coherent displacement per mode (one value broadcast)")
            ->delimiter(',');
    }
};

// ---------------------------------------------------------------- solve --

struct SolveArgs {
    EquationOpts eqo;
    std::vector<std::int64_t> ref_cutoffs;  // empty: 2x cutoffs
    double epsilon = 0.1;
    double p_success = 0.8;
    std::string time = "auto";
    double time_cap = 100;
    double max_time = 1e4;
    std::uint64_t seed = 1;
    long reps = 0;
    int max_iterations = 12;
    std::int64_t max_dense_dim = 4096;
    bool serial = false;
    OutputOpts out;
};

int run_solve(const SolveArgs& a) {
    auto p = poly::parse_equation(a.eqo.eq);
    const std::size_t k = p.num_vars();

    decide::SolveConfig cfg;
    cfg.epsilon = a.epsilon;
    cfg.p_success = a.p_success;
    cfg.cutoffs = broadcast(a.eqo.cutoffs, k, "--cutoffs");
    if (!a.ref_cutoffs.empty()) cfg.ref_cutoffs = broadcast(a.ref_cutoffs, k, "--ref-cutoffs");
    cfg.alphas = to_alphas(broadcast(a.eqo.alphas, k, "--alpha"));
    cfg.total_time = parse_time(a.time);
    cfg.initial_time_cap = a.time_cap;
    cfg.max_total_time = a.max_time;
    cfg.seed = a.seed;
    cfg.repetitions = a.reps;
    cfg.max_iterations = a.max_iterations;
    cfg.max_dense_dim = a.max_dense_dim;
    cfg.parallel = !a.serial;

    auto v = decide::solve(p, cfg);

    std::ostringstream os;
    os << "verdict: " << decide::to_string(v.kind) << "\n";
    if (v.witness) os << "witness: " << witness_str(*v.witness) << "\n";
    os << "E_g estimate: " << v.e_g_estimate << "\n";
    os << "iterations: " << v.iterations.size();
    if (!v.iterations.empty()) {
        os << " (T =";
        for (const auto& it : v.iterations) os << " " << it.total_time;
        os << ")";
    }
    os << "\n";
    if (!v.qualification.empty()) os << "note: " << v.qualification << "\n";
    os << "elapsed: " << v.seconds << " s\n";

    deliver(report::verdict_json(a.eqo.eq, cfg, v), a.out, os.str());
    return v.kind == decide::VerdictKind::Inconclusive ? 2 : 0;
}

// --------------------------------------------------------------- evolve --

struct EvolveArgs {
    EquationOpts eqo;
    std::string time = "auto";
    int outer = 0;  // 0: sized from the coupling norm
    int inner = 0;
    int top = 10;
    bool serial = false;
    OutputOpts out;
};

int run_evolve(const EvolveArgs& a) {
    auto p = poly::parse_equation(a.eqo.eq);
    const std::size_t k = p.num_vars();
    auto cutoffs = broadcast(a.eqo.cutoffs, k, "--cutoffs");
    auto alphas = to_alphas(broadcast(a.eqo.alphas, k, "--alpha"));
    auto space = fock::FockSpace::make(cutoffs);
    auto hs = hamiltonian::build(p, space, alphas);

    double norm = 0, t_auto = 0;
    json diag_block(nullptr);
    if (space.dim <= 4096) {
        auto d = hamiltonian::diagnostics(hs);
        norm = d.norm;
        t_auto = d.t_bound;
        diag_block = report::diagnostics_json(d);
    } else {
        auto g = gapest::estimate_gap_and_T(hs);
        norm = g.norm;
        t_auto = g.t_est;
        diag_block = report::gap_estimate_json(g);
    }
    double total_time = parse_time(a.time);
    if (total_time <= 0) total_time = std::min(std::max(t_auto, 1.0), 1e4);

    const double scale = std::max(evolve::gershgorin_bound(hs.h_initial.mat),
                                  evolve::gershgorin_bound(hs.h_problem.mat));
    auto sched = evolve::default_schedule(total_time, norm, scale);
    if (a.outer > 0) sched.outer_steps = a.outer;
    if (a.inner > 0) sched.inner_steps = a.inner;

    evolve::EvolveOptions opts;
    opts.parallel = !a.serial;
    evolve::EvolveStats stats;
    auto psi0 = fock::coherent_state(space, alphas);
    auto psiT = evolve::evolve_product_formula(hs, psi0, sched, &stats, opts);
    auto dist = evolve::distribution(psiT);
    const double leak = fock::boundary_mass(psiT);

    json j;
    j["schema"] = report::kSchema;
    j["command"] = "evolve";
    j["equation"] = a.eqo.eq;
    j["cutoffs"] = cutoffs;
    j["total_time"] = total_time;
    j["schedule"] = json{{"outer_steps", sched.outer_steps},
                         {"inner_steps", sched.inner_steps},
                         {"norm_bound", sched.norm_bound}};
    j["diagnostics"] = std::move(diag_block);
    j["distribution"] = report::distribution_json(dist);
    j["boundary_mass"] = leak;
    j["stats"] = json{{"outer_steps", stats.outer_steps},
                      {"matvecs", stats.matvecs},
                      {"max_norm_drift", stats.max_norm_drift}};

    // top outcomes, ties broken by index order
    std::vector<std::int64_t> idx(static_cast<std::size_t>(space.dim));
    for (std::int64_t i = 0; i < space.dim; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::int64_t x, std::int64_t y) { return dist.probs[x] > dist.probs[y]; });
    std::ostringstream os;
    os << "T = " << total_time << ", N = " << sched.outer_steps << ", m = " << sched.inner_steps
       << ", norm drift = " << stats.max_norm_drift << "\n";
    os << "boundary mass = " << leak << "\n";
    const int top = std::min<std::int64_t>(a.top, space.dim);
    for (int i = 0; i < top; ++i) {
        os << "  " << tuple_str(space.occupancy(idx[static_cast<std::size_t>(i)])) << "  "
           << dist.probs[idx[static_cast<std::size_t>(i)]] << "\n";
    }
    deliver(j, a.out, os.str());
    return 0;
}

// ------------------------------------------------------------------ gap --

struct GapArgs {
    EquationOpts eqo;
    int grid = 21;
    bool variational = false;
    std::int64_t max_dense_dim = 4096;
    OutputOpts out;
};

int run_gap(const GapArgs& a) {
    auto p = poly::parse_equation(a.eqo.eq);
    const std::size_t k = p.num_vars();
    auto cutoffs = broadcast(a.eqo.cutoffs, k, "--cutoffs");
    auto alphas = to_alphas(broadcast(a.eqo.alphas, k, "--alpha"));
    auto space = fock::FockSpace::make(cutoffs);
    auto hs = hamiltonian::build(p, space, alphas);

    json j;
    j["schema"] = report::kSchema;
    j["command"] = "gap";
    j["equation"] = a.eqo.eq;
    j["cutoffs"] = cutoffs;
    std::ostringstream os;
    if (!a.variational && space.dim <= a.max_dense_dim) {
        auto d = hamiltonian::diagnostics(hs, a.grid);
        j["exact"] = report::diagnostics_json(d);
        j["variational"] = nullptr;
        os << "gap = " << d.gap << ", coupling norm = " << d.norm << ", T bound = " << d.t_bound
           << "\n";
        if (d.degenerate_endpoint) os << "endpoint ground space is degenerate (excluded)\n";
        if (d.interior_degeneracy) os << "interior degeneracy: uncertifiable\n";
    } else {
        auto g = gapest::estimate_gap_and_T(hs, a.grid);
        j["exact"] = nullptr;
        j["variational"] = report::gap_estimate_json(g);
        os << "variational gap = " << g.g_est << ", norm = " << g.norm
           << ", T estimate = " << g.t_est << "\n";
        if (g.warning) os << "warning: some squeezed frame is unreliable\n";
    }
    deliver(j, a.out, os.str());
    return 0;
}

// ---------------------------------------------------------------- boost --

struct BoostArgs {
    double q = 0;
    double target = 0.99;
    long width = 0;  // evaluate instead of search
    OutputOpts out;
};

int run_boost(const BoostArgs& a) {
    json j;
    j["schema"] = report::kSchema;
    j["command"] = "boost";
    j["q"] = a.q;
    std::ostringstream os;
    if (a.width > 0) {
        if (a.width % 2 == 0) throw ConfigError("--width must be odd");
        const bool exact = a.width <= boosting::kExactWidthMax;
        const double v = exact ? boosting::majority_success(a.q, static_cast<int>(a.width))
                               : boosting::majority_success_approx(a.q, static_cast<int>(a.width));
        j["l"] = a.width;
        j["majority_success"] = v;
        j["exact"] = exact;
        os << "majority_success(" << a.q << ", " << a.width << ") = " << v
           << (exact ? "" : "  [approximate]") << "\n";
    } else {
        if (!(a.target > 0.5) || !(a.target < 1.0))
            throw ConfigError("--target must lie in (0.5, 1)");
        auto w = boosting::min_width(a.q, 1.0 - a.target);
        j["target"] = a.target;
        j["l"] = w.l;
        j["fitted_c"] = w.fitted_c;
        j["exact"] = w.exact;
        j["achieved"] = w.l <= boosting::kExactWidthMax
                            ? boosting::majority_success(a.q, static_cast<int>(w.l))
                            : boosting::majority_success_approx(a.q, static_cast<int>(w.l));
        os << "minimal odd width l = " << w.l << " (target " << a.target << ", fitted C = "
           << w.fitted_c << (w.exact ? ", exact" : ", approximate") << ")\n";
    }
    deliver(j, a.out, os.str());
    return 0;
}

// --------------------------------------------------------------- oracle --

struct OracleArgs {
    EquationOpts eqo;
    std::vector<std::int64_t> ref_cutoffs;
    std::string time = "auto";
    double epsilon = 0.1;
    double p_success = 0.8;
    long reps = 0;
    std::uint64_t seed = 1;
    int top = 10;
    bool serial = false;
    OutputOpts out;
};

int run_oracle(const OracleArgs& a) {
    auto p = poly::parse_equation(a.eqo.eq);
    const std::size_t k = p.num_vars();
    auto cutoffs = broadcast(a.eqo.cutoffs, k, "--cutoffs");
    auto alphas = to_alphas(broadcast(a.eqo.alphas, k, "--alpha"));
    std::vector<std::int64_t> ref = a.ref_cutoffs;
    if (ref.empty()) {
        ref = cutoffs;
        for (auto& c : ref) c *= 2;
    } else {
        ref = broadcast(ref, k, "--ref-cutoffs");
    }

    auto space = fock::FockSpace::make(cutoffs);
    auto hs = hamiltonian::build(p, space, alphas);
    double norm = 0, t_auto = 0;
    if (space.dim <= 4096) {
        auto d = hamiltonian::diagnostics(hs);
        norm = d.norm;
        t_auto = d.t_bound;
    } else {
        auto g = gapest::estimate_gap_and_T(hs);
        norm = g.norm;
        t_auto = g.t_est;
    }
    double total_time = parse_time(a.time);
    if (total_time <= 0) total_time = std::min(std::max(t_auto, 1.0), 100.0);

    auto ref_space = fock::FockSpace::make(ref);
    auto hs_ref = hamiltonian::build(p, ref_space, alphas);
    const double scale = std::max(evolve::gershgorin_bound(hs_ref.h_initial.mat),
                                  evolve::gershgorin_bound(hs_ref.h_problem.mat));
    auto sched = evolve::default_schedule(total_time, norm, scale);

    auto plan = oracle::make_plan(a.epsilon, a.p_success, a.seed, a.reps);

    evolve::EvolveOptions opts;
    opts.parallel = !a.serial;
    auto res = oracle::run_apparatus(p, alphas, ref, cutoffs, sched, plan, opts);

    json j;
    j["schema"] = report::kSchema;
    j["command"] = "oracle";
    j["equation"] = a.eqo.eq;
    j["cutoffs"] = cutoffs;
    j["ref_cutoffs"] = ref;
    j["total_time"] = total_time;
    j["seed"] = a.seed;
    j["histogram"] = report::histogram_json(res.histogram);
    j["candidate"] = res.candidate.occupancy;
    j["candidate_squared"] = res.candidate.squared_value.str();
    j["boundary_mass"] = res.boundary_mass;
    j["max_norm_drift"] = res.stats.max_norm_drift;

    std::ostringstream os;
    os << "draws = " << res.histogram.total << " at T = " << total_time << "\n";
    os << "candidate = " << tuple_str(res.candidate.occupancy)
       << " with D^2 = " << res.candidate.squared_value.str() << "\n";
    os << "boundary mass = " << res.boundary_mass << "\n";
    int shown = 0;
    for (const auto& [outcome, count] : res.histogram.counts) {
        if (shown++ >= a.top) break;
        os << "  " << tuple_str(outcome) << "  " << count << "\n";
    }
    deliver(j, a.out, os.str());
    return 0;
}

// ----------------------------------------------------------- bruteforce --

struct BruteArgs {
    std::string eq;
    std::vector<std::int64_t> cutoffs{16};
    std::uint64_t budget = 10000000;
    bool serial = false;
    OutputOpts out;
};

int run_bruteforce(const BruteArgs& a) {
    auto p = poly::parse_equation(a.eq);
    auto cutoffs = broadcast(a.cutoffs, p.num_vars(), "--cutoffs");
    auto r = poly::brute_force_min(p, cutoffs, a.budget, !a.serial);

    json j;
    j["schema"] = report::kSchema;
    j["command"] = "bruteforce";
    j["equation"] = a.eq;
    j["cutoffs"] = cutoffs;
    j["min_squared"] = r.min_value.str();
    {
        json mins = json::array();
        for (const auto& m : r.argmins) {
            json row = json::array();
            for (const auto& x : m) row.push_back(x.str());
            mins.push_back(std::move(row));
        }
        j["argmins"] = std::move(mins);
    }
    j["points_scanned"] = r.points_scanned;

    std::ostringstream os;
    os << "min D^2 = " << r.min_value.str() << " over " << r.points_scanned << " points\n";
    os << (r.min_value == 0 ? "solutions" : "minimizers") << ": " << r.argmins.size() << "\n";
    for (std::size_t i = 0; i < r.argmins.size() && i < 5; ++i)
        os << "  " << witness_str(r.argmins[i]) << "\n";
    deliver(j, a.out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated-space simulator of the adiabatic Diophantine decision procedure"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "thread budget (overrides H10_THREADS)");

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "run the full decision loop over an equation");
    sa.eqo.add_to(solve);
    solve->add_option("--ref-cutoffs", sa.ref_cutoffs, "apparatus cutoffs (default: 2x cutoffs)")
        ->delimiter(',');
    solve->add_option("--epsilon", sa.epsilon, "distribution accuracy in (0,1)");
    solve->add_option("--p-success", sa.p_success, "sampling confidence in (0,1)");
    solve->add_option("--time", sa.time, "evolution time T, or \"auto\"");
    solve->add_option("--time-cap", sa.time_cap, "cap on the auto-sized first T (0 disables)");
    solve->add_option("--max-time", sa.max_time, "hard ceiling on any refreshed T");
    solve->add_option("--seed", sa.seed, "base RNG seed");
    solve->add_option("--reps", sa.reps, "measurement repetitions (0: sized by the law)");
    solve->add_option("--max-iterations", sa.max_iterations, "outer iteration budget");
    solve->add_option("--max-dense-dim", sa.max_dense_dim,
                      "largest dimension for dense gap diagnostics");
    solve->add_flag("--serial", sa.serial, "disable the parallel kernels");
    add_output_opts(solve, sa.out);

    EvolveArgs ea;
    auto* evolve_cmd = app.add_subcommand("evolve", "propagate the coherent state once");
    ea.eqo.add_to(evolve_cmd);
    evolve_cmd->add_option("--time", ea.time, "evolution time T, or \"auto\"");
    evolve_cmd->add_option("--outer", ea.outer, "override outer product-formula steps");
    evolve_cmd->add_option("--inner", ea.inner, "override inner steps per factor");
    evolve_cmd->add_option("--top", ea.top, "how many outcomes to print");
    evolve_cmd->add_flag("--serial", ea.serial, "disable the parallel kernels");
    add_output_opts(evolve_cmd, ea.out);

    GapArgs ga;
    auto* gap = app.add_subcommand("gap", "spectral-gap diagnostics of the interpolation");
    ga.eqo.add_to(gap);
    gap->add_option("--grid", ga.grid, "number of s-grid points (>= 3)");
    gap->add_flag("--variational", ga.variational, "force the squeezed-frame estimate");
    gap->add_option("--max-dense-dim", ga.max_dense_dim,
                    "largest dimension for dense diagnostics");
    add_output_opts(gap, ga.out);

    BoostArgs ba;
    auto* boost = app.add_subcommand("boost", "majority-vote width calculator");
    boost->add_option("--q", ba.q, "per-run success probability")->required();
    boost->add_option("--target", ba.target, "overall success target in (0.5, 1)");
    boost->add_option("--width", ba.width, "evaluate this odd width instead of searching");
    add_output_opts(boost, ba.out);

    OracleArgs oa;
    auto* orc = app.add_subcommand("oracle", "run the measurement apparatus once");
    oa.eqo.add_to(orc);
    orc->add_option("--ref-cutoffs", oa.ref_cutoffs, "apparatus cutoffs (default: 2x cutoffs)")
        ->delimiter(',');
    orc->add_option("--time", oa.time, "evolution time T, or \"auto\"");
    orc->add_option("--epsilon", oa.epsilon, "distribution accuracy in (0,1)");
    orc->add_option("--p-success", oa.p_success, "sampling confidence in (0,1)");
    orc->add_option("--reps", oa.reps, "repetitions (0: sized by the law)");
    orc->add_option("--seed", oa.seed, "sampling seed");
    orc->add_option("--top", oa.top, "how many histogram rows to print");
    orc->add_flag("--serial", oa.serial, "disable the parallel kernels");
    add_output_opts(orc, oa.out);

    BruteArgs bfa;
    auto* bf = app.add_subcommand("bruteforce", "exhaustive check over the truncated box");
    bf->add_option("--eq", bfa.eq, "Diophantine equation")->required();
    bf->add_option("--cutoffs", bfa.cutoffs, "box bounds per unknown")->delimiter(',');
    bf->add_option("--budget", bfa.budget, "largest box volume to scan");
    bf->add_flag("--serial", bfa.serial, "disable the parallel scan");
    add_output_opts(bf, bfa.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    if (threads > 0) par::set_thread_budget(threads);

    if (*solve) return guarded(sa.out, [&] { return run_solve(sa); });
    if (*evolve_cmd) return guarded(ea.out, [&] { return run_evolve(ea); });
    if (*gap) return guarded(ga.out, [&] { return run_gap(ga); });
    if (*boost) return guarded(ba.out, [&] { return run_boost(ba); });
    if (*orc) return guarded(oa.out, [&] { return run_oracle(oa); });
    if (*bf) return guarded(bfa.out, [&] { return run_bruteforce(bfa); });
    return 1;
}
