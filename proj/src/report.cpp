#include "h10/report.hpp"

namespace h10::report {

namespace {

json complex_list(const std::vector<fock::cplx>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(json::array({z.real(), z.imag()}));
    return out;
}

json bigint_list(const std::vector<BigInt>& v) {
    json out = json::array();
    for (const auto& b : v) out.push_back(b.str());
    return out;
}

json iteration_json(const decide::IterationTrace& t) {
    json j;
    j["index"] = t.index;
    j["total_time"] = t.total_time;
    j["seed"] = t.seed;
    j["repetitions"] = t.repetitions;
    j["repetitions_overridden"] = t.repetitions_overridden;
    j["candidate"] = t.candidate;
    j["candidate_squared"] = t.candidate_squared.str();
    j["candidate_probability"] = t.candidate_probability;
    j["boundary_mass"] = t.boundary_mass;
    j["basis_sizes"] = t.basis_sizes;
    j["sup_distances"] = t.sup_distances;
    j["e_g_prime"] = t.e_g_prime;
    j["delta"] = t.delta;
    j["converged"] = t.converged;
    j["consistent"] = t.consistent;
    j["gap_truncated"] = t.gap_truncated;
    j["norm_truncated"] = t.norm_truncated;
    j["next_total_time"] = t.next_total_time;
    j["max_norm_drift"] = t.max_norm_drift;
    j["histogram"] = histogram_json(t.histogram);
    j["estimated"] = distribution_json(t.estimated);
    j["note"] = t.note;
    j["seconds"] = t.seconds;
    return j;
}

}  // namespace

json config_json(const decide::SolveConfig& c) {
    json j;
    j["epsilon"] = c.epsilon;
    j["p_success"] = c.p_success;
    j["alphas"] = complex_list(c.alphas);
    j["cutoffs"] = c.cutoffs;
    j["ref_cutoffs"] = c.ref_cutoffs;
    j["total_time"] = c.total_time;
    j["initial_time_cap"] = c.initial_time_cap;
    j["seed"] = c.seed;
    j["max_iterations"] = c.max_iterations;
    j["repetitions"] = c.repetitions;
    j["max_total_time"] = c.max_total_time;
    j["max_dense_dim"] = c.max_dense_dim;
    j["parallel"] = c.parallel;
    return j;
}

json histogram_json(const oracle::Histogram& h) {
    json counts = json::array();
    for (const auto& [outcome, n] : h.counts) {
        json row;
        row["n"] = outcome;
        row["count"] = n;
        counts.push_back(std::move(row));
    }
    json j;
    j["total"] = h.total;
    j["counts"] = std::move(counts);
    return j;
}

json distribution_json(const evolve::Distribution& d, double min_prob) {
    json entries = json::array();
    double kept = 0;
    for (std::int64_t i = 0; i < d.space.dim; ++i) {
        const double p = d.probs[i];
        if (p < min_prob) continue;
        json row;
        row["n"] = d.space.occupancy(i);
        row["p"] = p;
        entries.push_back(std::move(row));
        kept += p;
    }
    json j;
    j["entries"] = std::move(entries);
    j["omitted_mass"] = std::max(0.0, 1.0 - kept);
    return j;
}

json diagnostics_json(const hamiltonian::SpectralDiagnostics& d) {
    json j;
    j["s_grid"] = d.s_grid;
    j["ground"] = d.ground;
    j["excited"] = d.excited;
    j["coupling"] = d.coupling;
    j["gap"] = d.gap;
    j["norm"] = d.norm;
    j["t_bound"] = d.t_bound;
    j["margin"] = d.margin;
    j["degenerate_endpoint"] = d.degenerate_endpoint;
    j["interior_degeneracy"] = d.interior_degeneracy;
    return j;
}

json gap_estimate_json(const gapest::GapEstimate& g) {
    json frames = json::array();
    for (const auto& f : g.frames) {
        json row;
        row["s"] = f.s;
        row["thetas"] = f.thetas;
        row["e_b"] = f.e_b;
        row["g"] = f.g;
        row["k_resid"] = f.k_resid;
        row["unreliable"] = f.unreliable;
        frames.push_back(std::move(row));
    }
    json j;
    j["g_est"] = g.g_est;
    j["t_est"] = g.t_est;
    j["norm"] = g.norm;
    j["norm_from_exact"] = g.norm_from_exact;
    j["warning"] = g.warning;
    j["frames"] = std::move(frames);
    return j;
}

json verdict_json(const std::string& equation, const decide::SolveConfig& c,
                  const decide::Verdict& v) {
    json j;
    j["schema"] = kSchema;
    j["equation"] = equation;
    j["config"] = config_json(c);
    j["verdict"] = decide::to_string(v.kind);
    j["witness"] = v.witness ? bigint_list(*v.witness) : json(nullptr);
    j["qualification"] = v.qualification;
    j["e_g_estimate"] = v.e_g_estimate;
    {
        json g;
        g["basis_size"] = v.estimate.basis_size;
        g["e_g_prime"] = v.estimate.e_g_prime;
        g["e_c"] = v.estimate.e_c.str();
        g["delta"] = v.estimate.delta;
        g["converged"] = v.estimate.converged;
        j["ground_estimate"] = std::move(g);
    }
    j["final_basis_size"] = v.estimate.basis_size;
    {
        json it = json::array();
        for (const auto& t : v.iterations) it.push_back(iteration_json(t));
        j["iterations"] = std::move(it);
    }
    {
        json g;
        g["exact"] = v.diagnostics_dense ? diagnostics_json(v.schedule_diagnostics) : json(nullptr);
        g["variational"] = v.used_variational ? gap_estimate_json(v.variational) : json(nullptr);
        j["gap_diagnostics"] = std::move(g);
    }
    j["initial_total_time"] = v.initial_total_time;
    j["auto_time"] = v.auto_time;
    j["max_norm_drift"] = v.max_norm_drift;
    j["truncation_flagged"] = v.truncation_flagged;
    j["problem_saturated"] = v.problem_saturated;
    j["seed"] = c.seed;
    j["timings"] = json{{"total_seconds", v.seconds}};
    return j;
}

json error_json(const std::string& kind, const std::string& message) {
    json j;
    j["schema"] = kSchema;
    j["error"] = json{{"kind", kind}, {"message", message}};
    return j;
}

json strip_timings(json j) {
    if (j.is_object()) {
        j.erase("seconds");
        j.erase("timings");
        for (auto& [key, value] : j.items()) value = strip_timings(std::move(value));
    } else if (j.is_array()) {
        for (auto& value : j) value = strip_timings(std::move(value));
    }
    return j;
}

bool equal_modulo_timings(const json& a, const json& b) {
    return strip_timings(a).dump() == strip_timings(b).dump();
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

}  // namespace h10::report
