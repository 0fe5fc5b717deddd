#include "h10/oracle.hpp"

#include "h10/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace h10::oracle {
namespace {

// splitmix64: the standard 64-bit finalizing mix.  Sample i draws its
// uniform from a key built of (seed, i) alone, so the histogram cannot
// depend on scheduling.  (std::mt19937_64 and friends are not guaranteed
// bit-identical across standard libraries, and reports must be.)
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_uniform(std::uint64_t seed, std::uint64_t i) {
    const std::uint64_t z = splitmix64(seed ^ splitmix64(i + 1));
    return double(z >> 11) * 0x1.0p-53;
}

}  // namespace

long law_repetitions(double epsilon, double p) {
    if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("accuracy must lie in (0, 1)");
    if (!(p > 0 && p < 1)) throw ConfigError("confidence must lie in (0, 1)");
    return static_cast<long>(std::ceil(1.0 / (epsilon * epsilon * (1.0 - p))));
}

SamplingPlan make_plan(double epsilon, double p, std::uint64_t seed, long repetitions) {
    const long law = law_repetitions(epsilon, p);
    SamplingPlan plan;
    plan.epsilon = epsilon;
    plan.p = p;
    plan.seed = seed;
    if (repetitions <= 0) {
        plan.repetitions = law;
    } else {
        plan.repetitions = repetitions;
        plan.overridden = repetitions < law;
    }
    return plan;
}

double Histogram::frequency(const std::vector<std::int64_t>& outcome) const {
    auto it = counts.find(outcome);
    if (it == counts.end() || total == 0) return 0.0;
    return double(it->second) / double(total);
}

Histogram draw_histogram(const Distribution& dist, const SamplingPlan& plan, bool parallel) {
    if (plan.repetitions < 1) throw ConfigError("sampling plan has no repetitions");
    const std::int64_t dim = dist.space.dim;

    Eigen::VectorXd cdf(dim);
    double acc = 0;
    for (std::int64_t j = 0; j < dim; ++j) {
        acc += dist.probs[j];
        cdf[j] = acc;
    }

    const long reps = plan.repetitions;
    std::vector<std::int64_t> drawn(static_cast<std::size_t>(reps));
    const int threads = parallel ? par::thread_budget() : 1;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long i = 0; i < reps; ++i) {
        const double u = unit_uniform(plan.seed, static_cast<std::uint64_t>(i));
        const double* lo = cdf.data();
        const double* hi = cdf.data() + dim;
        std::int64_t idx = std::upper_bound(lo, hi, u) - lo;
        drawn[static_cast<std::size_t>(i)] = std::min(idx, dim - 1);
    }

    Histogram h;
    h.total = reps;
    for (long i = 0; i < reps; ++i) ++h.counts[dist.space.occupancy(drawn[static_cast<std::size_t>(i)])];
    return h;
}

Candidate pick_candidate(const poly::Polynomial& p, const Histogram& h) {
    if (h.counts.empty()) throw ConfigError("cannot pick a candidate from an empty histogram");
    Candidate best;
    bool first = true;
    // Map iteration is lexicographic, so the first strict minimum seen is
    // the lexicographic tie-winner.
    for (const auto& [outcome, count] : h.counts) {
        (void)count;
        BigInt v = poly::evaluate_squared(p, poly::to_assignment(outcome));
        if (first || v < best.squared_value) {
            best.occupancy = outcome;
            best.squared_value = std::move(v);
            first = false;
        }
    }
    return best;
}

double empirical_distance(const Histogram& h, const Distribution& q) {
    double worst = 0;
    // All of q's support (every tuple of its space)...
    for (std::int64_t j = 0; j < q.space.dim; ++j) {
        const double diff = std::abs(h.frequency(q.space.occupancy(j)) - q.probs[j]);
        worst = std::max(worst, diff);
    }
    // ...plus observed outcomes falling outside that space, where q is 0.
    for (const auto& [outcome, count] : h.counts) {
        bool inside = outcome.size() == q.space.cutoffs.size();
        if (inside)
            for (std::size_t m = 0; m < outcome.size(); ++m)
                if (outcome[m] >= q.space.cutoffs[m]) {
                    inside = false;
                    break;
                }
        if (!inside)
            worst = std::max(worst, double(count) / double(h.total));
    }
    return worst;
}

ApparatusResult run_apparatus(const poly::Polynomial& p, const std::vector<fock::cplx>& alphas,
                              const std::vector<std::int64_t>& ref_cutoffs,
                              const std::vector<std::int64_t>& loop_cutoffs, const Schedule& sched,
                              const SamplingPlan& plan, const evolve::EvolveOptions& opts) {
    if (ref_cutoffs.size() != loop_cutoffs.size())
        throw ConfigError("reference and loop cutoffs disagree on the number of modes");
    for (std::size_t m = 0; m < ref_cutoffs.size(); ++m)
        if (ref_cutoffs[m] <= loop_cutoffs[m]) {
            std::ostringstream os;
            os << "reference cutoff " << ref_cutoffs[m] << " for mode " << m
               << " must strictly dominate the loop cutoff " << loop_cutoffs[m];
            throw ConfigError(os.str());
        }

    auto space = FockSpace::make(ref_cutoffs);
    auto hs = hamiltonian::build(p, space, alphas);
    auto psi0 = fock::coherent_state(space, alphas);
    ApparatusResult r;
    auto psiT = evolve::evolve_product_formula(hs, psi0, sched, &r.stats, opts);

    r.boundary_mass = fock::boundary_mass(psiT);
    if (r.boundary_mass > 1e-3) {
        std::ostringstream os;
        os << "evolved state leaks " << r.boundary_mass
           << " probability onto the reference cutoff boundary; enlarge the reference truncation";
        throw TruncationError(os.str());
    }
    r.reference_distribution = evolve::distribution(psiT);
    r.histogram = draw_histogram(r.reference_distribution, plan, opts.parallel);
    r.candidate = pick_candidate(p, r.histogram);
    return r;
}

}  // namespace h10::oracle
