#pragma once

#include "h10/evolve.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace h10::oracle {

using evolve::Distribution;
using evolve::Schedule;
using fock::FockSpace;
using fock::StateVector;

// Repetition budget: the law is L >= ceil(1 / (eps^2 (1-p))).  Forcing a
// smaller L is allowed but recorded, so reports stay honest about it.
struct SamplingPlan {
    double epsilon = 0.1;
    double p = 0.8;
    long repetitions = 0;
    std::uint64_t seed = 0;
    bool overridden = false;
};

long law_repetitions(double epsilon, double p);

// repetitions == 0 derives L from the law; an explicit smaller value sets
// `overridden`.
SamplingPlan make_plan(double epsilon, double p, std::uint64_t seed, long repetitions = 0);

// Measurement frequencies over number-basis outcomes.  The map order is
// lexicographic in the outcome tuple, which downstream code relies on for
// deterministic iteration.
struct Histogram {
    std::map<std::vector<std::int64_t>, long> counts;
    long total = 0;

    double frequency(const std::vector<std::int64_t>& outcome) const;
};

// Outcome of repetition i is a pure function of (plan.seed, i): parallelism
// and reordering cannot change the histogram.
Histogram draw_histogram(const Distribution& dist, const SamplingPlan& plan, bool parallel = true);

// The observed outcome minimizing the exact squared equation value; ties go
// to the lexicographically smallest tuple.
struct Candidate {
    std::vector<std::int64_t> occupancy;
    BigInt squared_value;
};

Candidate pick_candidate(const poly::Polynomial& p, const Histogram& h);

// Sup distance between empirical frequencies and a model distribution over
// the union of their supports; outcomes missing from either side count 0.
double empirical_distance(const Histogram& h, const Distribution& q);

struct ApparatusResult {
    Histogram histogram;
    Candidate candidate;
    Distribution reference_distribution;  // exact measurement law of psi(T)
    double boundary_mass = 0;             // truncation diagnostic at the reference cutoffs
    evolve::EvolveStats stats;            // norm-drift audit of the apparatus evolution
};

// The simulated measurement apparatus: evolve once from |alpha...> at the
// reference truncation (which must strictly dominate the classical loop's
// cutoffs in every mode), then draw plan.repetitions seeded samples.
ApparatusResult run_apparatus(const poly::Polynomial& p, const std::vector<fock::cplx>& alphas,
                              const std::vector<std::int64_t>& ref_cutoffs,
                              const std::vector<std::int64_t>& loop_cutoffs, const Schedule& sched,
                              const SamplingPlan& plan,
                              const evolve::EvolveOptions& opts = {});

}  // namespace h10::oracle
