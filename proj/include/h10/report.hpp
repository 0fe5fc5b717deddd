#pragma once

#include "h10/decide.hpp"

#include <json.hpp>

#include <string>

namespace h10::report {

using json = nlohmann::ordered_json;

// Bumped whenever a field is renamed, moved, or re-typed.
inline constexpr const char* kSchema = "h10-report/1";

json config_json(const decide::SolveConfig& c);
json histogram_json(const oracle::Histogram& h);
// Entries below `min_prob` are dropped; their total lands in "omitted_mass".
json distribution_json(const evolve::Distribution& d, double min_prob = 1e-12);
json diagnostics_json(const hamiltonian::SpectralDiagnostics& d);
json gap_estimate_json(const gapest::GapEstimate& g);

// The full solve report.  Insertion order is fixed and every container is
// sorted, so two runs with identical outputs render identical bytes.
json verdict_json(const std::string& equation, const decide::SolveConfig& c,
                  const decide::Verdict& v);

// Structured failure object for the command line.
json error_json(const std::string& kind, const std::string& message);

// Removes every "seconds" key and "timings" object, recursively; what is
// left must be byte-identical across reruns of the same configuration.
json strip_timings(json j);

bool equal_modulo_timings(const json& a, const json& b);

// Canonical rendering: two-space indent, trailing newline.
std::string render(const json& j);

}  // namespace h10::report
