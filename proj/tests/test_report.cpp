#include "h10/report.hpp"

#include <doctest.h>

using namespace h10;
using report::json;

namespace {

decide::SolveConfig small_config() {
    decide::SolveConfig c;
    c.cutoffs = {8};
    c.ref_cutoffs = {16};
    c.alphas = {1.0};
    c.seed = 42;
    return c;
}

}  // namespace

TEST_CASE("solve report carries the contract fields") {
    auto cfg = small_config();
    auto v = decide::solve(poly::parse_equation("x - 3"), cfg);
    auto j = report::verdict_json("x - 3", cfg, v);

    CHECK(j["schema"] == report::kSchema);
    CHECK(j["equation"] == "x - 3");
    CHECK(j["verdict"] == "HAS_SOLUTION");
    REQUIRE(j["witness"].is_array());
    CHECK(j["witness"][0] == "3");
    CHECK(j["config"]["seed"] == 42);
    CHECK(j["config"]["cutoffs"][0] == 8);
    CHECK(j["config"]["alphas"][0][0] == 1.0);
    CHECK(j["seed"] == 42);
    CHECK(j["e_g_estimate"].is_number());
    CHECK(j["final_basis_size"].is_number_integer());
    CHECK(j["ground_estimate"]["e_c"].is_string());
    CHECK(j["auto_time"] == true);
    CHECK(j["timings"]["total_seconds"].is_number());

    REQUIRE(j["iterations"].is_array());
    REQUIRE(!j["iterations"].empty());
    const auto& it = j["iterations"][0];
    CHECK(it["index"] == 1);
    CHECK(it["candidate_squared"].is_string());
    CHECK(it["histogram"]["total"].is_number_integer());
    CHECK(!it["histogram"]["counts"].empty());
    CHECK(!it["estimated"]["entries"].empty());
    CHECK(it["seconds"].is_number());

    // dense path on this size, so the exact diagnostics block is present
    CHECK(j["gap_diagnostics"]["exact"].is_object());
    CHECK(j["gap_diagnostics"]["exact"]["s_grid"].size() == 21);

    // round trip through the parser
    auto back = json::parse(report::render(j));
    CHECK(back["verdict"] == "HAS_SOLUTION");
}

TEST_CASE("identical runs render identical bytes modulo timings") {
    auto cfg = small_config();
    auto p = poly::parse_equation("x - 3");
    auto a = report::verdict_json("x - 3", cfg, decide::solve(p, cfg));
    auto b = report::verdict_json("x - 3", cfg, decide::solve(p, cfg));
    CHECK(report::equal_modulo_timings(a, b));
    CHECK(report::render(report::strip_timings(a)) == report::render(report::strip_timings(b)));
}

TEST_CASE("strip_timings removes every clock field, nested included") {
    json j;
    j["seconds"] = 1.5;
    j["timings"] = json{{"total_seconds", 2.0}};
    j["iterations"] = json::array({json{{"seconds", 0.1}, {"keep", true}}});
    j["nested"] = json{{"inner", json{{"seconds", 3.0}}}};
    auto s = report::strip_timings(j);
    CHECK(!s.contains("seconds"));
    CHECK(!s.contains("timings"));
    CHECK(!s["iterations"][0].contains("seconds"));
    CHECK(s["iterations"][0]["keep"] == true);
    CHECK(!s["nested"]["inner"].contains("seconds"));
}

TEST_CASE("histogram serialization is sorted and exact") {
    oracle::Histogram h;
    h.counts[{1, 0}] = 3;
    h.counts[{0, 2}] = 5;
    h.total = 8;
    auto j = report::histogram_json(h);
    CHECK(j["total"] == 8);
    REQUIRE(j["counts"].size() == 2);
    CHECK(j["counts"][0]["n"] == json::array({0, 2}));  // map order: lexicographic
    CHECK(j["counts"][0]["count"] == 5);
    CHECK(j["counts"][1]["n"] == json::array({1, 0}));
}

TEST_CASE("distribution serialization drops dust and accounts for it") {
    evolve::Distribution d;
    d.space = fock::FockSpace::make({2, 2});
    d.probs = Eigen::VectorXd::Zero(4);
    d.probs[0] = 0.75;
    d.probs[3] = 0.25 - 1e-15;
    d.probs[1] = 1e-15;
    auto j = report::distribution_json(d);
    REQUIRE(j["entries"].size() == 2);
    CHECK(j["entries"][0]["n"] == json::array({0, 0}));
    CHECK(j["entries"][1]["n"] == json::array({1, 1}));
    CHECK(j["omitted_mass"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("error objects are structured") {
    auto j = report::error_json("ConfigError", "bad cutoffs");
    CHECK(j["schema"] == report::kSchema);
    CHECK(j["error"]["kind"] == "ConfigError");
    CHECK(j["error"]["message"] == "bad cutoffs");
}
