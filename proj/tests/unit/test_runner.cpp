#include "doctest.h"

#include "tangency/config.hpp"
#include "tangency/error.hpp"
#include "tangency/runner.hpp"
#include "tangency/svg.hpp"

#include <fstream>
#include <sstream>
#include <string>

using namespace tangency;

namespace {

std::string ref1_text() {
    std::ifstream in(TANGENCY_SOURCE_DIR "/configs/ref1.json");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("reference config parses") {
    const auto cfg = parse_config(ref1_text());
    CHECK(cfg.system.lambda() == 0.3);
    CHECK(cfg.system.seed.z0() == 0.5);
    CHECK(cfg.n_range.lo == 8);
    CHECK(cfg.sha256 == sha256_hex(ref1_text()));
    CHECK(cfg.sha256.size() == 64);
}

TEST_CASE("config rejects bad input") {
    const auto text = ref1_text();
    CHECK_THROWS_AS(parse_config("{"), Error);
    CHECK_THROWS_AS(parse_config(replace(text, "\"seed\": 0", "\"seed\": 0, \"extra\": 1")), Error);
    CHECK_THROWS_AS(parse_config(replace(text, "\"m0\": 1", "\"m0\": 1, \"f\": 2")), Error);
    CHECK_THROWS_AS(parse_config(replace(text, "\"tau_grid\": 256", "\"tau_grid\": 256, \"g\": 1")), Error);
    CHECK_THROWS_AS(parse_config(replace(text, "\"rho\": 0.3", "\"rho\": 0.0")), Error);
    CHECK_THROWS_AS(parse_config(replace(text, "\"seed\": 0", "\"seed\": -4")), Error);
    CHECK_THROWS_AS(parse_config(replace(text, "\"z0\": 0.5", "\"z0\": 0.7")), Error);
    CHECK_THROWS_AS(parse_config(replace(text, "\"commands\": []", "\"commands\": [\"dance\"]")), Error);
    try {
        parse_config(replace(text, "\"seed\": 0", "\"seed\": 0, \"extra\": 1"));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
    }
}

TEST_CASE("svg emission") {
    Series w{"W_0n", {}};
    for (int n = 8; n <= 18; ++n) w.points.emplace_back(std::pow(0.3, n), 2.0 * std::pow(0.3, 1.5 * n));
    const std::string svg = emit_svg({w}, {"t", "x", "y", true, true});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("slope 1.50") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(plotted_slope(w, {"t", "x", "y", true, true}) == doctest::Approx(1.5));
    CHECK_THROWS_AS(emit_svg({}, {}), Error);
    CHECK_THROWS_AS(emit_svg({Series{"one", {{1.0, 1.0}}}}, {}), Error);
    CHECK_THROWS_AS(emit_svg({Series{"neg", {{1.0, -1.0}, {2.0, 1.0}}}}, {}), Error);
    const std::string two = emit_svg({w, Series{"H", {{1e-3, 1.0}, {1e-2, 3.0}}}}, {"t", "x", "y", true, true});
    std::size_t count = 0;
    for (std::size_t p = two.find("<polyline"); p != std::string::npos; p = two.find("<polyline", p + 1)) ++count;
    CHECK(count == 2);
}

TEST_CASE("reports are deterministic and exit codes follow the assertions") {
    const auto cfg = parse_config(ref1_text());
    const auto a = run_experiment(cfg, "classify");
    const auto b = run_experiment(cfg, "classify");
    CHECK(a.report_json == b.report_json);
    CHECK(a.exit_status == 0);
    CHECK(a.report_json.find("\"II_{++}\"") != std::string::npos);

    const auto r = run_experiment(cfg, "rects");
    CHECK(r.exit_status == 0);
    bool has_csv = false;
    for (const auto& f : r.files)
        if (f.name == "rects.csv") {
            has_csv = true;
            CHECK(f.content.find("\n8,") != std::string::npos);
            CHECK(f.content.find("\n18,") != std::string::npos);
        }
    CHECK(has_csv);

    auto bad = cfg;
    bad.system.transition.b = 0.0;
    const auto v = run_experiment(bad, "validate");
    CHECK(v.exit_status == 1);
    CHECK(v.report_json.find("EX1") != std::string::npos);

    const auto e = run_from_text("{\"bogus\": 1}", "validate", std::nullopt, std::nullopt);
    CHECK(e.exit_status == 2);
}
