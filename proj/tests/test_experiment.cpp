#include <doctest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "dyncubes/experiment.hpp"
#include "test_support.hpp"

using namespace dyncubes;

namespace {

const char* kCubeSample = R"(experiment = CUBE_SAMPLE
d = 2
seed = 1
[system]
kind = ROTATION
alpha = 0.618033988749895
[schedule]
budget = 10, 10
)";

const char* kSaturation = R"(experiment = SATURATION
d = 2
trials = 8
tol = 0.05
[system]
kind = AFFINE_SKEW
alpha = 0.618033988749895
dim = 2
[factor]
kind = IDENTITY
[schedule]
budget = 5, 4
budget = 10, 4
)";

ExperimentConfig random_config(std::mt19937_64& rng) {
    ExperimentConfig c;
    const ExperimentKind kinds[] = {ExperimentKind::CubeSample, ExperimentKind::RpEstimate, ExperimentKind::Saturation,
                                    ExperimentKind::FaceSaturation, ExperimentKind::Completion};
    c.experiment = kinds[rng() % std::size(kinds)];
    const int dim = 1 + static_cast<int>(rng() % 3);
    const double alphas[] = {0.618033988749895, 0.414213562373095, 0.732050807568877};
    const char* texts[] = {"0.618033988749895", "0.414213562373095", "0.732050807568877"};
    const auto a = rng() % 3;
    c.system = dim == 1 ? SystemSpec::rotation(alphas[a]) : SystemSpec::affine_skew(alphas[a], dim);
    c.alpha_text = texts[a];
    c.d = 1 + static_cast<int>(rng() % 3);
    c.seed = rng();
    c.tol = std::uniform_real_distribution<double>(0.001, 0.2)(rng);
    c.delta_match = std::uniform_real_distribution<double>(0.001, 0.05)(rng);
    c.trials = 1 + static_cast<int>(rng() % 100);
    c.output_dir = "out/run" + std::to_string(rng() % 1000);
    int N = 1 + static_cast<int>(rng() % 5);
    int g = 1 + static_cast<int>(rng() % 5);
    const int steps = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < steps; ++i) {
        c.schedule.push_back({N, g, 1, 0});
        N += 1 + static_cast<int>(rng() % 7);
        g += static_cast<int>(rng() % 2);
    }
    if (c.experiment == ExperimentKind::Saturation || c.experiment == ExperimentKind::FaceSaturation) {
        if (dim > 1 && rng() % 2) {
            c.factor_kind = FactorKind::SkewTruncate;
            c.truncate_k = 1 + static_cast<int>(rng() % (dim - 1));
        }
    }
    auto point = [&] {
        std::vector<double> v;
        for (int i = 0; i < dim; ++i) v.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
        return Point{TorusPoint(v)};
    };
    if (c.experiment == ExperimentKind::RpEstimate) {
        c.x = point();
        c.y = point();
        if (rng() % 2) c.witness_delta = 0.1;
    }
    if (c.experiment == ExperimentKind::FaceSaturation) c.x = point();
    return c;
}

}  // namespace

TEST_CASE("config round trip") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        const auto c = random_config(rng);
        const std::string text = emit_config(c);
        REQUIRE_NOTHROW(parse_config(text));
        REQUIRE(parse_config(text) == c);
        REQUIRE(emit_config(parse_config(text)) == text);
    }
    const auto st = parse_config(R"(experiment = STURMIAN_CEX
[system]
kind = STURMIAN
alpha = 0.618033988749895
window = 25
[schedule]
budget = 10, 1, 50
budget = 20, 1, 100
)");
    CHECK(st.system.window == 25);
    CHECK(st.schedule[1].base_orbit_len == 100);
    CHECK(parse_config(emit_config(st)) == st);
}

TEST_CASE("points") {
    CHECK(parse_point("0.25, 0.5") == Point{TorusPoint{0.25, 0.5}});
    CHECK(parse_point("0.3:RIGHT_CLOSED") == Point{SymbolicPoint{0.3, Convention::RightClosed}});
    CHECK(parse_point(emit_point(SymbolicPoint{0.1, Convention::LeftClosed})) == Point{SymbolicPoint{0.1, Convention::LeftClosed}});
    CHECK_THROWS(parse_point("0.3:MIDDLE"));
    CHECK_THROWS(parse_point("abc"));
}

TEST_CASE("config errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.line();
        }
        return -1;
    };
    const std::string base = kCubeSample;
    CHECK(line_of(base + "bogus = 1\n") == 9);
    CHECK(line_of("experiment = CUBE_SAMPLE\nd = two\n[system]\nkind = ROTATION\nalpha = 0.618033988749895\n") == 2);
    CHECK(line_of("experiment = CUBE_SAMPLE\n[system]\nkind = ROTATION\nalpha = 0.618\n[schedule]\nbudget = 1, 1\n") == 4);
    CHECK(line_of("experiment = CUBE_SAMPLE\n[system]\nkind = ROTATION\nalpha = 0.500000000000000\n[schedule]\nbudget = 1, 1\n") == 4);
    CHECK(line_of("experiment = CUBE_SAMPLE\n[systme]\n") == 2);
    CHECK(line_of("experiment = CUBE_SAMPLE\nd = 2\nd = 3\n") == 3);
    CHECK(line_of("experiment = CUBE_SAMPLE\n[system]\nkind = ROTATION\nalpha = 0.618033988749895\n[schedule]\n"
                  "budget = 10, 5\nbudget = 5, 5\n") == 6);
    CHECK(line_of(base + "[points]\nx = 0.1\n") == -1);
    CHECK_THROWS_AS(parse_config(kCubeSample, ExperimentKind::Completion), ConfigError);
    CHECK_NOTHROW(parse_config(std::string(kCubeSample).substr(std::string(kCubeSample).find('\n') + 1),
                               ExperimentKind::CubeSample));
    CHECK_THROWS_WITH(parse_config("[system]\nkind = ROTATION\n"), doctest::Contains("experiment"));
}

TEST_CASE("missing fields are rejected") {
    CHECK_THROWS_AS(parse_config(R"(experiment = RP_ESTIMATE
[system]
kind = ROTATION
alpha = 0.618033988749895
[schedule]
budget = 10, 5
[points]
x = 0.1
)"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"(experiment = SATURATION
[system]
kind = AFFINE_SKEW
alpha = 0.618033988749895
dim = 2
[factor]
kind = SKEW_TRUNCATE
truncate_k = 3
[schedule]
budget = 10, 5
)"),
                    ConfigError);
}

TEST_CASE("cube sample output") {
    const auto c = parse_config(kCubeSample);
    const auto r = run_experiment(c);
    CHECK(r.exit_code == kExitConsistent);
    std::istringstream in(r.sample_csv);
    std::string line;
    std::size_t rows = 0;
    std::getline(in, line);
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 10 * 21 * 21);
    CHECK(rows <= 10 * 21 * 21);
    const auto report = nlohmann::json::parse(r.report_json);
    CHECK(report["params"]["config_text"].get<std::string>() == emit_config(c));
    CHECK_FALSE(report.contains("generated_at"));
}

TEST_CASE("identity saturation exits cleanly") {
    const auto r = run_experiment(parse_config(kSaturation));
    CHECK(r.exit_code == kExitConsistent);
    CHECK(r.verdict == "CONSISTENT");
    const auto report = nlohmann::json::parse(r.report_json);
    CHECK(report["summary"]["max_final"].get<double>() == 0.0);
}

TEST_CASE("reruns are byte identical") {
    const char* texts[] = {kCubeSample, kSaturation};
    for (const char* text : texts) {
        const auto c = parse_config(text);
        const auto a = run_experiment(c, {1, ""});
        const auto b = run_experiment(c, {4, ""});
        CHECK(a.profiles_csv == b.profiles_csv);
        CHECK(a.report_json == b.report_json);
        CHECK(a.sample_csv == b.sample_csv);
    }
}

TEST_CASE("budget overflow") {
    auto c = parse_config(kCubeSample);
    c.schedule = {{200, 100, 1, 0}};
    CHECK_THROWS_AS(run_experiment(c), BudgetOverflow);
}

TEST_CASE("system listing") {
    const auto text = list_systems();
    for (const char* name : {"ROTATION", "AFFINE_SKEW", "STURMIAN", "IDENTITY", "SKEW_TRUNCATE", "STURMIAN_TO_ROTATION"})
        CHECK(text.find(name) != std::string::npos);
}
