#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dyncubes/sampler.hpp"
#include "dyncubes/spaces.hpp"

namespace dyncubes {

enum class ExperimentKind : std::uint8_t { CubeSample, RpEstimate, Saturation, FaceSaturation, Completion, SturmianCex };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view text);

/// Invalid configuration text; `line` is 1-based (0 when the problem is a
/// missing key).
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A full experiment description.
///
/// Text form: `key = value` lines, `[section]` headers, `#` comments.
///
///     experiment = SATURATION
///     d = 2
///     seed = 1
///     tol = 0.05
///     trials = 50
///     [system]
///     kind = AFFINE_SKEW
///     alpha = 0.618033988749895
///     dim = 2
///     [factor]
///     kind = SKEW_TRUNCATE
///     truncate_k = 1
///     [schedule]
///     budget = 25, 10, 1      # N, grid, orbit length
///     budget = 200, 40, 1
///     [points]
///     x = 0, 0
///     [output]
///     dir = out
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::CubeSample;
    SystemSpec system;
    std::string alpha_text;
    FactorKind factor_kind = FactorKind::Identity;
    int truncate_k = 0;
    int d = 2;
    std::vector<SamplingBudget> schedule;
    double tol = 0.05;
    double delta_match = 0.01;
    double factor_c = 3.0;
    std::optional<double> witness_delta;
    std::uint64_t seed = 1;
    int trials = 50;
    std::optional<Point> x;
    std::optional<Point> y;
    std::string output_dir = "out";

    FactorMapSpec factor() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates. Throws ConfigError. `fallback` supplies the
/// experiment when the text has no `experiment` key; when both are present
/// they must agree.
ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> fallback = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<ExperimentKind> fallback = std::nullopt);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& c);

/// Checks that every field the experiment reads is present and sane.
void validate_config(const ExperimentConfig& c);

Point parse_point(std::string_view text);
std::string emit_point(const Point& p);

struct RunOptions {
    unsigned threads = 0;
    /// Report timestamp; left out of the JSON when empty.
    std::string timestamp;
};

struct RunResult {
    int exit_code = 0;
    std::string verdict;
    std::string report_json;
    std::string profiles_csv;
    std::string sample_csv;  // CUBE_SAMPLE only
};

/// Executes the experiment in memory.
RunResult run_experiment(const ExperimentConfig& c, const RunOptions& options = {});

/// Executes and writes report.json, profiles.csv (and sample.csv) into
/// c.output_dir. Returns the exit code.
int run_and_write(const ExperimentConfig& c, const RunOptions& options = {});

/// Exit codes.
inline constexpr int kExitConsistent = 0;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitInvalidConfig = 64;
inline constexpr int kExitBudgetOverflow = 65;

/// Table of built-in systems and factor maps.
std::string list_systems();

/// CSV of a sample: one row per configuration, entries in vertex order,
/// then the witness base and n.
std::string sample_to_csv(const CubeSetSample& s);

}  // namespace dyncubes
