#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyncubes/relations.hpp"
#include "dyncubes/sampler.hpp"

namespace dyncubes {

/// One lifted configuration and how close sampled cube sets get to it.
struct TrialResult {
    CubeConfiguration config;
    DistanceProfile profile;
};

struct SaturationSummary {
    double max_final = 0.0;
    std::size_t plateaued = 0;
    double tol = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

struct SaturationReport {
    std::string system_id;
    std::string factor_id;
    int d = 0;
    std::vector<TrialResult> trials;
    SaturationSummary summary;
};

/// CONSISTENT iff every final distance is below tol; VIOLATION-EVIDENCE iff
/// some profile plateaus at or above tol; INCONCLUSIVE otherwise.
SaturationSummary summarize(const std::vector<TrialResult>& trials, double tol);

/// Lifts n_trials configurations of sampled Q^[d](target) through random
/// fiber points and measures their distance to sampled Q^[d](sys). The
/// downstairs sample uses the first budget of the schedule.
SaturationReport check_cube_saturation(const SystemSpec& sys, const FactorMapSpec& f, int d,
                                       const std::vector<SamplingBudget>& schedule, int n_trials, double tol,
                                       std::uint64_t seed, const ExecutionPolicy& policy = {});

/// Same for face orbits: star entries of configurations of the face orbit of
/// pi(x)^[d] are lifted at random, entry 0 is pinned to x, and distances are
/// taken to the sampled face orbit of x^[d].
SaturationReport check_face_saturation(const SystemSpec& sys, const FactorMapSpec& f, int d, const Point& x,
                                       const std::vector<SamplingBudget>& schedule, int n_trials, double tol,
                                       std::uint64_t seed, const ExecutionPolicy& policy = {});

struct CompletionPair {
    std::size_t first = 0;
    std::size_t second = 0;
    std::uint32_t free_vertex = 0;
    double match_distance = 0.0;
    double remaining_distance = 0.0;
};

struct CompletionReport {
    int d = 0;
    double delta_match = 0.0;
    double factor_c = 0.0;
    std::size_t pair_count = 0;
    double max_remaining = 0.0;
    /// The pairs with the largest remaining distance, largest first.
    std::vector<CompletionPair> pairs;
    Verdict verdict = Verdict::Consistent;
};

/// Finds every pair of sampled configurations that agree within delta_match
/// on all but one vertex and compares them on the remaining vertex.
/// CONSISTENT if all remaining distances are below factor_c * delta_match,
/// VIOLATION-EVIDENCE if one exceeds 10 * factor_c * delta_match.
CompletionReport unique_completion_check(const CubeSetSample& s, double delta_match, double factor_c,
                                         std::size_t max_listed = 64);

/// x1 and x2: codings of the critical point 0 under the two conventions.
SymbolicPoint sturmian_left_point();
SymbolicPoint sturmian_right_point();

/// Positions |n| <= range where the codings of x1 and x2 differ.
std::vector<std::int64_t> boundary_disagreements(double alpha, std::int64_t range);

struct PatternProfile {
    /// Bit eps set means entry eps is x2, clear means x1.
    std::uint32_t pattern = 0;
    CubeConfiguration config;
    DistanceProfile profile;
};

CubeConfiguration pattern_configuration(std::uint32_t pattern, int d);

/// Profiles of every configuration in {x1, x2}^[d] against sampled
/// Q^[d] of the Sturmian system with metric window W, sorted by final
/// distance (ties by pattern).
std::vector<PatternProfile> sturmian_counterexample(double alpha, int d, const std::vector<SamplingBudget>& schedule,
                                                    int W, const ExecutionPolicy& policy = {});

/// Distances from random points of {x} x X_*^[d] to the sampled face orbit
/// of x^[d]: the face orbit fills this set exactly when the system is weakly
/// mixing, which none of the built-in systems is.
struct CoverageStats {
    double mean = 0.0;
    double max = 0.0;
    std::size_t probes = 0;
};

CoverageStats face_orbit_coverage(const SystemSpec& sys, const Point& x, int d, const SamplingBudget& b, int probes,
                                  std::uint64_t seed);

}  // namespace dyncubes
