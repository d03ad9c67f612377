#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dyncubes/cube.hpp"
#include "dyncubes/spaces.hpp"

namespace dyncubes {

/// Raised when a requested enumeration exceeds the size limits.
class BudgetOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Largest number of configurations sample_cube_set will materialize.
inline constexpr double kMaxMaterialized = 1e7;
/// Largest virtual sample a streaming distance query will scan.
inline constexpr double kMaxVirtual = 1e13;

/// Finite resources for approximating a closure: face exponents in
/// [-N, N]^d, a uniform grid of base_grid^s torus points, or for Sturmian
/// systems the first base_orbit_len orbit points of the critical coding in
/// both conventions.
struct SamplingBudget {
    int N = 1;
    int base_grid = 1;
    int base_orbit_len = 1;
    std::uint64_t seed = 0;

    friend bool operator==(const SamplingBudget&, const SamplingBudget&) = default;
};

enum class SampleKind : std::uint8_t { FullQ, FaceOrbit };

/// Base points used by the sampler, in canonical order.
std::vector<Point> base_points(const SystemSpec& sys, const SamplingBudget& b);
std::size_t base_count(const SystemSpec& sys, const SamplingBudget& b);

/// The (x, n) pair regenerating a stored configuration as (T^(n.eps) x)_eps.
struct SampleWitness {
    Point base;
    std::vector<std::int64_t> n;

    friend bool operator==(const SampleWitness&, const SampleWitness&) = default;
};

CubeConfiguration regenerate(const SystemSpec& sys, const SampleWitness& w);

struct CubeSetSample {
    int d = 0;
    SystemSpec sys;
    SamplingBudget provenance;
    SampleKind kind = SampleKind::FullQ;
    std::optional<Point> face_base;
    std::vector<CubeConfiguration> points;
    std::vector<SampleWitness> witnesses;
};

/// Every configuration T^(n.eps) x with n in [-N, N]^d and x a base point.
/// Ordered by base index, then n lexicographically (n_1 slowest).
CubeSetSample sample_cube_set(const SystemSpec& sys, int d, const SamplingBudget& b);

/// Same enumeration over an explicit list of base points, kept in the given
/// order.
CubeSetSample sample_from_bases(const SystemSpec& sys, int d, const SamplingBudget& b, std::vector<Point> bases);

/// Same enumeration with the base fixed to x; entry 0 is always exactly x.
CubeSetSample sample_face_orbit(const SystemSpec& sys, const Point& x, int d, const SamplingBudget& b);

/// Sup-over-vertices distance between two configurations.
double config_distance(const SystemSpec& sys, const CubeConfiguration& a, const CubeConfiguration& b);

/// Minimum config_distance from c to the stored configurations; an upper
/// bound on the distance from c to the closure being approximated.
double distance_to_sample(const CubeConfiguration& c, const CubeSetSample& s);

/// Worker cap for the streaming queries; 0 uses the hardware concurrency.
struct ExecutionPolicy {
    unsigned threads = 0;
};

/// Result of a streaming nearest-configuration query.
struct NearestGenerated {
    double distance = 0.0;
    /// Set when the distance was attained inside the scanned virtual sample
    /// (rather than only matching the supplied upper bound).
    std::optional<SampleWitness> witness;
};

/// Exact minimum of config_distance(c, .) over the virtual sample
/// {(T^(n.eps) x)_eps : x in bases, n in [-N, N]^d} without materializing it.
/// `upper_bound` must be attained by some configuration already known to the
/// caller; the result is min(upper_bound, true minimum).
NearestGenerated nearest_generated(const SystemSpec& sys, const CubeConfiguration& c, const std::vector<Point>& bases,
                                   int N, std::optional<double> upper_bound = std::nullopt,
                                   const ExecutionPolicy& policy = {});

struct ProfileStep {
    SamplingBudget budget;
    double distance = 0.0;

    friend bool operator==(const ProfileStep&, const ProfileStep&) = default;
};

struct DistanceProfile {
    std::vector<ProfileStep> steps;
    bool plateau = false;
    std::optional<SampleWitness> nearest;

    double final_distance() const { return steps.empty() ? 0.0 : steps.back().distance; }
};

/// Relative improvement below this over the last three steps flags a plateau.
inline constexpr double kPlateauRelative = 0.01;

bool detect_plateau(const std::vector<double>& values);

/// Throws DomainError unless N and the base counts never decrease and every
/// step grows at least one of them.
void validate_schedule(const SystemSpec& sys, const std::vector<SamplingBudget>& schedule);

/// Distances from c to the union of the samples of the schedule's first k
/// budgets, k = 1, 2, ...; non-increasing by construction. With face_base set
/// the face orbit of face_base^[d] is approximated instead of Q^[d].
DistanceProfile distance_profile(const CubeConfiguration& c, const SystemSpec& sys, int d,
                                 const std::vector<SamplingBudget>& schedule,
                                 const std::optional<Point>& face_base = std::nullopt,
                                 const ExecutionPolicy& policy = {});
/// Same over Q^[d] with extra_bases added to every step's base set.
DistanceProfile distance_profile(const CubeConfiguration& c, const SystemSpec& sys, int d,
                                 const std::vector<SamplingBudget>& schedule, const std::vector<Point>& extra_bases,
                                 const ExecutionPolicy& policy = {});

/// Applies f entrywise.
CubeConfiguration push_forward(const FactorMapSpec& f, const CubeConfiguration& c);

/// Lifts one downstairs configuration by replacing every entry with a
/// uniformly random point of its fiber.
CubeConfiguration lift_configuration(const FactorMapSpec& f, const CubeConfiguration& down, std::uint64_t& rng_state);

/// Lifts fiber_budget configurations drawn uniformly from s_down.points.
std::vector<CubeConfiguration> sample_saturated_preimage(const FactorMapSpec& f, int d, const CubeSetSample& s_down,
                                                         int fiber_budget, std::uint64_t seed);

/// splitmix64 step; the only randomness source of the library, so results
/// depend on the seed alone.
std::uint64_t next_random(std::uint64_t& state) noexcept;
double uniform01(std::uint64_t& state) noexcept;
std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound) noexcept;

}  // namespace dyncubes
