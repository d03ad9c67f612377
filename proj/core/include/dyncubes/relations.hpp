#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dyncubes/sampler.hpp"

namespace dyncubes {

/// min over |n| <= N of the distance between T^n x and T^n y.
double proximal_distance(const SystemSpec& sys, const Point& x, const Point& y, int N);

struct RPQuery {
    SystemSpec sys;
    Point x;
    Point y;
    int d = 1;
    std::vector<SamplingBudget> schedule;
};

/// The configuration (x, y, ..., y) of dimension d + 1.
CubeConfiguration rp_configuration(const Point& x, const Point& y, int d);

/// Distance profile of (x, y, ..., y) against sampled Q^[d+1], with x and y
/// added to the base points; the pair is RP^[d] exactly when this
/// configuration lies in Q^[d+1].
DistanceProfile rp_distance(const RPQuery& q, const ExecutionPolicy& policy = {});

struct RPWitness {
    Point x_prime;
    Point y_prime;
    std::vector<std::int64_t> n;
    double delta = 0.0;
};

/// True when w satisfies every inequality of its definition for (x, y).
bool verify_witness(const SystemSpec& sys, const Point& x, const Point& y, const RPWitness& w);

/// Searches x', y' over a delta/2-net around x and y, then n over
/// [-N, N]^d lexicographically; returns the first hit.
std::optional<RPWitness> rp_witness(const SystemSpec& sys, const Point& x, const Point& y, int d, double delta,
                                    const SamplingBudget& budget);

enum class Verdict : std::uint8_t { Consistent, ViolationEvidence, Inconclusive };

std::string_view to_string(Verdict v) noexcept;

/// Membership reading of a profile against tolerance tol.
enum class MembershipVerdict : std::uint8_t { In, EvidenceOut, Inconclusive };

MembershipVerdict classify(const DistanceProfile& p, double tol) noexcept;
std::string_view to_string(MembershipVerdict v) noexcept;

}  // namespace dyncubes
