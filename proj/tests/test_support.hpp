#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <variant>

#include "dyncubes/spaces.hpp"

namespace testing {

inline constexpr double kAlpha = 0.618033988749895;

// Signed distance on the circle, independent of the library.
inline double circle_gap(double a, double b) {
    double d = std::fmod(a - b, 1.0);
    if (d < 0) d += 1.0;
    return std::min(d, 1.0 - d);
}

inline const dyncubes::TorusPoint& torus(const dyncubes::Point& p) { return std::get<dyncubes::TorusPoint>(p); }

inline double coord(const dyncubes::Point& p, int i = 0) { return torus(p)[i]; }

inline dyncubes::TorusPoint random_torus(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = u(rng);
    return dyncubes::TorusPoint(v);
}

}  // namespace testing
