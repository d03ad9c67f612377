#include <doctest.h>

#include <random>

#include "dyncubes/spaces.hpp"
#include "test_support.hpp"

using namespace dyncubes;
using testing::kAlpha;

namespace {

// The defining map written out step by step, in extended precision so that
// its own rounding stays far below the tolerance.
std::vector<long double> naive_iterate(std::vector<long double> x, long double alpha, int k) {
    for (int step = 0; step < k; ++step) {
        for (std::size_t j = x.size() - 1; j > 0; --j) x[j] = std::fmod(x[j] + x[j - 1], 1.0L);
        x[0] = std::fmod(x[0] + alpha, 1.0L);
    }
    return x;
}

// Inverse map: y1 = x1 - alpha, yj = xj - y(j-1).
std::vector<long double> naive_inverse(std::vector<long double> x, long double alpha, int k) {
    for (int step = 0; step < k; ++step) {
        x[0] = std::fmod(x[0] - alpha + 1.0L, 1.0L);
        for (std::size_t j = 1; j < x.size(); ++j) x[j] = std::fmod(x[j] - x[j - 1] + 1.0L, 1.0L);
    }
    return x;
}

int coding_symbol(double alpha, double base, long n) {
    double t = std::fmod(base + static_cast<double>(n) * alpha, 1.0);
    if (t < 0) t += 1.0;
    return t >= 1.0 - alpha ? 1 : 0;
}

}  // namespace

TEST_CASE("torus distance") {
    CHECK(torus_distance(TorusPoint{0.1}, TorusPoint{0.9}) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(torus_distance(TorusPoint{0.25, 0.0}, TorusPoint{0.75, 0.0}) == doctest::Approx(0.5));
    CHECK(torus_distance(TorusPoint{0.3, 0.4}, TorusPoint{0.3, 0.4}) == 0.0);
    CHECK_THROWS_AS(torus_distance(TorusPoint{0.1}, TorusPoint{0.1, 0.2}), DomainError);
}

TEST_CASE("torus distance is a metric") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        const int dim = 1 + static_cast<int>(rng() % 3);
        const auto a = testing::random_torus(rng, dim);
        const auto b = testing::random_torus(rng, dim);
        const auto c = testing::random_torus(rng, dim);
        const double ab = torus_distance(a, b);
        REQUIRE(ab == torus_distance(b, a));
        REQUIRE(ab <= torus_distance(a, c) + torus_distance(c, b) + 1e-12);
        REQUIRE(torus_distance(a, a) == 0.0);
        REQUIRE(ab >= 0.0);
        REQUIRE(ab <= 0.5);
    }
}

TEST_CASE("apply_power examples") {
    const auto rot = SystemSpec::rotation(kAlpha);
    CHECK(testing::coord(apply_power(rot, Point{TorusPoint{0.1}}, 3)) == doctest::Approx(0.954102).epsilon(1e-6));

    const auto skew = SystemSpec::affine_skew(kAlpha, 2);
    const auto p = apply_power(skew, TorusPoint{0.0, 0.0}, 2);
    const auto oracle = naive_iterate({0.0L, 0.0L}, kAlpha, 2);
    CHECK(std::abs(p[0] - static_cast<double>(oracle[0])) < 1e-12);
    CHECK(std::abs(p[1] - static_cast<double>(oracle[1])) < 1e-12);
    CHECK(p[0] == doctest::Approx(0.236068).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(0.618034).epsilon(1e-6));

    const TorusPoint x{0.3, 0.7};
    CHECK(apply_power(skew, x, 0) == x);
    const SymbolicPoint s{0.2, Convention::RightClosed};
    CHECK(apply_power(SystemSpec::sturmian(kAlpha), s, 0) == s);
    CHECK_THROWS_AS(apply_power(rot, Point{TorusPoint{0.1, 0.2}}, 1), DomainError);
    CHECK_THROWS_AS(apply_power(rot, Point{s}, 1), DomainError);
}

TEST_CASE("closed form matches naive iteration") {
    std::mt19937_64 rng(5);
    const SystemSpec systems[] = {SystemSpec::rotation(kAlpha), SystemSpec::affine_skew(kAlpha, 2),
                                  SystemSpec::affine_skew(kAlpha, 3), SystemSpec::affine_skew(kAlpha, 4)};
    for (const auto& sys : systems) {
        for (int trial = 0; trial < 250; ++trial) {
            const auto x0 = testing::random_torus(rng, sys.dim);
            const int k = static_cast<int>(rng() % 2001) - 1000;
            const auto c0 = x0.coords();
            const std::vector<long double> start(c0.begin(), c0.end());
            const auto naive = k >= 0 ? naive_iterate(start, sys.alpha, k) : naive_inverse(start, sys.alpha, -k);
            const auto closed = apply_power(sys, x0, k);
            for (int j = 0; j < sys.dim; ++j)
                REQUIRE(testing::circle_gap(closed[j], static_cast<double>(naive[static_cast<std::size_t>(j)])) < 1e-9);
            REQUIRE(point_distance(sys, step(sys, x0), apply_power(sys, Point{x0}, 1)) < 1e-15);
        }
    }
    const auto st = SystemSpec::sturmian(kAlpha, 40);
    for (int trial = 0; trial < 250; ++trial) {
        const SymbolicPoint x0{std::uniform_real_distribution<double>(0, 1)(rng),
                               rng() % 2 ? Convention::LeftClosed : Convention::RightClosed};
        const int k = static_cast<int>(rng() % 1001);
        Point naive = x0;
        for (int i = 0; i < k; ++i) naive = step(st, naive);
        REQUIRE(point_distance(st, apply_power(st, Point{x0}, k), naive) < 1e-9);
    }
}

TEST_CASE("powers add") {
    std::mt19937_64 rng(6);
    // T^b has Lipschitz constant C(|b|, s - 1) on the s-torus, so input rounding
    // is amplified; keep |b| <= 1000 for skews.
    const SystemSpec systems[] = {SystemSpec::rotation(kAlpha), SystemSpec::affine_skew(kAlpha, 3)};
    for (const auto& sys : systems) {
        const std::int64_t range = sys.dim == 1 ? 1000000000 : 1000;
        for (int trial = 0; trial < 1000; ++trial) {
            const auto x = testing::random_torus(rng, sys.dim);
            const auto a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * range + 1)) - range;
            const auto b = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * range + 1)) - range;
            REQUIRE(torus_distance(apply_power(sys, apply_power(sys, x, a), b), apply_power(sys, x, a + b)) < 1e-9);
        }
    }
}

TEST_CASE("large exponents stay exact") {
    const auto rot = SystemSpec::rotation(kAlpha);
    const double v = testing::coord(apply_power(rot, Point{TorusPoint{0.0}}, 1000000000));
    const long double exact = std::fmod(static_cast<long double>(kAlpha) * 1000000000.0L, 1.0L);
    CHECK(std::abs(v - static_cast<double>(exact)) < 1e-9);
}

TEST_CASE("sturmian symbols") {
    CHECK(sturmian_symbol(kAlpha, {0.0, Convention::LeftClosed}, 0) == 0);
    CHECK(sturmian_symbol(kAlpha, {0.0, Convention::RightClosed}, 0) == 1);
    CHECK(sturmian_symbol(kAlpha, {0.0, Convention::LeftClosed}, 1) == 1);
    CHECK(sturmian_symbol(kAlpha, {0.0, Convention::RightClosed}, 1) == 1);
}

TEST_CASE("conventions agree off the critical orbit") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 200) {
        const double base = u(rng);
        bool near_critical = false;
        for (int n = -201; n <= 201 && !near_critical; ++n) {
            const double t = std::fmod(base + n * kAlpha + 1000.0, 1.0);
            near_critical = testing::circle_gap(t, 0.0) < 1e-6 || testing::circle_gap(t, 1.0 - kAlpha) < 1e-6;
        }
        if (near_critical) continue;
        ++checked;
        const auto left = sturmian_coding(kAlpha, {base, Convention::LeftClosed}, -200, 401);
        const auto right = sturmian_coding(kAlpha, {base, Convention::RightClosed}, -200, 401);
        REQUIRE(left == right);
        for (long n = -200; n <= 200; n += 37) REQUIRE(left[static_cast<std::size_t>(n + 200)] == coding_symbol(kAlpha, base, n));
    }
}

TEST_CASE("symbolic distance") {
    const SymbolicPoint x1{0.0, Convention::LeftClosed};
    const SymbolicPoint x2{0.0, Convention::RightClosed};
    CHECK(symbolic_distance(kAlpha, x1, x2, 30) == 1.0);
    CHECK(symbolic_distance(kAlpha, x1, x1, 30) == 0.0);
    // Shifted by 3 the disagreements sit at -4 and -3.
    const auto sys = SystemSpec::sturmian(kAlpha);
    const auto a = apply_power(sys, x1, 3);
    const auto b = apply_power(sys, x2, 3);
    CHECK(symbolic_distance(kAlpha, a, b, 30) == 0.125);
    CHECK(symbolic_distance(kAlpha, a, b, 2) == 0.0);
}

TEST_CASE("factor maps") {
    const auto skew = SystemSpec::affine_skew(kAlpha, 2);
    const auto trunc = FactorMapSpec::skew_truncate(skew, 1);
    CHECK(testing::torus(apply_factor(trunc, TorusPoint{0.2, 0.7})).dim() == 1);
    CHECK(testing::coord(apply_factor(trunc, TorusPoint{0.2, 0.7})) == 0.2);
    const auto st = SystemSpec::sturmian(kAlpha);
    CHECK(testing::coord(apply_factor(FactorMapSpec::sturmian_to_rotation(st), SymbolicPoint{0.3, Convention::LeftClosed})) ==
          0.3);
    CHECK_THROWS_AS(apply_factor(trunc, TorusPoint{0.2}), DomainError);
    CHECK_THROWS_AS(FactorMapSpec::skew_truncate(skew, 3).validate(), DomainError);
    CHECK_THROWS_AS(FactorMapSpec::skew_truncate(skew, 0).validate(), DomainError);
}

TEST_CASE("factor maps intertwine the dynamics") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto skew3 = SystemSpec::affine_skew(kAlpha, 3);
    const auto st = SystemSpec::sturmian(kAlpha);
    const FactorMapSpec maps[] = {FactorMapSpec::identity(skew3), FactorMapSpec::skew_truncate(skew3, 1),
                                  FactorMapSpec::skew_truncate(skew3, 2), FactorMapSpec::sturmian_to_rotation(st),
                                  FactorMapSpec::identity(st)};
    for (const auto& f : maps) {
        for (int i = 0; i < 1000; ++i) {
            Point x = f.source.kind == SystemKind::Sturmian
                          ? Point{SymbolicPoint{u(rng), rng() % 2 ? Convention::LeftClosed : Convention::RightClosed}}
                          : Point{testing::random_torus(rng, f.source.dim)};
            const auto k = static_cast<std::int64_t>(rng() % 20001) - 10000;
            const Point up = apply_factor(f, apply_power(f.source, x, k));
            const Point down = apply_power(f.target, apply_factor(f, x), k);
            REQUIRE(point_distance(f.target, up, down) < 1e-9);
        }
    }
}

TEST_CASE("system validation") {
    CHECK_THROWS_AS(SystemSpec::rotation(0.5).validate(), DomainError);
    CHECK_THROWS_AS(SystemSpec::rotation(1.0 / 3.0 + 1e-9).validate(), DomainError);
    CHECK_NOTHROW(SystemSpec::rotation(kAlpha).validate());
    CHECK_THROWS_AS(SystemSpec::affine_skew(kAlpha, 5).validate(), DomainError);
    CHECK_THROWS_AS(SystemSpec::sturmian(kAlpha, 0).validate(), DomainError);
    CHECK(is_numerically_irrational(std::sqrt(2.0) - 1.0));
    CHECK_FALSE(is_numerically_irrational(0.25));
    CHECK(parse_system_kind("AFFINE_SKEW") == SystemKind::AffineSkew);
    CHECK_THROWS(parse_system_kind("HENON"));
}
