#include <doctest.h>

#include <random>

#include "dyncubes/cube.hpp"
#include "test_support.hpp"

using namespace dyncubes;
using testing::kAlpha;

namespace {

GeneratorWord random_word(std::mt19937_64& rng, int d) {
    GeneratorWord w;
    const int len = static_cast<int>(rng() % 21);
    for (int i = 0; i < len; ++i) {
        std::int64_t e = static_cast<std::int64_t>(rng() % 41) - 20;
        if (e == 0) e = 1;
        if (rng() % (d + 1) == 0)
            w.push_back(GeneratorToken::diag(e));
        else
            w.push_back(GeneratorToken::face_of(1 + static_cast<int>(rng() % d), e));
    }
    return w;
}

// Exponent at eps obtained by reading the word directly.
std::int64_t word_exponent(const GeneratorWord& w, std::uint32_t eps) {
    std::int64_t total = 0;
    for (const auto& t : w) {
        if (t.kind == GeneratorToken::Kind::Diagonal)
            total += t.exponent;
        else if ((eps >> (t.face - 1)) & 1u)
            total += t.exponent;
    }
    return total;
}

CubeGroupElement random_element(std::mt19937_64& rng, int d, int bound) {
    CubeGroupElement g = CubeGroupElement::identity(d);
    auto draw = [&] { return static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound; };
    g.m = draw();
    for (auto& v : g.n) v = draw();
    return g;
}

double max_gap(const SystemSpec& sys, const CubeConfiguration& a, const CubeConfiguration& b) {
    double worst = 0.0;
    for (std::size_t e = 0; e < a.size(); ++e) worst = std::max(worst, point_distance(sys, a[e], b[e]));
    return worst;
}

}  // namespace

TEST_CASE("vertex order") {
    const int eps[] = {1, 0};
    CHECK(CubeIndex::from_bits(eps).bits == 1u);
    const int eps2[] = {0, 1};
    CHECK(CubeIndex::from_bits(eps2).bits == 2u);
}

TEST_CASE("diagonal configurations") {
    const auto c = diagonal_config(TorusPoint{0.3}, 2);
    CHECK(c.size() == 4);
    for (std::size_t e = 0; e < 4; ++e) CHECK(testing::coord(c[e]) == 0.3);
    const auto c1 = diagonal_config(TorusPoint{0.1, 0.2}, 1);
    CHECK(c1.size() == 2);
    CHECK(c1[1] == Point{TorusPoint{0.1, 0.2}});
    CHECK(diagonal_config(TorusPoint{0.5}, 3).size() == 8);
    CHECK_THROWS_AS(diagonal_config(TorusPoint{0.5}, 0), DomainError);
}

TEST_CASE("configurations are homogeneous") {
    CHECK_THROWS_AS(CubeConfiguration(1, {TorusPoint{0.1}, TorusPoint{0.1, 0.2}}), DomainError);
    CHECK_THROWS_AS(CubeConfiguration(1, {TorusPoint{0.1}, SymbolicPoint{}}), DomainError);
    CHECK_THROWS_AS(CubeConfiguration(2, {TorusPoint{0.1}, TorusPoint{0.2}}), DomainError);
}

TEST_CASE("apply_cube_element examples") {
    const auto rot = SystemSpec::rotation(kAlpha);
    const auto zero = diagonal_config(TorusPoint{0.0}, 2);
    const auto c = apply_cube_element(rot, {0, {1, 2}}, zero);
    const double expected[] = {0.0, 0.618034, 0.236068, 0.854102};
    for (std::size_t e = 0; e < 4; ++e) CHECK(testing::coord(c[e]) == doctest::Approx(expected[e]).epsilon(1e-6));
    CHECK(apply_cube_element(rot, CubeGroupElement::identity(2), zero) == zero);
    const auto diag = apply_cube_element(rot, {1, {0, 0}}, zero);
    for (std::size_t e = 0; e < 4; ++e) CHECK(testing::coord(diag[e]) == doctest::Approx(0.618034).epsilon(1e-6));
    CHECK_THROWS_AS(apply_cube_element(rot, CubeGroupElement::identity(3), zero), DomainError);
}

TEST_CASE("reduce_word examples") {
    const GeneratorWord w{GeneratorToken::face_of(1, 1), GeneratorToken::face_of(2, 1), GeneratorToken::face_of(1, 1)};
    CHECK(reduce_word(w, 2) == CubeGroupElement{0, {2, 1}});
    CHECK(reduce_word({}, 2) == CubeGroupElement::identity(2));
    CHECK(reduce_word({GeneratorToken::diag(2)}, 3) == CubeGroupElement{2, {0, 0, 0}});
    CHECK_THROWS_AS(reduce_word({GeneratorToken::face_of(3, 1)}, 2), DomainError);
    CHECK_THROWS_AS(reduce_word({GeneratorToken::face_of(1, 0)}, 2), DomainError);
}

TEST_CASE("stepwise generators equal the reduced element") {
    std::mt19937_64 rng(21);
    const auto skew = SystemSpec::affine_skew(kAlpha, 2);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const auto w = random_word(rng, d);
        const auto g = reduce_word(w, d);
        for (std::uint32_t eps = 0; eps < vertex_count(d); ++eps) REQUIRE(g.exponent(eps) == word_exponent(w, eps));
        const auto c = diagonal_config(testing::random_torus(rng, 2), d);
        REQUIRE(max_gap(skew, apply_word(skew, w, c), apply_cube_element(skew, g, c)) < 1e-9);
    }
}

TEST_CASE("group law") {
    std::mt19937_64 rng(22);
    const auto skew = SystemSpec::affine_skew(kAlpha, 3);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const auto g1 = random_element(rng, d, 50);
        const auto g2 = random_element(rng, d, 50);
        const auto c = apply_cube_element(skew, random_element(rng, d, 50), diagonal_config(testing::random_torus(rng, 3), d));
        REQUIRE(max_gap(skew, apply_cube_element(skew, g1, apply_cube_element(skew, g2, c)),
                        apply_cube_element(skew, compose(g1, g2), c)) < 1e-9);
    }
}

TEST_CASE("project_star") {
    const auto c = CubeConfiguration(2, {TorusPoint{0.1}, TorusPoint{0.2}, TorusPoint{0.3}, TorusPoint{0.4}});
    const auto star = project_star(c);
    REQUIRE(star.size() == 3);
    CHECK(testing::coord(star[0]) == 0.2);
    CHECK(testing::coord(star[2]) == 0.4);
    CHECK(project_star(diagonal_config(TorusPoint{0.7}, 3)).size() == 7);
    for (int d = 1; d <= 4; ++d)
        for (const auto& p : project_star(diagonal_config(TorusPoint{0.7}, d))) CHECK(testing::coord(p) == 0.7);
}

TEST_CASE("euclidean permutation examples") {
    const auto c = CubeConfiguration(1, {TorusPoint{0.1}, TorusPoint{0.2}});
    const int one[] = {1};
    const auto swapped = euclidean_permutation(c, CubeIndex::from_bits(one));
    CHECK(testing::coord(swapped[0]) == 0.2);
    CHECK(testing::coord(swapped[1]) == 0.1);
    CHECK(euclidean_permutation(c, CubeIndex{1, 0}) == c);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 4);
        std::vector<Point> entries;
        for (std::size_t e = 0; e < vertex_count(d); ++e) entries.push_back(testing::random_torus(rng, 1));
        const CubeConfiguration x(d, entries);
        const CubeIndex eps0{d, static_cast<std::uint32_t>(rng() % vertex_count(d))};
        REQUIRE(euclidean_permutation(euclidean_permutation(x, eps0), eps0) == x);
    }
}

TEST_CASE("reflections conjugate generated configurations") {
    std::mt19937_64 rng(23);
    const auto rot = SystemSpec::rotation(kAlpha);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const auto g = random_element(rng, d, 20);
        const CubeIndex eps0{d, static_cast<std::uint32_t>(rng() % vertex_count(d))};

        CubeGroupElement expected = g;
        for (int i = 0; i < d; ++i) {
            if (eps0[i]) {
                expected.m += g.n[static_cast<std::size_t>(i)];
                expected.n[static_cast<std::size_t>(i)] = -g.n[static_cast<std::size_t>(i)];
            }
        }
        const auto reflected = reflect_element(g, eps0);
        REQUIRE(reflected == expected);
        for (std::uint32_t eps = 0; eps < vertex_count(d); ++eps)
            REQUIRE(reflected.exponent(eps) == g.exponent(eps ^ eps0.bits));

        const auto base = diagonal_config(testing::random_torus(rng, 1), d);
        const auto c = apply_cube_element(rot, g, base);
        REQUIRE(max_gap(rot, euclidean_permutation(c, eps0), apply_cube_element(rot, reflected, base)) < 1e-12);
    }
}
