#include "dyncubes/cube.hpp"

#include <string>

namespace dyncubes {
namespace {

void check_dim(int d) {
    if (d < 1 || d > kMaxCubeDim) throw DomainError("cube dimension must be in [1, " + std::to_string(kMaxCubeDim) + "]");
}

void apply_diagonal_range(const SystemSpec& sys, std::vector<Point>& e, std::size_t lo, std::size_t count,
                          std::int64_t k) {
    for (std::size_t i = lo; i < lo + count; ++i) e[i] = apply_power(sys, e[i], k);
}

// T_j^[level] acting on the block e[lo, lo + 2^level).
void apply_face_range(const SystemSpec& sys, std::vector<Point>& e, std::size_t lo, int level, int j,
                      std::int64_t k) {
    const std::size_t half = vertex_count(level - 1);
    if (j == level) {
        apply_diagonal_range(sys, e, lo + half, half, k);
        return;
    }
    apply_face_range(sys, e, lo, level - 1, j, k);
    apply_face_range(sys, e, lo + half, level - 1, j, k);
}

}  // namespace

CubeIndex CubeIndex::from_bits(std::span<const int> eps) {
    check_dim(static_cast<int>(eps.size()));
    CubeIndex out{static_cast<int>(eps.size()), 0};
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] != 0 && eps[i] != 1) throw DomainError("cube index entries must be 0 or 1");
        out.bits |= static_cast<std::uint32_t>(eps[i]) << i;
    }
    return out;
}

CubeConfiguration::CubeConfiguration(int d, std::vector<Point> entries) : d_(d), entries_(std::move(entries)) {
    check_dim(d);
    if (entries_.size() != vertex_count(d))
        throw DomainError("configuration of dimension " + std::to_string(d) + " needs " +
                          std::to_string(vertex_count(d)) + " entries, got " + std::to_string(entries_.size()));
    for (const auto& p : entries_)
        if (p.index() != entries_.front().index()) throw DomainError("configuration mixes point types");
    if (const auto* t0 = std::get_if<TorusPoint>(&entries_.front()))
        for (const auto& p : entries_)
            if (std::get<TorusPoint>(p).dim() != t0->dim()) throw DomainError("configuration mixes torus dimensions");
}

const Point& CubeConfiguration::at(CubeIndex eps) const {
    if (eps.d != d_) throw DomainError("cube index dimension mismatch");
    return entries_[eps.bits];
}

std::int64_t CubeGroupElement::exponent(std::uint32_t eps) const noexcept {
    std::int64_t e = m;
    for (std::size_t i = 0; i < n.size(); ++i)
        if ((eps >> i) & 1u) e += n[i];
    return e;
}

CubeGroupElement compose(const CubeGroupElement& a, const CubeGroupElement& b) {
    if (a.d() != b.d()) throw DomainError("compose: dimension mismatch");
    CubeGroupElement out{a.m + b.m, a.n};
    for (std::size_t i = 0; i < out.n.size(); ++i) out.n[i] += b.n[i];
    return out;
}

CubeConfiguration diagonal_config(const Point& x, int d) {
    check_dim(d);
    return {d, std::vector<Point>(vertex_count(d), x)};
}

CubeConfiguration apply_cube_element(const SystemSpec& sys, const CubeGroupElement& g, const CubeConfiguration& c) {
    if (g.d() != c.d())
        throw DomainError("cube element of dimension " + std::to_string(g.d()) + " applied to configuration of dimension " +
                          std::to_string(c.d()));
    std::vector<Point> out(c.size());
    for (std::uint32_t eps = 0; eps < c.size(); ++eps) out[eps] = apply_power(sys, c[eps], g.exponent(eps));
    return {c.d(), std::move(out)};
}

CubeGroupElement reduce_word(const GeneratorWord& w, int d) {
    check_dim(d);
    auto g = CubeGroupElement::identity(d);
    for (const auto& t : w) {
        if (t.exponent == 0) throw DomainError("generator exponents must be nonzero");
        if (t.kind == GeneratorToken::Kind::Diagonal) {
            g.m += t.exponent;
        } else {
            if (t.face < 1 || t.face > d) throw DomainError("face index " + std::to_string(t.face) + " out of range");
            g.n[static_cast<std::size_t>(t.face - 1)] += t.exponent;
        }
    }
    return g;
}

CubeConfiguration apply_generator(const SystemSpec& sys, const GeneratorToken& t, const CubeConfiguration& c) {
    std::vector<Point> e(c.entries().begin(), c.entries().end());
    if (t.kind == GeneratorToken::Kind::Diagonal) {
        apply_diagonal_range(sys, e, 0, e.size(), t.exponent);
    } else {
        if (t.face < 1 || t.face > c.d()) throw DomainError("face index " + std::to_string(t.face) + " out of range");
        apply_face_range(sys, e, 0, c.d(), t.face, t.exponent);
    }
    return {c.d(), std::move(e)};
}

CubeConfiguration apply_word(const SystemSpec& sys, const GeneratorWord& w, const CubeConfiguration& c) {
    CubeConfiguration out = c;
    for (const auto& t : w) out = apply_generator(sys, t, out);
    return out;
}

std::vector<Point> project_star(const CubeConfiguration& c) {
    return {c.entries().begin() + 1, c.entries().end()};
}

std::uint32_t reflect_index(std::uint32_t eps, CubeIndex eps0) noexcept { return eps ^ eps0.bits; }

CubeConfiguration euclidean_permutation(const CubeConfiguration& c, CubeIndex eps0) {
    if (eps0.d != c.d()) throw DomainError("euclidean_permutation: index dimension mismatch");
    std::vector<Point> out(c.size());
    for (std::uint32_t eps = 0; eps < c.size(); ++eps) out[eps] = c[reflect_index(eps, eps0)];
    return {c.d(), std::move(out)};
}

CubeGroupElement reflect_element(const CubeGroupElement& g, CubeIndex eps0) {
    if (eps0.d != g.d()) throw DomainError("reflect_element: index dimension mismatch");
    CubeGroupElement out = g;
    for (int i = 0; i < g.d(); ++i) {
        if (eps0[i]) {
            out.m += g.n[static_cast<std::size_t>(i)];
            out.n[static_cast<std::size_t>(i)] = -g.n[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

}  // namespace dyncubes
