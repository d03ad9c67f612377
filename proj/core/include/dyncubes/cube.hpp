#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dyncubes/spaces.hpp"

namespace dyncubes {

inline constexpr int kMaxCubeDim = 10;

/// A vertex eps of {0,1}^d. Bit i-1 of `bits` holds eps_i, so the natural
/// integer order of `bits` is the lexicographic order with eps_1 least
/// significant: for d = 2 the order is 00, 10, 01, 11.
struct CubeIndex {
    int d = 0;
    std::uint32_t bits = 0;

    int operator[](int i) const noexcept { return static_cast<int>((bits >> i) & 1u); }

    static CubeIndex from_bits(std::span<const int> eps);

    friend bool operator==(const CubeIndex&, const CubeIndex&) = default;
};

/// Number of vertices of {0,1}^d.
constexpr std::size_t vertex_count(int d) noexcept { return std::size_t{1} << d; }

/// An element of X^[d]: one point per vertex, stored in CubeIndex order.
class CubeConfiguration {
public:
    CubeConfiguration() = default;
    CubeConfiguration(int d, std::vector<Point> entries);

    int d() const noexcept { return d_; }
    std::size_t size() const noexcept { return entries_.size(); }

    const Point& operator[](std::size_t eps) const noexcept { return entries_[eps]; }
    const Point& at(CubeIndex eps) const;
    Point& mutable_entry(std::size_t eps) noexcept { return entries_[eps]; }

    std::span<const Point> entries() const noexcept { return entries_; }

    friend bool operator==(const CubeConfiguration&, const CubeConfiguration&) = default;

private:
    int d_ = 0;
    std::vector<Point> entries_;
};

/// S = (T^(m + n.eps))_eps. Face elements are the ones with m = 0.
struct CubeGroupElement {
    std::int64_t m = 0;
    std::vector<std::int64_t> n;

    int d() const noexcept { return static_cast<int>(n.size()); }
    std::int64_t exponent(std::uint32_t eps) const noexcept;
    bool is_face() const noexcept { return m == 0; }

    static CubeGroupElement identity(int d) { return {0, std::vector<std::int64_t>(static_cast<std::size_t>(d), 0)}; }

    friend bool operator==(const CubeGroupElement&, const CubeGroupElement&) = default;
};

CubeGroupElement compose(const CubeGroupElement& a, const CubeGroupElement& b);

/// Generator token: the diagonal transformation T^[d] or the face
/// transformation T_j^[d], raised to a nonzero power.
struct GeneratorToken {
    enum class Kind : std::uint8_t { Diagonal, Face };
    Kind kind = Kind::Diagonal;
    int face = 0;  // 1-based, only read for Face
    std::int64_t exponent = 1;

    static GeneratorToken diag(std::int64_t e) { return {Kind::Diagonal, 0, e}; }
    static GeneratorToken face_of(int j, std::int64_t e) { return {Kind::Face, j, e}; }
};

using GeneratorWord = std::vector<GeneratorToken>;

CubeConfiguration diagonal_config(const Point& x, int d);

CubeConfiguration apply_cube_element(const SystemSpec& sys, const CubeGroupElement& g, const CubeConfiguration& c);

/// Exponent sums of the word. Throws DomainError on tokens out of range.
CubeGroupElement reduce_word(const GeneratorWord& w, int d);

/// Applies one generator through the inductive construction
/// T_j^[d] = T_j^[d-1] x T_j^[d-1] (j < d), T_d^[d] = id^[d-1] x T^[d-1].
CubeConfiguration apply_generator(const SystemSpec& sys, const GeneratorToken& t, const CubeConfiguration& c);

/// Applies a word token by token via apply_generator.
CubeConfiguration apply_word(const SystemSpec& sys, const GeneratorWord& w, const CubeConfiguration& c);

/// Entries at every eps != 0, in CubeIndex order.
std::vector<Point> project_star(const CubeConfiguration& c);

/// Vertex map flipping every coordinate i with eps0_i = 1.
std::uint32_t reflect_index(std::uint32_t eps, CubeIndex eps0) noexcept;

/// c'[eps] = c[phi(eps)] with phi = reflect_index(., eps0).
CubeConfiguration euclidean_permutation(const CubeConfiguration& c, CubeIndex eps0);

/// Exponents of the reflected configuration: if c is generated by (m, n)
/// from x, euclidean_permutation(c, eps0) is generated by the returned
/// element from the same x.
CubeGroupElement reflect_element(const CubeGroupElement& g, CubeIndex eps0);

}  // namespace dyncubes
