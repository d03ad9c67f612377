#include "dyncubes/relations.hpp"

#include <algorithm>
#include <limits>

namespace dyncubes {

double proximal_distance(const SystemSpec& sys, const Point& x, const Point& y, int N) {
    sys.validate();
    check_membership(sys, x);
    check_membership(sys, y);
    if (N < 0) throw DomainError("proximal_distance: N must be >= 0");
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t n = -N; n <= N && best > 0.0; ++n)
        best = std::min(best, point_distance(sys, apply_power(sys, x, n), apply_power(sys, y, n)));
    return best;
}

CubeConfiguration rp_configuration(const Point& x, const Point& y, int d) {
    auto c = diagonal_config(y, d + 1);
    c.mutable_entry(0) = x;
    return c;
}

DistanceProfile rp_distance(const RPQuery& q, const ExecutionPolicy& policy) {
    if (q.d < 1) throw DomainError("rp_distance: d must be >= 1");
    check_membership(q.sys, q.x);
    check_membership(q.sys, q.y);
    return distance_profile(rp_configuration(q.x, q.y, q.d), q.sys, q.d + 1, q.schedule, std::vector<Point>{q.x, q.y},
                            policy);
}

bool verify_witness(const SystemSpec& sys, const Point& x, const Point& y, const RPWitness& w) {
    if (!(point_distance(sys, x, w.x_prime) < w.delta) || !(point_distance(sys, y, w.y_prime) < w.delta)) return false;
    const CubeGroupElement g{0, w.n};
    for (std::uint32_t eps = 1; eps < vertex_count(g.d()); ++eps) {
        const auto k = g.exponent(eps);
        if (!(point_distance(sys, apply_power(sys, w.x_prime, k), apply_power(sys, w.y_prime, k)) < w.delta)) return false;
    }
    return true;
}

namespace {

std::vector<Point> net_around(const SystemSpec& sys, const Point& p, double delta) {
    std::vector<Point> out;
    if (const auto* sp = std::get_if<SymbolicPoint>(&p)) {
        out.push_back(*sp);
        SymbolicPoint other = *sp;
        other.convention = sp->convention == Convention::LeftClosed ? Convention::RightClosed : Convention::LeftClosed;
        out.push_back(other);
    } else {
        // Offsets in {-delta/2, 0, delta/2}^s, zero offset first.
        const auto& t = std::get<TorusPoint>(p);
        const int s = t.dim();
        int total = 1;
        for (int i = 0; i < s; ++i) total *= 3;
        static constexpr double kStep[3] = {0.0, -0.5, 0.5};
        for (int idx = 0; idx < total; ++idx) {
            std::vector<double> coords = t.coords();
            int rest = idx;
            for (int i = 0; i < s; ++i) {
                coords[static_cast<std::size_t>(i)] += kStep[rest % 3] * delta;
                rest /= 3;
            }
            out.emplace_back(TorusPoint(coords));
        }
    }
    std::erase_if(out, [&](const Point& q) { return !(point_distance(sys, p, q) < delta); });
    return out;
}

}  // namespace

std::optional<RPWitness> rp_witness(const SystemSpec& sys, const Point& x, const Point& y, int d, double delta,
                                    const SamplingBudget& budget) {
    sys.validate();
    check_membership(sys, x);
    check_membership(sys, y);
    if (!(delta > 0.0)) throw DomainError("rp_witness: delta must be positive");
    if (d < 1 || d > kMaxCubeDim) throw DomainError("rp_witness: d out of range");
    if (x == y) return RPWitness{x, y, std::vector<std::int64_t>(static_cast<std::size_t>(d), 0), delta};

    const auto xs = net_around(sys, x, delta);
    const auto ys = net_around(sys, y, delta);
    const int N = budget.N;
    const std::size_t side = 2 * static_cast<std::size_t>(N) + 1;
    std::size_t box = 1;
    for (int i = 0; i < d; ++i) box *= side;
    const std::size_t vertices = vertex_count(d);
    const int K = d * N;

    for (const auto& xp : xs) {
        for (const auto& yp : ys) {
            // gaps[k + K] = distance between T^k x' and T^k y'.
            std::vector<double> gaps(2 * static_cast<std::size_t>(K) + 1);
            for (std::int64_t k = -K; k <= K; ++k)
                gaps[static_cast<std::size_t>(k + K)] = point_distance(sys, apply_power(sys, xp, k), apply_power(sys, yp, k));
            std::vector<std::int64_t> n(static_cast<std::size_t>(d));
            for (std::size_t j = 0; j < box; ++j) {
                std::size_t rest = j;
                for (int i = d - 1; i >= 0; --i) {
                    n[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rest % side) - N;
                    rest /= side;
                }
                bool ok = true;
                for (std::uint32_t eps = 1; eps < vertices && ok; ++eps) {
                    std::int64_t e = 0;
                    for (int i = 0; i < d; ++i)
                        if ((eps >> i) & 1u) e += n[static_cast<std::size_t>(i)];
                    ok = gaps[static_cast<std::size_t>(e + K)] < delta;
                }
                if (ok) return RPWitness{xp, yp, n, delta};
            }
        }
    }
    return std::nullopt;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Consistent: return "CONSISTENT";
        case Verdict::ViolationEvidence: return "VIOLATION-EVIDENCE";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

MembershipVerdict classify(const DistanceProfile& p, double tol) noexcept {
    const double last = p.final_distance();
    if (last < tol) return MembershipVerdict::In;
    if (p.plateau) return MembershipVerdict::EvidenceOut;
    return MembershipVerdict::Inconclusive;
}

std::string_view to_string(MembershipVerdict v) noexcept {
    switch (v) {
        case MembershipVerdict::In: return "in";
        case MembershipVerdict::EvidenceOut: return "evidence-out";
        case MembershipVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

}  // namespace dyncubes
