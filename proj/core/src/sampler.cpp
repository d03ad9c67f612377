#include "dyncubes/sampler.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

#include "parallel.hpp"

namespace dyncubes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double box_size(int N, int d) { return std::pow(2.0 * N + 1.0, d); }

void check_budget(const SamplingBudget& b) {
    if (b.N < 0) throw DomainError("budget N must be >= 0");
    if (b.base_grid < 1) throw DomainError("budget base_grid must be >= 1");
    if (b.base_orbit_len < 1) throw DomainError("budget base_orbit_len must be >= 1");
}

void check_config(const SystemSpec& sys, const CubeConfiguration& c, int d) {
    if (c.d() != d)
        throw DomainError("configuration dimension " + std::to_string(c.d()) + " does not match d = " + std::to_string(d));
    for (const auto& p : c.entries()) check_membership(sys, p);
}

// Distances from T^k x to every target vertex, k in [-K, K].
class CostTable {
public:
    CostTable(const SystemSpec& sys, const Point& base, const CubeConfiguration& target, int K)
        : K_(K), width_(2 * static_cast<std::size_t>(K) + 1), values_(target.size() * width_) {
        if (const auto* tp = std::get_if<TorusPoint>(&base)) {
            for (std::int64_t k = -K; k <= K; ++k) {
                const TorusPoint p = apply_power(sys, *tp, k);
                const std::size_t col = static_cast<std::size_t>(k + K);
                for (std::size_t eps = 0; eps < target.size(); ++eps)
                    values_[eps * width_ + col] = torus_distance(p, std::get<TorusPoint>(target[eps]));
            }
            return;
        }
        // Symbolic: T^k x reads the coding of x shifted by k.
        const auto& sp = std::get<SymbolicPoint>(base);
        const int W = sys.window;
        const auto codes = sturmian_coding(sys.alpha, sp, -static_cast<std::int64_t>(K) - W,
                                           width_ + 2 * static_cast<std::size_t>(W));
        for (std::size_t eps = 0; eps < target.size(); ++eps) {
            const auto tc = sturmian_coding(sys.alpha, std::get<SymbolicPoint>(target[eps]), -W,
                                            2 * static_cast<std::size_t>(W) + 1);
            for (std::size_t col = 0; col < width_; ++col) {
                // codes[col + W + j] is position (k + j) of x, tc[W + j] position j of the target.
                double v = 0.0;
                for (int r = 0; r <= W; ++r) {
                    if (codes[col + static_cast<std::size_t>(W + r)] != tc[static_cast<std::size_t>(W + r)] ||
                        codes[col + static_cast<std::size_t>(W - r)] != tc[static_cast<std::size_t>(W - r)]) {
                        v = std::ldexp(1.0, -r);
                        break;
                    }
                }
                values_[eps * width_ + col] = v;
            }
        }
    }

    double operator()(std::size_t eps, std::int64_t k) const noexcept {
        return values_[eps * width_ + static_cast<std::size_t>(k + K_)];
    }

private:
    int K_;
    std::size_t width_;
    std::vector<double> values_;
};

// Depth-first enumeration of n in [-N, N]^d assigning n_1, n_2, ... in turn.
// After n_i is fixed every vertex whose highest set bit is i has a known
// exponent and is checked against the bound immediately.
class BoxSearch {
public:
    BoxSearch(const CostTable& costs, int d, int N) : costs_(costs), d_(d), N_(N), n_(static_cast<std::size_t>(d)) {}

    // Strict mode: finds configurations strictly below `bound`, tightening
    // it as it goes. Returns true if anything was found.
    bool improve(double& bound, std::vector<std::int64_t>& best_n) {
        strict_ = true;
        stop_at_first_ = false;
        found_ = false;
        bound_ = bound;
        best_n_ = &best_n;
        run();
        bound = bound_;
        return found_;
    }

    // First configuration (lexicographic in n) with distance <= bound.
    bool first_at_most(double bound, std::vector<std::int64_t>& out) {
        strict_ = false;
        stop_at_first_ = true;
        found_ = false;
        bound_ = bound;
        best_n_ = &out;
        run();
        return found_;
    }

private:
    bool passes(double v) const noexcept { return strict_ ? v < bound_ : v <= bound_; }

    void run() {
        ex_[0] = 0;
        const double c0 = costs_(0, 0);
        if (!passes(c0)) return;
        candidates_.assign(static_cast<std::size_t>(d_), {});
        for (int i = 0; i < d_; ++i) {
            const std::size_t unit = std::size_t{1} << i;
            for (std::int64_t v = -N_; v <= N_; ++v)
                if (passes(costs_(unit, v))) candidates_[static_cast<std::size_t>(i)].push_back(v);
            if (candidates_[static_cast<std::size_t>(i)].empty()) return;
        }
        recurse(0, c0);
    }

    void recurse(int i, double running) {
        if (i == d_) {
            if (strict_) {
                bound_ = running;
            }
            *best_n_ = n_;
            found_ = true;
            return;
        }
        const std::size_t lower = std::size_t{1} << i;
        for (std::int64_t v : candidates_[static_cast<std::size_t>(i)]) {
            double r = running;
            bool ok = true;
            for (std::size_t eps = 0; eps < lower; ++eps) {
                const std::int64_t e = ex_[eps] + v;
                const double c = costs_(eps | lower, e);
                if (!passes(c)) {
                    ok = false;
                    break;
                }
                r = std::max(r, c);
                ex_[eps | lower] = e;
            }
            if (!ok) continue;
            n_[static_cast<std::size_t>(i)] = v;
            recurse(i + 1, r);
            if (found_ && stop_at_first_) return;
        }
    }

    const CostTable& costs_;
    int d_;
    int N_;
    std::vector<std::int64_t> n_;
    std::array<std::int64_t, std::size_t{1} << kMaxCubeDim> ex_{};
    std::vector<std::vector<std::int64_t>> candidates_;
    bool strict_ = true;
    bool stop_at_first_ = false;
    bool found_ = false;
    double bound_ = kInf;
    std::vector<std::int64_t>* best_n_ = nullptr;
};

NearestGenerated search_box(const SystemSpec& sys, const CubeConfiguration& c, const std::vector<Point>& bases, int N,
                            double upper, const ExecutionPolicy& policy) {
    const int d = c.d();
    const int K = d * N;
    std::vector<double> first_cost(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) first_cost[i] = point_distance(sys, bases[i], c[0]);
    std::vector<std::size_t> order(bases.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return first_cost[a] < first_cost[b]; });

    std::atomic<double> best{upper};
    detail::parallel_for(order.size(), policy.threads, [&](std::size_t slot) {
        const std::size_t idx = order[slot];
        if (!(first_cost[idx] < best.load())) return;
        const CostTable costs(sys, bases[idx], c, K);
        BoxSearch search(costs, d, N);
        double bound = best.load();
        std::vector<std::int64_t> n;
        if (search.improve(bound, n)) detail::atomic_min(best, bound);
    });

    NearestGenerated out{best.load(), std::nullopt};
    if (!(out.distance < upper)) {
        out.distance = upper;
        return out;
    }
    // Deterministic witness: first base in canonical order, then first n in
    // lexicographic order, attaining the minimum.
    for (std::size_t idx = 0; idx < bases.size(); ++idx) {
        if (first_cost[idx] > out.distance) continue;
        const CostTable costs(sys, bases[idx], c, K);
        BoxSearch search(costs, d, N);
        std::vector<std::int64_t> n;
        if (search.first_at_most(out.distance, n)) {
            out.witness = SampleWitness{bases[idx], std::move(n)};
            break;
        }
    }
    return out;
}

std::size_t schedule_base_count(const SystemSpec& sys, const SamplingBudget& b, bool face) {
    return face ? 1 : base_count(sys, b);
}

}  // namespace

std::uint64_t next_random(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) noexcept { return static_cast<double>(next_random(state) >> 11) * 0x1.0p-53; }

std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound) noexcept {
    return bound == 0 ? 0 : next_random(state) % bound;
}

std::size_t base_count(const SystemSpec& sys, const SamplingBudget& b) {
    check_budget(b);
    if (sys.kind == SystemKind::Sturmian) return 2 * static_cast<std::size_t>(b.base_orbit_len);
    std::size_t count = 1;
    for (int i = 0; i < sys.dim; ++i) count *= static_cast<std::size_t>(b.base_grid);
    return count;
}

std::vector<Point> base_points(const SystemSpec& sys, const SamplingBudget& b) {
    const std::size_t count = base_count(sys, b);
    std::vector<Point> out;
    out.reserve(count);
    if (sys.kind == SystemKind::Sturmian) {
        for (std::int64_t k = 0; k < b.base_orbit_len; ++k) {
            const double z = mul_mod1(k, sys.alpha);
            out.emplace_back(SymbolicPoint{z, Convention::LeftClosed});
            out.emplace_back(SymbolicPoint{z, Convention::RightClosed});
        }
        return out;
    }
    // Grid points i/g, first coordinate varying slowest.
    std::vector<double> coords(static_cast<std::size_t>(sys.dim));
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::size_t rest = idx;
        for (int j = sys.dim - 1; j >= 0; --j) {
            coords[static_cast<std::size_t>(j)] = static_cast<double>(rest % static_cast<std::size_t>(b.base_grid)) / b.base_grid;
            rest /= static_cast<std::size_t>(b.base_grid);
        }
        out.emplace_back(TorusPoint(coords));
    }
    return out;
}

CubeConfiguration regenerate(const SystemSpec& sys, const SampleWitness& w) {
    CubeGroupElement g{0, w.n};
    return apply_cube_element(sys, g, diagonal_config(w.base, g.d()));
}

namespace {

CubeSetSample enumerate(const SystemSpec& sys, int d, const SamplingBudget& b, std::vector<Point> bases, SampleKind kind) {
    sys.validate();
    check_budget(b);
    if (d < 1 || d > kMaxCubeDim) throw DomainError("cube dimension must be in [1, " + std::to_string(kMaxCubeDim) + "]");
    const double total = box_size(b.N, d) * static_cast<double>(bases.size());
    if (total > kMaxMaterialized)
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "sample of %.3g configurations exceeds the limit of 10^7", total);
        throw BudgetOverflow(buf);
    }
    const std::size_t box = static_cast<std::size_t>(box_size(b.N, d));
    const std::size_t side = 2 * static_cast<std::size_t>(b.N) + 1;
    const int K = d * b.N;

    CubeSetSample s;
    s.d = d;
    s.sys = sys;
    s.provenance = b;
    s.kind = kind;
    s.points.resize(box * bases.size());
    s.witnesses.resize(box * bases.size());
    detail::parallel_for(bases.size(), 0, [&](std::size_t bi) {
        std::vector<Point> traj;
        traj.reserve(2 * static_cast<std::size_t>(K) + 1);
        for (std::int64_t k = -K; k <= K; ++k) traj.push_back(apply_power(sys, bases[bi], k));
        std::vector<std::int64_t> n(static_cast<std::size_t>(d));
        for (std::size_t j = 0; j < box; ++j) {
            // n_1 slowest.
            std::size_t rest = j;
            for (int i = d - 1; i >= 0; --i) {
                n[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rest % side) - b.N;
                rest /= side;
            }
            std::vector<Point> entries(vertex_count(d));
            for (std::uint32_t eps = 0; eps < entries.size(); ++eps) {
                std::int64_t e = 0;
                for (int i = 0; i < d; ++i)
                    if ((eps >> i) & 1u) e += n[static_cast<std::size_t>(i)];
                entries[eps] = traj[static_cast<std::size_t>(e + K)];
            }
            const std::size_t slot = bi * box + j;
            s.points[slot] = CubeConfiguration(d, std::move(entries));
            s.witnesses[slot] = SampleWitness{bases[bi], n};
        }
    });
    return s;
}

}  // namespace

CubeSetSample sample_cube_set(const SystemSpec& sys, int d, const SamplingBudget& b) {
    return enumerate(sys, d, b, base_points(sys, b), SampleKind::FullQ);
}

CubeSetSample sample_from_bases(const SystemSpec& sys, int d, const SamplingBudget& b, std::vector<Point> bases) {
    if (bases.empty()) throw DomainError("sample_from_bases: no base points");
    for (const auto& p : bases) check_membership(sys, p);
    return enumerate(sys, d, b, std::move(bases), SampleKind::FullQ);
}

CubeSetSample sample_face_orbit(const SystemSpec& sys, const Point& x, int d, const SamplingBudget& b) {
    check_membership(sys, x);
    auto s = enumerate(sys, d, b, {x}, SampleKind::FaceOrbit);
    s.face_base = x;
    return s;
}

double config_distance(const SystemSpec& sys, const CubeConfiguration& a, const CubeConfiguration& b) {
    if (a.d() != b.d()) throw DomainError("config_distance: dimension mismatch");
    double d = 0.0;
    for (std::size_t eps = 0; eps < a.size(); ++eps) d = std::max(d, point_distance(sys, a[eps], b[eps]));
    return d;
}

double distance_to_sample(const CubeConfiguration& c, const CubeSetSample& s) {
    if (s.points.empty()) throw DomainError("distance_to_sample: empty sample");
    check_config(s.sys, c, s.d);
    double best = kInf;
    for (const auto& p : s.points) {
        double d = 0.0;
        for (std::size_t eps = 0; eps < p.size() && d < best; ++eps) d = std::max(d, point_distance(s.sys, c[eps], p[eps]));
        best = std::min(best, d);
    }
    return best;
}

NearestGenerated nearest_generated(const SystemSpec& sys, const CubeConfiguration& c, const std::vector<Point>& bases,
                                   int N, std::optional<double> upper_bound, const ExecutionPolicy& policy) {
    sys.validate();
    if (bases.empty()) throw DomainError("nearest_generated: no base points");
    if (N < 0) throw DomainError("nearest_generated: N must be >= 0");
    check_config(sys, c, c.d());
    for (const auto& b : bases) check_membership(sys, b);
    if (box_size(N, c.d()) * static_cast<double>(bases.size()) > kMaxVirtual)
        throw BudgetOverflow("virtual sample exceeds the limit of 10^13 configurations");
    if (upper_bound) return search_box(sys, c, bases, N, *upper_bound, policy);
    // Seed the bound on a small sub-box, which is contained in the full box.
    const int seed_N = std::min(N, 4);
    NearestGenerated seed = search_box(sys, c, bases, seed_N, kInf, policy);
    if (seed_N == N) return seed;
    NearestGenerated full = search_box(sys, c, bases, N, seed.distance, policy);
    if (!full.witness) full.witness = std::move(seed.witness);
    return full;
}

bool detect_plateau(const std::vector<double>& values) {
    if (values.size() < 3) return false;
    const double first = values[values.size() - 3];
    const double last = values.back();
    if (first == 0.0) return last == 0.0;
    return (first - last) / first < kPlateauRelative;
}

namespace {

void validate_schedule_impl(const SystemSpec& sys, const std::vector<SamplingBudget>& schedule, bool face) {
    if (schedule.empty()) throw DomainError("schedule must contain at least one budget");
    for (const auto& b : schedule) check_budget(b);
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        const auto& prev = schedule[i - 1];
        const auto& cur = schedule[i];
        const std::size_t pc = schedule_base_count(sys, prev, face);
        const std::size_t cc = schedule_base_count(sys, cur, face);
        if (cur.N < prev.N || cc < pc)
            throw DomainError("schedule is not nested: step " + std::to_string(i + 1) + " shrinks N or the base set");
        if (cur.N == prev.N && cc == pc)
            throw DomainError("schedule is not increasing: step " + std::to_string(i + 1) + " repeats the previous budget");
    }
}

}  // namespace

void validate_schedule(const SystemSpec& sys, const std::vector<SamplingBudget>& schedule) {
    validate_schedule_impl(sys, schedule, false);
}

namespace {

DistanceProfile profile_impl(const CubeConfiguration& c, const SystemSpec& sys, int d,
                             const std::vector<SamplingBudget>& schedule, const std::optional<Point>& face_base,
                             const std::vector<Point>& extra_bases, const ExecutionPolicy& policy) {
    sys.validate();
    validate_schedule_impl(sys, schedule, face_base.has_value());
    check_config(sys, c, d);
    if (face_base) check_membership(sys, *face_base);
    for (const auto& p : extra_bases) check_membership(sys, p);

    DistanceProfile profile;
    std::optional<double> bound;
    std::vector<double> values;
    for (const auto& b : schedule) {
        auto bases = face_base ? std::vector<Point>{*face_base} : base_points(sys, b);
        bases.insert(bases.end(), extra_bases.begin(), extra_bases.end());
        NearestGenerated r = nearest_generated(sys, c, bases, b.N, bound, policy);
        bound = r.distance;
        if (r.witness) profile.nearest = std::move(r.witness);
        profile.steps.push_back({b, r.distance});
        values.push_back(r.distance);
    }
    profile.plateau = detect_plateau(values);
    return profile;
}

}  // namespace

DistanceProfile distance_profile(const CubeConfiguration& c, const SystemSpec& sys, int d,
                                 const std::vector<SamplingBudget>& schedule, const std::optional<Point>& face_base,
                                 const ExecutionPolicy& policy) {
    return profile_impl(c, sys, d, schedule, face_base, {}, policy);
}

DistanceProfile distance_profile(const CubeConfiguration& c, const SystemSpec& sys, int d,
                                 const std::vector<SamplingBudget>& schedule, const std::vector<Point>& extra_bases,
                                 const ExecutionPolicy& policy) {
    return profile_impl(c, sys, d, schedule, std::nullopt, extra_bases, policy);
}

CubeConfiguration push_forward(const FactorMapSpec& f, const CubeConfiguration& c) {
    std::vector<Point> out;
    out.reserve(c.size());
    for (const auto& p : c.entries()) out.push_back(apply_factor(f, p));
    return {c.d(), std::move(out)};
}

CubeConfiguration lift_configuration(const FactorMapSpec& f, const CubeConfiguration& down, std::uint64_t& rng_state) {
    std::vector<Point> out;
    out.reserve(down.size());
    for (const auto& y : down.entries()) {
        check_membership(f.target, y);
        switch (f.kind) {
            case FactorKind::Identity:
                out.push_back(y);
                break;
            case FactorKind::SkewTruncate: {
                std::vector<double> coords = std::get<TorusPoint>(y).coords();
                while (static_cast<int>(coords.size()) < f.source.dim) coords.push_back(uniform01(rng_state));
                out.emplace_back(TorusPoint(coords));
                break;
            }
            case FactorKind::SturmianToRotation: {
                const auto conv = (next_random(rng_state) & 1u) ? Convention::RightClosed : Convention::LeftClosed;
                out.emplace_back(SymbolicPoint{std::get<TorusPoint>(y)[0], conv});
                break;
            }
        }
    }
    return {down.d(), std::move(out)};
}

std::vector<CubeConfiguration> sample_saturated_preimage(const FactorMapSpec& f, int d, const CubeSetSample& s_down,
                                                         int fiber_budget, std::uint64_t seed) {
    f.validate();
    if (!(s_down.sys == f.target)) throw DomainError("sample_saturated_preimage: sample is not on the factor's target");
    if (s_down.d != d) throw DomainError("sample_saturated_preimage: dimension mismatch");
    if (s_down.points.empty()) throw DomainError("sample_saturated_preimage: empty sample");
    if (fiber_budget < 0) throw DomainError("sample_saturated_preimage: negative fiber budget");
    std::uint64_t state = seed;
    std::vector<CubeConfiguration> out;
    out.reserve(static_cast<std::size_t>(fiber_budget));
    for (int t = 0; t < fiber_budget; ++t) {
        const auto& down = s_down.points[uniform_below(state, s_down.points.size())];
        out.push_back(lift_configuration(f, down, state));
    }
    return out;
}

}  // namespace dyncubes
