#include "dyncubes/saturation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "parallel.hpp"

namespace dyncubes {
namespace {

Verdict completion_verdict(double max_remaining, double delta, double factor_c) {
    if (max_remaining < factor_c * delta) return Verdict::Consistent;
    if (max_remaining > 10.0 * factor_c * delta) return Verdict::ViolationEvidence;
    return Verdict::Inconclusive;
}

// Downstairs sample for a factor: the target's own base set, except that
// Sturmian lifts are drawn from the image of the Sturmian base set so the
// critical orbit is present.
CubeSetSample downstairs_sample(const FactorMapSpec& f, int d, const SamplingBudget& b) {
    if (f.kind != FactorKind::SturmianToRotation) return sample_cube_set(f.target, d, b);
    std::vector<Point> bases;
    for (const auto& p : base_points(f.source, b)) {
        Point img = apply_factor(f, p);
        if (bases.empty() || !(bases.back() == img)) bases.push_back(std::move(img));
    }
    return sample_from_bases(f.target, d, b, std::move(bases));
}

std::vector<TrialResult> run_trials(const SystemSpec& sys, int d, const std::vector<CubeConfiguration>& lifts,
                                    const std::vector<SamplingBudget>& schedule, const std::optional<Point>& face_base,
                                    const ExecutionPolicy& policy) {
    std::vector<TrialResult> out(lifts.size());
    // Trials are independent; each profile is itself a deterministic query.
    detail::parallel_for(lifts.size(), policy.threads, [&](std::size_t i) {
        out[i] = TrialResult{lifts[i], distance_profile(lifts[i], sys, d, schedule, face_base, ExecutionPolicy{1})};
    });
    return out;
}

void check_factor_source(const SystemSpec& sys, const FactorMapSpec& f) {
    f.validate();
    if (!(f.source == sys)) throw DomainError("factor source must be the system under test");
}

}  // namespace

SaturationSummary summarize(const std::vector<TrialResult>& trials, double tol) {
    SaturationSummary s;
    s.tol = tol;
    bool all_below = true;
    bool plateau_above = false;
    for (const auto& t : trials) {
        const double last = t.profile.final_distance();
        s.max_final = std::max(s.max_final, last);
        if (t.profile.plateau) ++s.plateaued;
        if (!(last < tol)) {
            all_below = false;
            if (t.profile.plateau) plateau_above = true;
        }
    }
    s.verdict = all_below ? Verdict::Consistent : plateau_above ? Verdict::ViolationEvidence : Verdict::Inconclusive;
    return s;
}

SaturationReport check_cube_saturation(const SystemSpec& sys, const FactorMapSpec& f, int d,
                                       const std::vector<SamplingBudget>& schedule, int n_trials, double tol,
                                       std::uint64_t seed, const ExecutionPolicy& policy) {
    check_factor_source(sys, f);
    validate_schedule(sys, schedule);
    if (n_trials < 1) throw DomainError("n_trials must be >= 1");
    const CubeSetSample down = downstairs_sample(f, d, schedule.front());
    const auto lifts = sample_saturated_preimage(f, d, down, n_trials, seed);

    SaturationReport report;
    report.system_id = sys.describe();
    report.factor_id = f.describe();
    report.d = d;
    report.trials = run_trials(sys, d, lifts, schedule, std::nullopt, policy);
    report.summary = summarize(report.trials, tol);
    return report;
}

SaturationReport check_face_saturation(const SystemSpec& sys, const FactorMapSpec& f, int d, const Point& x,
                                       const std::vector<SamplingBudget>& schedule, int n_trials, double tol,
                                       std::uint64_t seed, const ExecutionPolicy& policy) {
    check_factor_source(sys, f);
    check_membership(sys, x);
    if (n_trials < 1) throw DomainError("n_trials must be >= 1");
    const Point y = apply_factor(f, x);
    const CubeSetSample down = sample_face_orbit(f.target, y, d, schedule.front());

    std::uint64_t state = seed;
    std::vector<CubeConfiguration> lifts;
    lifts.reserve(static_cast<std::size_t>(n_trials));
    for (int t = 0; t < n_trials; ++t) {
        const auto& picked = down.points[uniform_below(state, down.points.size())];
        CubeConfiguration lift = lift_configuration(f, picked, state);
        lift.mutable_entry(0) = x;
        lifts.push_back(std::move(lift));
    }

    SaturationReport report;
    report.system_id = sys.describe();
    report.factor_id = f.describe();
    report.d = d;
    report.trials = run_trials(sys, d, lifts, schedule, x, policy);
    report.summary = summarize(report.trials, tol);
    return report;
}

namespace {

struct PairCollector {
    std::size_t max_listed;
    std::size_t count = 0;
    double max_remaining = 0.0;
    // Min-heap on remaining distance keeps the worst pairs.
    std::vector<CompletionPair> heap;

    static bool heap_order(const CompletionPair& a, const CompletionPair& b) {
        return a.remaining_distance > b.remaining_distance;
    }

    void add(const CompletionPair& p) {
        ++count;
        max_remaining = std::max(max_remaining, p.remaining_distance);
        if (max_listed == 0) return;
        if (heap.size() < max_listed) {
            heap.push_back(p);
            std::push_heap(heap.begin(), heap.end(), heap_order);
        } else if (p.remaining_distance > heap.front().remaining_distance) {
            std::pop_heap(heap.begin(), heap.end(), heap_order);
            heap.back() = p;
            std::push_heap(heap.begin(), heap.end(), heap_order);
        }
    }
};

// Returns (max distance over vertices other than free_vertex, distance at free_vertex),
// stopping early once the match fails.
std::pair<double, double> compare_pair(const SystemSpec& sys, const CubeConfiguration& a, const CubeConfiguration& b,
                                       std::uint32_t free_vertex, double delta) {
    double match = 0.0;
    for (std::uint32_t eps = 0; eps < a.size(); ++eps) {
        if (eps == free_vertex) continue;
        match = std::max(match, point_distance(sys, a[eps], b[eps]));
        if (!(match < delta)) return {match, 0.0};
    }
    return {match, point_distance(sys, a[free_vertex], b[free_vertex])};
}

void brute_force_pairs(const CubeSetSample& s, double delta, PairCollector& out) {
    constexpr std::size_t kLimit = 20000;
    if (s.points.size() > kLimit)
        throw DomainError("unique_completion_check: symbolic samples are limited to 20000 configurations");
    const auto vertices = static_cast<std::uint32_t>(vertex_count(s.d));
    for (std::size_t i = 0; i < s.points.size(); ++i)
        for (std::size_t j = i + 1; j < s.points.size(); ++j)
            for (std::uint32_t v = 0; v < vertices; ++v) {
                const auto [match, rem] = compare_pair(s.sys, s.points[i], s.points[j], v, delta);
                if (match < delta) out.add({i, j, v, match, rem});
            }
}

// Cell hashing on up to four coordinates of the matched vertices. Cells are
// at least 2 * delta wide, so a partner within delta sits in the point's own
// cell or in the neighbour on the side of the nearer cell boundary.
void hashed_pairs(const CubeSetSample& s, double delta, PairCollector& out) {
    const int s_dim = s.sys.torus_dim();
    const auto vertices = static_cast<std::uint32_t>(vertex_count(s.d));
    const auto cells = static_cast<std::uint64_t>(std::floor(1.0 / (2.0 * delta)));
    if (cells < 3) {
        brute_force_pairs(s, delta, out);
        return;
    }
    const double width = 1.0 / static_cast<double>(cells);
    auto cell_of = [&](double v) {
        return std::min<std::uint64_t>(static_cast<std::uint64_t>(v / width), cells - 1);
    };

    for (std::uint32_t free_vertex = 0; free_vertex < vertices; ++free_vertex) {
        std::vector<std::pair<std::uint32_t, int>> keys;  // (vertex, coordinate)
        for (int coord = 0; coord < s_dim && keys.size() < 4; ++coord)
            for (std::uint32_t v = 0; v < vertices && keys.size() < 4; ++v)
                if (v != free_vertex) keys.emplace_back(v, coord);

        auto coord_value = [&](std::size_t idx, std::size_t k) {
            return std::get<TorusPoint>(s.points[idx][keys[k].first])[keys[k].second];
        };
        auto encode = [&](const std::array<std::uint64_t, 4>& c) {
            std::uint64_t key = 0;
            for (std::size_t k = 0; k < keys.size(); ++k) key = key * cells + c[k];
            return key;
        };

        std::vector<std::pair<std::uint64_t, std::uint32_t>> table(s.points.size());
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            std::array<std::uint64_t, 4> c{};
            for (std::size_t k = 0; k < keys.size(); ++k) c[k] = cell_of(coord_value(i, k));
            table[i] = {encode(c), static_cast<std::uint32_t>(i)};
        }
        std::sort(table.begin(), table.end());

        for (std::size_t i = 0; i < s.points.size(); ++i) {
            std::array<std::uint64_t, 4> home{};
            std::array<std::uint64_t, 4> side{};
            for (std::size_t k = 0; k < keys.size(); ++k) {
                const double v = coord_value(i, k);
                home[k] = cell_of(v);
                const double offset = v - static_cast<double>(home[k]) * width;
                side[k] = offset < 0.5 * width ? (home[k] + cells - 1) % cells : (home[k] + 1) % cells;
            }
            const std::uint32_t combos = 1u << keys.size();
            for (std::uint32_t mask = 0; mask < combos; ++mask) {
                std::array<std::uint64_t, 4> c{};
                for (std::size_t k = 0; k < keys.size(); ++k) c[k] = (mask >> k) & 1u ? side[k] : home[k];
                const std::uint64_t key = encode(c);
                auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(key, std::uint32_t{0}));
                for (; it != table.end() && it->first == key; ++it) {
                    const std::size_t j = it->second;
                    if (j <= i) continue;
                    const auto [match, rem] = compare_pair(s.sys, s.points[i], s.points[j], free_vertex, delta);
                    if (match < delta) out.add({i, j, free_vertex, match, rem});
                }
            }
        }
    }
}

}  // namespace

CompletionReport unique_completion_check(const CubeSetSample& s, double delta_match, double factor_c,
                                         std::size_t max_listed) {
    if (s.points.empty()) throw DomainError("unique_completion_check: empty sample");
    if (!(delta_match > 0.0) || !(factor_c > 0.0)) throw DomainError("unique_completion_check: parameters must be positive");
    PairCollector pairs{max_listed, 0, 0.0, {}};
    if (s.sys.kind == SystemKind::Sturmian)
        brute_force_pairs(s, delta_match, pairs);
    else
        hashed_pairs(s, delta_match, pairs);

    CompletionReport r;
    r.d = s.d;
    r.delta_match = delta_match;
    r.factor_c = factor_c;
    r.pair_count = pairs.count;
    r.max_remaining = pairs.max_remaining;
    r.pairs = std::move(pairs.heap);
    std::sort(r.pairs.begin(), r.pairs.end(), [](const CompletionPair& a, const CompletionPair& b) {
        if (a.remaining_distance != b.remaining_distance) return a.remaining_distance > b.remaining_distance;
        return std::tie(a.first, a.second, a.free_vertex) < std::tie(b.first, b.second, b.free_vertex);
    });
    r.verdict = completion_verdict(r.max_remaining, delta_match, factor_c);
    return r;
}

SymbolicPoint sturmian_left_point() { return {0.0, Convention::LeftClosed}; }
SymbolicPoint sturmian_right_point() { return {0.0, Convention::RightClosed}; }

std::vector<std::int64_t> boundary_disagreements(double alpha, std::int64_t range) {
    std::vector<std::int64_t> out;
    const auto x1 = sturmian_left_point();
    const auto x2 = sturmian_right_point();
    for (std::int64_t n = -range; n <= range; ++n)
        if (sturmian_symbol(alpha, x1, n) != sturmian_symbol(alpha, x2, n)) out.push_back(n);
    return out;
}

CubeConfiguration pattern_configuration(std::uint32_t pattern, int d) {
    if (d < 1 || d > 4) throw DomainError("pattern_configuration: d must be in [1, 4]");
    if (pattern >= (std::uint64_t{1} << vertex_count(d))) throw DomainError("pattern_configuration: pattern out of range");
    std::vector<Point> entries(vertex_count(d));
    for (std::uint32_t eps = 0; eps < entries.size(); ++eps)
        entries[eps] = ((pattern >> eps) & 1u) ? sturmian_right_point() : sturmian_left_point();
    return {d, std::move(entries)};
}

std::vector<PatternProfile> sturmian_counterexample(double alpha, int d, const std::vector<SamplingBudget>& schedule,
                                                    int W, const ExecutionPolicy& policy) {
    if (d < 2 || d > 3) throw DomainError("sturmian_counterexample: d must be 2 or 3");
    const SystemSpec sys = SystemSpec::sturmian(alpha, W);
    sys.validate();
    validate_schedule(sys, schedule);
    const std::uint32_t patterns = 1u << vertex_count(d);
    std::vector<PatternProfile> out(patterns);
    detail::parallel_for(patterns, policy.threads, [&](std::size_t p) {
        auto config = pattern_configuration(static_cast<std::uint32_t>(p), d);
        auto profile = distance_profile(config, sys, d, schedule, std::nullopt, ExecutionPolicy{1});
        out[p] = PatternProfile{static_cast<std::uint32_t>(p), std::move(config), std::move(profile)};
    });
    std::stable_sort(out.begin(), out.end(), [](const PatternProfile& a, const PatternProfile& b) {
        return a.profile.final_distance() < b.profile.final_distance();
    });
    return out;
}

CoverageStats face_orbit_coverage(const SystemSpec& sys, const Point& x, int d, const SamplingBudget& b, int probes,
                                  std::uint64_t seed) {
    check_membership(sys, x);
    if (probes < 1) throw DomainError("face_orbit_coverage: probes must be >= 1");
    std::uint64_t state = seed;
    CoverageStats stats;
    const std::vector<SamplingBudget> schedule{b};
    for (int t = 0; t < probes; ++t) {
        std::vector<Point> entries(vertex_count(d));
        entries[0] = x;
        for (std::size_t eps = 1; eps < entries.size(); ++eps) {
            if (sys.kind == SystemKind::Sturmian) {
                entries[eps] = SymbolicPoint{uniform01(state), Convention::LeftClosed};
            } else {
                std::vector<double> coords(static_cast<std::size_t>(sys.dim));
                for (auto& c : coords) c = uniform01(state);
                entries[eps] = TorusPoint(coords);
            }
        }
        const double dist = distance_profile(CubeConfiguration(d, std::move(entries)), sys, d, schedule, x).final_distance();
        stats.mean += dist;
        stats.max = std::max(stats.max, dist);
    }
    stats.probes = static_cast<std::size_t>(probes);
    stats.mean /= probes;
    return stats;
}

}  // namespace dyncubes
