#include "dyncubes/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dyncubes {
namespace {

double frac(double v) noexcept { return v - std::floor(v); }

double circle_gap(double a, double b) noexcept {
    const double d = std::fabs(a - b);
    return std::min(d, 1.0 - d);
}

// Generalized binomial coefficient C(k, i) for i <= kMaxTorusDim.
__int128 binomial(std::int64_t k, int i) noexcept {
    __int128 num = 1;
    __int128 den = 1;
    for (int t = 0; t < i; ++t) {
        num *= static_cast<__int128>(k) - t;
        den *= t + 1;
    }
    return num / den;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double wrap01(double v) noexcept {
    double r = v - std::floor(v);
    return r >= 1.0 ? 0.0 : r;
}

double mul_mod1(__int128 k, double x) noexcept {
    if (k == 0) return 0.0;
    const bool negative = k < 0;
    unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-k) : static_cast<unsigned __int128>(k);
    const double base = frac(x);
    double acc = 0.0;
    for (int chunk = 0; mag != 0; ++chunk, mag >>= 32) {
        const auto c = static_cast<double>(static_cast<std::uint64_t>(mag & 0xffffffffu));
        if (c == 0.0) continue;
        // frac(c * 2^(32 chunk) * x) = frac(c * frac(2^(32 chunk) * x)) since c is an integer.
        const double scaled = frac(std::ldexp(base, 32 * chunk));
        const double p = c * scaled;
        const double err = std::fma(c, scaled, -p);
        acc = frac(acc + frac(p) + err);
    }
    if (negative) acc = acc == 0.0 ? 0.0 : 1.0 - acc;
    return acc >= 1.0 ? 0.0 : acc;
}

TorusPoint::TorusPoint(std::initializer_list<double> coords) : TorusPoint(std::vector<double>(coords)) {}

TorusPoint::TorusPoint(const std::vector<double>& coords) {
    if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxTorusDim))
        throw DomainError("torus point dimension must be in [1, " + std::to_string(kMaxTorusDim) + "]");
    dim_ = static_cast<int>(coords.size());
    for (int i = 0; i < dim_; ++i) coords_[static_cast<std::size_t>(i)] = wrap01(coords[static_cast<std::size_t>(i)]);
}

bool operator==(const TorusPoint& a, const TorusPoint& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    return std::equal(a.coords_.begin(), a.coords_.begin() + a.dim_, b.coords_.begin());
}

SystemSpec SystemSpec::rotation(double alpha) { return {SystemKind::Rotation, alpha, 1, 30}; }
SystemSpec SystemSpec::affine_skew(double alpha, int dim) { return {SystemKind::AffineSkew, alpha, dim, 30}; }
SystemSpec SystemSpec::sturmian(double alpha, int window) { return {SystemKind::Sturmian, alpha, 1, window}; }

bool is_numerically_irrational(double alpha) noexcept {
    for (int q = 1; q <= 100; ++q) {
        const double p = std::round(alpha * q);
        if (std::fabs(alpha - p / q) <= 1e-6 / (static_cast<double>(q) * q)) return false;
    }
    return true;
}

void SystemSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (!is_numerically_irrational(alpha))
        throw DomainError("alpha is too close to a rational p/q with q <= 100");
    switch (kind) {
        case SystemKind::Rotation:
            if (dim != 1) throw DomainError("ROTATION requires dim = 1");
            break;
        case SystemKind::AffineSkew:
            if (dim < 1 || dim > kMaxTorusDim)
                throw DomainError("AFFINE_SKEW dim must be in [1, " + std::to_string(kMaxTorusDim) + "]");
            break;
        case SystemKind::Sturmian:
            if (dim != 1) throw DomainError("STURMIAN requires dim = 1");
            if (window < 1 || window > 60) throw DomainError("STURMIAN window must be in [1, 60]");
            break;
    }
}

std::string SystemSpec::describe() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g", alpha);
    std::string out{to_string(kind)};
    out += "(alpha=";
    out += buf;
    if (kind == SystemKind::AffineSkew) out += ", dim=" + std::to_string(dim);
    if (kind == SystemKind::Sturmian) out += ", W=" + std::to_string(window);
    out += ")";
    return out;
}

std::string_view to_string(SystemKind kind) noexcept {
    switch (kind) {
        case SystemKind::Rotation: return "ROTATION";
        case SystemKind::AffineSkew: return "AFFINE_SKEW";
        case SystemKind::Sturmian: return "STURMIAN";
    }
    return "?";
}

SystemKind parse_system_kind(std::string_view text) {
    if (text == "ROTATION") return SystemKind::Rotation;
    if (text == "AFFINE_SKEW") return SystemKind::AffineSkew;
    if (text == "STURMIAN") return SystemKind::Sturmian;
    throw DomainError("unknown system kind '" + std::string(text) + "'");
}

std::string_view to_string(FactorKind kind) noexcept {
    switch (kind) {
        case FactorKind::Identity: return "IDENTITY";
        case FactorKind::SkewTruncate: return "SKEW_TRUNCATE";
        case FactorKind::SturmianToRotation: return "STURMIAN_TO_ROTATION";
    }
    return "?";
}

FactorKind parse_factor_kind(std::string_view text) {
    if (text == "IDENTITY") return FactorKind::Identity;
    if (text == "SKEW_TRUNCATE") return FactorKind::SkewTruncate;
    if (text == "STURMIAN_TO_ROTATION") return FactorKind::SturmianToRotation;
    throw DomainError("unknown factor kind '" + std::string(text) + "'");
}

FactorMapSpec FactorMapSpec::identity(const SystemSpec& sys) { return {sys, sys, FactorKind::Identity, 0}; }

FactorMapSpec FactorMapSpec::skew_truncate(const SystemSpec& skew, int k) {
    SystemSpec target = k == 1 ? SystemSpec::rotation(skew.alpha) : SystemSpec::affine_skew(skew.alpha, k);
    return {skew, target, FactorKind::SkewTruncate, k};
}

FactorMapSpec FactorMapSpec::sturmian_to_rotation(const SystemSpec& sturmian) {
    return {sturmian, SystemSpec::rotation(sturmian.alpha), FactorKind::SturmianToRotation, 0};
}

void FactorMapSpec::validate() const {
    source.validate();
    target.validate();
    if (source.alpha != target.alpha) throw DomainError("factor source and target must share alpha");
    switch (kind) {
        case FactorKind::Identity:
            if (!(source == target)) throw DomainError("IDENTITY factor requires target = source");
            break;
        case FactorKind::SkewTruncate:
            if (source.kind != SystemKind::AffineSkew) throw DomainError("SKEW_TRUNCATE requires an AFFINE_SKEW source");
            if (truncate_k < 1 || truncate_k > source.dim) throw DomainError("truncate_k must be in [1, dim]");
            if (target.torus_dim() != truncate_k || target.kind == SystemKind::Sturmian)
                throw DomainError("SKEW_TRUNCATE target must be the k-dimensional torus system");
            break;
        case FactorKind::SturmianToRotation:
            if (source.kind != SystemKind::Sturmian || target.kind != SystemKind::Rotation)
                throw DomainError("STURMIAN_TO_ROTATION maps a STURMIAN system onto its ROTATION");
            break;
    }
}

std::string FactorMapSpec::describe() const {
    std::string out{to_string(kind)};
    if (kind == FactorKind::SkewTruncate) out += "(" + std::to_string(truncate_k) + ")";
    return out + ": " + source.describe() + " -> " + target.describe();
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    if (a.dim() != b.dim())
        throw DomainError("torus_distance: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
    double d = 0.0;
    for (int i = 0; i < a.dim(); ++i) d = std::max(d, circle_gap(a[i], b[i]));
    return d;
}

void check_membership(const SystemSpec& sys, const Point& x) {
    const bool ok = std::visit(Overloaded{
                                   [&](const TorusPoint& p) {
                                       return sys.kind != SystemKind::Sturmian && p.dim() == sys.dim;
                                   },
                                   [&](const SymbolicPoint&) { return sys.kind == SystemKind::Sturmian; },
                               },
                               x);
    if (!ok) throw DomainError("point " + format_point(x) + " does not belong to " + sys.describe());
}

TorusPoint apply_power(const SystemSpec& sys, const TorusPoint& x, std::int64_t k) {
    if (sys.kind == SystemKind::Sturmian || x.dim() != sys.dim)
        throw DomainError("point " + format_point(x) + " does not belong to " + sys.describe());
    if (k == 0) return x;
    // (T^k x)_j = sum_{i<j} C(k,i) x_{j-i} + C(k,j) alpha, reading alpha as coordinate 0.
    TorusPoint out = x;
    for (int j = 1; j <= x.dim(); ++j) {
        double acc = mul_mod1(binomial(k, j), sys.alpha);
        for (int i = 0; i < j; ++i) acc += mul_mod1(binomial(k, i), x[j - i - 1]);
        out.set(j - 1, acc);
    }
    return out;
}

SymbolicPoint apply_power(const SystemSpec& sys, const SymbolicPoint& x, std::int64_t k) {
    if (sys.kind != SystemKind::Sturmian)
        throw DomainError("symbolic point does not belong to " + sys.describe());
    return {wrap01(x.base + mul_mod1(k, sys.alpha)), x.convention};
}

Point apply_power(const SystemSpec& sys, const Point& x, std::int64_t k) {
    return std::visit([&](const auto& p) -> Point { return apply_power(sys, p, k); }, x);
}

Point step(const SystemSpec& sys, const Point& x) {
    check_membership(sys, x);
    if (const auto* s = std::get_if<SymbolicPoint>(&x)) return SymbolicPoint{wrap01(s->base + sys.alpha), s->convention};
    const auto& p = std::get<TorusPoint>(x);
    TorusPoint out = p;
    out.set(0, p[0] + sys.alpha);
    for (int j = 1; j < p.dim(); ++j) out.set(j, p[j] + p[j - 1]);
    return out;
}

int sturmian_symbol(double alpha, const SymbolicPoint& p, std::int64_t n) {
    const double t = wrap01(p.base + mul_mod1(n, alpha));
    const double cut = 1.0 - alpha;
    const bool left = p.convention == Convention::LeftClosed;
    if (circle_gap(t, 0.0) < kCriticalSnap) return left ? 0 : 1;
    if (circle_gap(t, cut) < kCriticalSnap) return left ? 1 : 0;
    return t < cut ? 0 : 1;
}

std::vector<std::uint8_t> sturmian_coding(double alpha, const SymbolicPoint& p, std::int64_t first,
                                          std::size_t count) {
    std::vector<std::uint8_t> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = static_cast<std::uint8_t>(sturmian_symbol(alpha, p, first + static_cast<std::int64_t>(i)));
    return out;
}

double symbolic_distance(double alpha, const SymbolicPoint& x, const SymbolicPoint& y, int window) {
    for (int k = 0; k <= window; ++k) {
        if (sturmian_symbol(alpha, x, k) != sturmian_symbol(alpha, y, k) ||
            sturmian_symbol(alpha, x, -k) != sturmian_symbol(alpha, y, -k))
            return std::ldexp(1.0, -k);
    }
    return 0.0;
}

double point_distance(const SystemSpec& sys, const Point& a, const Point& b) {
    if (sys.kind == SystemKind::Sturmian) {
        const auto* x = std::get_if<SymbolicPoint>(&a);
        const auto* y = std::get_if<SymbolicPoint>(&b);
        if (!x || !y) throw DomainError("point_distance: expected symbolic points");
        return symbolic_distance(sys.alpha, *x, *y, sys.window);
    }
    const auto* x = std::get_if<TorusPoint>(&a);
    const auto* y = std::get_if<TorusPoint>(&b);
    if (!x || !y) throw DomainError("point_distance: expected torus points");
    return torus_distance(*x, *y);
}

Point apply_factor(const FactorMapSpec& f, const Point& x) {
    check_membership(f.source, x);
    switch (f.kind) {
        case FactorKind::Identity:
            return x;
        case FactorKind::SkewTruncate: {
            const auto& p = std::get<TorusPoint>(x);
            std::vector<double> head(p.coords());
            head.resize(static_cast<std::size_t>(f.truncate_k));
            return TorusPoint(head);
        }
        case FactorKind::SturmianToRotation:
            return TorusPoint{std::get<SymbolicPoint>(x).base};
    }
    throw DomainError("apply_factor: unsupported factor");
}

std::string format_point(const Point& p) {
    std::ostringstream os;
    os.precision(17);
    std::visit(Overloaded{
                   [&](const TorusPoint& t) {
                       os << '(';
                       for (int i = 0; i < t.dim(); ++i) os << (i ? ", " : "") << t[i];
                       os << ')';
                   },
                   [&](const SymbolicPoint& s) {
                       os << s.base << (s.convention == Convention::LeftClosed ? ":LEFT_CLOSED" : ":RIGHT_CLOSED");
                   },
               },
               p);
    return os.str();
}

}  // namespace dyncubes
