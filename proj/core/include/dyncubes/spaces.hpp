#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dyncubes {

/// Raised when inputs do not belong together (dimension or space mismatch,
/// invalid system parameters).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxTorusDim = 4;

/// Reduces a real number into [0, 1).
double wrap01(double v) noexcept;

/// Fractional part of k * x computed from the exact product of the integer k
/// and the double x (no loss from the magnitude of k).
double mul_mod1(__int128 k, double x) noexcept;

/// Point of the s-dimensional torus, every coordinate kept in [0, 1).
class TorusPoint {
public:
    TorusPoint() = default;
    explicit TorusPoint(std::initializer_list<double> coords);
    explicit TorusPoint(const std::vector<double>& coords);

    int dim() const noexcept { return dim_; }
    double operator[](int i) const noexcept { return coords_[static_cast<std::size_t>(i)]; }
    void set(int i, double v) noexcept { coords_[static_cast<std::size_t>(i)] = wrap01(v); }
    std::vector<double> coords() const { return {coords_.begin(), coords_.begin() + dim_}; }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) noexcept;

private:
    std::array<double, kMaxTorusDim> coords_{};
    int dim_ = 0;
};

enum class Convention : std::uint8_t { LeftClosed, RightClosed };

/// Point of the Sturmian subshift, stored as the circle parameter whose
/// coding it is plus the interval convention used on the critical orbit.
struct SymbolicPoint {
    double base = 0.0;
    Convention convention = Convention::LeftClosed;

    friend bool operator==(const SymbolicPoint&, const SymbolicPoint&) = default;
};

using Point = std::variant<TorusPoint, SymbolicPoint>;

enum class SystemKind : std::uint8_t { Rotation, AffineSkew, Sturmian };

/// A concrete minimal system.
///
/// Rotation:    x -> x + alpha on the circle.
/// AffineSkew:  (x1, ..., xs) -> (x1 + alpha, x2 + x1, ..., xs + x(s-1)).
/// Sturmian:    shift on the two-interval coding of the rotation by alpha.
///
/// `window` is the resolution W of the symbolic metric and is only read for
/// Sturmian systems.
struct SystemSpec {
    SystemKind kind = SystemKind::Rotation;
    double alpha = 0.0;
    int dim = 1;
    int window = 30;

    static SystemSpec rotation(double alpha);
    static SystemSpec affine_skew(double alpha, int dim);
    static SystemSpec sturmian(double alpha, int window = 30);

    /// Throws DomainError if the parameters are unusable.
    void validate() const;

    /// Dimension of the torus points of this system (0 for Sturmian).
    int torus_dim() const noexcept { return kind == SystemKind::Sturmian ? 0 : dim; }

    std::string describe() const;

    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// True when alpha keeps a distance of more than 1e-6 / q^2 from every
/// fraction p/q with q <= 100.
bool is_numerically_irrational(double alpha) noexcept;

std::string_view to_string(SystemKind kind) noexcept;
SystemKind parse_system_kind(std::string_view text);

enum class FactorKind : std::uint8_t { Identity, SkewTruncate, SturmianToRotation };

std::string_view to_string(FactorKind kind) noexcept;
FactorKind parse_factor_kind(std::string_view text);

struct FactorMapSpec {
    SystemSpec source;
    SystemSpec target;
    FactorKind kind = FactorKind::Identity;
    int truncate_k = 0;

    static FactorMapSpec identity(const SystemSpec& sys);
    static FactorMapSpec skew_truncate(const SystemSpec& skew, int k);
    static FactorMapSpec sturmian_to_rotation(const SystemSpec& sturmian);

    void validate() const;
    std::string describe() const;

    friend bool operator==(const FactorMapSpec&, const FactorMapSpec&) = default;
};

/// Sup over coordinates of the wraparound distance; always in [0, 0.5].
double torus_distance(const TorusPoint& a, const TorusPoint& b);

/// T^k x in closed form. |k| <= 1e9.
Point apply_power(const SystemSpec& sys, const Point& x, std::int64_t k);
TorusPoint apply_power(const SystemSpec& sys, const TorusPoint& x, std::int64_t k);
SymbolicPoint apply_power(const SystemSpec& sys, const SymbolicPoint& x, std::int64_t k);

/// One step of the defining map, written as the map itself (no closed form).
/// Used as the reference for the closed form.
Point step(const SystemSpec& sys, const Point& x);

/// Symbol at position n of the coding of p. Circle positions within
/// kCriticalSnap of 0 or 1 - alpha are treated as lying on the critical
/// orbit, where the convention decides.
int sturmian_symbol(double alpha, const SymbolicPoint& p, std::int64_t n);

inline constexpr double kCriticalSnap = 1e-12;

/// Coding of p on positions [first, first + count).
std::vector<std::uint8_t> sturmian_coding(double alpha, const SymbolicPoint& p, std::int64_t first,
                                          std::size_t count);

/// 2^-k with k the smallest |n| <= window where the codings differ, or 0.
double symbolic_distance(double alpha, const SymbolicPoint& x, const SymbolicPoint& y, int window);

/// The metric of sys's space.
double point_distance(const SystemSpec& sys, const Point& a, const Point& b);

/// Throws DomainError unless x lives in sys's space.
void check_membership(const SystemSpec& sys, const Point& x);

Point apply_factor(const FactorMapSpec& f, const Point& x);

std::string format_point(const Point& p);

}  // namespace dyncubes
