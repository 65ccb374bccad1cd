#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace engel {

inline constexpr double kPi = 3.14159265358979323846;

/// Error with a stable diagnostic token (e.g. "NotClosed", "RankAmbiguous").
/// The token is what the CLI prints and what tests match on; the message
/// carries context.
class Error : public std::runtime_error {
public:
    Error(std::string token, const std::string& message)
        : std::runtime_error(token + ": " + message), token_(std::move(token)) {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

[[noreturn]] inline void fail(const std::string& token, const std::string& message) {
    throw Error(token, message);
}

struct Vec2 {
    double x = 0.0;
    double z = 0.0;

    Vec2() = default;
    Vec2(double x_, double z_) : x(x_), z(z_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, z + o.z}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, z - o.z}; }
    Vec2 operator*(double s) const { return {x * s, z * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; z += o.z; return *this; }

    double norm() const { return std::hypot(x, z); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.z * b.z; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.z - a.z * b.x; }

/// Point or tangent vector in model coordinates (x, y, z, t).
struct Vec4 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double t = 0.0;

    Vec4() = default;
    Vec4(double x_, double y_, double z_, double t_) : x(x_), y(y_), z(z_), t(t_) {}

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec4 operator+(const Vec4& o) const { return {x + o.x, y + o.y, z + o.z, t + o.t}; }
    Vec4 operator-(const Vec4& o) const { return {x - o.x, y - o.y, z - o.z, t - o.t}; }
    Vec4 operator*(double s) const { return {x * s, y * s, z * s, t * s}; }
    Vec4& operator+=(const Vec4& o) { x += o.x; y += o.y; z += o.z; t += o.t; return *this; }

    double norm() const { return std::sqrt(x * x + y * y + z * z + t * t); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(t);
    }
};

inline Vec4 operator*(double s, const Vec4& v) { return v * s; }
inline double dot(const Vec4& a, const Vec4& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z + a.t * b.t;
}

using Point4 = Vec4;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline void require_finite(const Point4& p, const char* what) {
    if (!p.finite()) fail("NonFinitePoint", std::string(what) + " has a non-finite coordinate");
}

/// Deterministic seeded generator. Uses splitmix64 so streams are identical
/// on every platform (std::uniform_real_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive range
        return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

}  // namespace engel
