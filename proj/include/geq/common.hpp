#ifndef GEQ_COMMON_HPP
#define GEQ_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>

namespace geq {

/// Spatial vector, dimension 2 or 3. Components beyond the active
/// dimension are kept at zero so dot/norm need no dimension argument.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    Vec() = default;
    Vec(double x, double y) : c{x, y, 0.0} {}
    Vec(double x, double y, double z) : c{x, y, z} {}

    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < 3; ++i) c[i] *= s;
        return *this;
    }
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator-(Vec a) { return a *= -1.0; }
inline bool operator==(const Vec& a, const Vec& b) { return a.c == b.c; }

inline double dot(const Vec& a, const Vec& b) {
    return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline double norm_inf(const Vec& a) {
    return std::max({std::fabs(a.c[0]), std::fabs(a.c[1]), std::fabs(a.c[2])});
}
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

/// Unit vector at angle phi in the plane.
inline Vec unit2(double phi) { return Vec(std::cos(phi), std::sin(phi)); }

inline constexpr double kPi = 3.14159265358979323846;

/// printf-style formatting into a std::string.
template <typename... Args>
std::string strf(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    return std::string(buf);
}

/// Least-squares straight line y = a + b*x. Returns {a, b}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};

template <typename XS, typename YS>
LineFit fit_line(const XS& xs, const YS& ys) {
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double d = n * sxx - sx * sx;
    LineFit f;
    if (std::fabs(d) < 1e-300) {
        f.intercept = n ? sy / n : 0.0;
        f.slope = 0.0;
        return f;
    }
    f.slope = (n * sxy - sx * sy) / d;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace geq

#endif
