#pragma once

#include <cmath>
#include <complex>
#include <array>
#include <string>

namespace juliagraph {

using cplx = std::complex<double>;

// A point on the Riemann sphere: either a finite complex number or infinity.
// Finite values are never NaN/Inf in either coordinate; construction through
// make_point() routes overflowing values to the infinity flag.
struct ExtendedPoint {
    cplx z{0.0, 0.0};
    bool inf = false;

    ExtendedPoint() = default;
    explicit ExtendedPoint(cplx v) : z(v) {}
    ExtendedPoint(double re, double im) : z(re, im) {}

    static ExtendedPoint infinity() {
        ExtendedPoint p;
        p.inf = true;
        return p;
    }

    bool is_finite() const { return !inf; }
};

inline bool finite_cplx(cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

inline ExtendedPoint make_point(cplx v) {
    if (!finite_cplx(v)) return ExtendedPoint::infinity();
    return ExtendedPoint(v);
}

// Embedding into R^3 (unit sphere); infinity -> north pole.
inline std::array<double, 3> sphere_embed(const ExtendedPoint& p) {
    if (p.inf) return {0.0, 0.0, 1.0};
    double x = p.z.real(), y = p.z.imag();
    double n = 1.0 + x * x + y * y;
    return {2.0 * x / n, 2.0 * y / n, (n - 2.0) / n};
}

// Chordal (spherical) distance, range [0, 2]; handles infinity exactly.
inline double chordal(const ExtendedPoint& a, const ExtendedPoint& b) {
    if (a.inf && b.inf) return 0.0;
    if (a.inf) return 2.0 / std::sqrt(1.0 + std::norm(b.z));
    if (b.inf) return 2.0 / std::sqrt(1.0 + std::norm(a.z));
    return 2.0 * std::abs(a.z - b.z) /
           std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

inline double chordal(cplx a, cplx b) {
    return chordal(ExtendedPoint(a), ExtendedPoint(b));
}

// Reciprocal chart w = 1/z. Infinity <-> 0.
inline ExtendedPoint reciprocal(const ExtendedPoint& p) {
    if (p.inf) return ExtendedPoint(cplx(0.0, 0.0));
    if (p.z == cplx(0.0, 0.0)) return ExtendedPoint::infinity();
    return make_point(1.0 / p.z);
}

inline std::string format_point(const ExtendedPoint& p) {
    if (p.inf) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", p.z.real(), p.z.imag());
    return buf;
}

} // namespace juliagraph
