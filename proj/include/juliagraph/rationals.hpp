#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace juliagraph {

// Exact rational p/q in lowest terms, q > 0. Comparisons go through
// __int128 so denominators up to ~2^62 are safe.
struct Rational {
    std::int64_t p = 0;
    std::int64_t q = 1;

    Rational() = default;
    Rational(std::int64_t num, std::int64_t den) : p(num), q(den) { normalize(); }

    void normalize() {
        if (q == 0) throw std::invalid_argument("rational with zero denominator");
        if (q < 0) {
            p = -p;
            q = -q;
        }
        std::int64_t g = std::gcd(p < 0 ? -p : p, q);
        if (g > 1) {
            p /= g;
            q /= g;
        }
    }

    double to_double() const { return static_cast<double>(p) / static_cast<double>(q); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.p == b.p && a.q == b.q;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.p) * b.q < static_cast<__int128>(b.p) * a.q;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.p * b.q + b.p * a.q, a.q * b.q);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.p * b.q - b.p * a.q, a.q * b.q);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.p * b.p, a.q * b.q);
    }
};

// Angle as an exact fraction of a full turn, in [0, 1).
struct Angle {
    Rational t;

    Angle() = default;
    explicit Angle(Rational r) : t(r) { reduce_mod1(); }
    Angle(std::int64_t p, std::int64_t q) : t(p, q) { reduce_mod1(); }

    void reduce_mod1() {
        std::int64_t m = t.p % t.q;
        if (m < 0) m += t.q;
        t.p = m;
    }

    Angle times(std::int64_t d) const { return Angle(Rational(t.p * d, t.q)); }

    double turns() const { return t.to_double(); }
    double radians() const { return 2.0 * 3.14159265358979323846 * turns(); }

    std::string str() const {
        return std::to_string(t.p) + "/" + std::to_string(t.q);
    }

    static Angle parse(const std::string& s);

    friend bool operator==(const Angle& a, const Angle& b) { return a.t == b.t; }
    friend bool operator!=(const Angle& a, const Angle& b) { return !(a == b); }
    friend bool operator<(const Angle& a, const Angle& b) { return a.t < b.t; }
};

inline Angle Angle::parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        return Angle(std::stoll(s), 1);
    }
    std::int64_t p = std::stoll(s.substr(0, slash));
    std::int64_t q = std::stoll(s.substr(slash + 1));
    return Angle(p, q);
}

// Strict cyclic order: is b inside the open arc (a, c) traversed
// counterclockwise from a to c?
inline bool cyclic_between(const Angle& a, const Angle& b, const Angle& c) {
    if (a == c) return false;
    if (a < c) return a < b && b < c;
    return a < b || b < c;
}

} // namespace juliagraph
