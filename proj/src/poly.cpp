#include "juliagraph/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace juliagraph {

void Poly::trim(double eps) {
    while (!c.empty() && std::abs(c.back()) <= eps) c.pop_back();
}

cplx Poly::eval(cplx z) const {
    cplx p(0.0);
    for (std::size_t i = c.size(); i-- > 0;) p = p * z + c[i];
    return p;
}

void Poly::eval2(cplx z, cplx& p, cplx& dp) const {
    p = cplx(0.0);
    dp = cplx(0.0);
    for (std::size_t i = c.size(); i-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[i];
    }
}

Poly Poly::derivative() const {
    if (c.size() <= 1) return Poly();
    std::vector<cplx> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = double(i) * c[i];
    return Poly(std::move(d));
}

Poly Poly::reversed(int n) const {
    std::vector<cplx> r(static_cast<std::size_t>(n) + 1, cplx(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (static_cast<int>(i) <= n) r[n - i] = c[i];
    }
    Poly out;
    out.c = std::move(r);
    out.trim();
    return out;
}

Poly Poly::compose(const Poly& inner) const {
    Poly acc;
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = acc * inner + Poly::constant(c[i]);
    }
    return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<cplx> r(std::max(a.c.size(), b.c.size()), cplx(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<cplx> r(std::max(a.c.size(), b.c.size()), cplx(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return Poly(std::move(r));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<cplx> r(a.c.size() + b.c.size() - 1, cplx(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(r));
}

Poly operator*(cplx s, const Poly& a) {
    std::vector<cplx> r(a.c);
    for (auto& v : r) v *= s;
    return Poly(std::move(r));
}

namespace {

// Strips roots at the origin, returns their count.
int strip_zero_roots(std::vector<cplx>& c) {
    int k = 0;
    double lead = 0.0;
    for (const auto& v : c) lead = std::max(lead, std::abs(v));
    if (lead == 0.0) return 0;
    while (c.size() > 1 && std::abs(c.front()) < 1e-300 * lead) {
        c.erase(c.begin());
        ++k;
    }
    return k;
}

std::vector<cplx> aberth(const Poly& p) {
    int n = p.degree();
    std::vector<cplx> z(n);
    // Initial guesses on a circle sized by the Cauchy bound.
    double lead = std::abs(p.leading());
    double bound = 0.0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(p.c[i]) / lead);
    double r = 1.0 + bound;
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * M_PI * (i + 0.35) / n + 0.4;
        z[i] = std::polar(std::min(r, 1.0 + std::sqrt(bound)), ang);
    }
    for (int iter = 0; iter < 400; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx pv, dpv;
            p.eval2(z[i], pv, dpv);
            cplx ratio = (dpv != cplx(0)) ? pv / dpv : cplx(1e-3);
            cplx sum(0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx d = z[i] - z[j];
                if (std::abs(d) < 1e-300) d = cplx(1e-300);
                sum += 1.0 / d;
            }
            cplx denom = 1.0 - ratio * sum;
            cplx step = (std::abs(denom) > 1e-300) ? ratio / denom : ratio;
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (worst < 1e-14) break;
    }
    // Newton polish.
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 8; ++k) {
            cplx pv, dpv;
            p.eval2(z[i], pv, dpv);
            if (std::abs(dpv) < 1e-300) break;
            cplx step = pv / dpv;
            z[i] -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(z[i]))) break;
        }
    }
    return z;
}

} // namespace

std::vector<cplx> poly_roots_raw(const Poly& p) {
    std::vector<cplx> c = p.c;
    Poly q(std::move(c));
    q.trim(0.0);
    if (q.degree() <= 0) return {};
    std::vector<cplx> coeffs = q.c;
    int zeros = strip_zero_roots(coeffs);
    std::vector<cplx> roots(zeros, cplx(0));
    Poly reduced(std::move(coeffs));
    if (reduced.degree() >= 1) {
        if (reduced.degree() == 1) {
            roots.push_back(-reduced.c[0] / reduced.c[1]);
        } else {
            auto r = aberth(reduced);
            roots.insert(roots.end(), r.begin(), r.end());
        }
    }
    return roots;
}

std::vector<RootCluster> poly_roots(const Poly& p, double cluster_radius) {
    std::vector<cplx> raw = poly_roots_raw(p);
    std::vector<RootCluster> out;
    std::vector<bool> used(raw.size(), false);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        cplx sum = raw[i];
        int m = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (!used[j] && std::abs(raw[j] - raw[i]) < cluster_radius) {
                used[j] = true;
                sum += raw[j];
                ++m;
            }
        }
        RootCluster rc;
        rc.center = sum / double(m);
        rc.multiplicity = m;
        if (m > 1) {
            // A root of multiplicity m is a simple root of the (m-1)-th
            // derivative; polish there for full precision.
            Poly d = p;
            for (int k = 0; k < m - 1; ++k) d = d.derivative();
            for (int k = 0; k < 32; ++k) {
                cplx pv, dpv;
                d.eval2(rc.center, pv, dpv);
                if (std::abs(dpv) < 1e-300) break;
                cplx step = pv / dpv;
                rc.center -= step;
                if (std::abs(step) < 1e-15 * (1.0 + std::abs(rc.center))) break;
            }
        }
        out.push_back(rc);
    }
    return out;
}

} // namespace juliagraph
