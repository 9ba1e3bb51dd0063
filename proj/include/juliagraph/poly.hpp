#pragma once

#include <vector>

#include "juliagraph/geometry.hpp"

namespace juliagraph {

// Dense univariate polynomial over C, coefficients in ascending degree.
struct Poly {
    std::vector<cplx> c;

    Poly() = default;
    explicit Poly(std::vector<cplx> coeffs) : c(std::move(coeffs)) { trim(); }

    static Poly constant(cplx v) { return Poly({v}); }
    static Poly x() { return Poly({cplx(0), cplx(1)}); }

    void trim(double eps = 0.0);
    int degree() const { return static_cast<int>(c.size()) - 1; } // -1 for zero poly
    bool is_zero() const { return c.empty(); }
    cplx leading() const { return c.empty() ? cplx(0) : c.back(); }

    cplx eval(cplx z) const;
    // Evaluates p and p' in one Horner pass.
    void eval2(cplx z, cplx& p, cplx& dp) const;

    Poly derivative() const;
    // Coefficient reversal padded to degree n: q(w) = w^n * p(1/w).
    Poly reversed(int n) const;
    Poly compose(const Poly& inner) const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(cplx s, const Poly& a);

struct RootCluster {
    cplx center;
    int multiplicity = 1;
};

// All complex roots with multiplicity via Aberth-Ehrlich iteration, Newton
// polish, then clustering at cluster_radius. Multiple roots are re-polished
// on the (m-1)-th derivative so that e.g. a double root is recovered to full
// precision rather than sqrt(eps).
std::vector<RootCluster> poly_roots(const Poly& p, double cluster_radius = 1e-6);

// Raw roots without clustering (with multiplicity, repeated entries).
std::vector<cplx> poly_roots_raw(const Poly& p);

} // namespace juliagraph
