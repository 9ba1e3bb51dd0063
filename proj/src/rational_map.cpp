#include "juliagraph/rational_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace juliagraph {

const char* cycle_class_name(CycleClass c) {
    switch (c) {
        case CycleClass::superattracting: return "superattracting";
        case CycleClass::attracting: return "attracting";
        case CycleClass::repelling: return "repelling";
        case CycleClass::indifferent: return "indifferent";
    }
    return "?";
}

RationalMap::RationalMap(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    num_.trim(0.0);
    den_.trim(0.0);
    if (num_.is_zero() && den_.is_zero()) throw MapError("0/0 rational map");
    degree_ = std::max(num_.degree(), den_.degree());
    if (degree_ < 0) throw MapError("empty rational map");
    rnum_ = num_.reversed(degree_);
    rden_ = den_.reversed(degree_);
    validate();
}

void RationalMap::validate() const {
    if (den_.is_zero()) return; // polynomial written as N/0 is rejected above
    // Common-root check stands in for the resultant: every root of den must
    // miss num and vice versa.
    for (const auto& r : poly_roots_raw(den_)) {
        double scale = 0.0;
        for (const auto& cval : num_.c) scale = std::max(scale, std::abs(cval));
        if (scale > 0 && std::abs(num_.eval(r)) < 1e-9 * scale * (1.0 + std::abs(r)))
            throw MapError("num and den share a root near " +
                           format_point(ExtendedPoint(r)));
    }
}

RationalMap RationalMap::polynomial(std::vector<cplx> coeffs) {
    return RationalMap(Poly(std::move(coeffs)), Poly::constant(cplx(1.0)));
}

RationalMap cubic_chain_example() {
    // (z^3 - 6z^2 + 9z - 8) / (3z)
    return RationalMap(Poly({cplx(-8), cplx(9), cplx(-6), cplx(1)}),
                       Poly({cplx(0), cplx(3)}));
}

void RationalMap::chart_polys(bool in_w, bool out_w, const Poly*& P, const Poly*& Q) const {
    const Poly& n = in_w ? rnum_ : num_;
    const Poly& d = in_w ? rden_ : den_;
    if (out_w) {
        P = &d;
        Q = &n;
    } else {
        P = &n;
        Q = &d;
    }
}

ExtendedPoint RationalMap::eval(const ExtendedPoint& z) const {
    bool in_w = preferred_wchart(z);
    cplx x = in_w ? (z.inf ? cplx(0.0) : 1.0 / z.z) : z.z;
    const Poly& n = in_w ? rnum_ : num_;
    const Poly& d = in_w ? rden_ : den_;
    cplx a = n.eval(x);
    cplx b = d.eval(x);
    double ma = std::abs(a), mb = std::abs(b);
    if (ma == 0.0 && mb == 0.0) throw MapError("degenerate evaluation at " + format_point(z));
    if (ma <= mb) {
        return make_point(a / b);
    }
    // Large value: compute in the reciprocal output chart for accuracy.
    cplx w = b / a;
    if (w == cplx(0.0)) return ExtendedPoint::infinity();
    return make_point(1.0 / w);
}

cplx RationalMap::chart_derivative(const ExtendedPoint& z, const ExtendedPoint& fz) const {
    bool in_w = preferred_wchart(z);
    bool out_w = preferred_wchart(fz);
    const Poly *P, *Q;
    chart_polys(in_w, out_w, P, Q);
    cplx x = in_w ? (z.inf ? cplx(0.0) : 1.0 / z.z) : z.z;
    cplx p, dp, q, dq;
    P->eval2(x, p, dp);
    Q->eval2(x, q, dq);
    return (dp * q - p * dq) / (q * q);
}

std::vector<ExtendedPoint> RationalMap::preimages(const ExtendedPoint& w) const {
    // Solve f(z) = w. In the z-input chart the equation is
    // num(z) - w den(z) = 0 (or den(z) = 0 for w = inf); missing roots
    // relative to the map degree are preimages at infinity.
    Poly eq;
    if (w.inf) {
        eq = den_;
    } else if (std::abs(w.z) <= 1.0) {
        eq = num_ - Poly::constant(w.z) * den_;
    } else {
        // Use 1/f(z) = 1/w to keep coefficients balanced.
        eq = den_ - Poly::constant(1.0 / w.z) * num_;
    }
    eq.trim(1e-14 * [&] {
        double m = 0.0;
        for (auto& c : eq.c) m = std::max(m, std::abs(c));
        return m;
    }());
    std::vector<ExtendedPoint> out;
    for (const auto& r : poly_roots_raw(eq)) out.push_back(make_point(r));
    while (static_cast<int>(out.size()) < degree_) out.push_back(ExtendedPoint::infinity());
    return out;
}

std::vector<CriticalDatum> RationalMap::critical_points() const {
    if (degree_ < 2) throw MapError("critical_points needs degree >= 2");
    Poly w = num_.derivative() * den_ - num_ * den_.derivative();
    double scale = 0.0;
    for (const auto& c : w.c) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) throw MapError("identically critical map");
    w.trim(1e-12 * scale);

    std::vector<CriticalDatum> out;
    int finite_weight = 0;
    for (const auto& rc : poly_roots(w, 1e-6)) {
        CriticalDatum cd;
        cd.location = make_point(rc.center);
        cd.local_degree = rc.multiplicity + 1;
        finite_weight += rc.multiplicity;
        out.push_back(cd);
    }
    int inf_mult = (2 * degree_ - 2) - finite_weight;
    if (inf_mult > 0) {
        CriticalDatum cd;
        cd.location = ExtendedPoint::infinity();
        cd.local_degree = inf_mult + 1;
        out.push_back(cd);
    } else if (inf_mult < 0) {
        throw MapError("critical point count exceeds 2d-2 (root finder residual)");
    }
    return out;
}

RationalMap RationalMap::compose_with(const RationalMap& inner) const {
    // this(inner(z)) = sum_i num_i * Ni^i * Di^(m-i) / sum_i den_i * Ni^i * Di^(m-i)
    int m = degree_;
    std::vector<Poly> npow(m + 1), dpow(m + 1);
    npow[0] = Poly::constant(cplx(1));
    dpow[0] = Poly::constant(cplx(1));
    for (int i = 1; i <= m; ++i) {
        npow[i] = npow[i - 1] * inner.num_;
        dpow[i] = dpow[i - 1] * inner.den_;
    }
    Poly n, d;
    for (int i = 0; i <= m; ++i) {
        Poly term = npow[i] * dpow[m - i];
        if (i < static_cast<int>(num_.c.size())) n = n + num_.c[i] * term;
        if (i < static_cast<int>(den_.c.size())) d = d + den_.c[i] * term;
    }
    return RationalMap(std::move(n), std::move(d));
}

RationalMap RationalMap::iterate_map(int n) const {
    if (n < 1) throw MapError("iterate_map needs n >= 1");
    RationalMap acc = *this;
    for (int k = 1; k < n; ++k) acc = compose_with(acc);
    return acc;
}

std::string RationalMap::cache_key() const {
    // FNV-1a over the coefficient bytes.
    auto mix = [](std::uint64_t h, double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
        return h;
    };
    std::uint64_t h = 14695981039346656037ULL;
    for (const auto& c : num_.c) h = mix(mix(h, c.real()), c.imag());
    h = mix(h, -1.0);
    for (const auto& c : den_.c) h = mix(mix(h, c.real()), c.imag());
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RationalMap RationalMap::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MapError("cannot open map file: " + path);
    nlohmann::json j;
    in >> j;
    auto parse = [](const nlohmann::json& arr) {
        std::vector<cplx> c;
        for (const auto& e : arr) c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        return Poly(std::move(c));
    };
    return RationalMap(parse(j.at("num")), parse(j.at("den")));
}

void RationalMap::save_json(const std::string& path) const {
    nlohmann::json j;
    auto dump = [](const Poly& p) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : p.c) arr.push_back({c.real(), c.imag()});
        return arr;
    };
    j["num"] = dump(num_);
    j["den"] = dump(den_);
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

OrbitResult forward_orbit(const RationalMap& map, const ExtendedPoint& z,
                          int max_iter, double eps) {
    OrbitResult res;
    if (max_iter < 1) throw MapError("forward_orbit needs max_iter >= 1");
    res.orbit.push_back(z);
    int need = 3 * max_iter + 1;
    try {
        for (int i = 0; i < need; ++i) res.orbit.push_back(map.eval(res.orbit.back()));
    } catch (const MapError&) {
        return res; // degenerate orbit: unresolved
    }
    for (int q = 0; q + 1 <= max_iter; ++q) {
        for (int p = 1; q + p <= max_iter; ++p) {
            if (chordal(res.orbit[q], res.orbit[q + p]) >= eps) continue;
            bool ok = true;
            for (int k = 0; k <= 2 * p && ok; ++k)
                ok = chordal(res.orbit[q + k], res.orbit[q + k + p]) < eps;
            if (ok) {
                res.resolved = true;
                res.preperiod = q;
                res.period = p;
                return res;
            }
        }
    }
    return res;
}

bool MarkedMap::contains_marked(const ExtendedPoint& p, double eps) const {
    for (const auto& m : marked)
        if (chordal(m, p) < eps) return true;
    return false;
}

PcfResult certify_pcf(const RationalMap& map, int max_iter, double eps) {
    PcfResult result;
    MarkedMap mm;
    mm.map = map;
    auto add_marked = [&](const ExtendedPoint& p) {
        if (!mm.contains_marked(p, eps * 10)) mm.marked.push_back(p);
    };
    for (const auto& cd : map.critical_points()) {
        ExtendedPoint v = map.eval(cd.location);
        OrbitResult orb = forward_orbit(map, v, max_iter, eps);
        if (!orb.resolved) {
            result.failure = PcfFailure{v, "critical orbit did not close within tolerance"};
            return result;
        }
        OrbitEntry entry;
        entry.critical_value = v;
        entry.preperiod = orb.preperiod;
        entry.period = orb.period;
        mm.orbit_table.push_back(entry);
        for (int i = 0; i < orb.preperiod + orb.period; ++i) add_marked(orb.orbit[i]);
    }
    result.marked_map = std::move(mm);
    return result;
}

CycleRecord classify_cycle(const RationalMap& map, const std::vector<ExtendedPoint>& cycle,
                           double eps, double eps_super, double eps_cls) {
    if (cycle.empty()) throw MapError("empty cycle");
    CycleRecord rec;
    rec.points = cycle;
    rec.period = static_cast<int>(cycle.size());
    cplx mult(1.0, 0.0);
    for (int i = 0; i < rec.period; ++i) {
        ExtendedPoint fz = map.eval(cycle[i]);
        const ExtendedPoint& next = cycle[(i + 1) % rec.period];
        if (chordal(fz, next) > eps)
            throw MapError("points do not form a cycle within tolerance");
        mult *= map.chart_derivative(cycle[i], next);
    }
    rec.multiplier_modulus = std::abs(mult);
    if (rec.multiplier_modulus < eps_super)
        rec.cls = CycleClass::superattracting;
    else if (rec.multiplier_modulus < 1.0 - eps_cls)
        rec.cls = CycleClass::attracting;
    else if (rec.multiplier_modulus > 1.0 + eps_cls)
        rec.cls = CycleClass::repelling;
    else
        rec.cls = CycleClass::indifferent;
    return rec;
}

std::vector<CycleRecord> MarkedMap::attracting_cycles(int max_iter, double eps) const {
    std::vector<CycleRecord> cycles;
    auto same_cycle = [&](const CycleRecord& a, const std::vector<ExtendedPoint>& pts) {
        if (static_cast<int>(pts.size()) != a.period) return false;
        for (const auto& p : pts) {
            bool found = false;
            for (const auto& q : a.points)
                if (chordal(p, q) < 1e-6) found = true;
            if (!found) return false;
        }
        return true;
    };
    for (const auto& entry : orbit_table) {
        OrbitResult orb = forward_orbit(map, entry.critical_value, max_iter, eps);
        if (!orb.resolved) continue;
        std::vector<ExtendedPoint> pts(orb.orbit.begin() + orb.preperiod,
                                       orb.orbit.begin() + orb.preperiod + orb.period);
        bool dup = false;
        for (const auto& c : cycles)
            if (same_cycle(c, pts)) dup = true;
        if (dup) continue;
        CycleRecord rec = classify_cycle(map, pts, 1e-6);
        if (rec.cls == CycleClass::superattracting || rec.cls == CycleClass::attracting)
            cycles.push_back(rec);
    }
    return cycles;
}

} // namespace juliagraph
