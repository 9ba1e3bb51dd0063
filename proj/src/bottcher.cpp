#include "juliagraph/bottcher.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace juliagraph {

namespace {

RationalMap conjugate_to_origin(const RationalMap& map, const ExtendedPoint& center) {
    int d = map.degree();
    if (center.inf) {
        // w-chart map F(w) = 1/f(1/w): reversed coefficient vectors
        return RationalMap(map.den().reversed(d), map.num().reversed(d));
    }
    // g(w) = f(w + c) - c
    Poly shift({center.z, cplx(1.0)});
    Poly n = map.num().compose(shift);
    Poly dn = map.den().compose(shift);
    return RationalMap(n - Poly::constant(center.z) * dn, dn);
}

} // namespace

BottcherChart::BottcherChart(const RationalMap& map, const ExtendedPoint& center,
                             int local_degree)
    : local_(conjugate_to_origin(map, center)), center_(center), center_inf_(center.inf) {
    // Local series at 0: g = N/D with ord_0(N) = local degree, D(0) != 0.
    const Poly& N = local_.num();
    const Poly& D = local_.den();
    double scale = 0.0;
    for (const auto& c : N.c) scale = std::max(scale, std::abs(c));
    if (std::abs(D.eval(cplx(0))) < 1e-12 * scale)
        throw BottcherError("center is a pole of the conjugated map");
    int k = 0;
    while (k < static_cast<int>(N.c.size()) && std::abs(N.c[k]) < 1e-9 * scale) ++k;
    if (k < 2) throw BottcherError("center is not superattracting");
    if (k != local_degree)
        throw BottcherError("local degree mismatch: found " + std::to_string(k) +
                            ", expected " + std::to_string(local_degree));
    d_ = k;
    lambda_ = N.c[k] / D.eval(cplx(0));
    norm_ = std::pow(lambda_, 1.0 / (d_ - 1));
    calibrate();
}

cplx BottcherChart::to_local(const ExtendedPoint& p) const {
    if (center_inf_) {
        ExtendedPoint w = reciprocal(p);
        return w.inf ? cplx(1e30, 0) : w.z;
    }
    if (p.inf) return cplx(1e30, 0);
    return p.z - center_.z;
}

ExtendedPoint BottcherChart::from_local(cplx w) const {
    if (center_inf_) return reciprocal(make_point(w));
    return make_point(w + center_.z);
}

cplx BottcherChart::local_step(cplx u) const {
    ExtendedPoint r = local_.eval(ExtendedPoint(u));
    return r.inf ? cplx(1e30, 0.0) : r.z;
}

cplx BottcherChart::phi_local(cplx w) const {
    if (w == cplx(0)) return cplx(0);
    cplx acc = norm_ * w;
    cplx u = w;
    for (int n = 0; n < 64; ++n) {
        cplx fu = local_step(u); // stays near 0 inside the basin
        cplx un_d = std::pow(u, d_);
        cplx ratio = fu / (lambda_ * un_d);
        acc *= std::exp(std::log(ratio) / std::pow(double(d_), n + 1));
        u = fu;
        if (std::abs(u) < 1e-140) break;
    }
    return acc;
}

double BottcherChart::functional_equation_residual(cplx w) const {
    cplx fw = local_step(w);
    return std::abs(phi_local(fw) - std::pow(phi_local(w), d_));
}

void BottcherChart::calibrate() {
    // Keep the chart disk clear of other critical points and poles of the
    // local map, then shrink until the functional equation verifies.
    double guard = 1.0;
    for (const auto& cd : local_.critical_points()) {
        if (cd.location.inf) continue;
        double m = std::abs(cd.location.z);
        if (m > 1e-9) guard = std::min(guard, 0.7 * m);
    }
    for (const auto& r : poly_roots_raw(local_.den())) guard = std::min(guard, 0.7 * std::abs(r));

    double s = guard;
    bool ok = false;
    for (int tries = 0; tries < 40 && !ok; ++tries, s *= 0.8) {
        ok = true;
        for (int j = 0; j < 16 && ok; ++j) {
            cplx w = std::polar(s, 2.0 * M_PI * (j + 0.3) / 16.0);
            // the orbit must fall into the immediate basin of the center
            cplx u = w;
            for (int it = 0; it < 60; ++it) {
                u = local_step(u);
                if (std::abs(u) > 1e20) break;
            }
            if (!(std::abs(u) < 1e-6)) ok = false;
            if (ok && functional_equation_residual(w) > 1e-8) ok = false;
        }
    }
    if (!ok) throw BottcherError("could not certify a Bottcher chart disk");
    s_max_ = s / 0.8;
    double rmin = 1e300;
    for (int j = 0; j < 32; ++j)
        rmin = std::min(rmin, std::abs(phi_local(std::polar(s_max_, 2.0 * M_PI * j / 32.0))));
    r_valid_ = 0.8 * rmin;
    r_seed_ = std::pow(r_valid_, double(d_));
}

cplx BottcherChart::psi_local(cplx zeta) const {
    if (std::abs(zeta) > r_valid_ * (1 + 1e-12))
        throw BottcherError("psi outside the chart validity disk");
    cplx w = zeta / norm_;
    // continuation along the radius keeps Newton in basin
    for (int stage = 1; stage <= 4; ++stage) {
        cplx target = zeta * (stage / 4.0);
        for (int it = 0; it < 60; ++it) {
            cplx p = phi_local(w) - target;
            double h = 1e-7 * (std::abs(w) + 1e-9);
            cplx dp = (phi_local(w + cplx(h, 0)) - phi_local(w - cplx(h, 0))) / (2 * h);
            if (std::abs(dp) < 1e-300) break;
            cplx step = p / dp;
            w -= step;
            if (std::abs(step) < 1e-14 * (std::abs(w) + 1e-12)) break;
        }
    }
    if (std::abs(phi_local(w) - zeta) > 1e-9 * (1.0 + std::abs(zeta)))
        throw BottcherError("psi Newton did not converge");
    return w;
}

ExtendedPoint BottcherChart::point_at(double potential, double angle_turns) const {
    cplx zeta = std::polar(potential, 2.0 * M_PI * angle_turns);
    return from_local(psi_local(zeta));
}

std::optional<ExtendedPoint> newton_preimage(const RationalMap& map,
                                             const ExtendedPoint& target,
                                             const ExtendedPoint& seed, double tol,
                                             int max_iter) {
    bool out_w = preferred_wchart(target);
    cplx t = out_w ? (target.inf ? cplx(0) : 1.0 / target.z) : target.z;
    bool in_w = preferred_wchart(seed);
    cplx x = in_w ? (seed.inf ? cplx(0) : 1.0 / seed.z) : seed.z;
    for (int it = 0; it < max_iter; ++it) {
        const Poly *P, *Q;
        map.chart_polys(in_w, out_w, P, Q);
        cplx p, dp, q, dq;
        P->eval2(x, p, dp);
        Q->eval2(x, q, dq);
        if (std::abs(q) < 1e-300) return std::nullopt;
        cplx val = p / q;
        cplx dval = (dp * q - p * dq) / (q * q);
        cplx res = val - t;
        if (std::abs(res) < tol) {
            ExtendedPoint out = in_w ? reciprocal(make_point(x)) : make_point(x);
            return out;
        }
        if (std::abs(dval) < 1e-300) return std::nullopt;
        x -= res / dval;
        if (std::abs(x) > 2.0) { // swap input chart
            x = 1.0 / x;
            in_w = !in_w;
        }
    }
    return std::nullopt;
}

namespace {

std::vector<ExtendedPoint> critical_locations(const RationalMap& map) {
    std::vector<ExtendedPoint> out;
    for (const auto& cd : map.critical_points()) out.push_back(cd.location);
    return out;
}

} // namespace

std::vector<InternalRay> trace_rays(const BottcherChart& chart, const RationalMap& map,
                                    const std::vector<Angle>& angles, int steps_per_level,
                                    int max_levels, double crit_abort_radius) {
    const int d = chart.local_degree();
    const int J = std::max(1, steps_per_level);

    // Forward orbit closure of the requested angles under d-tupling.
    std::vector<Angle> orbit;
    auto index_of = [&](const Angle& a) -> int {
        for (std::size_t i = 0; i < orbit.size(); ++i)
            if (orbit[i] == a) return static_cast<int>(i);
        return -1;
    };
    for (const auto& a0 : angles) {
        Angle a = a0;
        while (index_of(a) < 0) {
            orbit.push_back(a);
            a = a.times(d);
        }
    }
    std::vector<int> next(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i) next[i] = index_of(orbit[i].times(d));

    auto crits = critical_locations(map);
    double r_seed = chart.seed_potential();

    // Two parallel tracks per ray. poly[i]: the traced polyline. feed[i]:
    // the targets handed to downstream rays. They coincide until the ray
    // first enters the critical abort zone; from then on the feed carries
    // the exact critical point (the ray's landing value), so downstream
    // solves converge to its preimages at full precision, while the polyline
    // keeps refining against the (frozen) upstream to cluster its tail.
    std::vector<std::vector<ExtendedPoint>> poly(orbit.size()), feed(orbit.size());
    std::vector<bool> alive(orbit.size(), true);
    std::vector<bool> feed_frozen(orbit.size(), false);
    std::vector<ExtendedPoint> freeze_val(orbit.size());
    std::vector<ExtendedPoint> abort_at(orbit.size());
    std::vector<bool> aborted_crit(orbit.size(), false);
    std::vector<int> stagnant(orbit.size(), 0);

    for (std::size_t i = 0; i < orbit.size(); ++i)
        for (int j = 0; j < J; ++j) {
            double e = std::pow(double(d), -double(j) / J);
            ExtendedPoint p = chart.point_at(std::pow(r_seed, e), orbit[i].turns());
            poly[i].push_back(p);
            feed[i].push_back(p);
        }

    auto freeze_feed = [&](std::size_t i, const ExtendedPoint& value) {
        feed_frozen[i] = true;
        freeze_val[i] = value;
        while (feed[i].size() % J != 0) feed[i].push_back(value);
    };

    auto stop_ray = [&](std::size_t i) {
        alive[i] = false;
        if (feed_frozen[i]) return;
        // freeze the feed at the last point if the tail already clusters
        std::size_t tail = std::min<std::size_t>(poly[i].size(), 2 * J);
        double spread = 0.0;
        for (std::size_t k = poly[i].size() - tail; k < poly[i].size(); ++k)
            spread = std::max(spread, chordal(poly[i][k], poly[i].back()));
        if (spread < 1e-3) freeze_feed(i, poly[i].back());
    };

    for (int level = 1; level <= max_levels; ++level) {
        std::size_t base = static_cast<std::size_t>(level - 1) * J;
        for (std::size_t i = 0; i < orbit.size(); ++i) {
            if (feed_frozen[i])
                while (feed[i].size() < base + 2u * J) feed[i].push_back(freeze_val[i]);
            if (!alive[i]) continue;
            if (feed[next[i]].size() < base + J) { // upstream ray starved
                stop_ray(i);
                continue;
            }
            for (int j = 0; j < J && alive[i]; ++j) {
                const ExtendedPoint& target = feed[next[i]][base + j];
                const ExtendedPoint& seed = poly[i].back();
                auto sol = newton_preimage(map, target, seed);
                if (!sol || chordal(*sol, seed) > 0.5) {
                    stop_ray(i);
                    break;
                }
                double step = chordal(*sol, seed);
                poly[i].push_back(*sol);
                if (!feed_frozen[i]) {
                    bool contact = false;
                    ExtendedPoint at;
                    for (const auto& c : crits)
                        if (chordal(*sol, c) < crit_abort_radius) {
                            contact = true;
                            at = c;
                        }
                    if (contact) {
                        // entering the ambiguity zone around a critical point:
                        // the landing value is that critical point exactly
                        aborted_crit[i] = true;
                        abort_at[i] = at;
                        freeze_feed(i, at);
                    } else {
                        feed[i].push_back(*sol);
                    }
                }
                // once converged to machine precision, pad out a full landing
                // window and stop
                stagnant[i] = (step < 1e-13) ? stagnant[i] + 1 : 0;
                if (stagnant[i] > 3 * J) {
                    stop_ray(i);
                    break;
                }
            }
        }
        bool any = false;
        for (std::size_t i = 0; i < orbit.size(); ++i)
            if (alive[i]) any = true;
        if (!any) break;
    }

    std::vector<InternalRay> out;
    for (const auto& a : angles) {
        int i = index_of(a);
        InternalRay ray;
        ray.angle = a;
        ray.polyline = poly[i];
        ray.levels_traced = static_cast<int>(poly[i].size()) / J;
        if (aborted_crit[i]) {
            ray.state = LandingState::aborted_near_critical;
            ray.abort_location = abort_at[i];
        }
        out.push_back(std::move(ray));
    }
    return out;
}

InternalRay trace_ray(const BottcherChart& chart, const RationalMap& map, Angle angle,
                      int steps_per_level, int max_levels) {
    return trace_rays(chart, map, {angle}, steps_per_level, max_levels).front();
}

void detect_landing(InternalRay& ray, double tol, int tail_len) {
    if (static_cast<int>(ray.polyline.size()) < tail_len) return;
    std::array<double, 3> acc{0, 0, 0};
    for (std::size_t k = ray.polyline.size() - tail_len; k < ray.polyline.size(); ++k) {
        auto e = sphere_embed(ray.polyline[k]);
        for (int i = 0; i < 3; ++i) acc[i] += e[i];
    }
    double nrm = std::sqrt(acc[0] * acc[0] + acc[1] * acc[1] + acc[2] * acc[2]);
    if (nrm < 1e-12) return;
    ExtendedPoint centroid;
    double Z = acc[2] / nrm;
    if (Z > 1.0 - 1e-14)
        centroid = ExtendedPoint::infinity();
    else
        centroid = make_point(cplx(acc[0] / nrm / (1.0 - Z), acc[1] / nrm / (1.0 - Z)));
    double worst = 0.0;
    for (std::size_t k = ray.polyline.size() - tail_len; k < ray.polyline.size(); ++k)
        worst = std::max(worst, chordal(ray.polyline[k], centroid));
    if (worst < tol) {
        ray.state = LandingState::landed;
        ray.landing_point = centroid;
    } else if (ray.state != LandingState::aborted_near_critical) {
        ray.state = LandingState::unresolved;
    }
}

LeafSet colanding_pairs(const LandingTable& table, double tol) {
    struct Cand {
        Angle a, b;
        double dist;
        ExtendedPoint pt;
    };
    std::vector<Cand> cands;
    for (auto it = table.landing.begin(); it != table.landing.end(); ++it)
        for (auto jt = std::next(it); jt != table.landing.end(); ++jt) {
            double dd = chordal(it->second, jt->second);
            if (dd < tol) cands.push_back({it->first, jt->first, dd, it->second});
        }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& x, const Cand& y) { return x.dist < y.dist; });
    LeafSet out;
    std::vector<Leaf> accepted;
    std::vector<double> accepted_dist;
    for (const auto& c : cands) {
        Leaf leaf(c.a, c.b);
        bool crosses = false;
        for (std::size_t k = 0; k < accepted.size(); ++k)
            if (leaves_cross(leaf, accepted[k])) {
                crosses = true;
                if (c.dist - accepted_dist[k] < 1e-15)
                    throw BottcherError(
                        "crossing conflict among equal-distance co-landing pairs (" +
                        leaf.a.str() + "," + leaf.b.str() + ")");
            }
        if (crosses) continue; // tighter accepted pair wins
        accepted.push_back(leaf);
        accepted_dist.push_back(c.dist);
        out.records.push_back({leaf, c.pt});
    }
    return out;
}

std::vector<ExtendedPoint> equipotential_polyline(const BottcherChart& chart,
                                                  const RationalMap& map, int samples,
                                                  int levels) {
    const int d = chart.local_degree();
    double r_seed = chart.seed_potential();
    std::vector<ExtendedPoint> cur(samples), nxt(samples);
    for (int j = 0; j < samples; ++j)
        cur[j] = chart.point_at(r_seed, double(j) / samples);
    for (int level = 1; level <= levels; ++level) {
        for (int j = 0; j < samples; ++j) {
            const ExtendedPoint& target = cur[(static_cast<long long>(j) * d) % samples];
            auto sol = newton_preimage(map, target, cur[j]);
            if (!sol) throw BottcherError("equipotential continuation failed at level " +
                                          std::to_string(level));
            nxt[j] = *sol;
        }
        cur.swap(nxt);
    }
    return cur;
}

} // namespace juliagraph
