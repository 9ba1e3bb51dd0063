#include <doctest.h>

#include "juliagraph/bottcher.hpp"

using namespace juliagraph;

namespace {

RationalMap z2() { return RationalMap::polynomial({cplx(0), cplx(0), cplx(1)}); }

} // namespace

TEST_CASE("z^2 is its own Bottcher model at 0") {
    BottcherChart chart(z2(), ExtendedPoint(0, 0), 2);
    CHECK(std::abs(chart.leading_coeff() - cplx(1, 0)) < 1e-12);
    cplx w(0.08, 0.03);
    CHECK(std::abs(chart.phi_local(w) - w) < 1e-10);
    CHECK(chart.functional_equation_residual(w) < 1e-10);
}

TEST_CASE("cubic chart at infinity with local degree 2") {
    RationalMap f = cubic_chain_example();
    BottcherChart chart(f, ExtendedPoint::infinity(), 2);
    CHECK(std::abs(chart.leading_coeff() - cplx(3, 0)) < 1e-9);
    for (int j = 0; j < 8; ++j) {
        cplx w = std::polar(chart.valid_w_radius() * 0.7, 2.0 * M_PI * j / 8.0);
        CHECK(chart.functional_equation_residual(w) < 1e-8);
    }
}

TEST_CASE("monic polynomial chart at infinity") {
    RationalMap f = RationalMap::polynomial({cplx(-1), cplx(0), cplx(1)});
    BottcherChart chart(f, ExtendedPoint::infinity(), 2);
    CHECK(chart.local_degree() == 2);
    CHECK(chart.valid_potential() > 0);
}

TEST_CASE("local degree mismatch errors out") {
    CHECK_THROWS_AS(BottcherChart(cubic_chain_example(), ExtendedPoint::infinity(), 3),
                    BottcherError);
    // non-superattracting center
    CHECK_THROWS_AS(BottcherChart(cubic_chain_example(), ExtendedPoint(8.0, 0.0), 2),
                    BottcherError);
}

TEST_CASE("psi inverts phi on the seed disk") {
    BottcherChart chart(cubic_chain_example(), ExtendedPoint::infinity(), 2);
    for (int j = 0; j < 12; ++j) {
        cplx zeta = std::polar(chart.seed_potential(), 2.0 * M_PI * j / 12.0);
        cplx w = chart.psi_local(zeta);
        CHECK(std::abs(chart.phi_local(w) - zeta) < 1e-9);
    }
}

TEST_CASE("z^2 rays land at the unit circle point of their angle") {
    BottcherChart chart(z2(), ExtendedPoint(0, 0), 2);
    for (auto angle : {Angle(0, 1), Angle(1, 3), Angle(2, 5)}) {
        InternalRay ray = trace_ray(chart, z2(), angle, 8, 48);
        detect_landing(ray);
        REQUIRE(ray.state == LandingState::landed);
        cplx expect = std::polar(1.0, angle.radians());
        CHECK(chordal(ray.landing_point, ExtendedPoint(expect.real(), expect.imag())) < 1e-3);
    }
    // the angle-0 ray is the real segment (0, 1)
    InternalRay r0 = trace_ray(chart, z2(), Angle(0, 1), 8, 48);
    for (const auto& p : r0.polyline) {
        CHECK(std::abs(p.z.imag()) < 1e-9);
        CHECK(p.z.real() > 0);
        CHECK(p.z.real() < 1.0 + 1e-9);
    }
}

TEST_CASE("cubic ray landings: 0 -> 8, 1/2 -> -1, +-1/4 -> 2") {
    RationalMap f = cubic_chain_example();
    BottcherChart chart(f, ExtendedPoint::infinity(), 2);
    auto rays = trace_rays(chart, f, {Angle(0, 1), Angle(1, 2), Angle(1, 4), Angle(3, 4)},
                           8, 48);
    for (auto& ray : rays) detect_landing(ray);
    REQUIRE(rays[0].state == LandingState::landed);
    CHECK(chordal(rays[0].landing_point, ExtendedPoint(8, 0)) < 1e-3);
    REQUIRE(rays[1].state == LandingState::landed);
    CHECK(chordal(rays[1].landing_point, ExtendedPoint(-1, 0)) < 1e-3);
    REQUIRE(rays[2].state == LandingState::landed);
    CHECK(chordal(rays[2].landing_point, ExtendedPoint(2, 0)) < 1e-3);
    REQUIRE(rays[3].state == LandingState::landed);
    CHECK(chordal(rays[3].landing_point, ExtendedPoint(2, 0)) < 1e-3);
    CHECK(chordal(rays[2].landing_point, rays[3].landing_point) < 1e-3);
}

TEST_CASE("functional equation holds along in-chart ray points") {
    RationalMap f = cubic_chain_example();
    BottcherChart chart(f, ExtendedPoint::infinity(), 2);
    InternalRay ray = trace_ray(chart, f, Angle(1, 4), 8, 30);
    int checked = 0;
    for (const auto& p : ray.polyline) {
        cplx w = chart.to_local(p);
        if (std::abs(w) > chart.valid_w_radius() * 0.9) continue;
        cplx phi = chart.phi_local(w);
        if (std::abs(phi) > chart.valid_potential()) continue;
        CHECK(chart.functional_equation_residual(w) < 1e-6);
        ++checked;
    }
    CHECK(checked >= 4);
}

TEST_CASE("ray equivariance: f maps the theta ray onto the 2*theta ray") {
    RationalMap f = cubic_chain_example();
    BottcherChart chart(f, ExtendedPoint::infinity(), 2);
    int J = 8;
    auto rays = trace_rays(chart, f, {Angle(1, 8), Angle(1, 4)}, J, 24);
    const auto& fine = rays[0].polyline;   // angle 1/8
    const auto& coarse = rays[1].polyline; // angle 1/4 = doubled
    REQUIRE(fine.size() > static_cast<std::size_t>(2 * J));
    // f(point at level m of theta) = point at level m-1 of 2*theta; near the
    // landing plateau both saturate at the Newton resolution, so the sharp
    // bound applies to the first half and a 1e-3 bound everywhere
    for (std::size_t k = J; k + J < fine.size() && k < coarse.size() + J; ++k) {
        ExtendedPoint img = f.eval(fine[k]);
        double d_eq = chordal(img, coarse[k - J]);
        if (k < fine.size() / 2)
            CHECK(d_eq < 1e-6);
        else
            CHECK(d_eq < 1e-3);
    }
}

TEST_CASE("landing stability under step refinement") {
    RationalMap f = cubic_chain_example();
    BottcherChart chart(f, ExtendedPoint::infinity(), 2);
    InternalRay a = trace_ray(chart, f, Angle(1, 4), 8, 48);
    InternalRay b = trace_ray(chart, f, Angle(1, 4), 16, 48);
    detect_landing(a);
    detect_landing(b);
    REQUIRE(a.state == LandingState::landed);
    REQUIRE(b.state == LandingState::landed);
    CHECK(chordal(a.landing_point, b.landing_point) < 0.5e-3);
}

TEST_CASE("colanding pairs for the cubic dyadic fan") {
    RationalMap f = cubic_chain_example();
    BottcherChart chart(f, ExtendedPoint::infinity(), 2);
    std::vector<Angle> angles;
    for (int n = 1; n <= 6; ++n) {
        std::int64_t q = 1LL << (n + 1);
        angles.push_back(Angle(1, q));
        angles.push_back(Angle(q - 1, q));
    }
    auto rays = trace_rays(chart, f, angles, 8, 60);
    LandingTable table;
    for (auto& ray : rays) {
        detect_landing(ray);
        REQUIRE(ray.state == LandingState::landed);
        table.landing[ray.angle] = ray.landing_point;
    }
    LeafSet leaves = colanding_pairs(table, 1e-3);
    REQUIRE(leaves.records.size() == 6);
    for (const auto& rec : leaves.records) {
        // each accepted pair is the conjugate pair (1/2^{n+1}, 1 - 1/2^{n+1})
        CHECK(rec.leaf.a.t.p == 1);
        CHECK(rec.leaf.b.t.p == rec.leaf.b.t.q - 1);
        CHECK(rec.leaf.a.t.q == rec.leaf.b.t.q);
    }
}

TEST_CASE("z^2 has no colanding pairs") {
    BottcherChart chart(z2(), ExtendedPoint(0, 0), 2);
    std::vector<Angle> angles{Angle(0, 1), Angle(1, 4), Angle(1, 3), Angle(2, 3)};
    auto rays = trace_rays(chart, z2(), angles, 8, 48);
    LandingTable table;
    for (auto& ray : rays) {
        detect_landing(ray);
        REQUIRE(ray.state == LandingState::landed);
        table.landing[ray.angle] = ray.landing_point;
    }
    CHECK(colanding_pairs(table, 1e-3).records.empty());
}

TEST_CASE("scattered tail stays unresolved") {
    InternalRay ray;
    ray.angle = Angle(0, 1);
    for (int k = 0; k < 40; ++k)
        ray.polyline.push_back(ExtendedPoint(std::cos(k * 1.7), std::sin(k * 2.3)));
    detect_landing(ray);
    CHECK(ray.state == LandingState::unresolved);
}

TEST_CASE("equipotential of z^2 approximates the unit circle") {
    BottcherChart chart(z2(), ExtendedPoint(0, 0), 2);
    auto pts = equipotential_polyline(chart, z2(), 64, 8);
    REQUIRE(pts.size() == 64);
    double pot = std::pow(chart.seed_potential(), 1.0 / 256.0);
    for (const auto& p : pts) CHECK(std::abs(std::abs(p.z) - pot) < 1e-9);
}
