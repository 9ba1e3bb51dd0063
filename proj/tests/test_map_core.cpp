#include <doctest.h>

#include <random>

#include "juliagraph/rational_map.hpp"

using namespace juliagraph;

namespace {

const ExtendedPoint kInf = ExtendedPoint::infinity();

bool near(const ExtendedPoint& a, cplx b, double tol = 1e-9) {
    return chordal(a, ExtendedPoint(b)) < tol;
}

RationalMap random_map(std::mt19937_64& rng, int deg) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::vector<cplx> n(deg + 1), d(deg);
        for (auto& c : n) c = cplx(u(rng), u(rng));
        for (auto& c : d) c = cplx(u(rng), u(rng));
        n[deg] += cplx(2.0, 0.0); // keep degree honest
        try {
            return RationalMap(Poly(std::move(n)), Poly(std::move(d)));
        } catch (const MapError&) {
            continue; // rare shared-root draw
        }
    }
}

} // namespace

TEST_CASE("eval: identity, cubic at 2, cubic at infinity") {
    RationalMap id(Poly({cplx(0), cplx(1)}), Poly::constant(cplx(1)));
    CHECK(near(id.eval(ExtendedPoint(3.0, 4.0)), cplx(3.0, 4.0)));

    RationalMap f = cubic_chain_example();
    CHECK(near(f.eval(ExtendedPoint(2.0, 0.0)), cplx(-1.0, 0.0)));
    CHECK(f.eval(kInf).inf); // numerator degree 3 beats denominator degree 1
}

TEST_CASE("eval handles poles via the reciprocal chart") {
    RationalMap f = cubic_chain_example();
    // z = 0 is the pole: value is infinity
    CHECK(f.eval(ExtendedPoint(0.0, 0.0)).inf);
    // near-pole values are huge but finite and stable
    ExtendedPoint v = f.eval(ExtendedPoint(1e-12, 0.0));
    CHECK(chordal(v, kInf) < 1e-9);
}

TEST_CASE("critical points of the cubic example") {
    RationalMap f = cubic_chain_example();
    auto crits = f.critical_points();
    REQUIRE(crits.size() == 3);
    int found = 0;
    for (const auto& cd : crits) {
        if (cd.location.inf) {
            CHECK(cd.local_degree == 2);
            ++found;
        } else if (near(cd.location, cplx(-1, 0))) {
            CHECK(cd.local_degree == 2);
            ++found;
        } else if (near(cd.location, cplx(2, 0))) {
            CHECK(cd.local_degree == 3);
            ++found;
        }
    }
    CHECK(found == 3);
}

TEST_CASE("critical points: power maps and quadratic") {
    for (int d = 2; d <= 5; ++d) {
        std::vector<cplx> c(d + 1, cplx(0));
        c[d] = 1;
        auto crits = RationalMap::polynomial(c).critical_points();
        REQUIRE(crits.size() == 2);
        for (const auto& cd : crits) CHECK(cd.local_degree == d);
    }
    auto crits = RationalMap::polynomial({cplx(-1), cplx(0), cplx(1)}).critical_points();
    REQUIRE(crits.size() == 2);
    for (const auto& cd : crits) CHECK(cd.local_degree == 2);
}

TEST_CASE("critical weight sums to 2d-2 on random maps") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        int deg = 2 + static_cast<int>(t % 3);
        RationalMap m = random_map(rng, deg);
        int weight = 0;
        for (const auto& cd : m.critical_points()) weight += cd.local_degree - 1;
        CHECK(weight == 2 * m.degree() - 2);
    }
}

TEST_CASE("eval commutes with reciprocal-chart conjugation") {
    RationalMap f = cubic_chain_example();
    // Explicit w-chart conjugate F(w) = 1/f(1/w), built from reversed coefficients.
    int d = f.degree();
    RationalMap F(f.den().reversed(d), f.num().reversed(d));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.8, 1.8);
    int checked = 0;
    for (int t = 0; t < 10000; ++t) {
        cplx z(u(rng), u(rng));
        if (std::abs(z) < 1e-3) continue; // w = 1/z blows up
        ExtendedPoint zp(z);
        ExtendedPoint a = f.eval(zp);
        ExtendedPoint b = reciprocal(F.eval(reciprocal(zp)));
        CHECK(chordal(a, b) < 1e-10);
        ++checked;
    }
    CHECK(checked > 9000);
}

TEST_CASE("forward orbit of the cubic: 2 -> -1 -> 8 -> 8") {
    RationalMap f = cubic_chain_example();
    auto orb = forward_orbit(f, ExtendedPoint(2.0, 0.0), 64, 1e-9);
    REQUIRE(orb.resolved);
    CHECK(orb.preperiod == 2);
    CHECK(orb.period == 1);
    CHECK(near(orb.orbit[1], cplx(-1, 0)));
    CHECK(near(orb.orbit[2], cplx(8, 0)));

    auto inf_orb = forward_orbit(f, kInf, 64, 1e-9);
    REQUIRE(inf_orb.resolved);
    CHECK(inf_orb.preperiod == 0);
    CHECK(inf_orb.period == 1);
}

TEST_CASE("forward orbit of z^2-1 at 0 has period 2") {
    RationalMap f = RationalMap::polynomial({cplx(-1), cplx(0), cplx(1)});
    auto orb = forward_orbit(f, ExtendedPoint(0.0, 0.0), 64, 1e-9);
    REQUIRE(orb.resolved);
    CHECK(orb.preperiod == 0);
    CHECK(orb.period == 2);
}

TEST_CASE("forward orbit stable under doubling max_iter") {
    RationalMap f = cubic_chain_example();
    for (double re : {0.3, 1.7, -0.4}) {
        auto a = forward_orbit(f, ExtendedPoint(re, 0.1), 128, 1e-9);
        auto b = forward_orbit(f, ExtendedPoint(re, 0.1), 256, 1e-9);
        CHECK(a.resolved == b.resolved);
        if (a.resolved) {
            CHECK(a.preperiod == b.preperiod);
            CHECK(a.period == b.period);
        }
    }
}

TEST_CASE("certify_pcf: cubic marked set is {-1, 8, inf}") {
    auto res = certify_pcf(cubic_chain_example());
    REQUIRE(res.ok());
    const MarkedMap& mm = *res.marked_map;
    CHECK(mm.marked.size() == 3);
    CHECK(mm.contains_marked(ExtendedPoint(-1.0, 0.0)));
    CHECK(mm.contains_marked(ExtendedPoint(8.0, 0.0)));
    CHECK(mm.contains_marked(kInf));
    // forward closure of the marked set
    for (const auto& p : mm.marked) CHECK(mm.contains_marked(mm.map.eval(p), 1e-6));
}

TEST_CASE("certify_pcf: z^2 and a non-PCF parabolic-ish map") {
    auto res = certify_pcf(RationalMap::polynomial({cplx(0), cplx(0), cplx(1)}));
    REQUIRE(res.ok());
    CHECK(res.marked_map->marked.size() == 2);

    auto bad = certify_pcf(RationalMap::polynomial({cplx(0.2500001, 1e-7), cplx(0), cplx(1)}),
                           200, 1e-9);
    CHECK(!bad.ok());
    CHECK(bad.failure.has_value());
}

TEST_CASE("classify_cycle: cubic fixed points") {
    RationalMap f = cubic_chain_example();
    auto at_inf = classify_cycle(f, {kInf});
    CHECK(at_inf.cls == CycleClass::superattracting);
    CHECK(at_inf.multiplier_modulus < 1e-6);

    auto at8 = classify_cycle(f, {ExtendedPoint(8.0, 0.0)});
    CHECK(at8.cls == CycleClass::repelling);
    // |f'(8)| = 6*9*36/(9*64)
    CHECK(at8.multiplier_modulus == doctest::Approx(3.375).epsilon(1e-9));

    auto at0 = classify_cycle(RationalMap::polynomial({cplx(0), cplx(0), cplx(1)}),
                              {ExtendedPoint(0.0, 0.0)});
    CHECK(at0.cls == CycleClass::superattracting);
    CHECK(at0.multiplier_modulus == doctest::Approx(0.0));
}

TEST_CASE("classify_cycle rejects non-cycles") {
    RationalMap f = cubic_chain_example();
    CHECK_THROWS_AS(classify_cycle(f, {ExtendedPoint(0.5, 0.5)}), MapError);
}

TEST_CASE("attracting cycles of the basilica") {
    auto res = certify_pcf(RationalMap::polynomial({cplx(-1), cplx(0), cplx(1)}));
    REQUIRE(res.ok());
    auto cycles = res.marked_map->attracting_cycles();
    REQUIRE(cycles.size() == 2); // {0,-1} and {inf}
    int p2 = 0, p1 = 0;
    for (const auto& c : cycles) {
        if (c.period == 2) ++p2;
        if (c.period == 1) ++p1;
        CHECK(c.cls == CycleClass::superattracting);
    }
    CHECK(p2 == 1);
    CHECK(p1 == 1);
}

TEST_CASE("map json round trip") {
    RationalMap f = cubic_chain_example();
    f.save_json("/tmp/jg_test_map.json");
    RationalMap g = RationalMap::from_json_file("/tmp/jg_test_map.json");
    CHECK(g.degree() == 3);
    CHECK(near(g.eval(ExtendedPoint(2.0, 0.0)), cplx(-1, 0)));
}

TEST_CASE("compose: basilica second iterate") {
    RationalMap f = RationalMap::polynomial({cplx(-1), cplx(0), cplx(1)});
    RationalMap f2 = f.iterate_map(2);
    CHECK(f2.degree() == 4);
    // f^2(z) = z^4 - 2z^2
    CHECK(near(f2.eval(ExtendedPoint(0.5, 0.0)), cplx(0.0625 - 0.5, 0.0)));
}
