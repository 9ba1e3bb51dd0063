#include <doctest.h>

#include "juliagraph/graph_pullback.hpp"

using namespace juliagraph;

namespace {

MarkedMap certified(const RationalMap& map) {
    auto res = certify_pcf(map);
    REQUIRE(res.ok());
    return *res.marked_map;
}

RationalMap z2() { return RationalMap::polynomial({cplx(0), cplx(0), cplx(1)}); }
RationalMap basilica() { return RationalMap::polynomial({cplx(-1), cplx(0), cplx(1)}); }
RationalMap chebyshev() { return RationalMap::polynomial({cplx(-2), cplx(0), cplx(1)}); }

SeedSpec basilica_seed_spec() {
    SeedSpec spec;
    spec.kind = SeedSpec::rays;
    RaySpec r0;
    r0.center = ExtendedPoint(0, 0);
    r0.return_period = 2;
    r0.local_degree = 2;
    r0.angles = {Angle(0, 1)};
    RaySpec r1;
    r1.center = ExtendedPoint(-1, 0);
    r1.return_period = 2;
    r1.local_degree = 2;
    r1.angles = {Angle(0, 1)};
    spec.ray_specs = {r0, r1};
    return spec;
}

} // namespace

TEST_CASE("boundary seed for z^2 is a polygonal unit circle") {
    MarkedMap mm = certified(z2());
    SeedSpec spec;
    spec.kind = SeedSpec::boundary_circle;
    spec.center = ExtendedPoint(0, 0);
    spec.local_degree = 2;
    spec.samples = 128;
    spec.depth = 8;
    EmbeddedGraph g = seed_graph(mm, spec);
    CHECK(g.connected());
    CHECK(g.vertices.size() == 128);
    for (const auto& v : g.vertices) CHECK(std::abs(std::abs(v.pt.z) - 1.0) < 0.02);
}

TEST_CASE("ray-spanned seed for Chebyshev is the [-2,2] segment") {
    MarkedMap mm = certified(chebyshev());
    SeedSpec spec;
    spec.kind = SeedSpec::rays;
    RaySpec r;
    r.center = ExtendedPoint::infinity();
    r.local_degree = 2;
    r.angles = {Angle(0, 1), Angle(1, 2)};
    spec.ray_specs = {r};
    spec.include_ray_bodies = false;
    spec.chord_landings = true;
    EmbeddedGraph g = seed_graph(mm, spec);
    CHECK(g.connected());
    REQUIRE(g.edges.size() == 1);
    for (const auto& p : g.edges[0].polyline) {
        CHECK(std::abs(p.z.imag()) < 1e-3);
        CHECK(std::abs(p.z.real()) < 2.0 + 1e-3);
    }
}

TEST_CASE("basilica Hubbard-tree seed runs through the alpha fixed point") {
    MarkedMap mm = certified(basilica());
    EmbeddedGraph g = seed_graph(mm, basilica_seed_spec());
    CHECK(g.connected());
    double alpha = (1.0 - std::sqrt(5.0)) / 2.0;
    bool hits_alpha = false;
    for (const auto& v : g.vertices)
        if (chordal(v.pt, ExtendedPoint(alpha, 0)) < 1e-3) hits_alpha = true;
    CHECK(hits_alpha);
    int marked = 0;
    for (const auto& v : g.vertices)
        if (v.marked) ++marked;
    CHECK(marked == 2); // 0 and -1
}

TEST_CASE("lift of a unit-circle arc through z^2 is the half-angle arc") {
    RationalMap f = z2();
    std::vector<ExtendedPoint> arc;
    for (int k = 0; k <= 32; ++k) {
        double th = 0.3 + 0.9 * k / 32.0;
        arc.emplace_back(std::cos(th), std::sin(th));
    }
    ExtendedPoint base(std::cos(0.15), std::sin(0.15));
    LiftOutcome lo = lift_edge(f, arc, base);
    REQUIRE(lo.ok);
    // f(lift) reproduces the source within the Newton tolerance
    REQUIRE(lo.polyline.size() == arc.size());
    for (std::size_t k = 0; k < arc.size(); ++k)
        CHECK(chordal(f.eval(lo.polyline[k]), arc[k]) < 1e-8);
    for (const auto& p : lo.polyline) CHECK(std::abs(std::abs(p.z) - 1.0) < 1e-9);
}

TEST_CASE("interior passage through a critical value is rejected") {
    RationalMap f = z2(); // critical values 0 and infinity
    std::vector<ExtendedPoint> through_zero;
    for (int k = 0; k <= 16; ++k)
        through_zero.emplace_back(-0.4 + 0.05 * k, 0.0);
    ExtendedPoint base(std::sqrt(0.4) * cplx(0, 1).real(), std::sqrt(0.4));
    LiftOutcome lo = lift_edge(f, through_zero, ExtendedPoint(0, std::sqrt(0.4)));
    CHECK(!lo.ok);
    CHECK(lo.error.find("pre-split") != std::string::npos);
}

TEST_CASE("pullback keeps the invariant unit circle in place") {
    MarkedMap mm = certified(z2());
    SeedSpec spec;
    spec.kind = SeedSpec::boundary_circle;
    spec.center = ExtendedPoint(0, 0);
    spec.local_degree = 2;
    spec.samples = 128;
    spec.depth = 8;
    EmbeddedGraph g0 = seed_graph(mm, spec);
    JuliaSample julia = julia_sample(mm.map, 4000, 64, 3);
    PullbackOptions opt;
    opt.resample_step = 1.0 / 1024;
    opt.selection = PullbackOptions::nearest;
    PullbackRun run = iterate_pullback(mm.map, g0, 5, julia, mm.marked, opt);
    double px = 4.0 / 256;
    for (double d : run.step_distance) CHECK(d < 2 * px);
    CHECK(run.julia_coverage.back() < 2 * px);
}

TEST_CASE("invariant segment of Chebyshev stays put under pullback") {
    MarkedMap mm = certified(chebyshev());
    SeedSpec spec;
    spec.kind = SeedSpec::rays;
    RaySpec r;
    r.center = ExtendedPoint::infinity();
    r.local_degree = 2;
    r.angles = {Angle(0, 1), Angle(1, 2)};
    spec.ray_specs = {r};
    spec.include_ray_bodies = false;
    spec.chord_landings = true;
    EmbeddedGraph g0 = seed_graph(mm, spec);
    JuliaSample julia = julia_sample(mm.map, 4000, 64, 3);
    PullbackOptions opt;
    opt.resample_step = 1.0 / 1024;
    PullbackRun run = iterate_pullback(mm.map, g0, 4, julia, mm.marked, opt);
    for (double d : run.step_distance) CHECK(d < 0.02);
}

TEST_CASE("basilica pullback: semiconjugacy, growth, contraction") {
    MarkedMap mm = certified(basilica());
    EmbeddedGraph g0 = seed_graph(mm, basilica_seed_spec());
    JuliaSample julia = julia_sample(mm.map, 6000, 64, 11);
    PullbackOptions opt;
    opt.resample_step = 1.0 / 1024;
    // stage map f^2: one superattracting period, so stage distances shed the
    // period-two alternation of raw f-steps
    RationalMap f2 = mm.map.iterate_map(2);
    PullbackRun run = iterate_pullback(f2, g0, 6, julia, mm.marked, opt);

    // semiconjugacy: the stage map sends stage k+1 into a neighborhood of k
    for (std::size_t k = 0; k + 1 < run.stages.size(); ++k) {
        auto pts = run.stages[k + 1].all_points();
        std::vector<ExtendedPoint> mapped;
        for (std::size_t i = 0; i < pts.size(); i += 7) mapped.push_back(f2.eval(pts[i]));
        double d = one_sided_distance(mapped, run.stages[k].all_points());
        CHECK(d < 2.5 * opt.resample_step);
    }

    // step distances decrease after burn-in; coverage improves monotonically
    for (std::size_t k = 3; k < run.step_distance.size(); ++k)
        CHECK(run.step_distance[k] < run.step_distance[k - 1]);
    for (std::size_t k = 3; k < run.julia_coverage.size(); ++k)
        CHECK(run.julia_coverage[k] <= run.julia_coverage[k - 1] + 1e-12);
    CHECK(run.contracting);
    CHECK(run.rho_hat > 1.0);
}

TEST_CASE("disconnected seed is rejected") {
    MarkedMap mm = certified(z2());
    EmbeddedGraph g;
    g.vertices.push_back({ExtendedPoint(0.9, 0), false});
    g.vertices.push_back({ExtendedPoint(-0.9, 0), false});
    SeedSpec spec;
    spec.kind = SeedSpec::user;
    spec.user_graph = g;
    CHECK_THROWS_AS(seed_graph(mm, spec), PullbackError);
}

TEST_CASE("hausdorff helpers") {
    std::vector<ExtendedPoint> a{ExtendedPoint(0, 0), ExtendedPoint(1, 0)};
    std::vector<ExtendedPoint> b{ExtendedPoint(0, 0.1), ExtendedPoint(1, 0)};
    CHECK(one_sided_distance(a, b) == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(symmetric_hausdorff(a, b) == doctest::Approx(0.1).epsilon(1e-9));

    auto rs = resample_polyline({ExtendedPoint(0, 0), ExtendedPoint(1, 0)}, 0.1);
    CHECK(rs.size() >= 10);
    for (std::size_t i = 1; i < rs.size(); ++i)
        CHECK(std::abs(rs[i].z - rs[i - 1].z) < 0.11);
}
