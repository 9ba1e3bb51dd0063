#pragma once

#include <optional>
#include <string>
#include <vector>

#include "juliagraph/bottcher.hpp"
#include "juliagraph/grid_dynamics.hpp"
#include "juliagraph/rational_map.hpp"

namespace juliagraph {

struct PullbackError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GraphVertex {
    ExtendedPoint pt;
    bool marked = false; // coincides with a marked point of the map
};

struct GraphEdge {
    int u = 0, v = 0;
    std::vector<ExtendedPoint> polyline; // endpoints included
};

struct EmbeddedGraph {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;

    bool connected() const;
    std::vector<ExtendedPoint> all_points() const;
    double length() const; // total chart-euclidean polyline length
};

// Seed strategies. boundary_circle: equipotential approximation of the
// boundary of the chart's domain. rays: union of internal rays (optionally
// only their landing chords).
struct RaySpec {
    ExtendedPoint center;
    int return_period = 1; // trace under f^period
    int local_degree = 2;
    std::vector<Angle> angles;
};

struct SeedSpec {
    enum Kind { boundary_circle, rays, user } kind = boundary_circle;
    // boundary_circle parameters
    ExtendedPoint center = ExtendedPoint::infinity();
    int local_degree = 2;
    int samples = 256;
    int depth = 8;
    // rays parameters
    std::vector<RaySpec> ray_specs;
    bool include_ray_bodies = true;
    bool chord_landings = false; // connect landing points by straight chords
    std::optional<EmbeddedGraph> user_graph;
};

EmbeddedGraph seed_graph(const MarkedMap& mm, const SeedSpec& spec);

struct LiftOutcome {
    std::vector<ExtendedPoint> polyline;
    double min_crit_dist = 1e9;
    int max_newton_iters = 0;
    bool ok = false;
    std::string error;
};

// Unique continuous lift of the polyline through f starting at base
// (f(base) ~ polyline front). Adaptive subdivision near critical values.
LiftOutcome lift_edge(const RationalMap& map, const std::vector<ExtendedPoint>& polyline,
                      const ExtendedPoint& base);

struct PullbackOptions {
    double resample_step = 1e-3; // chart-euclidean polyline step
    enum Selection { by_marked, nearest } selection = by_marked;
    int anchor_vertex = 0; // for nearest selection
    double max_unresolved_fraction = 0.01;
};

EmbeddedGraph pullback_step(const RationalMap& map, const EmbeddedGraph& g,
                            const std::vector<ExtendedPoint>& marked,
                            const PullbackOptions& opt);

struct PullbackRun {
    std::vector<EmbeddedGraph> stages;
    std::vector<double> step_distance;     // d_H(G_k, G_{k+1}), symmetric
    std::vector<double> julia_coverage;    // sup over sample of dist to G_k
    double rho_hat = 0.0;                  // fitted contraction ratio
    double c_hat = 0.0;
    double r_squared = 0.0;
    bool contracting = false;
};

PullbackRun iterate_pullback(const RationalMap& map, const EmbeddedGraph& g0, int steps,
                             const JuliaSample& julia,
                             const std::vector<ExtendedPoint>& marked,
                             const PullbackOptions& opt);

void render_run(const PullbackRun& run, const FatouAtlas* atlas,
                const std::string& path_prefix);

// Chart-euclidean point-set distances used by the run diagnostics.
double one_sided_distance(const std::vector<ExtendedPoint>& from,
                          const std::vector<ExtendedPoint>& to);
double symmetric_hausdorff(const std::vector<ExtendedPoint>& a,
                           const std::vector<ExtendedPoint>& b);

std::vector<ExtendedPoint> resample_polyline(const std::vector<ExtendedPoint>& poly,
                                             double step);

} // namespace juliagraph
