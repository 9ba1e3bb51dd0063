#pragma once

#include <map>
#include <optional>
#include <vector>

#include "juliagraph/lamination.hpp"
#include "juliagraph/rational_map.hpp"
#include "juliagraph/rationals.hpp"

namespace juliagraph {

struct BottcherError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Local linearizing coordinate phi at a superattracting fixed point:
// phi(f(z)) = phi(z)^d on a verified disk. Work happens in a local w-plane
// (w = z - c, or w = 1/z when the center is infinity).
class BottcherChart {
public:
    BottcherChart(const RationalMap& map, const ExtendedPoint& center, int local_degree);

    const ExtendedPoint& center() const { return center_; }
    int local_degree() const { return d_; }
    double valid_w_radius() const { return s_max_; }
    double valid_potential() const { return r_valid_; }
    double seed_potential() const { return r_seed_; }
    cplx leading_coeff() const { return lambda_; }

    cplx to_local(const ExtendedPoint& p) const;
    ExtendedPoint from_local(cplx w) const;

    // phi in the local plane; defined for |w| within the validity radius.
    cplx phi_local(cplx w) const;
    double functional_equation_residual(cplx w) const;

    // phi^{-1} by Newton continuation from the center; |zeta| <= r_valid.
    cplx psi_local(cplx zeta) const;
    ExtendedPoint point_at(double potential, double angle_turns) const;

private:
    RationalMap local_; // conjugated map fixing w = 0
    ExtendedPoint center_;
    bool center_inf_ = false;
    int d_ = 2;
    cplx lambda_{1.0, 0.0};
    cplx norm_; // lambda^{1/(d-1)}
    double s_max_ = 0.1;
    double r_valid_ = 0.1;
    double r_seed_ = 0.01;
    void calibrate();
    cplx local_step(cplx u) const;
};

enum class LandingState { landed, unresolved, aborted_near_critical };

struct InternalRay {
    Angle angle;
    std::vector<ExtendedPoint> polyline; // center outward
    LandingState state = LandingState::unresolved;
    ExtendedPoint landing_point;
    ExtendedPoint abort_location;
    int levels_traced = 0;
};

// Traces the full forward angle orbit level by level; each level solves
// f(x) = previous-level point of the d-tupled angle with the previous point
// on the same ray as the Newton seed.
std::vector<InternalRay> trace_rays(const BottcherChart& chart, const RationalMap& map,
                                    const std::vector<Angle>& angles,
                                    int steps_per_level = 8, int max_levels = 40,
                                    double crit_abort_radius = 1e-4);

InternalRay trace_ray(const BottcherChart& chart, const RationalMap& map, Angle angle,
                      int steps_per_level = 8, int max_levels = 40);

// Landed when the last tail_len points sit in a ball of radius tol; landing
// point is their chordal centroid.
void detect_landing(InternalRay& ray, double tol = 1e-3, int tail_len = 20);

struct LandingTable {
    std::map<Angle, ExtendedPoint> landing;
    double tol = 1e-3;
};

struct LeafRecord {
    Leaf leaf;
    ExtendedPoint landing_point;
};

struct LeafSet {
    std::vector<LeafRecord> records;
    std::vector<Leaf> leaves() const {
        std::vector<Leaf> out;
        for (const auto& r : records) out.push_back(r.leaf);
        return out;
    }
};

// Pairs angles whose landing points coincide within tol, keeping the chord
// system non-crossing (tightest pairs first).
LeafSet colanding_pairs(const LandingTable& table, double tol);

// Closed equipotential polyline at the given pullback depth, sampled at M
// angles; exact for maps conjugate to w^d near the center, refined by the
// same level recurrence as rays.
std::vector<ExtendedPoint> equipotential_polyline(const BottcherChart& chart,
                                                  const RationalMap& map, int samples,
                                                  int levels);

// Newton preimage solve f(x) = target seeded at seed; chart-adaptive.
std::optional<ExtendedPoint> newton_preimage(const RationalMap& map,
                                             const ExtendedPoint& target,
                                             const ExtendedPoint& seed,
                                             double tol = 1e-12, int max_iter = 60);

} // namespace juliagraph
