#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "juliagraph/geometry.hpp"
#include "juliagraph/poly.hpp"

namespace juliagraph {

struct MapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CriticalDatum {
    ExtendedPoint location;
    int local_degree = 2;
};

enum class CycleClass { superattracting, attracting, repelling, indifferent };

struct CycleRecord {
    std::vector<ExtendedPoint> points;
    int period = 1;
    double multiplier_modulus = 0.0;
    CycleClass cls = CycleClass::superattracting;
};

const char* cycle_class_name(CycleClass c);

// Rational map on the Riemann sphere, num/den coefficients ascending.
// Evaluation switches to the reciprocal chart w = 1/z near infinity and
// near poles, so no orbit ever overflows.
class RationalMap {
public:
    RationalMap() = default;
    RationalMap(Poly num, Poly den);

    static RationalMap from_json_file(const std::string& path);
    static RationalMap polynomial(std::vector<cplx> coeffs); // den = 1
    void save_json(const std::string& path) const;

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    int degree() const { return degree_; }

    ExtendedPoint eval(const ExtendedPoint& z) const;

    // Derivative of the chart-composed map chart_out . f . chart_in^{-1},
    // where each chart is picked by preferred_wchart(). Used for multipliers.
    cplx chart_derivative(const ExtendedPoint& z, const ExtendedPoint& fz) const;

    // Chart-rational pieces: P/Q with input already in w-chart when in_w,
    // output in w-chart when out_w.
    void chart_polys(bool in_w, bool out_w, const Poly*& P, const Poly*& Q) const;

    // All d preimages of w (with multiplicity), by polynomial solve in the
    // chart where w is tame.
    std::vector<ExtendedPoint> preimages(const ExtendedPoint& w) const;

    std::vector<CriticalDatum> critical_points() const;

    RationalMap compose_with(const RationalMap& inner) const; // this after inner
    RationalMap iterate_map(int n) const;                     // f^n

    std::string cache_key() const;

private:
    Poly num_, den_;
    Poly rnum_, rden_; // reversed-padded pieces for the w-chart
    int degree_ = 0;
    void validate() const;
};

inline bool preferred_wchart(const ExtendedPoint& p) {
    return p.inf || std::abs(p.z) > 1.0;
}

struct OrbitResult {
    bool resolved = false;
    int preperiod = 0;
    int period = 0;
    std::vector<ExtendedPoint> orbit;
};

// Smallest (preperiod, period) with spherical closure below eps, confirmed
// over two extra periods; unresolved if none within max_iter.
OrbitResult forward_orbit(const RationalMap& map, const ExtendedPoint& z,
                          int max_iter, double eps);

struct OrbitEntry {
    ExtendedPoint critical_value;
    int preperiod = 0;
    int period = 0;
};

struct MarkedMap {
    RationalMap map;
    std::vector<ExtendedPoint> marked;
    std::vector<OrbitEntry> orbit_table;

    bool contains_marked(const ExtendedPoint& p, double eps = 1e-6) const;
    // Attracting + superattracting cycles reachable from critical orbits,
    // deduplicated.
    std::vector<CycleRecord> attracting_cycles(int max_iter = 256,
                                               double eps = 1e-9) const;
};

struct PcfFailure {
    ExtendedPoint critical_value;
    std::string reason;
};

struct PcfResult {
    std::optional<MarkedMap> marked_map;
    std::optional<PcfFailure> failure;
    bool ok() const { return marked_map.has_value(); }
};

PcfResult certify_pcf(const RationalMap& map, int max_iter = 256, double eps = 1e-9);

CycleRecord classify_cycle(const RationalMap& map,
                           const std::vector<ExtendedPoint>& cycle,
                           double eps = 1e-6, double eps_super = 1e-6,
                           double eps_cls = 1e-3);

// The cubic example map (z^2 - 6z + 9 - 8/z) / 3.
RationalMap cubic_chain_example();

} // namespace juliagraph
