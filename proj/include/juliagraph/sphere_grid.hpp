#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "juliagraph/geometry.hpp"

namespace juliagraph {

// Two-chart pixel grid covering the sphere: chart 0 is the square |Re z|,
// |Im z| <= 2 of the standard chart, chart 1 the same square in w = 1/z.
// The charts overlap on 1/2 <= |z| <= 2; a pixel "owns" its sphere region
// when its chart coordinate has modulus <= 1 (chart 0 wins ties).
class SphereGrid {
public:
    explicit SphereGrid(int n) : n_(n) {}

    int n() const { return n_; }
    std::size_t pixel_count() const { return 2u * n_ * n_; }
    double pitch() const { return 4.0 / n_; }

    int index(int chart, int x, int y) const { return (chart * n_ + y) * n_ + x; }
    int chart_of(int idx) const { return idx / (n_ * n_); }
    int x_of(int idx) const { return idx % n_; }
    int y_of(int idx) const { return (idx / n_) % n_; }

    cplx chart_coord(int idx) const {
        double x = -2.0 + 4.0 * (x_of(idx) + 0.5) / n_;
        double y = -2.0 + 4.0 * (y_of(idx) + 0.5) / n_;
        return cplx(x, y);
    }

    ExtendedPoint center(int idx) const {
        cplx c = chart_coord(idx);
        if (chart_of(idx) == 0) return ExtendedPoint(c);
        return reciprocal(ExtendedPoint(c));
    }

    bool owned(int idx) const {
        double m = std::abs(chart_coord(idx));
        return chart_of(idx) == 0 ? m <= 1.0 : m < 1.0;
    }

    // Chart pixels outside the disk |coord| <= 2 duplicate regions interior
    // to the other chart and are never used.
    bool active(int idx) const { return std::abs(chart_coord(idx)) <= 2.0; }

    // Pixel of the same sphere point in the other chart; -1 outside extent.
    int partner(int idx) const {
        cplx c = chart_coord(idx);
        double m = std::abs(c);
        if (m < 0.5 || m > 2.0) return -1; // outside the overlap annulus
        cplx w = 1.0 / c;
        int p = locate_in_chart(1 - chart_of(idx), w);
        return (p >= 0 && active(p)) ? p : -1;
    }

    int locate_in_chart(int chart, cplx c) const {
        if (std::abs(c) > 2.0) return -1;
        int x = static_cast<int>((c.real() + 2.0) / 4.0 * n_);
        int y = static_cast<int>((c.imag() + 2.0) / 4.0 * n_);
        x = std::min(std::max(x, 0), n_ - 1);
        y = std::min(std::max(y, 0), n_ - 1);
        return index(chart, x, y);
    }

    // Pixel owning the sphere point. Near |z| = 1 the containing pixel's own
    // center can fall on the other side of the ownership circle; switch to
    // its partner so the result is always an owned pixel.
    int locate(const ExtendedPoint& p) const {
        int idx;
        if (!p.inf && std::abs(p.z) <= 1.0) {
            idx = locate_in_chart(0, p.z);
        } else {
            ExtendedPoint w = reciprocal(p);
            idx = locate_in_chart(1, w.inf ? cplx(4.0, 4.0) : w.z);
        }
        if (idx >= 0 && !owned(idx)) {
            int q = partner(idx);
            if (q >= 0 && owned(q)) return q;
        }
        return idx;
    }

private:
    int n_;
};

// Binary mask over a SphereGrid. The grid is a value (just the resolution).
struct SphereMask {
    SphereGrid grid{0};
    std::vector<std::uint8_t> bits;

    SphereMask() = default;
    explicit SphereMask(const SphereGrid& g) : grid(g), bits(g.pixel_count(), 0) {}

    bool get(int idx) const { return bits[idx] != 0; }
    void set(int idx, bool v = true) { bits[idx] = v ? 1 : 0; }
    std::size_t count_owned() const;
    bool empty() const;
};

SphereMask mask_from_predicate(const SphereGrid& grid,
                               const std::function<bool(const ExtendedPoint&)>& pred);

// Copies mask state to chart partners so both charts agree on the overlap.
void sync_charts(SphereMask& mask);

// Morphological dilation/erosion by r pixels (Chebyshev ball), per chart,
// partner-synced afterwards.
SphereMask dilate(const SphereMask& mask, int r);
SphereMask erode(const SphereMask& mask, int r);

// Connected component labeling. conn8 picks 8-neighborhoods (used for
// complements); 4 otherwise. Components stitch across charts through
// partner pixels. Returns labels (-1 where mask is clear) and the count.
struct ComponentLabels {
    std::vector<std::int32_t> label;
    int count = 0;
};
ComponentLabels connected_components(const SphereMask& mask, bool conn8);

// Minimal Chebyshev pixel distance between two label sets within each chart,
// clamped to limit+1 when farther. Used for contact detection.
int mask_gap(const SphereGrid& grid, const std::vector<std::int32_t>& label,
             std::int32_t a, std::int32_t b, int limit);

} // namespace juliagraph
