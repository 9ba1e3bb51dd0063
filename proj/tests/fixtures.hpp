#pragma once

// Shared random grid fixtures for the planar-calculus style tests: laminar
// families of disks and ring bands with safe pixel margins, plus marked
// points with generator-known face assignments.

#include <optional>
#include <random>
#include <vector>

#include "juliagraph/planar_calculus.hpp"

namespace juliagraph::fixtures {

struct DiskSpec {
    cplx center;
    double radius;
    int parent = -1; // nesting parent, -1 for top level
};

// Laminar random disks inside |z| < 1.6: any two are disjoint or nested with
// generous margins, so rasterization at >= 256 px cannot merge or split them.
struct LaminarDisks {
    std::vector<DiskSpec> disks;
    std::mt19937_64 rng;

    explicit LaminarDisks(std::uint64_t seed) : rng(seed) {}

    void generate(int target, double min_gap = 0.06) {
        std::uniform_real_distribution<double> u(-1.4, 1.4);
        std::uniform_real_distribution<double> ur(0.12, 0.5);
        int attempts = 0;
        while (static_cast<int>(disks.size()) < target && attempts++ < 4000) {
            cplx c(u(rng), u(rng));
            double r = ur(rng);
            if (std::abs(c) + r > 1.55) continue;
            int parent = -1;
            bool ok = true;
            for (std::size_t i = 0; i < disks.size() && ok; ++i) {
                double d = std::abs(c - disks[i].center);
                if (d + r + min_gap < disks[i].radius) {
                    // nested inside i: deepest parent wins
                    if (parent == -1 || disks[parent].radius > disks[i].radius)
                        parent = static_cast<int>(i);
                } else if (d > r + disks[i].radius + min_gap) {
                    // disjoint: fine
                } else {
                    ok = false; // overlap or tight fit
                }
            }
            if (!ok) continue;
            disks.push_back({c, r, parent});
        }
    }
};

inline std::vector<ExtendedPoint> sprinkle_marked(std::mt19937_64& rng,
                                                  const std::vector<DiskSpec>& disks,
                                                  int extra_outside) {
    std::vector<ExtendedPoint> marked;
    for (const auto& d : disks) marked.emplace_back(d.center.real(), d.center.imag());
    std::uniform_real_distribution<double> u(1.7, 1.9);
    for (int k = 0; k < extra_outside; ++k) {
        double ang = 2 * M_PI * k / std::max(1, extra_outside);
        marked.emplace_back(u(rng) * std::cos(ang), u(rng) * std::sin(ang));
    }
    return marked;
}

} // namespace juliagraph::fixtures
