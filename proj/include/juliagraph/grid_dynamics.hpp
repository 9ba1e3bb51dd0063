#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "juliagraph/rational_map.hpp"
#include "juliagraph/sphere_grid.hpp"

namespace juliagraph {

// Per-pixel classification: which attracting cycle the center converges to.
// alignment = (phase of the captured cycle point - capture step) mod period;
// it is constant on a Fatou component while the raw capture step is not.
struct ClassifiedField {
    SphereGrid grid{0};
    std::vector<std::int16_t> cycle;     // -1 unresolved
    std::vector<std::int16_t> alignment; // valid where cycle >= 0
    std::vector<std::int32_t> preperiod; // capture step
    std::vector<CycleRecord> cycles;
};

ClassifiedField classify_grid(const MarkedMap& mm, const SphereGrid& grid,
                              int max_iter = 256, double eps = 1e-3);

struct ComponentRecord {
    int cycle_id = -1;
    int alignment = 0;
    int preperiod = 0; // min capture step over member pixels
    std::size_t pixel_count = 0;
    ExtendedPoint centroid;
    bool has_marked_center = false;
};

struct ContactEdge {
    int a = 0, b = 0;
    int gap = 1; // minimal Chebyshev pixel gap observed
};

struct FatouAtlas {
    SphereGrid grid{0};
    std::vector<std::int32_t> label; // per pixel, -1 = Julia boundary/unresolved
    std::vector<ComponentRecord> components;
    std::vector<ContactEdge> contacts;
    std::vector<CycleRecord> cycles;
    int gap_px = 1;
    bool contacts_computed = false;

    int component_at(const ExtendedPoint& p) const;
    SphereMask component_mask(int id) const;
    // Pixels of the component adjacent to a different label or unresolved.
    SphereMask boundary_mask(int id) const;
};

FatouAtlas label_components(const ClassifiedField& field,
                            const std::vector<ExtendedPoint>& marked = {});

// Adds contact edges between components whose pixel sets come within gap_px.
void contact_graph(FatouAtlas& atlas, int gap_px = 1);

struct JuliaSample {
    std::vector<ExtendedPoint> points;
    std::string method;
};

JuliaSample julia_sample(const RationalMap& map, int count, int burn_in,
                         std::uint64_t seed = 1);

void save_atlas(const FatouAtlas& atlas, const std::string& path);
FatouAtlas load_atlas(const std::string& path);

// Side-by-side chart render; components colored by cycle, boundary black.
void render_atlas_png(const FatouAtlas& atlas, const std::string& path);

} // namespace juliagraph
