#pragma once

#include <functional>
#include <vector>

#include "juliagraph/grid_dynamics.hpp"
#include "juliagraph/planar_calculus.hpp"

namespace juliagraph {

struct ChainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChainRecord {
    int level = 0;
    std::vector<int> members;  // atlas component ids
    SphereMask mask;           // union of member closures, dilated per level
    bool maximal = false;
};

struct ChainHierarchy {
    const FatouAtlas* atlas = nullptr;
    // partitions[n][k] = sorted member ids of chain k at level n; level 0 is
    // the singleton partition of components.
    std::vector<std::vector<std::vector<int>>> partitions;
    int stabilization_level = 0;
    std::vector<ChainRecord> maximal;
};

// Level-(n+1) chains merge level-n chains whose 1-px-dilated masks come
// within gap_px; stops when the partition stabilizes, errors at level_cap.
ChainHierarchy build_hierarchy(const FatouAtlas& atlas, int level_cap = 8);

std::vector<ChainRecord> maximal_chains(const ChainHierarchy& h);

// Index of the maximal chain receiving >= threshold of the chain's sampled
// image points under the given map action.
int chain_image(const std::function<ExtendedPoint(const ExtendedPoint&)>& map_action,
                const ChainRecord& chain, const ChainHierarchy& h,
                double threshold = 0.95);

struct DecompositionReport {
    std::vector<int> marked_chain_ids; // maximal chains meeting the marked set
    SphereMask core_boundary;          // boundary pixels of their union
    std::vector<SetType> complement_types;
    int complex_count = 0, annular_count = 0, simple_count = 0;
};

DecompositionReport decompose(const MarkedMap& mm, const ChainHierarchy& h);

} // namespace juliagraph
