#pragma once

#include <string>
#include <vector>

#include "juliagraph/rational_map.hpp"
#include "juliagraph/sphere_grid.hpp"

namespace juliagraph {

struct PlanarError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SetType { simple, annular, complex_type };
const char* set_type_name(SetType t);

// Faces of the complement with their marked counts; b = m + kappa.
struct BranchedReport {
    int marked_on_set = 0;             // m = #(E cap P)
    std::vector<int> face_marked;      // c_i per complement face
    int kappa = 0;                     // #{i : c_i > 0}
    int b = 0;
    SetType type = SetType::simple;
};

// E: connected 4-connected mask; P: marked sphere points; ambient: optional
// domain mask (whole sphere when null). Complement faces are 8-connected.
BranchedReport branched_number(const SphereMask& set_mask,
                               const std::vector<ExtendedPoint>& marked,
                               const SphereMask* ambient = nullptr);

SetType classify_type(const BranchedReport& report);

struct IdentityPiece {
    bool from_inner = false; // component of K rather than of V \ K
    BranchedReport report;
};

struct IdentityReport {
    BranchedReport whole; // b(V)
    std::vector<IdentityPiece> complex_pieces;
    long lhs = 0, rhs = 0;
    bool holds = false;
};

// Lemma-style decomposition check: complex-type components of K and of V\K
// satisfy sum(b - 2) = b(V) - 2.
IdentityReport decomposition_identity(const SphereMask& domain_mask,
                                      const SphereMask& compact_mask,
                                      const std::vector<ExtendedPoint>& marked);

bool skeleton_check(const SphereMask& skeleton_mask, const SphereMask& set_mask,
                    const std::vector<ExtendedPoint>& marked);

struct PullbackComponentReport {
    SetType type = SetType::simple;
    std::size_t pixels = 0;
    bool skipped_thin = false;
};

struct PullbackTypeReport {
    SetType input_type = SetType::simple;
    std::vector<PullbackComponentReport> components;
    int violations = 0; // components breaking the pullback principle
    int skipped = 0;
};

// Classifies every component of f^{-1}(E) on the grid and checks the
// pullback principle: simple -> simple, annular -> simple or annular.
PullbackTypeReport pullback_type_check(const RationalMap& map, const SphereMask& set_mask,
                                       const std::vector<ExtendedPoint>& marked,
                                       const SphereGrid& grid);

// Rasterization helpers for fixtures and the btype CLI.
SphereMask disk_mask(const SphereGrid& grid, cplx center, double radius);
SphereMask annulus_mask(const SphereGrid& grid, cplx center, double inner, double outer);
SphereMask rect_mask(const SphereGrid& grid, cplx lo, cplx hi);
SphereMask mask_union(const SphereMask& a, const SphereMask& b);
SphereMask mask_minus(const SphereMask& a, const SphereMask& b);

} // namespace juliagraph
