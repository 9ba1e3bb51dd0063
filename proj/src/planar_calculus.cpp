#include "juliagraph/planar_calculus.hpp"

#include <algorithm>

#include "juliagraph/parallel.hpp"

namespace juliagraph {

const char* set_type_name(SetType t) {
    switch (t) {
        case SetType::simple: return "simple";
        case SetType::annular: return "annular";
        case SetType::complex_type: return "complex";
    }
    return "?";
}

namespace {

// Connectivity precondition: accept 8-connected sets so that complement
// faces (which are 8-components) can be typed too.
void require_connected(const SphereMask& m, const char* what) {
    auto comps = connected_components(m, true);
    if (comps.count == 0) throw PlanarError(std::string(what) + " is empty");
    if (comps.count > 1) throw PlanarError(std::string(what) + " is disconnected");
}

} // namespace

BranchedReport branched_number(const SphereMask& set_mask,
                               const std::vector<ExtendedPoint>& marked,
                               const SphereMask* ambient) {
    const SphereGrid& grid = set_mask.grid;
    require_connected(set_mask, "branched_number set");

    BranchedReport rep;
    // Complement of E inside the ambient; faces 8-connected.
    SphereMask comp(grid);
    for (std::size_t i = 0; i < comp.bits.size(); ++i) {
        if (!grid.active(static_cast<int>(i))) continue;
        bool inside = ambient ? ambient->get(static_cast<int>(i)) : true;
        comp.bits[i] = (inside && !set_mask.get(static_cast<int>(i))) ? 1 : 0;
    }
    auto faces = connected_components(comp, true);
    rep.face_marked.assign(faces.count, 0);
    for (const auto& p : marked) {
        int idx = grid.locate(p);
        if (idx < 0) continue;
        if (set_mask.get(idx)) {
            rep.marked_on_set += 1;
        } else if (faces.label[idx] >= 0) {
            rep.face_marked[faces.label[idx]] += 1;
        }
        // marked points outside the ambient are the caller's problem
    }
    for (int c : rep.face_marked)
        if (c > 0) rep.kappa += 1;
    rep.b = rep.marked_on_set + rep.kappa;
    rep.type = classify_type(rep);
    return rep;
}

SetType classify_type(const BranchedReport& rep) {
    if (rep.b >= 3) return SetType::complex_type;
    // simple iff some face can absorb all but at most one marked point:
    // exists i with m + sum_{j != i} c_j <= 1.
    int total_faces_marked = 0;
    for (int c : rep.face_marked) total_faces_marked += c;
    bool simple = false;
    if (rep.face_marked.empty()) simple = rep.marked_on_set <= 1;
    for (int c : rep.face_marked)
        if (rep.marked_on_set + total_faces_marked - c <= 1) simple = true;
    return simple ? SetType::simple : SetType::annular;
}

IdentityReport decomposition_identity(const SphereMask& domain_mask,
                                      const SphereMask& compact_mask,
                                      const std::vector<ExtendedPoint>& marked) {
    const SphereGrid& grid = domain_mask.grid;
    for (std::size_t i = 0; i < compact_mask.bits.size(); ++i)
        if (compact_mask.get(static_cast<int>(i)) && !domain_mask.get(static_cast<int>(i)))
            throw PlanarError("compact set leaves the domain");

    IdentityReport rep;
    rep.whole = branched_number(domain_mask, marked);
    if (rep.whole.type != SetType::complex_type)
        throw PlanarError("decomposition_identity needs a complex-type domain");

    auto add_pieces = [&](const SphereMask& src, bool conn8, bool inner) {
        auto comps = connected_components(src, conn8);
        for (int id = 0; id < comps.count; ++id) {
            SphereMask piece(grid);
            for (std::size_t i = 0; i < src.bits.size(); ++i)
                if (comps.label[i] == id) piece.bits[i] = 1;
            BranchedReport br = branched_number(piece, marked);
            if (br.type == SetType::complex_type)
                rep.complex_pieces.push_back({inner, br});
        }
    };
    add_pieces(compact_mask, false, true);
    SphereMask rest(grid);
    for (std::size_t i = 0; i < rest.bits.size(); ++i)
        rest.bits[i] = (domain_mask.get(static_cast<int>(i)) &&
                        !compact_mask.get(static_cast<int>(i)))
                           ? 1
                           : 0;
    add_pieces(rest, true, false);

    for (const auto& piece : rep.complex_pieces) rep.lhs += piece.report.b - 2;
    rep.rhs = rep.whole.b - 2;
    rep.holds = (rep.lhs == rep.rhs);
    return rep;
}

bool skeleton_check(const SphereMask& skeleton_mask, const SphereMask& set_mask,
                    const std::vector<ExtendedPoint>& marked) {
    for (std::size_t i = 0; i < skeleton_mask.bits.size(); ++i)
        if (skeleton_mask.get(static_cast<int>(i)) && !set_mask.get(static_cast<int>(i)))
            throw PlanarError("skeleton not contained in the set");
    BranchedReport inner = branched_number(skeleton_mask, marked);
    BranchedReport outer = branched_number(set_mask, marked);
    return inner.b == outer.b && inner.marked_on_set == outer.marked_on_set;
}

PullbackTypeReport pullback_type_check(const RationalMap& map, const SphereMask& set_mask,
                                       const std::vector<ExtendedPoint>& marked,
                                       const SphereGrid& grid) {
    PullbackTypeReport rep;
    rep.input_type = branched_number(set_mask, marked).type;
    if (rep.input_type == SetType::complex_type)
        throw PlanarError("pullback principle applies to simple or annular sets");

    // Preimage mask: pixel centers whose image lands in the dilated set.
    SphereMask dil = dilate(set_mask, 1);
    SphereMask pre(grid);
    parallel_for(grid.pixel_count(), [&](std::size_t i) {
        if (!grid.active(static_cast<int>(i))) return;
        try {
            ExtendedPoint img = map.eval(grid.center(static_cast<int>(i)));
            int idx = dil.grid.locate(img);
            if (idx >= 0 && dil.get(idx)) pre.bits[i] = 1;
        } catch (const MapError&) {
        }
    });
    sync_charts(pre);

    auto comps = connected_components(pre, false);
    for (int id = 0; id < comps.count; ++id) {
        SphereMask piece(grid);
        for (std::size_t i = 0; i < pre.bits.size(); ++i)
            if (comps.label[i] == id) piece.bits[i] = 1;
        sync_charts(piece); // complete overlap twins for the erosion test
        PullbackComponentReport pc;
        pc.pixels = piece.count_owned();
        if (erode(piece, 1).empty()) {
            pc.skipped_thin = true;
            rep.skipped += 1;
            rep.components.push_back(pc);
            continue; // thinner than 2 px: unresolved at this grid
        }
        pc.type = branched_number(piece, marked).type;
        bool ok = (rep.input_type == SetType::simple)
                      ? pc.type == SetType::simple
                      : (pc.type == SetType::simple || pc.type == SetType::annular);
        if (!ok) rep.violations += 1;
        rep.components.push_back(pc);
    }
    return rep;
}

SphereMask disk_mask(const SphereGrid& grid, cplx center, double radius) {
    SphereMask m = mask_from_predicate(grid, [&](const ExtendedPoint& p) {
        return !p.inf && std::abs(p.z - center) <= radius;
    });
    sync_charts(m);
    return m;
}

SphereMask annulus_mask(const SphereGrid& grid, cplx center, double inner, double outer) {
    SphereMask m = mask_from_predicate(grid, [&](const ExtendedPoint& p) {
        if (p.inf) return false;
        double d = std::abs(p.z - center);
        return d >= inner && d <= outer;
    });
    sync_charts(m);
    return m;
}

SphereMask rect_mask(const SphereGrid& grid, cplx lo, cplx hi) {
    SphereMask m = mask_from_predicate(grid, [&](const ExtendedPoint& p) {
        return !p.inf && p.z.real() >= lo.real() && p.z.real() <= hi.real() &&
               p.z.imag() >= lo.imag() && p.z.imag() <= hi.imag();
    });
    sync_charts(m);
    return m;
}

SphereMask mask_union(const SphereMask& a, const SphereMask& b) {
    SphereMask m = a;
    for (std::size_t i = 0; i < m.bits.size(); ++i)
        if (b.bits[i]) m.bits[i] = 1;
    return m;
}

SphereMask mask_minus(const SphereMask& a, const SphereMask& b) {
    SphereMask m = a;
    for (std::size_t i = 0; i < m.bits.size(); ++i)
        if (b.bits[i]) m.bits[i] = 0;
    return m;
}

} // namespace juliagraph
