#include "juliagraph/chains.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace juliagraph {

namespace {

// Merge groups whose masks come within gap_px of each other (union-find over
// a pixel sweep of group ids).
struct Merger {
    std::vector<int> parent;
    explicit Merger(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> merge_partition(
    const SphereGrid& grid, const std::vector<std::int32_t>& group_of_pixel,
    const std::vector<std::vector<int>>& groups_members, int gap_px) {
    int g = static_cast<int>(groups_members.size());
    Merger uf(g);
    int n = grid.n();
    for (std::size_t i = 0; i < group_of_pixel.size(); ++i) {
        std::int32_t a = group_of_pixel[i];
        if (a < 0) continue;
        int c = grid.chart_of(static_cast<int>(i)), x = grid.x_of(static_cast<int>(i)),
            y = grid.y_of(static_cast<int>(i));
        for (int dy = 0; dy <= gap_px; ++dy)
            for (int dx = -gap_px; dx <= gap_px; ++dx) {
                if (dy == 0 && dx <= 0) continue;
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
                std::int32_t b = group_of_pixel[grid.index(c, nx, ny)];
                if (b >= 0 && b != a) uf.unite(a, b);
            }
        int p = grid.partner(static_cast<int>(i));
        if (p >= 0 && group_of_pixel[p] >= 0 && group_of_pixel[p] != a)
            uf.unite(a, group_of_pixel[p]);
    }
    std::map<int, std::vector<int>> buckets;
    for (int i = 0; i < g; ++i) {
        auto& dst = buckets[uf.find(i)];
        dst.insert(dst.end(), groups_members[i].begin(), groups_members[i].end());
    }
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : buckets) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

ChainHierarchy build_hierarchy(const FatouAtlas& atlas, int level_cap) {
    if (!atlas.contacts_computed)
        throw ChainError("build_hierarchy needs the contact graph (run contact_graph)");
    ChainHierarchy h;
    h.atlas = &atlas;
    const SphereGrid& grid = atlas.grid;

    // Level 0: one chain per component.
    std::vector<std::vector<int>> singletons;
    for (std::size_t c = 0; c < atlas.components.size(); ++c)
        singletons.push_back({static_cast<int>(c)});
    h.partitions.push_back(singletons);

    // Level 1: connected components of the contact graph over level-0 closures.
    {
        Merger uf(static_cast<int>(atlas.components.size()));
        for (const auto& e : atlas.contacts) uf.unite(e.a, e.b);
        std::map<int, std::vector<int>> buckets;
        for (std::size_t c = 0; c < atlas.components.size(); ++c)
            buckets[uf.find(static_cast<int>(c))].push_back(static_cast<int>(c));
        std::vector<std::vector<int>> level1;
        for (auto& [root, members] : buckets) {
            std::sort(members.begin(), members.end());
            level1.push_back(std::move(members));
        }
        std::sort(level1.begin(), level1.end());
        h.partitions.push_back(std::move(level1));
    }

    // Later levels: chain masks are member-pixel unions closed by a 1-px
    // dilation; contacts recomputed on those masks with the same gap rule.
    auto paint = [&](const std::vector<std::vector<int>>& partition,
                     std::vector<std::int32_t>& group) {
        std::vector<std::int32_t> comp_to_group(atlas.components.size(), -1);
        for (std::size_t gidx = 0; gidx < partition.size(); ++gidx)
            for (int c : partition[gidx]) comp_to_group[c] = static_cast<std::int32_t>(gidx);
        group.assign(grid.pixel_count(), -1);
        for (std::size_t i = 0; i < atlas.label.size(); ++i)
            if (atlas.label[i] >= 0) group[i] = comp_to_group[atlas.label[i]];
        // one-pixel closure of each chain mask
        std::vector<std::int32_t> next = group;
        int n = grid.n();
        for (std::size_t i = 0; i < group.size(); ++i) {
            if (group[i] >= 0) continue;
            int c = grid.chart_of(static_cast<int>(i)), x = grid.x_of(static_cast<int>(i)),
                y = grid.y_of(static_cast<int>(i));
            static const int d8[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                         {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
            for (auto& d : d8) {
                int nx = x + d[0], ny = y + d[1];
                if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
                std::int32_t gval = group[grid.index(c, nx, ny)];
                if (gval >= 0) {
                    next[i] = gval;
                    break;
                }
            }
        }
        group = std::move(next);
    };

    while (h.partitions.back() != h.partitions[h.partitions.size() - 2]) {
        if (static_cast<int>(h.partitions.size()) - 1 >= level_cap)
            throw ChainError("chain hierarchy did not stabilize within level cap " +
                             std::to_string(level_cap));
        std::vector<std::int32_t> group;
        paint(h.partitions.back(), group);
        auto next = merge_partition(grid, group, h.partitions.back(), atlas.gap_px);
        h.partitions.push_back(std::move(next));
    }
    h.stabilization_level = static_cast<int>(h.partitions.size()) - 2;

    // Maximal chains: the stabilized partition, with masks.
    const auto& stable = h.partitions[h.stabilization_level];
    for (const auto& members : stable) {
        ChainRecord rec;
        rec.level = h.stabilization_level;
        rec.members = members;
        rec.maximal = true;
        SphereMask m(grid);
        std::set<int> mem(members.begin(), members.end());
        for (std::size_t i = 0; i < atlas.label.size(); ++i)
            if (atlas.label[i] >= 0 && mem.count(atlas.label[i])) m.bits[i] = 1;
        rec.mask = dilate(m, 1);
        h.maximal.push_back(std::move(rec));
    }
    return h;
}

std::vector<ChainRecord> maximal_chains(const ChainHierarchy& h) { return h.maximal; }

int chain_image(const std::function<ExtendedPoint(const ExtendedPoint&)>& map_action,
                const ChainRecord& chain, const ChainHierarchy& h, double threshold) {
    const FatouAtlas& atlas = *h.atlas;
    const SphereGrid& grid = atlas.grid;
    // Sample points: member centroids plus member boundary pixels.
    std::vector<ExtendedPoint> samples;
    for (int c : chain.members) samples.push_back(atlas.components[c].centroid);
    for (int c : chain.members) {
        SphereMask b = atlas.boundary_mask(c);
        int stride = std::max<std::size_t>(1, b.count_owned() / 64);
        int seen = 0;
        for (std::size_t i = 0; i < b.bits.size(); ++i)
            if (b.bits[i] && grid.owned(static_cast<int>(i)) && (seen++ % stride == 0))
                samples.push_back(grid.center(static_cast<int>(i)));
    }
    std::vector<int> hits(h.maximal.size(), 0);
    int total = 0;
    for (const auto& s : samples) {
        ExtendedPoint img;
        try {
            img = map_action(s);
        } catch (...) {
            continue;
        }
        int idx = grid.locate(img);
        if (idx < 0) continue;
        ++total;
        for (std::size_t k = 0; k < h.maximal.size(); ++k)
            if (h.maximal[k].mask.get(idx)) hits[k] += 1;
    }
    if (total == 0) throw ChainError("chain image sampling failed");
    int best = -1;
    for (std::size_t k = 0; k < h.maximal.size(); ++k)
        if (hits[k] >= threshold * total) {
            if (best >= 0) throw ChainError("chain image straddles two maximal chains");
            best = static_cast<int>(k);
        }
    if (best < 0) throw ChainError("chain image resolution insufficient");
    return best;
}

DecompositionReport decompose(const MarkedMap& mm, const ChainHierarchy& h) {
    const FatouAtlas& atlas = *h.atlas;
    const SphereGrid& grid = atlas.grid;
    DecompositionReport rep;

    SphereMask marked_union(grid);
    for (std::size_t k = 0; k < h.maximal.size(); ++k) {
        bool meets = false;
        for (const auto& p : mm.marked) {
            int idx = grid.locate(p);
            if (idx >= 0 && h.maximal[k].mask.get(idx)) meets = true;
        }
        if (meets) {
            rep.marked_chain_ids.push_back(static_cast<int>(k));
            marked_union = mask_union(marked_union, h.maximal[k].mask);
        }
    }

    // Core: the Julia part of the marked chains at grid scale, i.e. pixels of
    // the union that are unresolved or sit on a component boundary.
    rep.core_boundary = SphereMask(grid);
    int n = grid.n();
    for (std::size_t i = 0; i < marked_union.bits.size(); ++i) {
        if (!marked_union.bits[i]) continue;
        if (atlas.label[i] < 0) {
            rep.core_boundary.bits[i] = 1;
            continue;
        }
        int c = grid.chart_of(static_cast<int>(i)), x = grid.x_of(static_cast<int>(i)),
            y = grid.y_of(static_cast<int>(i));
        static const int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (auto& d : d4) {
            int nx = x + d[0], ny = y + d[1];
            if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
            int j = grid.index(c, nx, ny);
            if (atlas.label[j] != atlas.label[i] || !marked_union.bits[j]) {
                rep.core_boundary.bits[i] = 1;
                break;
            }
        }
    }
    sync_charts(rep.core_boundary);
    // one closure dilation: keeps the band impermeable to the chart stitch
    rep.core_boundary = dilate(rep.core_boundary, 1);

    // Complement components of the core boundary, each typed rel marked set.
    SphereMask comp(grid);
    for (std::size_t i = 0; i < comp.bits.size(); ++i)
        comp.bits[i] =
            (grid.active(static_cast<int>(i)) && !rep.core_boundary.bits[i]) ? 1 : 0;
    auto faces = connected_components(comp, true);
    for (int id = 0; id < faces.count; ++id) {
        SphereMask piece(grid);
        for (std::size_t i = 0; i < comp.bits.size(); ++i)
            if (faces.label[i] == id) piece.bits[i] = 1;
        SetType t = branched_number(piece, mm.marked).type;
        rep.complement_types.push_back(t);
        if (t == SetType::complex_type)
            rep.complex_count += 1;
        else if (t == SetType::annular)
            rep.annular_count += 1;
        else
            rep.simple_count += 1;
    }
    return rep;
}

} // namespace juliagraph
