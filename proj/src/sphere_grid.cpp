#include "juliagraph/sphere_grid.hpp"

#include <algorithm>
#include <queue>

#include "juliagraph/parallel.hpp"

namespace juliagraph {

std::size_t SphereMask::count_owned() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] && grid.owned(static_cast<int>(i))) ++c;
    return c;
}

bool SphereMask::empty() const {
    for (auto b : bits)
        if (b) return false;
    return true;
}

SphereMask mask_from_predicate(const SphereGrid& grid,
                               const std::function<bool(const ExtendedPoint&)>& pred) {
    SphereMask m(grid);
    parallel_for(grid.pixel_count(), [&](std::size_t i) {
        if (grid.active(static_cast<int>(i)) && pred(grid.center(static_cast<int>(i))))
            m.bits[i] = 1;
    });
    return m;
}

void sync_charts(SphereMask& mask) {
    const SphereGrid& g = mask.grid;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i]) continue;
        int p = g.partner(static_cast<int>(i));
        if (p >= 0) mask.bits[p] = 1;
    }
}

namespace {

template <typename Fn>
void for_neighbors(const SphereGrid& g, int idx, int r, bool include_partner, Fn fn) {
    int n = g.n();
    int c = g.chart_of(idx), x = g.x_of(idx), y = g.y_of(idx);
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            if (dx == 0 && dy == 0) continue;
            int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
            fn(g.index(c, nx, ny));
        }
    if (include_partner) {
        int p = g.partner(idx);
        if (p >= 0) fn(p);
    }
}

} // namespace

SphereMask dilate(const SphereMask& mask, int r) {
    SphereMask out = mask;
    const SphereGrid& g = mask.grid;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i]) continue;
        for_neighbors(g, static_cast<int>(i), r, false, [&](int j) {
            if (g.active(j)) out.bits[j] = 1;
        });
    }
    sync_charts(out);
    return out;
}

SphereMask erode(const SphereMask& mask, int r) {
    SphereMask out = mask;
    const SphereGrid& g = mask.grid;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i]) continue;
        bool keep = true;
        int n = g.n();
        int c = g.chart_of(static_cast<int>(i)), x = g.x_of(static_cast<int>(i)),
            y = g.y_of(static_cast<int>(i));
        for (int dy = -r; dy <= r && keep; ++dy)
            for (int dx = -r; dx <= r && keep; ++dx) {
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue; // edge pixels survive
                if (!mask.bits[g.index(c, nx, ny)]) keep = false;
            }
        if (!keep) out.bits[i] = 0;
    }
    return out;
}

// Components are computed over owned pixels only, so every sphere point is
// counted exactly once; at the ownership circle |coord| = 1 the walk jumps
// through the partner pixel into the other chart. This avoids the spurious
// fragments that duplicated chart slivers would otherwise create.
ComponentLabels connected_components(const SphereMask& mask, bool conn8) {
    const SphereGrid& g = mask.grid;
    ComponentLabels out;
    out.label.assign(mask.bits.size(), -1);
    std::vector<int> stack;
    auto member = [&](int j) { return j >= 0 && g.owned(j) && mask.bits[j]; };
    for (std::size_t seed = 0; seed < mask.bits.size(); ++seed) {
        if (!member(static_cast<int>(seed)) || out.label[seed] != -1) continue;
        std::int32_t id = out.count++;
        stack.push_back(static_cast<int>(seed));
        out.label[seed] = id;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            int n = g.n();
            int c = g.chart_of(cur), x = g.x_of(cur), y = g.y_of(cur);
            auto visit = [&](int j) {
                if (!member(j)) return;
                if (out.label[j] == -1) {
                    out.label[j] = id;
                    stack.push_back(j);
                }
            };
            static const int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            static const int d8[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                         {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
            int cnt = conn8 ? 8 : 4;
            const int(*dirs)[2] = conn8 ? d8 : d4;
            for (int k = 0; k < cnt; ++k) {
                int nx = x + dirs[k][0], ny = y + dirs[k][1];
                if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
                int q = g.index(c, nx, ny);
                if (g.owned(q)) {
                    visit(q);
                } else {
                    // re-enter through the other chart at the exact mapped
                    // coordinate; its 2x2 covering absorbs the quantization
                    cplx qc = g.chart_coord(q);
                    double m = std::abs(qc);
                    if (m < 0.5 || m > 2.0) continue;
                    cplx w = 1.0 / qc;
                    int pc = 1 - g.chart_of(q);
                    double fx = (w.real() + 2.0) / 4.0 * n - 0.5;
                    double fy = (w.imag() + 2.0) / 4.0 * n - 0.5;
                    int ix = static_cast<int>(std::floor(fx));
                    int iy = static_cast<int>(std::floor(fy));
                    for (int dy2 = 0; dy2 <= 1; ++dy2)
                        for (int dx2 = 0; dx2 <= 1; ++dx2) {
                            int qx = ix + dx2, qy = iy + dy2;
                            if (qx < 0 || qy < 0 || qx >= n || qy >= n) continue;
                            visit(g.index(pc, qx, qy));
                        }
                }
            }
        }
    }
    return out;
}

int mask_gap(const SphereGrid& grid, const std::vector<std::int32_t>& label,
             std::int32_t a, std::int32_t b, int limit) {
    int best = limit + 1;
    int n = grid.n();
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label[i] != a) continue;
        int c = grid.chart_of(static_cast<int>(i)), x = grid.x_of(static_cast<int>(i)),
            y = grid.y_of(static_cast<int>(i));
        for (int dy = -limit; dy <= limit; ++dy)
            for (int dx = -limit; dx <= limit; ++dx) {
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
                if (label[grid.index(c, nx, ny)] == b)
                    best = std::min(best, std::max(std::abs(dx), std::abs(dy)));
            }
        if (best <= 1) break;
    }
    return best;
}

} // namespace juliagraph
