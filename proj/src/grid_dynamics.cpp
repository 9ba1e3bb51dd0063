#include "juliagraph/grid_dynamics.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <random>

#include "juliagraph/parallel.hpp"

namespace juliagraph {

ClassifiedField classify_grid(const MarkedMap& mm, const SphereGrid& grid,
                              int max_iter, double eps) {
    ClassifiedField field;
    field.grid = grid;
    field.cycles = mm.attracting_cycles();
    if (field.cycles.empty())
        throw MapError("cycle detection incomplete: no attracting cycles for PCF map");
    field.cycle.assign(grid.pixel_count(), -1);
    field.alignment.assign(grid.pixel_count(), 0);
    field.preperiod.assign(grid.pixel_count(), 0);

    struct Capture {
        ExtendedPoint pt;
        std::int16_t cycle_id;
        std::int16_t phase;
        std::int16_t period;
    };
    std::vector<Capture> caps;
    for (std::size_t c = 0; c < field.cycles.size(); ++c)
        for (int ph = 0; ph < field.cycles[c].period; ++ph)
            caps.push_back({field.cycles[c].points[ph], static_cast<std::int16_t>(c),
                            static_cast<std::int16_t>(ph),
                            static_cast<std::int16_t>(field.cycles[c].period)});

    const RationalMap& f = mm.map;
    parallel_for(grid.pixel_count(), [&](std::size_t i) {
        if (!grid.active(static_cast<int>(i))) return;
        ExtendedPoint z = grid.center(static_cast<int>(i));
        for (int step = 0; step <= max_iter; ++step) {
            for (const auto& cap : caps) {
                if (chordal(z, cap.pt) < eps) {
                    field.cycle[i] = cap.cycle_id;
                    int al = (cap.phase - step) % cap.period;
                    if (al < 0) al += cap.period;
                    field.alignment[i] = static_cast<std::int16_t>(al);
                    field.preperiod[i] = step;
                    return;
                }
            }
            if (step == max_iter) break;
            try {
                z = f.eval(z);
            } catch (const MapError&) {
                return; // degenerate orbit stays unresolved
            }
        }
    });
    return field;
}

namespace {

// Flood fill over equal keys with cross-chart stitching, 4-connected in-chart.
ComponentLabels keyed_components(const SphereGrid& grid,
                                 const std::vector<std::int32_t>& key) {
    ComponentLabels out;
    out.label.assign(key.size(), -1);
    std::vector<int> stack;
    for (std::size_t seed = 0; seed < key.size(); ++seed) {
        if (key[seed] < 0 || out.label[seed] != -1) continue;
        std::int32_t id = out.count++;
        out.label[seed] = id;
        stack.push_back(static_cast<int>(seed));
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            auto visit = [&](int j) {
                if (j >= 0 && key[j] == key[cur] && out.label[j] == -1) {
                    out.label[j] = id;
                    stack.push_back(j);
                }
            };
            int n = grid.n(), c = grid.chart_of(cur), x = grid.x_of(cur), y = grid.y_of(cur);
            if (x + 1 < n) visit(grid.index(c, x + 1, y));
            if (x > 0) visit(grid.index(c, x - 1, y));
            if (y + 1 < n) visit(grid.index(c, x, y + 1));
            if (y > 0) visit(grid.index(c, x, y - 1));
            visit(grid.partner(cur));
        }
    }
    return out;
}

} // namespace

FatouAtlas label_components(const ClassifiedField& field,
                            const std::vector<ExtendedPoint>& marked) {
    const SphereGrid& grid = field.grid;
    FatouAtlas atlas;
    atlas.grid = grid;
    atlas.cycles = field.cycles;

    std::vector<std::int32_t> key(grid.pixel_count(), -1);
    int max_period = 1;
    for (const auto& c : field.cycles) max_period = std::max(max_period, c.period);
    for (std::size_t i = 0; i < key.size(); ++i)
        if (field.cycle[i] >= 0)
            key[i] = field.cycle[i] * max_period + field.alignment[i];

    ComponentLabels labels = keyed_components(grid, key);
    atlas.label = std::move(labels.label);
    atlas.components.assign(labels.count, ComponentRecord{});

    std::vector<std::array<double, 3>> centroid_acc(labels.count, {0, 0, 0});
    for (std::size_t i = 0; i < atlas.label.size(); ++i) {
        std::int32_t id = atlas.label[i];
        if (id < 0) continue;
        ComponentRecord& rec = atlas.components[id];
        if (rec.pixel_count == 0) {
            rec.cycle_id = field.cycle[i];
            rec.alignment = field.alignment[i];
            rec.preperiod = field.preperiod[i];
        }
        rec.preperiod = std::min(rec.preperiod, field.preperiod[i]);
        if (grid.owned(static_cast<int>(i))) {
            rec.pixel_count += 1;
            auto e = sphere_embed(grid.center(static_cast<int>(i)));
            for (int k = 0; k < 3; ++k) centroid_acc[id][k] += e[k];
        }
    }
    for (int id = 0; id < labels.count; ++id) {
        auto& acc = centroid_acc[id];
        double nrm = std::sqrt(acc[0] * acc[0] + acc[1] * acc[1] + acc[2] * acc[2]);
        ComponentRecord& rec = atlas.components[id];
        if (nrm > 1e-12) {
            // back from the unit sphere: z = (X + iY) / (1 - Z)
            double X = acc[0] / nrm, Y = acc[1] / nrm, Z = acc[2] / nrm;
            if (Z > 1.0 - 1e-12)
                rec.centroid = ExtendedPoint::infinity();
            else
                rec.centroid = make_point(cplx(X / (1.0 - Z), Y / (1.0 - Z)));
        }
    }
    for (const auto& m : marked) {
        int idx = grid.locate(m);
        if (idx >= 0 && atlas.label[idx] >= 0)
            atlas.components[atlas.label[idx]].has_marked_center = true;
    }
    // A component holding one of its cycle points is periodic: preperiod 0
    // regardless of capture-ball quantization.
    for (const auto& cyc : field.cycles)
        for (const auto& p : cyc.points) {
            int idx = grid.locate(p);
            if (idx >= 0 && atlas.label[idx] >= 0)
                atlas.components[atlas.label[idx]].preperiod = 0;
        }
    return atlas;
}

int FatouAtlas::component_at(const ExtendedPoint& p) const {
    int idx = grid.locate(p);
    return idx >= 0 ? label[idx] : -1;
}

SphereMask FatouAtlas::component_mask(int id) const {
    SphereMask m(grid);
    for (std::size_t i = 0; i < label.size(); ++i)
        if (label[i] == id) m.bits[i] = 1;
    return m;
}

SphereMask FatouAtlas::boundary_mask(int id) const {
    SphereMask m(grid);
    int n = grid.n();
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label[i] != id) continue;
        int c = grid.chart_of(static_cast<int>(i)), x = grid.x_of(static_cast<int>(i)),
            y = grid.y_of(static_cast<int>(i));
        static const int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (auto& d : d4) {
            int nx = x + d[0], ny = y + d[1];
            if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
            if (label[grid.index(c, nx, ny)] != id) {
                m.bits[i] = 1;
                break;
            }
        }
    }
    return m;
}

void contact_graph(FatouAtlas& atlas, int gap_px) {
    atlas.gap_px = gap_px;
    atlas.contacts_computed = true;
    atlas.contacts.clear();
    const SphereGrid& grid = atlas.grid;
    int n = grid.n();
    std::map<std::pair<int, int>, int> best;
    for (std::size_t i = 0; i < atlas.label.size(); ++i) {
        std::int32_t a = atlas.label[i];
        if (a < 0) continue;
        int c = grid.chart_of(static_cast<int>(i)), x = grid.x_of(static_cast<int>(i)),
            y = grid.y_of(static_cast<int>(i));
        for (int dy = -gap_px; dy <= gap_px; ++dy)
            for (int dx = -gap_px; dx <= gap_px; ++dx) {
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
                std::int32_t b = atlas.label[grid.index(c, nx, ny)];
                if (b < 0 || b == a) continue;
                int d = std::max(std::abs(dx), std::abs(dy));
                auto k = std::minmax(a, b);
                auto it = best.find({k.first, k.second});
                if (it == best.end() || d < it->second) best[{k.first, k.second}] = d;
            }
    }
    for (const auto& [pair, gap] : best)
        atlas.contacts.push_back({pair.first, pair.second, gap});
}

JuliaSample julia_sample(const RationalMap& map, int count, int burn_in,
                         std::uint64_t seed) {
    JuliaSample out;
    out.method = "inverse-iteration";
    std::mt19937_64 rng(seed);
    ExtendedPoint z(cplx(0.4123, 0.2711));
    int total = count + burn_in;
    out.points.reserve(count);
    for (int k = 0; k < total; ++k) {
        auto pre = map.preimages(z);
        if (pre.empty()) break;
        z = pre[std::uniform_int_distribution<std::size_t>(0, pre.size() - 1)(rng)];
        if (k >= burn_in) out.points.push_back(z);
    }
    return out;
}

namespace {

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T take(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

void put_point(std::ofstream& out, const ExtendedPoint& p) {
    put<std::uint8_t>(out, p.inf ? 1 : 0);
    put<double>(out, p.z.real());
    put<double>(out, p.z.imag());
}
ExtendedPoint take_point(std::ifstream& in) {
    bool inf = take<std::uint8_t>(in) != 0;
    double re = take<double>(in), im = take<double>(in);
    return inf ? ExtendedPoint::infinity() : ExtendedPoint(re, im);
}

} // namespace

void save_atlas(const FatouAtlas& atlas, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MapError("cannot write atlas: " + path);
    out.write("JGAT", 4);
    put<std::uint32_t>(out, 1); // version
    put<std::uint32_t>(out, atlas.grid.n());
    put<std::uint32_t>(out, 2); // charts
    put<std::int32_t>(out, atlas.gap_px);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(atlas.cycles.size()));
    for (const auto& c : atlas.cycles) {
        put<std::int32_t>(out, c.period);
        put<double>(out, c.multiplier_modulus);
        put<std::int32_t>(out, static_cast<std::int32_t>(c.cls));
        for (const auto& p : c.points) put_point(out, p);
    }
    put<std::uint32_t>(out, static_cast<std::uint32_t>(atlas.components.size()));
    for (const auto& r : atlas.components) {
        put<std::int32_t>(out, r.cycle_id);
        put<std::int32_t>(out, r.alignment);
        put<std::int32_t>(out, r.preperiod);
        put<std::uint64_t>(out, r.pixel_count);
        put_point(out, r.centroid);
        put<std::uint8_t>(out, r.has_marked_center ? 1 : 0);
    }
    put<std::uint32_t>(out, static_cast<std::uint32_t>(atlas.contacts.size()));
    for (const auto& e : atlas.contacts) {
        put<std::int32_t>(out, e.a);
        put<std::int32_t>(out, e.b);
        put<std::int32_t>(out, e.gap);
    }
    // Run-length encoded label planes.
    std::size_t i = 0;
    while (i < atlas.label.size()) {
        std::size_t j = i;
        while (j < atlas.label.size() && atlas.label[j] == atlas.label[i]) ++j;
        put<std::int32_t>(out, atlas.label[i]);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(j - i));
        i = j;
    }
}

FatouAtlas load_atlas(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MapError("cannot read atlas: " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::string(magic, 4) != "JGAT") throw MapError("bad atlas magic");
    if (take<std::uint32_t>(in) != 1) throw MapError("unsupported atlas version");
    FatouAtlas atlas;
    atlas.grid = SphereGrid(static_cast<int>(take<std::uint32_t>(in)));
    if (take<std::uint32_t>(in) != 2) throw MapError("unsupported chart layout");
    atlas.gap_px = take<std::int32_t>(in);
    std::uint32_t ncyc = take<std::uint32_t>(in);
    for (std::uint32_t k = 0; k < ncyc; ++k) {
        CycleRecord c;
        c.period = take<std::int32_t>(in);
        c.multiplier_modulus = take<double>(in);
        c.cls = static_cast<CycleClass>(take<std::int32_t>(in));
        for (int p = 0; p < c.period; ++p) c.points.push_back(take_point(in));
        atlas.cycles.push_back(std::move(c));
    }
    std::uint32_t ncomp = take<std::uint32_t>(in);
    for (std::uint32_t k = 0; k < ncomp; ++k) {
        ComponentRecord r;
        r.cycle_id = take<std::int32_t>(in);
        r.alignment = take<std::int32_t>(in);
        r.preperiod = take<std::int32_t>(in);
        r.pixel_count = take<std::uint64_t>(in);
        r.centroid = take_point(in);
        r.has_marked_center = take<std::uint8_t>(in) != 0;
        atlas.components.push_back(r);
    }
    std::uint32_t nedge = take<std::uint32_t>(in);
    for (std::uint32_t k = 0; k < nedge; ++k) {
        ContactEdge e;
        e.a = take<std::int32_t>(in);
        e.b = take<std::int32_t>(in);
        e.gap = take<std::int32_t>(in);
        atlas.contacts.push_back(e);
    }
    atlas.label.reserve(atlas.grid.pixel_count());
    while (atlas.label.size() < atlas.grid.pixel_count() && in) {
        std::int32_t v = take<std::int32_t>(in);
        std::uint32_t run = take<std::uint32_t>(in);
        for (std::uint32_t k = 0; k < run; ++k) atlas.label.push_back(v);
    }
    if (atlas.label.size() != atlas.grid.pixel_count())
        throw MapError("truncated atlas label plane");
    return atlas;
}

} // namespace juliagraph
