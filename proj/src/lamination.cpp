#include "juliagraph/lamination.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>

#include <json.hpp>

namespace juliagraph {

bool leaves_cross(const Leaf& l, const Leaf& m) {
    if (l.a == m.a || l.a == m.b || l.b == m.a || l.b == m.b) return false;
    bool c_in = cyclic_between(l.a, m.a, l.b);
    bool d_in = cyclic_between(l.a, m.b, l.b);
    return c_in != d_in;
}

FiniteLamination::FiniteLamination(std::vector<Leaf> leaves) {
    std::set<Leaf> dedup(leaves.begin(), leaves.end());
    leaves_.assign(dedup.begin(), dedup.end());
    std::map<Angle, int> endpoint_count;
    for (const auto& l : leaves_) {
        if (l.a == l.b) throw LaminationError("leaf with equal endpoints " + l.a.str());
        if (++endpoint_count[l.a] > 2)
            throw LaminationError("more than two leaves at endpoint " + l.a.str());
        if (++endpoint_count[l.b] > 2)
            throw LaminationError("more than two leaves at endpoint " + l.b.str());
    }
    for (std::size_t i = 0; i < leaves_.size(); ++i)
        for (std::size_t j = i + 1; j < leaves_.size(); ++j)
            if (leaves_cross(leaves_[i], leaves_[j]))
                throw LaminationError("crossing leaves (" + leaves_[i].a.str() + "," +
                                      leaves_[i].b.str() + ") and (" + leaves_[j].a.str() +
                                      "," + leaves_[j].b.str() + ")");
}

FiniteLamination FiniteLamination::cubic_chain(int N) {
    std::vector<Leaf> ls;
    for (int n = 1; n <= N; ++n) {
        std::int64_t q = 1LL << (n + 1);
        ls.emplace_back(Angle(1, q), Angle(q - 1, q));
    }
    return FiniteLamination(std::move(ls));
}

FiniteLamination FiniteLamination::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LaminationError("cannot open lamination file: " + path);
    nlohmann::json j;
    in >> j;
    std::vector<Leaf> ls;
    for (const auto& pair : j.at("leaves"))
        ls.emplace_back(Angle::parse(pair.at(0).get<std::string>()),
                        Angle::parse(pair.at(1).get<std::string>()));
    return FiniteLamination(std::move(ls));
}

void FiniteLamination::save_json(const std::string& path) const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : leaves_) arr.push_back({l.a.str(), l.b.str()});
    nlohmann::json j;
    j["leaves"] = arr;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

void LaminationModel::build() {
    const auto& leaves = lam_.leaves();
    if (leaves.empty()) {
        QuotientCircle full;
        full.full = true;
        circles_.push_back(full);
        circle_classes_.push_back({});
        return;
    }

    // Endpoints, sorted cyclically.
    std::vector<Angle> pts;
    for (const auto& l : leaves) {
        pts.push_back(l.a);
        pts.push_back(l.b);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    int m = static_cast<int>(pts.size());
    std::map<Angle, int> index;
    for (int i = 0; i < m; ++i) index[pts[i]] = i;

    // Identification classes: transitive closure of leaf joins.
    DisjointSet ds(m);
    for (const auto& l : leaves) ds.unite(index[l.a], index[l.b]);
    std::map<int, int> root_to_class;
    for (int i = 0; i < m; ++i) {
        int r = ds.find(i);
        if (!root_to_class.count(r)) {
            root_to_class[r] = static_cast<int>(classes_.size());
            classes_.push_back({});
        }
        classes_[root_to_class[r]].push_back(pts[i]);
        endpoint_class_[pts[i]] = root_to_class[r];
    }

    // Planar graph on the closed disk: vertices = endpoints, edges = the m
    // elementary boundary arcs plus one chord per leaf. Darts are indexed as
    // 2*e (forward) / 2*e+1 (reverse); arcs first, then chords.
    int n_arc = m, n_chord = static_cast<int>(leaves.size());
    int n_edges = n_arc + n_chord;
    auto tail = [&](int dart) -> int {
        int e = dart / 2;
        bool rev = dart & 1;
        if (e < n_arc) return rev ? (e + 1) % m : e;
        const Leaf& l = leaves[e - n_arc];
        return rev ? index[l.b] : index[l.a];
    };
    auto head = [&](int dart) -> int { return tail(dart ^ 1); };

    // Rotation system (counterclockwise) at each vertex v:
    //   [arc toward next vertex, chords sorted ccw by far endpoint, arc toward prev].
    std::vector<std::vector<int>> rot(m);
    std::vector<std::vector<int>> chords_at(m);
    for (int c = 0; c < n_chord; ++c) {
        chords_at[index[leaves[c].a]].push_back(2 * (n_arc + c));
        chords_at[index[leaves[c].b]].push_back(2 * (n_arc + c) + 1);
    }
    for (int v = 0; v < m; ++v) {
        std::vector<int> ch = chords_at[v];
        std::sort(ch.begin(), ch.end(), [&](int d1, int d2) {
            // ccw offset of the far endpoint from v
            auto off = [&](int d) {
                Rational r = pts[head(d)].t - pts[v].t;
                if (r.p < 0) r = r + Rational(1, 1);
                return r;
            };
            return off(d1) < off(d2);
        });
        rot[v].push_back(2 * v); // arc leaving ccw
        for (int d : ch) rot[v].push_back(d);
        rot[v].push_back(2 * ((v - 1 + m) % m) + 1); // reversed previous arc
    }
    std::vector<int> rot_pos(2 * n_edges, -1);
    for (int v = 0; v < m; ++v)
        for (std::size_t k = 0; k < rot[v].size(); ++k) rot_pos[rot[v][k]] = static_cast<int>(k);

    // Face traversal: next dart = clockwise-next of the reversed dart.
    auto next_dart = [&](int d) {
        int r = d ^ 1;
        int v = tail(r);
        int k = rot_pos[r];
        int sz = static_cast<int>(rot[v].size());
        return rot[v][(k - 1 + sz) % sz];
    };

    std::vector<int> face_of(2 * n_edges, -1);
    int outer_face = -1;
    std::vector<std::vector<int>> faces;
    for (int d0 = 0; d0 < 2 * n_edges; ++d0) {
        if (face_of[d0] != -1) continue;
        int id = static_cast<int>(faces.size());
        faces.push_back({});
        int d = d0;
        do {
            face_of[d] = id;
            faces[id].push_back(d);
            d = next_dart(d);
        } while (d != d0);
    }
    outer_face = face_of[1]; // reverse of arc 0 borders the outside of the disk

    // Gaps with boundary arcs become quotient circles; between consecutive
    // arc darts in the face walk sits a run of chords, all in one class.
    for (std::size_t fid = 0; fid < faces.size(); ++fid) {
        if (static_cast<int>(fid) == outer_face) continue;
        const auto& walk = faces[fid];
        std::vector<int> arc_positions;
        for (std::size_t k = 0; k < walk.size(); ++k) {
            int d = walk[k];
            if (d / 2 < n_arc && !(d & 1)) arc_positions.push_back(static_cast<int>(k));
        }
        if (arc_positions.empty()) continue; // polygon gap: already one class
        QuotientCircle qc;
        int na = static_cast<int>(arc_positions.size());
        for (int i = 0; i < na; ++i) {
            // Merge runs of consecutive arcs (no chord between them).
            int start = arc_positions[i];
            CircArc arc;
            arc.lo = pts[tail(walk[start])];
            arc.hi = pts[head(walk[start])];
            qc.arcs.push_back(arc);
            int after = (start + 1) % static_cast<int>(walk.size());
            // Junction class between this arc and the next: the first chord's class.
            int dnext = walk[after];
            if (dnext / 2 >= n_arc) {
                qc.junctions.push_back(endpoint_class_[pts[tail(dnext)]]);
            } else {
                // Two boundary arcs share a vertex only through chords, so a
                // direct arc-to-arc step cannot happen in a gap walk.
                throw LaminationError("internal: arc-to-arc junction in gap walk");
            }
        }
        // Coalesce consecutive arcs that share a junction class equal on both
        // sides? Not needed: arcs stay as traced; junctions align one-per-arc.
        circles_.push_back(std::move(qc));
    }

    // Incidence. A circle visiting the same class at two junction slots would
    // be a theta configuration, impossible for unlinked chords.
    circle_classes_.resize(circles_.size());
    class_circles_.resize(classes_.size());
    for (std::size_t c = 0; c < circles_.size(); ++c) {
        std::set<int> cls(circles_[c].junctions.begin(), circles_[c].junctions.end());
        if (cls.size() != circles_[c].junctions.size())
            throw LaminationError("internal: circle touches a class twice");
        for (int k : cls) {
            circle_classes_[c].push_back(k);
            class_circles_[k].push_back(static_cast<int>(c));
        }
    }

    // The circle/class incidence graph of an unlinked chord system is a tree;
    // verify, since every downstream operation relies on it.
    int edges = 0;
    for (const auto& cc : circle_classes_) edges += static_cast<int>(cc.size());
    int nodes = static_cast<int>(circles_.size() + classes_.size());
    if (edges != nodes - 1)
        throw LaminationError("quotient incidence graph is not a tree");
}

LaminationModel::LaminationModel(FiniteLamination lam) : lam_(std::move(lam)) { build(); }

QuotientPoint LaminationModel::quotient_of(const Angle& x) const {
    QuotientPoint qp;
    qp.angle = x;
    auto it = endpoint_class_.find(x);
    if (it != endpoint_class_.end()) qp.class_id = it->second;
    return qp;
}

int LaminationModel::circle_containing(const Angle& x) const {
    if (endpoint_class_.count(x)) return -1;
    for (std::size_t c = 0; c < circles_.size(); ++c) {
        if (circles_[c].full) return static_cast<int>(c);
        for (const auto& arc : circles_[c].arcs)
            if (arc.contains_interior(x)) return static_cast<int>(c);
    }
    throw LaminationError("angle " + x.str() + " not interior to any circle trace");
}

bool CircleTreeModel::contains_class(int cls) const {
    for (int c : circle_ids)
        for (int k : model->classes_of_circle(c))
            if (k == cls) return true;
    return false;
}

namespace {

// Bipartite incidence tree node ids: circles [0, C), classes [C, C+K).
struct IncidenceTree {
    const LaminationModel* model;
    int C, K;
    explicit IncidenceTree(const LaminationModel& m)
        : model(&m),
          C(static_cast<int>(m.circles().size())),
          K(m.class_count()) {}
    std::vector<int> neighbors(int node) const {
        std::vector<int> out;
        if (node < C) {
            for (int k : model->classes_of_circle(node)) out.push_back(C + k);
        } else {
            for (int c : model->circles_of_class(node - C)) out.push_back(c);
        }
        return out;
    }
    // Minimal subtree spanning the required nodes; returns the node set.
    std::set<int> steiner(const std::vector<int>& required) const {
        std::set<int> marked;
        if (required.empty()) return marked;
        std::vector<int> parent(C + K, -2);
        std::queue<int> bfs;
        bfs.push(required[0]);
        parent[required[0]] = -1;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (int u : neighbors(v))
                if (parent[u] == -2) {
                    parent[u] = v;
                    bfs.push(u);
                }
        }
        marked.insert(required[0]);
        for (int r : required) {
            if (parent[r] == -2) throw LaminationError("generators in disconnected quotient");
            int v = r;
            while (v != -1 && !marked.count(v)) {
                marked.insert(v);
                v = parent[v];
            }
        }
        return marked;
    }
};

CircleTreeModel tree_from_nodes(std::shared_ptr<const LaminationModel> model,
                                const std::set<int>& nodes,
                                const std::set<int>& forced_circles) {
    int C = static_cast<int>(model->circles().size());
    CircleTreeModel t;
    t.model = std::move(model);
    for (int n : nodes)
        if (n < C) t.circle_ids.insert(n);
    for (int c : forced_circles) t.circle_ids.insert(c);
    if (t.circle_ids.empty())
        throw LaminationError("need >= 2 marked quotient points");
    return t;
}

} // namespace

CircleTreeModel span(std::shared_ptr<const LaminationModel> model,
                     const std::vector<SpanGenerator>& generators) {
    if (generators.empty()) throw LaminationError("span needs generators");
    const LaminationModel& M = *model;
    IncidenceTree tree(M);
    std::vector<int> required;
    std::set<int> forced;
    std::set<std::pair<int, std::string>> point_keys; // (class id or -1, angle text)
    for (const auto& g : generators) {
        if (g.kind == SpanGenerator::circle) {
            if (g.circle_id < 0 || g.circle_id >= tree.C)
                throw LaminationError("bad circle generator id");
            required.push_back(g.circle_id);
            forced.insert(g.circle_id);
        } else {
            QuotientPoint qp = M.quotient_of(g.angle);
            if (qp.is_class()) {
                required.push_back(tree.C + qp.class_id);
                point_keys.insert({qp.class_id, ""});
            } else {
                int cid = M.circle_containing(g.angle);
                required.push_back(cid);
                forced.insert(cid);
                point_keys.insert({-1, g.angle.str()});
            }
        }
    }
    // A whole-circle generator carries infinitely many quotient points.
    if (forced.empty() && point_keys.size() < 2)
        throw LaminationError("need >= 2 marked quotient points");
    return tree_from_nodes(model, tree.steiner(required), forced);
}

CircleTreeModel tree_union(const CircleTreeModel& t1, const CircleTreeModel& t2) {
    if (t1.model != t2.model) throw LaminationError("trees from different laminations");
    // Point sets must intersect: shared circle or shared identification point.
    bool meet = false;
    for (int c : t1.circle_ids)
        if (t2.circle_ids.count(c)) meet = true;
    if (!meet) {
        for (int c : t1.circle_ids)
            for (int k : t1.model->classes_of_circle(c))
                if (t2.contains_class(k)) meet = true;
    }
    if (!meet) throw LaminationError("union of disjoint circle-trees");
    CircleTreeModel out;
    out.model = t1.model;
    out.circle_ids = t1.circle_ids;
    out.circle_ids.insert(t2.circle_ids.begin(), t2.circle_ids.end());
    return out;
}

TreeIntersection tree_intersection(const CircleTreeModel& t1, const CircleTreeModel& t2) {
    if (t1.model != t2.model) throw LaminationError("trees from different laminations");
    TreeIntersection res;
    CircleTreeModel out;
    out.model = t1.model;
    for (int c : t1.circle_ids)
        if (t2.circle_ids.count(c)) out.circle_ids.insert(c);
    if (!out.circle_ids.empty()) {
        res.tree = std::move(out);
        return res;
    }
    for (int c : t1.circle_ids)
        for (int k : t1.model->classes_of_circle(c))
            if (t2.contains_class(k)) {
                res.singleton_class = k;
                return res;
            }
    throw LaminationError("intersection of disjoint circle-trees");
}

TreeReport classify_tree(const CircleTreeModel& t) {
    const LaminationModel& M = *t.model;
    TreeReport rep;
    rep.circle_count = static_cast<int>(t.circle_ids.size());
    // mu of an identification point = number of member circles through it.
    std::map<int, int> mu;
    for (int c : t.circle_ids)
        for (int k : M.classes_of_circle(c)) mu[k] += 1;
    rep.mu_point = mu;
    for (const auto& [k, m] : mu) {
        if (m >= 2) rep.cut_points.push_back(k);
        if (m >= 3) rep.branched_points.push_back(k);
    }
    for (int c : t.circle_ids) {
        int mc = 0;
        for (int k : M.classes_of_circle(c))
            if (mu[k] >= 2) ++mc;
        rep.mu_circle[c] = mc;
        if (mc <= 1)
            rep.end_circles.push_back(c);
        else
            rep.cut_circles.push_back(c);
        if (mc >= 3) rep.branched_circles.push_back(c);
    }
    rep.ends = static_cast<int>(rep.end_circles.size());
    if (rep.ends >= 2) {
        long lhs = 0;
        for (int k : rep.branched_points) lhs += mu[k] - 2;
        for (int c : rep.branched_circles) lhs += rep.mu_circle[c] - 2;
        rep.identity_checked = true;
        rep.identity_lhs = lhs;
        rep.identity_rhs = rep.ends - 2;
        rep.identity_holds = (lhs == rep.identity_rhs);
    }
    return rep;
}

std::vector<Leaf> leaf_image(const std::vector<Leaf>& leaves, std::int64_t d) {
    std::vector<Leaf> out;
    for (const auto& l : leaves) {
        Angle a = l.a.times(d), b = l.b.times(d);
        if (a == b) continue; // degenerate: image is a point
        out.emplace_back(a, b);
    }
    return out;
}

namespace {

bool arcs_overlap_positively(const CircArc& x, const CircArc& y) {
    // Closed cyclic arcs share a positive-length segment iff one's interior
    // point set meets the other's interior; test endpoints falling strictly
    // inside plus full containment.
    if (x.contains_interior(y.lo) || x.contains_interior(y.hi)) return true;
    if (y.contains_interior(x.lo) || y.contains_interior(x.hi)) return true;
    // identical arcs
    if (x.lo == y.lo && x.hi == y.hi) return true;
    return false;
}

} // namespace

CircleTreeModel image_under_multiplication(const CircleTreeModel& t, std::int64_t d) {
    const LaminationModel& M = *t.model;
    // Invariance of the ambient lamination under angle d-tupling.
    std::set<Leaf> have(M.lamination().leaves().begin(), M.lamination().leaves().end());
    for (const auto& l : M.lamination().leaves()) {
        Angle a = l.a.times(d), b = l.b.times(d);
        if (a == b) continue;
        if (!have.count(Leaf(a, b)))
            throw LaminationError("lamination not forward-invariant under multiplication by " +
                                  std::to_string(d));
    }

    // d-tupled trace arcs of the member circles.
    std::vector<CircArc> image_arcs;
    bool whole = false;
    for (int c : t.circle_ids) {
        const QuotientCircle& qc = M.circles()[c];
        if (qc.full) {
            whole = true;
            break;
        }
        for (const auto& arc : qc.arcs) {
            Rational len = arc.length();
            if (Rational(d, 1) * len >= Rational(1, 1)) {
                whole = true;
                break;
            }
            CircArc ia;
            ia.lo = arc.lo.times(d);
            ia.hi = arc.hi.times(d);
            image_arcs.push_back(ia);
        }
        if (whole) break;
    }

    CircleTreeModel out;
    out.model = t.model;
    if (whole) {
        for (std::size_t c = 0; c < M.circles().size(); ++c)
            out.circle_ids.insert(static_cast<int>(c));
        return out;
    }

    // Circles of the image: trace overlaps the image arc set with interior.
    std::vector<int> required;
    std::set<int> forced;
    for (std::size_t c = 0; c < M.circles().size(); ++c) {
        const QuotientCircle& qc = M.circles()[c];
        bool hit = false;
        for (const auto& arc : qc.arcs)
            for (const auto& ia : image_arcs)
                if (arcs_overlap_positively(arc, ia)) hit = true;
        if (hit) {
            required.push_back(static_cast<int>(c));
            forced.insert(static_cast<int>(c));
        }
    }
    if (required.empty()) throw LaminationError("image tree empty (degenerate input)");
    IncidenceTree tree(M);
    return tree_from_nodes(t.model, tree.steiner(required), forced);
}

void write_chord_diagram_svg(const FiniteLamination& lam, const std::string& path,
                             const CircleTreeModel* highlight) {
    std::ofstream out(path);
    if (!out) throw LaminationError("cannot write " + path);
    const double R = 240.0, cx = 256.0, cy = 256.0;
    auto px = [&](const Angle& a) {
        double th = a.radians();
        return std::pair<double, double>(cx + R * std::cos(th), cy - R * std::sin(th));
    };
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='512' height='512'>\n";
    out << "<circle cx='" << cx << "' cy='" << cy << "' r='" << R
        << "' fill='none' stroke='black' stroke-width='1.5'/>\n";
    for (const auto& l : lam.leaves()) {
        auto [x1, y1] = px(l.a);
        auto [x2, y2] = px(l.b);
        out << "<line x1='" << x1 << "' y1='" << y1 << "' x2='" << x2 << "' y2='" << y2
            << "' stroke='#3366cc' stroke-width='1.2'/>\n";
    }
    if (highlight) {
        const auto& M = *highlight->model;
        for (int c : highlight->circle_ids) {
            const QuotientCircle& qc = M.circles()[c];
            if (qc.full) continue;
            for (const auto& arc : qc.arcs) {
                double a0 = arc.lo.radians(), a1 = arc.hi.radians();
                if (a1 < a0) a1 += 2 * M_PI;
                auto [x1, y1] = px(arc.lo);
                auto [x2, y2] = px(arc.hi);
                int large = (a1 - a0 > M_PI) ? 1 : 0;
                out << "<path d='M " << x1 << " " << y1 << " A " << R << " " << R
                    << " 0 " << large << " 0 " << x2 << " " << y2
                    << "' fill='none' stroke='#cc3333' stroke-width='3'/>\n";
            }
        }
    }
    out << "</svg>\n";
}

} // namespace juliagraph
