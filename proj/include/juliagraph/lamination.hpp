#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "juliagraph/rationals.hpp"

namespace juliagraph {

struct LaminationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chord of the disk with distinct rational endpoints.
struct Leaf {
    Angle a, b;
    Leaf() = default;
    Leaf(Angle x, Angle y) {
        if (y < x) std::swap(x, y);
        a = x;
        b = y;
    }
    friend bool operator==(const Leaf& l, const Leaf& r) { return l.a == r.a && l.b == r.b; }
    friend bool operator<(const Leaf& l, const Leaf& r) {
        return l.a < r.a || (l.a == r.a && l.b < r.b);
    }
};

// Chords {a,b}, {c,d} cross iff exactly one of c,d lies in the open arc (a,b).
bool leaves_cross(const Leaf& l, const Leaf& m);

// Finite set of pairwise unlinked leaves, at most two per endpoint.
class FiniteLamination {
public:
    FiniteLamination() = default;
    explicit FiniteLamination(std::vector<Leaf> leaves);

    static FiniteLamination from_json_file(const std::string& path);
    void save_json(const std::string& path) const;

    const std::vector<Leaf>& leaves() const { return leaves_; }
    bool empty() const { return leaves_.empty(); }

    // Leaf set of the paper's cubic example: (1/2^{n+1}, 1 - 1/2^{n+1}), n = 1..N.
    static FiniteLamination cubic_chain(int N);

private:
    std::vector<Leaf> leaves_;
};

// Closed arc [lo, hi] traversed counterclockwise (may wrap past 0).
struct CircArc {
    Angle lo, hi;
    Rational length() const {
        Rational d = hi.t - lo.t;
        if (d.p < 0) d = d + Rational(1, 1);
        return d;
    }
    bool contains_interior(const Angle& x) const { return cyclic_between(lo, x, hi); }
};

struct QuotientCircle {
    std::vector<CircArc> arcs;     // cyclic order; empty iff full circle
    std::vector<int> junctions;    // class id between arc i and arc i+1 (same size as arcs)
    bool full = false;             // whole boundary circle (empty lamination gap)
};

// Quotient point of the disk boundary: an identification class or a plain angle.
struct QuotientPoint {
    int class_id = -1; // >= 0: identification point
    Angle angle;       // representative (exact for singletons)
    bool is_class() const { return class_id >= 0; }
};

// The quotient cactus of a finite lamination: circles joined at identification
// points, with a tree-shaped incidence structure.
class LaminationModel {
public:
    explicit LaminationModel(FiniteLamination lam);

    const FiniteLamination& lamination() const { return lam_; }
    const std::vector<QuotientCircle>& circles() const { return circles_; }
    int class_count() const { return static_cast<int>(classes_.size()); }
    const std::vector<Angle>& class_angles(int cls) const { return classes_[cls]; }
    const std::vector<int>& circles_of_class(int cls) const { return class_circles_[cls]; }
    const std::vector<int>& classes_of_circle(int cid) const { return circle_classes_[cid]; }

    QuotientPoint quotient_of(const Angle& x) const;
    // Circle whose closed trace contains the angle (arc interior); -1 if x is
    // an identification point (then use circles_of_class).
    int circle_containing(const Angle& x) const;

private:
    FiniteLamination lam_;
    std::vector<std::vector<Angle>> classes_;
    std::vector<QuotientCircle> circles_;
    std::vector<std::vector<int>> class_circles_;
    std::vector<std::vector<int>> circle_classes_;
    std::map<Angle, int> endpoint_class_;
    void build();
};

// Generator for span: a marked quotient point (angle) or a whole circle.
struct SpanGenerator {
    enum Kind { point, circle } kind = point;
    Angle angle;
    int circle_id = -1;
    static SpanGenerator at(Angle a) {
        SpanGenerator g;
        g.kind = point;
        g.angle = a;
        return g;
    }
    static SpanGenerator whole_circle(int cid) {
        SpanGenerator g;
        g.kind = circle;
        g.circle_id = cid;
        return g;
    }
};

// Circle-tree in the quotient model: a connected union of whole circles.
struct CircleTreeModel {
    std::shared_ptr<const LaminationModel> model;
    std::set<int> circle_ids;

    bool contains_class(int cls) const;
};

struct TreeReport {
    int circle_count = 0;
    // class id -> mu for every identification point on the tree
    std::map<int, int> mu_point;
    std::vector<int> cut_points;      // mu >= 2
    std::vector<int> branched_points; // mu >= 3
    std::map<int, int> mu_circle;
    std::vector<int> end_circles;     // mu <= 1
    std::vector<int> cut_circles;     // mu >= 2
    std::vector<int> branched_circles;
    int ends = 0;
    bool identity_checked = false; // only when ends >= 2
    bool identity_holds = false;
    long identity_lhs = 0, identity_rhs = 0;
};

struct TreeIntersection {
    std::optional<CircleTreeModel> tree;
    std::optional<int> singleton_class; // intersection collapsed to one point
};

CircleTreeModel span(std::shared_ptr<const LaminationModel> model,
                     const std::vector<SpanGenerator>& generators);
CircleTreeModel tree_union(const CircleTreeModel& t1, const CircleTreeModel& t2);
TreeIntersection tree_intersection(const CircleTreeModel& t1, const CircleTreeModel& t2);
TreeReport classify_tree(const CircleTreeModel& t);
CircleTreeModel image_under_multiplication(const CircleTreeModel& t, std::int64_t d);

// Angle-level image of a lamination under d-tupling; degenerate leaves drop out.
std::vector<Leaf> leaf_image(const std::vector<Leaf>& leaves, std::int64_t d);

void write_chord_diagram_svg(const FiniteLamination& lam, const std::string& path,
                             const CircleTreeModel* highlight = nullptr);

} // namespace juliagraph
