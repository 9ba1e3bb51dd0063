#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "juliagraph/bottcher.hpp"
#include "juliagraph/chains.hpp"
#include "juliagraph/graph_pullback.hpp"
#include "juliagraph/grid_dynamics.hpp"
#include "juliagraph/lamination.hpp"
#include "juliagraph/planar_calculus.hpp"
#include "juliagraph/rational_map.hpp"
#include "juliagraph/render.hpp"
#include "juliagraph/report.hpp"

using namespace juliagraph;
using nlohmann::json;

namespace {

ExtendedPoint parse_point(const std::string& s) {
    if (s == "inf" || s == "infinity") return ExtendedPoint::infinity();
    auto comma = s.find(',');
    if (comma == std::string::npos) return ExtendedPoint(std::stod(s), 0.0);
    return ExtendedPoint(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

std::vector<Angle> parse_angles(const std::string& s) {
    std::vector<Angle> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        std::string tok = s.substr(pos, next - pos);
        if (!tok.empty()) out.push_back(Angle::parse(tok));
        pos = next + 1;
    }
    return out;
}

std::vector<int> parse_ids(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        std::string tok = s.substr(pos, next - pos);
        if (!tok.empty()) out.push_back(std::stoi(tok));
        pos = next + 1;
    }
    return out;
}

FatouAtlas atlas_for(const RunConfig& cfg, const MarkedMap& mm, bool use_cache) {
    std::string key = mm.map.cache_key() + "_n" + std::to_string(cfg.resolution) + "_i" +
                      std::to_string(cfg.max_iter) + "_g" + std::to_string(cfg.contact_gap_px);
    std::filesystem::path cache =
        std::filesystem::path(cfg.out_dir) / ("jgatlas_" + key + ".bin");
    if (use_cache && std::filesystem::exists(cache)) {
        try {
            return load_atlas(cache.string());
        } catch (const std::exception&) {
            // fall through and recompute
        }
    }
    SphereGrid grid(cfg.resolution);
    ClassifiedField field = classify_grid(mm, grid, cfg.max_iter, cfg.grid_eps);
    FatouAtlas atlas = label_components(field, mm.marked);
    contact_graph(atlas, cfg.contact_gap_px);
    if (use_cache) {
        std::filesystem::create_directories(cfg.out_dir);
        save_atlas(atlas, cache.string());
    }
    return atlas;
}

json cycle_to_json(const CycleRecord& c) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(point_to_json(p));
    return {{"points", pts},
            {"period", c.period},
            {"multiplier_modulus", c.multiplier_modulus},
            {"class", cycle_class_name(c.cls)}};
}

int run_analyze(const RunConfig& cfg, const std::string& out_path) {
    RationalMap map = RationalMap::from_json_file(cfg.map_path);
    json payload;
    json crits = json::array();
    for (const auto& cd : map.critical_points())
        crits.push_back({{"point", point_to_json(cd.location)},
                         {"local_degree", cd.local_degree}});
    payload["critical_points"] = crits;
    auto res = certify_pcf(map, cfg.max_iter, cfg.orbit_eps);
    payload["pcf"] = res.ok();
    json orbits = json::array();
    if (res.ok()) {
        for (const auto& e : res.marked_map->orbit_table)
            orbits.push_back({{"critical_value", point_to_json(e.critical_value)},
                              {"preperiod", e.preperiod},
                              {"period", e.period}});
        json marked = json::array();
        for (const auto& p : res.marked_map->marked) marked.push_back(point_to_json(p));
        payload["marked_set"] = marked;
    } else {
        payload["marked_set"] = json::array();
        payload["failure"] = {{"critical_value", point_to_json(res.failure->critical_value)},
                              {"reason", res.failure->reason}};
    }
    payload["orbits"] = orbits;
    payload["degree"] = map.degree();
    json out = {{"tool_version", kToolVersion}, {"payload", payload}};
    if (out_path.empty())
        std::cout << out.dump(2) << std::endl;
    else
        save_json_file(out, out_path);
    return res.ok() ? 0 : 1;
}

int run_grid(const RunConfig& cfg, const std::string& atlas_out, const std::string& png_out,
             bool no_cache) {
    RationalMap map = RationalMap::from_json_file(cfg.map_path);
    auto res = certify_pcf(map, cfg.max_iter, cfg.orbit_eps);
    if (!res.ok()) throw MapError("map is not certified PCF at this tolerance");
    FatouAtlas atlas = atlas_for(cfg, *res.marked_map, !no_cache);
    if (!atlas_out.empty()) save_atlas(atlas, atlas_out);
    if (!png_out.empty()) render_atlas_png(atlas, png_out);
    json summary;
    summary["components"] = atlas.components.size();
    summary["contacts"] = atlas.contacts.size();
    json cyc = json::array();
    for (const auto& c : atlas.cycles) cyc.push_back(cycle_to_json(c));
    summary["cycles"] = cyc;
    std::cout << summary.dump(2) << std::endl;
    return 0;
}

int run_rays(const RunConfig& cfg, const std::string& center_s, int deg,
             const std::string& angles_s, const std::string& out_path,
             const std::string& svg_path, int steps_per_level, int levels) {
    RationalMap map = RationalMap::from_json_file(cfg.map_path);
    BottcherChart chart(map, parse_point(center_s), deg);
    auto angles = parse_angles(angles_s);
    if (angles.empty()) throw ConfigError("no angles given");
    auto rays = trace_rays(chart, map, angles, steps_per_level, levels);
    LandingTable table;
    table.tol = cfg.landing_tol;
    json jr = json::array();
    for (auto& ray : rays) {
        detect_landing(ray, cfg.landing_tol);
        json poly = json::array();
        for (const auto& p : ray.polyline) poly.push_back(point_to_json(p));
        json entry = {{"angle", ray.angle.str()},
                      {"levels", ray.levels_traced},
                      {"polyline", poly}};
        switch (ray.state) {
            case LandingState::landed:
                entry["state"] = "landed";
                entry["landing_point"] = point_to_json(ray.landing_point);
                table.landing[ray.angle] = ray.landing_point;
                break;
            case LandingState::aborted_near_critical:
                entry["state"] = "aborted-near-critical";
                entry["abort_location"] = point_to_json(ray.abort_location);
                break;
            default: entry["state"] = "unresolved";
        }
        jr.push_back(std::move(entry));
    }
    json payload = {{"rays", jr}};
    auto leafset = colanding_pairs(table, cfg.landing_tol);
    json jl = json::array();
    for (const auto& rec : leafset.records)
        jl.push_back({{"pair", {rec.leaf.a.str(), rec.leaf.b.str()}},
                      {"landing_point", point_to_json(rec.landing_point)}});
    payload["colanding_leaves"] = jl;
    if (out_path.empty())
        std::cout << payload.dump(2) << std::endl;
    else
        save_json_file(payload, out_path);
    if (!svg_path.empty()) {
        std::vector<Leaf> leaves = leafset.leaves();
        write_chord_diagram_svg(FiniteLamination(leaves), svg_path);
    }
    return 0;
}

json tree_report_json(const TreeReport& rep) {
    json j;
    j["circles"] = rep.circle_count;
    j["ends"] = rep.ends;
    json cuts = json::array();
    for (int c : rep.cut_points) cuts.push_back({{"class", c}, {"mu", rep.mu_point.at(c)}});
    j["cut_points"] = cuts;
    json bps = json::array();
    for (int c : rep.branched_points) bps.push_back({{"class", c}, {"mu", rep.mu_point.at(c)}});
    j["branched_points"] = bps;
    j["end_circles"] = rep.end_circles;
    j["cut_circles"] = rep.cut_circles;
    j["branched_circles"] = rep.branched_circles;
    if (rep.identity_checked) {
        j["counting_identity"] = {{"lhs", rep.identity_lhs},
                                  {"rhs", rep.identity_rhs},
                                  {"holds", rep.identity_holds}};
    }
    return j;
}

int run_lam(const std::string& verb, const std::string& lam_path, const std::string& angles_s,
            const std::string& tree_a, const std::string& tree_b, int dmul,
            const std::string& out_path, const std::string& svg_path) {
    auto model = std::make_shared<const LaminationModel>(
        FiniteLamination::from_json_file(lam_path));
    json payload;
    auto tree_from_ids = [&](const std::string& ids) {
        CircleTreeModel t;
        t.model = model;
        if (ids.empty() || ids == "all") {
            for (std::size_t c = 0; c < model->circles().size(); ++c)
                t.circle_ids.insert(static_cast<int>(c));
        } else {
            for (int c : parse_ids(ids)) t.circle_ids.insert(c);
        }
        return t;
    };
    auto dump_tree = [&](const CircleTreeModel& t) {
        json ids = json::array();
        for (int c : t.circle_ids) ids.push_back(c);
        return ids;
    };
    CircleTreeModel result;
    if (verb == "span") {
        std::vector<SpanGenerator> gens;
        for (const auto& a : parse_angles(angles_s)) gens.push_back(SpanGenerator::at(a));
        result = span(model, gens);
        payload["circles"] = dump_tree(result);
        payload["report"] = tree_report_json(classify_tree(result));
    } else if (verb == "union") {
        result = tree_union(tree_from_ids(tree_a), tree_from_ids(tree_b));
        payload["circles"] = dump_tree(result);
        payload["report"] = tree_report_json(classify_tree(result));
    } else if (verb == "intersect") {
        auto inter = tree_intersection(tree_from_ids(tree_a), tree_from_ids(tree_b));
        if (inter.tree) {
            result = *inter.tree;
            payload["circles"] = dump_tree(result);
            payload["report"] = tree_report_json(classify_tree(result));
        } else {
            payload["singleton_class"] = *inter.singleton_class;
        }
    } else if (verb == "classify") {
        result = tree_from_ids(tree_a);
        payload["circles"] = dump_tree(result);
        payload["report"] = tree_report_json(classify_tree(result));
    } else if (verb == "image") {
        result = image_under_multiplication(tree_from_ids(tree_a), dmul);
        payload["circles"] = dump_tree(result);
        payload["report"] = tree_report_json(classify_tree(result));
    } else {
        throw ConfigError("unknown lam verb: " + verb);
    }
    if (out_path.empty())
        std::cout << payload.dump(2) << std::endl;
    else
        save_json_file(payload, out_path);
    if (!svg_path.empty())
        write_chord_diagram_svg(model->lamination(), svg_path,
                                result.circle_ids.empty() ? nullptr : &result);
    return 0;
}

SphereMask mask_from_config(const SphereGrid& grid, const json& shapes) {
    SphereMask m(grid);
    for (const auto& s : shapes) {
        std::string type = s.at("type").get<std::string>();
        SphereMask part(grid);
        if (type == "disk") {
            part = disk_mask(grid, cplx(s.at("center")[0], s.at("center")[1]),
                             s.at("radius").get<double>());
        } else if (type == "annulus") {
            part = annulus_mask(grid, cplx(s.at("center")[0], s.at("center")[1]),
                                s.at("inner").get<double>(), s.at("outer").get<double>());
        } else if (type == "rect") {
            part = rect_mask(grid, cplx(s.at("lo")[0], s.at("lo")[1]),
                             cplx(s.at("hi")[0], s.at("hi")[1]));
        } else {
            throw ConfigError("unknown shape type: " + type);
        }
        m = mask_union(m, part);
    }
    return m;
}

int run_btype(const std::string& config_path, const std::string& out_path) {
    json cfg = load_json_file(config_path);
    int n = cfg.value("resolution", 512);
    SphereGrid grid(n);
    std::vector<ExtendedPoint> marked;
    for (const auto& p : cfg.at("marked")) {
        if (p.is_string())
            marked.push_back(ExtendedPoint::infinity());
        else
            marked.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    std::map<std::string, SphereMask> sets;
    for (const auto& s : cfg.at("sets"))
        sets.emplace(s.at("name").get<std::string>(), mask_from_config(grid, s.at("shapes")));
    json payload;
    json reports = json::object();
    for (const auto& [name, mask] : sets) {
        BranchedReport rep = branched_number(mask, marked);
        reports[name] = {{"m", rep.marked_on_set},
                         {"kappa", rep.kappa},
                         {"b", rep.b},
                         {"faces", rep.face_marked},
                         {"type", set_type_name(rep.type)}};
    }
    payload["reports"] = reports;
    if (cfg.contains("identity")) {
        const auto& id = cfg["identity"];
        auto rep = decomposition_identity(sets.at(id.at("domain").get<std::string>()),
                                          sets.at(id.at("compact").get<std::string>()), marked);
        payload["identity"] = {{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"holds", rep.holds}};
    }
    if (cfg.contains("skeleton")) {
        const auto& sk = cfg["skeleton"];
        payload["skeleton"] = skeleton_check(sets.at(sk.at("inner").get<std::string>()),
                                             sets.at(sk.at("outer").get<std::string>()), marked);
    }
    if (out_path.empty())
        std::cout << payload.dump(2) << std::endl;
    else
        save_json_file(payload, out_path);
    return 0;
}

int run_chains(const RunConfig& cfg, const std::string& report_path,
               const std::string& png_path, bool no_cache) {
    RationalMap map = RationalMap::from_json_file(cfg.map_path);
    auto res = certify_pcf(map, cfg.max_iter, cfg.orbit_eps);
    if (!res.ok()) throw MapError("map is not certified PCF at this tolerance");
    FatouAtlas atlas = atlas_for(cfg, *res.marked_map, !no_cache);
    ChainHierarchy h = build_hierarchy(atlas);
    json payload;
    payload["stabilization_level"] = h.stabilization_level;
    json levels = json::array();
    for (const auto& part : h.partitions) {
        json lv = json::array();
        for (const auto& chain : part) lv.push_back(chain);
        levels.push_back(lv);
    }
    payload["levels"] = levels;
    json maxi = json::array();
    for (const auto& rec : h.maximal)
        maxi.push_back({{"members", rec.members}, {"level", rec.level}});
    payload["maximal_chains"] = maxi;
    DecompositionReport dec = decompose(*res.marked_map, h);
    json types = json::array();
    for (auto t : dec.complement_types) types.push_back(set_type_name(t));
    payload["decomposition"] = {{"marked_chains", dec.marked_chain_ids},
                                {"complement_types", types},
                                {"complex", dec.complex_count},
                                {"annular", dec.annular_count},
                                {"simple", dec.simple_count}};
    if (report_path.empty())
        std::cout << payload.dump(2) << std::endl;
    else
        save_json_file(payload, report_path);
    if (!png_path.empty()) {
        // color pixels by maximal chain id
        int n = atlas.grid.n();
        Image img(2 * n, n);
        std::vector<int> chain_of(atlas.components.size(), -1);
        for (std::size_t k = 0; k < h.maximal.size(); ++k)
            for (int c : h.maximal[k].members) chain_of[c] = static_cast<int>(k);
        for (int chart = 0; chart < 2; ++chart)
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) {
                    int idx = atlas.grid.index(chart, x, y);
                    int px = chart * n + x, py = n - 1 - y;
                    if (atlas.label[idx] < 0) {
                        img.set(px, py, 0, 0, 0);
                        continue;
                    }
                    std::uint8_t r, g, b;
                    id_color(chain_of[atlas.label[idx]], r, g, b);
                    img.set(px, py, r, g, b);
                }
        write_png(img, png_path);
    }
    return 0;
}

int run_pullback(const RunConfig& cfg, const std::string& seed_kind,
                 const std::string& center_s, int deg, int depth,
                 const std::vector<std::string>& ray_specs, int steps, int stage_iterate,
                 const std::string& out_dir, bool no_cache, bool render) {
    RationalMap map = RationalMap::from_json_file(cfg.map_path);
    auto res = certify_pcf(map, cfg.max_iter, cfg.orbit_eps);
    if (!res.ok()) throw MapError("map is not certified PCF at this tolerance");
    const MarkedMap& mm = *res.marked_map;

    SeedSpec spec;
    if (seed_kind == "boundary") {
        spec.kind = SeedSpec::boundary_circle;
        spec.center = parse_point(center_s);
        spec.local_degree = deg;
        spec.depth = depth;
    } else if (seed_kind == "rays") {
        spec.kind = SeedSpec::rays;
        for (const auto& rs : ray_specs) {
            // center=0,0;period=2;deg=2;angles=1/2
            RaySpec r;
            std::size_t pos = 0;
            while (pos < rs.size()) {
                auto semi = rs.find(';', pos);
                if (semi == std::string::npos) semi = rs.size();
                std::string kv = rs.substr(pos, semi - pos);
                auto eq = kv.find('=');
                if (eq != std::string::npos) {
                    std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
                    if (k == "center") r.center = parse_point(v);
                    if (k == "period") r.return_period = std::stoi(v);
                    if (k == "deg") r.local_degree = std::stoi(v);
                    if (k == "angles") r.angles = parse_angles(v);
                }
                pos = semi + 1;
            }
            spec.ray_specs.push_back(std::move(r));
        }
        if (spec.ray_specs.empty()) throw ConfigError("rays seed needs --ray specs");
    } else {
        spec.kind = SeedSpec::user;
        json j = load_json_file(seed_kind);
        EmbeddedGraph g;
        for (const auto& v : j.at("vertices"))
            g.vertices.push_back({ExtendedPoint(v[0].get<double>(), v[1].get<double>()), false});
        for (const auto& e : j.at("edges")) {
            GraphEdge ge;
            ge.u = e.at("u").get<int>();
            ge.v = e.at("v").get<int>();
            for (const auto& p : e.at("polyline"))
                ge.polyline.emplace_back(p[0].get<double>(), p[1].get<double>());
            g.edges.push_back(std::move(ge));
        }
        spec.user_graph = std::move(g);
    }

    EmbeddedGraph g0 = seed_graph(mm, spec);
    JuliaSample julia = julia_sample(map, 20000, 64, cfg.seed);
    PullbackOptions opt;
    opt.resample_step = 1.0 / (4.0 * cfg.resolution);
    bool has_marked_vertex = false;
    for (const auto& v : g0.vertices) has_marked_vertex |= v.marked;
    opt.selection = has_marked_vertex ? PullbackOptions::by_marked : PullbackOptions::nearest;
    RationalMap stage_map = stage_iterate == 1 ? map : map.iterate_map(stage_iterate);
    PullbackRun run = iterate_pullback(stage_map, g0, steps, julia, mm.marked, opt);

    std::filesystem::create_directories(out_dir);
    json payload;
    payload["stages"] = run.stages.size();
    payload["step_distance"] = run.step_distance;
    payload["julia_coverage"] = run.julia_coverage;
    payload["rho_hat"] = run.rho_hat;
    payload["c_hat"] = run.c_hat;
    payload["r_squared"] = run.r_squared;
    payload["contracting"] = run.contracting;
    payload["pixel_unit"] = 4.0 / cfg.resolution;
    save_json_file(payload, (std::filesystem::path(out_dir) / "run.json").string());
    {
        std::ofstream csv(std::filesystem::path(out_dir) / "distances.csv");
        csv << "stage,step_distance,julia_coverage\n";
        for (std::size_t k = 0; k < run.stages.size(); ++k) {
            csv << k << ","
                << (k < run.step_distance.size() ? std::to_string(run.step_distance[k]) : "")
                << "," << run.julia_coverage[k] << "\n";
        }
    }
    // stage geometry
    for (std::size_t k = 0; k < run.stages.size(); ++k) {
        json jg;
        json verts = json::array();
        for (const auto& v : run.stages[k].vertices)
            verts.push_back({{"point", point_to_json(v.pt)}, {"marked", v.marked}});
        jg["vertices"] = verts;
        json edges = json::array();
        for (const auto& e : run.stages[k].edges) {
            json poly = json::array();
            for (const auto& p : e.polyline) poly.push_back(point_to_json(p));
            edges.push_back({{"u", e.u}, {"v", e.v}, {"polyline", poly}});
        }
        jg["edges"] = edges;
        save_json_file(jg, (std::filesystem::path(out_dir) / ("stage" + std::to_string(k) +
                                                              ".json"))
                               .string());
    }
    if (render) {
        FatouAtlas atlas = atlas_for(cfg, mm, !no_cache);
        render_run(run, &atlas, (std::filesystem::path(out_dir) / "frame").string());
    } else {
        render_run(run, nullptr, (std::filesystem::path(out_dir) / "frame").string());
    }
    std::cout << payload.dump(2) << std::endl;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"juliagraph: Fatou/Julia structure, circle-trees, and pullback graphs "
                 "for PCF rational maps"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    bool no_cache = false;
    app.add_option("--threads", cfg.threads, "worker threads (default: cores)");

    std::string out_path, png_path, svg_path, atlas_out;

    auto* analyze = app.add_subcommand("analyze", "critical points, orbits, PCF certificate");
    analyze->add_option("map", cfg.map_path, "map JSON file")->required();
    analyze->add_option("--out", out_path, "report JSON path");
    analyze->add_option("--max-iter", cfg.max_iter, "orbit iteration cap");
    analyze->add_option("--eps", cfg.orbit_eps, "orbit closure tolerance");

    auto* grid = app.add_subcommand("grid", "classify the sphere grid into basins");
    grid->add_option("map", cfg.map_path)->required();
    grid->add_option("--res", cfg.resolution, "grid resolution (power of two)");
    grid->add_option("--max-iter", cfg.max_iter);
    grid->add_option("--grid-eps", cfg.grid_eps, "basin capture tolerance");
    grid->add_option("--gap", cfg.contact_gap_px, "contact gap in pixels");
    grid->add_option("--out", atlas_out, "atlas binary output");
    grid->add_option("--png", png_path, "render output");
    grid->add_option("--out-dir", cfg.out_dir, "cache directory");
    grid->add_flag("--no-cache", no_cache);

    std::string center_s = "inf", angles_s;
    int deg = 2, steps_per_level = 8, levels = 40;
    auto* rays = app.add_subcommand("rays", "internal rays and landings");
    rays->add_option("map", cfg.map_path)->required();
    rays->add_option("--center", center_s, "superattracting fixed point (re,im or inf)");
    rays->add_option("--deg", deg, "local degree at the center");
    rays->add_option("--angles", angles_s, "comma list of exact turns p/q")->required();
    rays->add_option("--steps-per-level", steps_per_level);
    rays->add_option("--levels", levels);
    rays->add_option("--tol", cfg.landing_tol, "landing tolerance");
    rays->add_option("--out", out_path);
    rays->add_option("--svg", svg_path);

    std::string lam_verb, lam_path, tree_a, tree_b;
    int dmul = 2;
    auto* lam = app.add_subcommand("lam", "exact circle-tree operations");
    lam->add_option("verb", lam_verb, "span|union|intersect|classify|image")->required();
    lam->add_option("lamination", lam_path, "lamination JSON")->required();
    lam->add_option("--angles", angles_s, "span generators (exact turns)");
    lam->add_option("--tree", tree_a, "circle ids, or 'all'");
    lam->add_option("--tree-b", tree_b, "second tree for union/intersect");
    lam->add_option("--d", dmul, "multiplier for image");
    lam->add_option("--out", out_path);
    lam->add_option("--svg", svg_path);

    std::string btype_config;
    auto* btype = app.add_subcommand("btype", "branched numbers for mask configurations");
    btype->add_option("config", btype_config, "config JSON")->required();
    btype->add_option("--out", out_path);

    auto* chains = app.add_subcommand("chains", "Fatou chain hierarchy and decomposition");
    chains->add_option("map", cfg.map_path)->required();
    chains->add_option("--res", cfg.resolution);
    chains->add_option("--max-iter", cfg.max_iter);
    chains->add_option("--gap", cfg.contact_gap_px);
    chains->add_option("--report", out_path);
    chains->add_option("--png", png_path);
    chains->add_option("--out-dir", cfg.out_dir, "cache directory");
    chains->add_flag("--no-cache", no_cache);

    std::string seed_kind = "boundary", run_dir = "run";
    int pb_steps = 6, pb_depth = 8, pb_iterate = 1;
    std::vector<std::string> ray_specs;
    bool pb_render = false;
    auto* pullback = app.add_subcommand("pullback", "graph pullback iteration");
    pullback->add_option("map", cfg.map_path)->required();
    pullback->add_option("--seed", seed_kind, "boundary|rays|<graph.json>");
    pullback->add_option("--center", center_s, "boundary seed center");
    pullback->add_option("--deg", deg, "boundary seed local degree");
    pullback->add_option("--depth", pb_depth, "boundary seed equipotential depth");
    pullback->add_option("--ray", ray_specs,
                         "ray seed spec center=..;period=..;deg=..;angles=..");
    pullback->add_option("--steps", pb_steps, "pullback stages");
    pullback->add_option("--iterate", pb_iterate, "pull back through f^n per stage");
    pullback->add_option("--res", cfg.resolution);
    pullback->add_option("--seed-rng", cfg.seed, "sampling seed");
    pullback->add_option("--out", run_dir, "run output directory");
    pullback->add_flag("--render-atlas", pb_render, "overlay frames on the grid render");
    pullback->add_flag("--no-cache", no_cache);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cfg.threads > 0) setenv("JULIAGRAPH_THREADS", std::to_string(cfg.threads).c_str(), 1);

    try {
        cfg.validate();
        if (app.got_subcommand(analyze)) return run_analyze(cfg, out_path);
        if (app.got_subcommand(grid)) return run_grid(cfg, atlas_out, png_path, no_cache);
        if (app.got_subcommand(rays))
            return run_rays(cfg, center_s, deg, angles_s, out_path, svg_path, steps_per_level,
                            levels);
        if (app.got_subcommand(lam))
            return run_lam(lam_verb, lam_path, angles_s, tree_a, tree_b, dmul, out_path,
                           svg_path);
        if (app.got_subcommand(btype)) return run_btype(btype_config, out_path);
        if (app.got_subcommand(chains)) return run_chains(cfg, out_path, png_path, no_cache);
        if (app.got_subcommand(pullback))
            return run_pullback(cfg, seed_kind, center_s, deg, pb_depth, ray_specs, pb_steps,
                                pb_iterate, run_dir, no_cache, pb_render);
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 2;
}
