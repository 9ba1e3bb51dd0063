#include "juliagraph/report.hpp"

#include <fstream>

#include "juliagraph/geometry.hpp"

namespace juliagraph {

const char* kToolVersion = "0.1.0";

void RunConfig::validate() const {
    auto pow2 = [](int n) { return n > 0 && (n & (n - 1)) == 0; };
    if (!pow2(resolution) || resolution < 128 || resolution > 4096)
        throw ConfigError("resolution must be a power of two in [128, 4096]");
    if (orbit_eps <= 0 || grid_eps <= 0 || landing_tol <= 0)
        throw ConfigError("tolerances must be positive");
    if (contact_gap_px < 1) throw ConfigError("contact gap must be >= 1 pixel");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
}

nlohmann::json RunConfig::to_json() const {
    return {{"map", map_path},
            {"resolution", resolution},
            {"max_iter", max_iter},
            {"orbit_eps", orbit_eps},
            {"grid_eps", grid_eps},
            {"landing_tol", landing_tol},
            {"contact_gap_px", contact_gap_px},
            {"seed", seed},
            {"out_dir", out_dir},
            {"threads", threads}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("map")) c.map_path = j["map"].get<std::string>();
    if (j.contains("resolution")) c.resolution = j["resolution"].get<int>();
    if (j.contains("max_iter")) c.max_iter = j["max_iter"].get<int>();
    if (j.contains("orbit_eps")) c.orbit_eps = j["orbit_eps"].get<double>();
    if (j.contains("grid_eps")) c.grid_eps = j["grid_eps"].get<double>();
    if (j.contains("landing_tol")) c.landing_tol = j["landing_tol"].get<double>();
    if (j.contains("contact_gap_px")) c.contact_gap_px = j["contact_gap_px"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    return c;
}

nlohmann::json ReportEnvelope::to_json(bool include_timing) const {
    nlohmann::json j;
    j["tool_version"] = tool_version;
    j["config"] = config.to_json();
    if (include_timing) j["elapsed_seconds"] = elapsed_seconds;
    j["payload"] = payload;
    return j;
}

bool validate_against_schema(const nlohmann::json& payload, const nlohmann::json& schema,
                             std::string* first_error) {
    // schema: {"key": "number"|"string"|"boolean"|"array"|"object"|{...nested}}
    for (auto it = schema.begin(); it != schema.end(); ++it) {
        if (!payload.contains(it.key())) {
            if (first_error) *first_error = "missing key: " + it.key();
            return false;
        }
        const auto& v = payload[it.key()];
        if (it.value().is_object()) {
            if (!v.is_object()) {
                if (first_error) *first_error = "not an object: " + it.key();
                return false;
            }
            if (!validate_against_schema(v, it.value(), first_error)) return false;
            continue;
        }
        std::string want = it.value().get<std::string>();
        bool ok = (want == "number" && v.is_number()) ||
                  (want == "integer" && v.is_number_integer()) ||
                  (want == "string" && v.is_string()) ||
                  (want == "boolean" && v.is_boolean()) || (want == "array" && v.is_array()) ||
                  (want == "object" && v.is_object());
        if (!ok) {
            if (first_error) *first_error = "wrong type for key: " + it.key();
            return false;
        }
    }
    return true;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

void save_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json point_to_json(const ExtendedPoint& p) {
    if (p.inf) return "inf";
    return nlohmann::json::array({p.z.real(), p.z.imag()});
}

} // namespace juliagraph
