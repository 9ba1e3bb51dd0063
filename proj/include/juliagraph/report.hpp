#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace juliagraph {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string map_path;
    int resolution = 512;
    int max_iter = 256;
    double orbit_eps = 1e-9;
    double grid_eps = 1e-3;
    double landing_tol = 1e-3;
    int contact_gap_px = 1;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int threads = 0; // 0 = auto

    void validate() const;
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

// version + config echo + module payload; timing carried separately so that
// payloads stay byte-identical across runs.
struct ReportEnvelope {
    std::string tool_version;
    RunConfig config;
    double elapsed_seconds = 0.0;
    nlohmann::json payload;

    nlohmann::json to_json(bool include_timing = true) const;
};

extern const char* kToolVersion;

// Structural schema check: every (nested) key/type listed in the schema must
// appear with the right JSON type. Schemas live under schemas/.
bool validate_against_schema(const nlohmann::json& payload, const nlohmann::json& schema,
                             std::string* first_error = nullptr);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

nlohmann::json point_to_json(const struct ExtendedPoint& p);

} // namespace juliagraph
