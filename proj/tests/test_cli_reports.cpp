#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "juliagraph/rational_map.hpp"
#include "juliagraph/report.hpp"

using namespace juliagraph;
using nlohmann::json;

#ifndef JULIAGRAPH_BIN
#define JULIAGRAPH_BIN "./juliagraph"
#endif
#ifndef JULIAGRAPH_SOURCE_DIR
#define JULIAGRAPH_SOURCE_DIR "."
#endif

namespace {

int run_cli(const std::string& args, std::string* out = nullptr) {
    std::string cmd = std::string(JULIAGRAPH_BIN) + " " + args;
    std::string tmp = "/tmp/jg_cli_out.txt";
    int code = std::system((cmd + " > " + tmp + " 2>/dev/null").c_str());
    if (out) {
        std::ifstream in(tmp);
        std::stringstream ss;
        ss << in.rdbuf();
        *out = ss.str();
    }
    return WEXITSTATUS(code);
}

std::string write_cubic_map() {
    std::string path = "/tmp/jg_cubic.json";
    cubic_chain_example().save_json(path);
    return path;
}

} // namespace

TEST_CASE("config validation: power-of-two resolution is enforced") {
    RunConfig cfg;
    cfg.resolution = 300;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.resolution = 512;
    CHECK_NOTHROW(cfg.validate());
    cfg.orbit_eps = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("cli: version and usage errors") {
    std::string out;
    CHECK(run_cli("--version", &out) == 0);
    CHECK(out.find(kToolVersion) != std::string::npos);
    CHECK(run_cli("definitely-not-a-command", &out) == 2);
    CHECK(run_cli("grid /tmp/jg_cubic.json --res 300", &out) == 2);
    CHECK(run_cli("analyze /tmp/does_not_exist_404.json", &out) == 1);
}

TEST_CASE("cli analyze: cubic report matches the certified data") {
    std::string map = write_cubic_map();
    std::string out;
    REQUIRE(run_cli("analyze " + map, &out) == 0);
    json j = json::parse(out);
    const auto& payload = j.at("payload");
    CHECK(payload.at("pcf").get<bool>());
    CHECK(payload.at("critical_points").size() == 3);
    CHECK(payload.at("marked_set").size() == 3);

    json schema = load_json_file(std::string(JULIAGRAPH_SOURCE_DIR) +
                                 "/schemas/analyze.json");
    std::string err;
    CHECK_MESSAGE(validate_against_schema(payload, schema, &err), err);
}

TEST_CASE("cli analyze: byte-identical output across runs") {
    std::string map = write_cubic_map();
    std::string a, b;
    REQUIRE(run_cli("analyze " + map, &a) == 0);
    REQUIRE(run_cli("analyze " + map, &b) == 0);
    CHECK(a == b);
}

TEST_CASE("cli rays: landing report validates and is deterministic") {
    std::string map = write_cubic_map();
    std::string a, b;
    REQUIRE(run_cli("rays " + map + " --center inf --deg 2 --angles 0/1,1/2,1/4,3/4", &a) ==
            0);
    REQUIRE(run_cli("rays " + map + " --center inf --deg 2 --angles 0/1,1/2,1/4,3/4", &b) ==
            0);
    CHECK(a == b);
    json j = json::parse(a);
    CHECK(j.at("rays").size() == 4);
    for (const auto& ray : j.at("rays")) CHECK(ray.at("state") == "landed");
    json schema = load_json_file(std::string(JULIAGRAPH_SOURCE_DIR) + "/schemas/rays.json");
    std::string err;
    CHECK_MESSAGE(validate_against_schema(j, schema, &err), err);
}

TEST_CASE("cli lam: chain classification through the pipeline") {
    // build the 3-leaf chain lamination file
    std::string lam_path = "/tmp/jg_chain3.json";
    {
        json leaves = json::array();
        leaves.push_back({"1/4", "3/4"});
        leaves.push_back({"1/8", "7/8"});
        leaves.push_back({"1/16", "15/16"});
        json j;
        j["leaves"] = leaves;
        std::ofstream out(lam_path);
        out << j.dump();
    }
    std::string out;
    REQUIRE(run_cli("lam classify " + lam_path + " --tree all", &out) == 0);
    json j = json::parse(out);
    CHECK(j.at("report").at("ends").get<int>() == 2);
    CHECK(j.at("report").at("cut_points").size() == 3);
    CHECK(j.at("report").at("counting_identity").at("holds").get<bool>());
    CHECK(j.at("report").at("counting_identity").at("lhs").get<int>() == 0);
}

TEST_CASE("cli btype: annulus configuration") {
    std::string cfg_path = "/tmp/jg_btype.json";
    {
        json cfg;
        cfg["resolution"] = 256;
        cfg["marked"] = json::array({{0.0, 0.0}, {1.5, 0.0}});
        cfg["sets"] = json::array(
            {{{"name", "ring"},
              {"shapes", json::array({{{"type", "annulus"},
                                       {"center", {0.0, 0.0}},
                                       {"inner", 0.4},
                                       {"outer", 0.6}}})}}});
        std::ofstream out(cfg_path);
        out << cfg.dump();
    }
    std::string out;
    REQUIRE(run_cli("btype " + cfg_path, &out) == 0);
    json j = json::parse(out);
    CHECK(j.at("reports").at("ring").at("b").get<int>() == 2);
    CHECK(j.at("reports").at("ring").at("type") == "simple");
}

TEST_CASE("schema validator catches shape mismatches") {
    json schema = {{"a", "number"}, {"b", {{"c", "string"}}}};
    json good = {{"a", 1.5}, {"b", {{"c", "x"}}}};
    json bad1 = {{"a", "nope"}, {"b", {{"c", "x"}}}};
    json bad2 = {{"a", 1.5}, {"b", {{"d", "x"}}}};
    CHECK(validate_against_schema(good, schema));
    CHECK(!validate_against_schema(bad1, schema));
    CHECK(!validate_against_schema(bad2, schema));
}
