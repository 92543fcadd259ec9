#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "errors.hpp"
#include "json.hpp"

using namespace fkr;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("fkr_cmd_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ErrorKind kind_of(const std::string& cmd, const std::string& cfg) {
    try {
        run_command(cmd, cfg, scratch("err").string(), std::nullopt);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Generic;
}

}  // namespace

TEST_CASE("configuration errors") {
    CHECK(kind_of("heff", R"({"window": [[0,0,0]]})") == ErrorKind::Config);
    CHECK(kind_of("heff", R"({"window": [[0,0,0]], "U": 8, "colour": 1})") == ErrorKind::Config);
    CHECK(kind_of("heff", R"({"window": [[0,0]], "U": 8})") == ErrorKind::Config);
    CHECK(kind_of("tilings", R"({"region": {"hexagon": 1}, "render": "yes"})") == ErrorKind::Config);
    CHECK(kind_of("mc", R"({"dims": [3,3,3], "bc": "bc111", "U": 8, "beta": 1, "beta_over_U": 1})") ==
          ErrorKind::Config);
    CHECK(kind_of("bounds", R"({"mode": "nope"})") == ErrorKind::Config);
    CHECK(kind_of("frobnicate", "{}") == ErrorKind::Config);
    CHECK(kind_of("heff", "{not json") == ErrorKind::Config);
    CHECK(kind_of("tilings", R"({"region": {"hexagon": 4}})") == ErrorKind::Cap);
}

TEST_CASE("config hash ignores key order and whitespace") {
    CHECK(config_hash(R"({"a": 1, "b": [1,2]})") == config_hash("{\"b\":[1, 2],\n \"a\":1}"));
    CHECK(config_hash(R"({"a": 1})") != config_hash(R"({"a": 2})"));
    CHECK(config_hash("{}").size() == 16);
}

TEST_CASE("tilings command on the smallest hexagon") {
    fs::path d = scratch("t1");
    json s = json::parse(run_command("tilings", R"({"region": {"hexagon": 1}})", d.string(), std::nullopt));
    CHECK(s["result"]["count"] == 2);
    CHECK(s["result"]["type0_compatible"] == true);
    CHECK(s["provenance"]["seed"].is_null());
    CHECK(fs::exists(d / "tilings.json"));
    CHECK(fs::exists(d / "summary.json"));
    for (auto& e : fs::directory_iterator(d)) CHECK(e.path().extension() != ".svg");
    json t = json::parse(slurp(d / "tilings.json"));
    CHECK(t["provenance"]["command"] == "tilings");
    fs::remove_all(d);
}

TEST_CASE("side-two tilings have a unique ground state and render") {
    fs::path d = scratch("t2");
    json s = json::parse(run_command("tilings", R"({"region": {"hexagon": 2}, "render": true})", d.string(), 3));
    CHECK(s["result"]["count"] == 20);
    CHECK(s["result"]["ground_state"]["unique"] == true);
    CHECK(s["result"]["bounds"]["pass"] == true);
    CHECK(s["provenance"]["seed"] == 3);
    int svgs = 0;
    for (auto& e : fs::directory_iterator(d)) svgs += e.path().extension() == ".svg";
    CHECK(svgs == 20);
    fs::remove_all(d);
}

TEST_CASE("reruns are byte-identical") {
    const std::string cfg = R"({"dims": [4,4,4], "bc": "bc111", "hamiltonian": "H4", "U": 8,
        "beta_over_U3": 40, "sweeps": 40, "thermalization": 10, "stride": 5, "replicas": 2,
        "moves": "single+hexagon"})";
    fs::path a = scratch("ra"), b = scratch("rb");
    std::string sa = run_command("mc", cfg, a.string(), 11);
    std::string sb = run_command("mc", cfg, b.string(), 11);
    CHECK(sa == sb);
    for (auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    std::string head = slurp(a / "replica_0.csv").substr(0, 80);
    CHECK(head.find("good_pair_fraction") != std::string::npos);
    CHECK(fs::exists(a / "layers.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("100 runs write layer profiles without good-pair columns") {
    fs::path d = scratch("m100");
    json s = json::parse(run_command("mc", R"({"dims": [4,4,4], "bc": "bc100", "hamiltonian": "H2", "U": 8, "beta_over_U": 40,
        "sweeps": 30, "thermalization": 10, "stride": 5, "replicas": 1, "seed": 1})", d.string(), std::nullopt));
    CHECK(s["result"]["layers"]["mean_m"].size() == 4);
    CHECK_FALSE(s["result"].contains("good_pair_fraction"));
    CHECK(slurp(d / "replica_0.csv").find("good_pair_fraction") == std::string::npos);
    CHECK(fs::exists(d / "layers.csv"));
    fs::remove_all(d);
}

TEST_CASE("bounds reports") {
    fs::path d = scratch("b");
    json p = json::parse(run_command("bounds", R"({"mode": "polymer", "C1": 1, "C2": 1, "lambda": 8e-6, "b": 1e18})",
                                     d.string(), std::nullopt))["result"];
    for (auto k : {"beta", "k0", "alpha", "a0", "C3", "C4", "a_prime", "a_double_prime", "z", "a1", "q", "flags"})
        CHECK(p.contains(k));
    CHECK(p["flags"]["cond2"] == true);
    json bad = json::parse(run_command("bounds", R"({"mode": "polymer", "C1": 1, "C2": 1, "lambda": 1, "b": 1e18})",
                                       d.string(), std::nullopt))["result"];
    CHECK(bad["flags"]["cond2"] == false);
    CHECK(bad["Zpol_bound"].is_null());
    json b0 = json::parse(run_command("bounds", R"({"mode": "b0", "C1": 1, "C2": 1, "lambda": 8e-6})", d.string(),
                                      std::nullopt))["result"];
    CHECK(b0["found"] == true);
    CHECK(b0["B"].get<double>() > 1);
    CHECK(b0["bracket"][0].get<double>() <= b0["b0"].get<double>());
    CHECK(fs::exists(d / "report.json"));
    fs::remove_all(d);
}

TEST_CASE("heff output feeds the audit") {
    fs::path d = scratch("h");
    json s = json::parse(run_command("heff", R"({"window": [[0,0,0],[1,0,0]], "U": 16, "beta": 160})", d.string(),
                                     std::nullopt));
    CHECK(s["result"]["nearest_neighbour"][0]["value"].get<double>() == doctest::Approx(0.0156098).epsilon(1e-5));
    json cfg = {{"mode", "audit"}, {"couplings", (d / "couplings.json").string()}, {"C1", 1.0}, {"c1_over_U", 0.125}};
    json a = json::parse(run_command("bounds", cfg.dump(), d.string(), std::nullopt))["result"];
    CHECK(a["checked"] == 1);
    CHECK(a["violations"] == 0);
    fs::remove_all(d);
}

TEST_CASE("energy of a pyramid") {
    fs::path d = scratch("e");
    auto h2 = [&](const std::string& flips) {
        json r = json::parse(run_command(
            "energy", R"({"dims": [6,6,6], "bc": "bc111", "U": 8, "flips": )" + flips + "}", d.string(), std::nullopt));
        return r["result"]["h2"].get<double>();
    };
    // Removing one cube breaks six bonds, each at twice J = 1/(4U).
    CHECK(h2("[[0,0,0]]") - h2("[]") == doctest::Approx(6 * 2 * (1.0 / 32)).epsilon(1e-12));
    fs::remove_all(d);
}
