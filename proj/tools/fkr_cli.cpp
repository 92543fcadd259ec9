#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fkrigid.h"

using json = nlohmann::json;

namespace {

const char* kind_name(fkr_status s) {
    switch (s) {
        case FKR_ERR_CONFIG: return "config";
        case FKR_ERR_CAP: return "resource_cap";
        case FKR_ERR_INVARIANT: return "invariant";
        default: return "generic";
    }
}

int fail(fkr_status s, const std::string& msg) {
    json e = {{"error", {{"kind", kind_name(s)}, {"message", msg}, {"exit_code", int(s)}}}};
    if (s == FKR_ERR_CAP)
        e["error"]["advisory"] = "shrink the region or window, or raise the cap in the config up to its hard limit";
    std::cerr << e.dump() << std::endl;
    return int(s);
}

int run(const std::string& cmd, const std::string& config_text, const std::string& out, std::optional<uint64_t> seed) {
    char* summary = nullptr;
    fkr_status st = fkr_run_command(cmd.c_str(), config_text.c_str(), out.c_str(), seed.has_value(), seed.value_or(0),
                                    &summary);
    if (st != FKR_OK) return fail(st, fkr_last_error());
    std::cout << summary << std::endl;
    fkr_string_free(summary);
    return 0;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fkr: strong-coupling Falicov-Kimball interface toolkit"};
    app.set_version_flag("--version", std::string(fkr_version()));
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::optional<uint64_t> seed;

    struct Sub {
        CLI::App* app;
        std::string name;
    };
    std::vector<Sub> subs;
    for (const char* name : {"heff", "tilings", "mc", "render", "energy"}) {
        CLI::App* s = app.add_subcommand(name, std::string("run the ") + name + " driver");
        s->add_option("--config", config_path, "JSON config file")->required();
        s->add_option("--out", out_dir, "output directory");
        s->add_option("--seed", seed, "seed override");
        subs.push_back({s, name});
    }

    // bounds takes either --config or a mode with flags.
    CLI::App* b = app.add_subcommand("bounds", "evaluate the expansion constants");
    b->add_option("--config", config_path, "JSON config file");
    b->add_option("--out", out_dir, "output directory");
    b->add_option("--seed", seed, "seed override");
    std::string mode;
    b->add_option("mode", mode, "polymer | cj | b0 | cprime | audit")
        ->check(CLI::IsMember({"polymer", "cj", "b0", "cprime", "audit"}));
    std::map<std::string, double> num;
    std::map<std::string, int> inum;
    std::string couplings;
    for (auto [flag, key] : std::vector<std::pair<std::string, std::string>>{{"--c1", "C1"},
                                                                            {"--c2", "C2"},
                                                                            {"--lambda", "lambda"},
                                                                            {"--b", "b"},
                                                                            {"--a", "a"},
                                                                            {"--cd", "c_d"},
                                                                            {"--t", "t"},
                                                                            {"--U", "U"},
                                                                            {"--beta", "beta"},
                                                                            {"--c", "c"},
                                                                            {"--c1-over-U", "c1_over_U"}})
        b->add_option_function<double>(flag, [&num, key](const double& v) { num[key] = v; }, "config key " + key);
    for (auto [flag, key] : std::vector<std::pair<std::string, std::string>>{{"--d", "d"}, {"--jmax", "jmax"}})
        b->add_option_function<int>(flag, [&inum, key](const int& v) { inum[key] = v; }, "config key " + key);
    b->add_option("--couplings", couplings, "coupling table from heff");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    std::string cmd, text;
    if (b->parsed()) {
        cmd = "bounds";
        if (!config_path.empty()) {
            if (!mode.empty() || !num.empty() || !inum.empty() || !couplings.empty())
                return fail(FKR_ERR_CONFIG, "bounds: use either --config or a mode with flags");
        } else {
            if (mode.empty()) return fail(FKR_ERR_CONFIG, "bounds: a mode or --config is required");
            json j = {{"mode", mode}};
            for (auto& [k, v] : num) j[k] = v;
            for (auto& [k, v] : inum) j[k] = v;
            if (!couplings.empty()) j["couplings"] = couplings;
            text = j.dump();
        }
    } else {
        for (auto& s : subs)
            if (s.app->parsed()) cmd = s.name;
    }
    if (text.empty()) {
        auto t = read_file(config_path);
        if (!t) return fail(FKR_ERR_CONFIG, "cannot read config file " + config_path);
        text = *t;
    }
    return run(cmd, text, out_dir, seed);
}
