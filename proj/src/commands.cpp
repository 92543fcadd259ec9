#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bounds.hpp"
#include "effective.hpp"
#include "errors.hpp"
#include "interface.hpp"
#include "json.hpp"
#include "quantum.hpp"
#include "rcontour.hpp"
#include "render.hpp"
#include "sampler.hpp"

namespace fkr {

using json = nlohmann::json;

namespace {

// Object view that rejects unknown keys and ill-typed values.
class Cfg {
public:
    Cfg(const json& j, std::string ctx, std::set<std::string> allowed) : j_(j), ctx_(std::move(ctx)) {
        if (!j.is_object()) throw config_error(ctx_ + ": expected a JSON object");
        for (auto& [k, v] : j.items())
            if (!allowed.count(k)) throw config_error(ctx_ + ": unknown key '" + k + "'");
    }
    bool has(const std::string& k) const { return j_.contains(k) && !j_.at(k).is_null(); }
    const json& at(const std::string& k) const {
        if (!has(k)) throw config_error(ctx_ + ": missing required key '" + k + "'");
        return j_.at(k);
    }
    double num(const std::string& k) const {
        const json& v = at(k);
        if (!v.is_number()) throw config_error(ctx_ + ": '" + k + "' must be a number");
        return v.get<double>();
    }
    double num(const std::string& k, double def) const { return has(k) ? num(k) : def; }
    long long integer(const std::string& k) const {
        const json& v = at(k);
        if (!v.is_number_integer()) throw config_error(ctx_ + ": '" + k + "' must be an integer");
        return v.get<long long>();
    }
    long long integer(const std::string& k, long long def) const { return has(k) ? integer(k) : def; }
    std::string str(const std::string& k) const {
        const json& v = at(k);
        if (!v.is_string()) throw config_error(ctx_ + ": '" + k + "' must be a string");
        return v.get<std::string>();
    }
    std::string str(const std::string& k, const std::string& def) const { return has(k) ? str(k) : def; }
    bool boolean(const std::string& k, bool def) const {
        if (!has(k)) return def;
        if (!at(k).is_boolean()) throw config_error(ctx_ + ": '" + k + "' must be a boolean");
        return at(k).get<bool>();
    }
    const std::string& ctx() const { return ctx_; }

private:
    const json& j_;
    std::string ctx_;
};

Site parse_site(const json& v, const std::string& ctx) {
    if (!v.is_array() || v.size() != 3) throw config_error(ctx + ": a site is a list of three integers");
    for (auto& x : v)
        if (!x.is_number_integer()) throw config_error(ctx + ": site coordinates must be integers");
    return {v[0].get<int>(), v[1].get<int>(), v[2].get<int>()};
}

std::vector<Site> parse_sites(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw config_error(ctx + ": expected a list of sites");
    std::vector<Site> out;
    for (auto& s : v) out.push_back(parse_site(s, ctx));
    return out;
}

std::array<int, 3> parse_dims(const json& v, const std::string& ctx) {
    if (!v.is_array() || v.size() != 3) throw config_error(ctx + ": dims must be three positive integers");
    std::array<int, 3> d{};
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number_integer() || v[i].get<int>() < 1)
            throw config_error(ctx + ": dims must be three positive integers");
        d[i] = v[i].get<int>();
    }
    return d;
}

json site_json(const Site& s) { return json::array({s.k1, s.k2, s.k3}); }

json sites_json(const std::vector<Site>& v) {
    json a = json::array();
    for (auto& s : v) a.push_back(site_json(s));
    return a;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct Ctx {
    std::string command;
    json cfg;
    std::filesystem::path out;
    std::optional<uint64_t> seed;
    std::vector<std::string> files;

    json provenance() const {
        json p;
        p["command"] = command;
        p["config_hash"] = hex64(fnv1a(cfg.dump()));
        p["seed"] = seed ? json(*seed) : json(nullptr);
        p["version"] = kVersion;
        return p;
    }
    void write(const std::string& name, const std::string& text) {
        std::filesystem::path p = out / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw Error(ErrorKind::Generic, "cannot write " + p.string());
        f << text;
        if (!f) throw Error(ErrorKind::Generic, "failed writing " + p.string());
        files.push_back(name);
    }
    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
};

std::vector<Site> parse_window(const json& v, const std::string& ctx) {
    if (v.is_object()) {
        Cfg w(v, ctx, {"dims"});
        auto d = parse_dims(w.at("dims"), ctx);
        std::vector<Site> out;
        for (int x = 0; x < d[0]; ++x)
            for (int y = 0; y < d[1]; ++y)
                for (int z = 0; z < d[2]; ++z) out.push_back({x, y, z});
        return out;
    }
    return parse_sites(v, ctx);
}

json cmd_heff(Ctx& c) {
    Cfg cfg(c.cfg, "heff", {"window", "exterior", "U", "beta", "t", "mu_e", "mu_i", "max_g", "workers", "audit"});
    const double U = cfg.num("U");
    if (!(U > 0)) throw config_error("heff: U must be positive");
    FKParams p;
    p.U = U;
    p.t = cfg.num("t", 1.0);
    p.mu_e = cfg.num("mu_e", U);
    p.mu_i = cfg.num("mu_i", U);
    p.beta = cfg.num("beta", 10 * U);
    if (!(p.beta > 0)) throw config_error("heff: beta must be positive");
    Window w;
    w.free = parse_window(cfg.at("window"), "heff.window");
    if (w.free.empty()) throw config_error("heff: empty window");
    if (cfg.has("exterior")) w = Window::with_neel_exterior(w.free, parse_sites(cfg.at("exterior"), "heff.exterior"));
    int max_g = int(cfg.integer("max_g", -1));
    CouplingTable table = extract_couplings(w, p, max_g, int(cfg.integer("workers", 0)));
    DecayReport dr = verify_decay(table, U);

    json coup;
    coup["provenance"] = c.provenance();
    coup["metadata"] = {{"U", p.U}, {"beta", p.beta}, {"t", p.t}, {"mu_e", p.mu_e}, {"mu_i", p.mu_i},
                        {"window", sites_json(w.free)}, {"exterior", sites_json(w.frozen)}, {"max_g", max_g}};
    json arr = json::array();
    for (auto& e : table.entries) arr.push_back({{"cluster", sites_json(e.cluster)}, {"g", e.g}, {"value", e.value}});
    coup["couplings"] = arr;
    c.write_json("couplings.json", coup);

    json dec;
    dec["provenance"] = c.provenance();
    json lv = json::array();
    for (auto& l : dr.levels) lv.push_back({{"g", l.g}, {"clusters", l.clusters}, {"max_abs", l.max_abs}});
    dec["levels"] = lv;
    dec["trivial"] = dr.trivial;
    dec["fit"] = {{"valid", dr.fit_valid}, {"C1", dr.fit_C1}, {"c", dr.fit_c}};
    if (cfg.has("audit")) {
        Cfg a(cfg.at("audit"), "heff.audit", {"C1", "c1_over_U"});
        AuditReport ar = decay_audit(table, a.num("C1"), a.num("c1_over_U"));
        dec["audit"] = {{"C1", ar.C1}, {"ratio", ar.ratio}, {"checked", ar.checked}, {"violations", ar.violations},
                        {"vacuous", ar.vacuous}, {"pair_residual_max", ar.pair_residual_max},
                        {"pair_bound", ar.pair_bound}, {"pair_ok", ar.pair_ok}, {"pass", ar.pass}};
    }
    c.write_json("decay.json", dec);

    json s;
    s["entries"] = table.entries.size();
    json nn = json::array();
    for (auto& e : table.entries)
        if (e.cluster.size() == 2 && l1(e.cluster[0], e.cluster[1]) == 1)
            nn.push_back({{"cluster", sites_json(e.cluster)}, {"value", e.value}});
    s["nearest_neighbour"] = nn;
    s["trivial"] = dr.trivial;
    return s;
}

Region parse_region(const json& v, int* side_out) {
    Cfg r(v, "tilings.region", {"hexagon", "center", "triangles"});
    if (r.has("hexagon")) {
        int side = int(r.integer("hexagon"));
        if (side < 0) throw config_error("tilings.region: hexagon side must be non-negative");
        if (side_out) *side_out = side;
        if (r.has("center")) {
            const json& cj = r.at("center");
            if (!cj.is_array() || cj.size() != 2 || !cj[0].is_number_integer() || !cj[1].is_number_integer())
                throw config_error("tilings.region: center is [a, b]");
            return hexagon_region(side, {cj[0].get<int>(), cj[1].get<int>()});
        }
        for (PVertex c : {PVertex{0, 0}, PVertex{1, 0}, PVertex{0, 1}}) {
            Region reg = hexagon_region(side, c);
            if (type0_compatible(reg)) return reg;
        }
        return hexagon_region(side, {0, 0});
    }
    const json& tl = r.at("triangles");
    if (!tl.is_array()) throw config_error("tilings.region: triangles must be a list");
    Region reg;
    for (auto& t : tl) {
        if (!t.is_array() || t.size() != 3) throw config_error("tilings.region: a triangle is [a, b, up]");
        for (auto& x : t)
            if (!x.is_number_integer()) throw config_error("tilings.region: triangle entries must be integers");
        int up = t[2].get<int>();
        if (up != 0 && up != 1) throw config_error("tilings.region: up must be 0 or 1");
        reg.insert({t[0].get<int>(), t[1].get<int>(), up});
    }
    return reg;
}

json rhombus_json(const Rhombus& r) { return {{"axis", r.axis}, {"a", r.a}, {"b", r.b}, {"type", r.type()}}; }

json contour_json(const RContour& ct, const Coeffs& k) {
    return {{"std_delta", ct.delta_st.size()}, {"delta", total_delta(ct)},  {"a_ov", total_a_ov(ct)},
            {"omega", total_omega(ct)},        {"lambda", total_lambda(ct)}, {"F", f_energy(ct, k)}};
}

json cmd_tilings(Ctx& c) {
    Cfg cfg(c.cfg, "tilings", {"region", "render", "max_triangles", "limit", "U"});
    Region reg = parse_region(cfg.at("region"), nullptr);
    size_t cap = size_t(cfg.integer("max_triangles", 60));
    if (cap > 60) throw config_error("tilings: max_triangles may not exceed 60");
    size_t limit = size_t(cfg.integer("limit", 0));
    bool render = cfg.boolean("render", false);
    Coeffs k = Coeffs::from_U(cfg.num("U", 8));
    auto tilings = enumerate_tilings(reg, cap, limit);
    bool compat = type0_compatible(reg);

    json list = json::array();
    double best = 0;
    int best_i = -1, best_n = 0;
    for (size_t i = 0; i < tilings.size(); ++i) {
        const Tiling& t = tilings[i];
        json tj;
        tj["index"] = i;
        json rs = json::array();
        for (auto& r : t.rhombi) rs.push_back(rhombus_json(r));
        tj["rhombi"] = rs;
        if (compat) {
            Decomposition d = decompose(rconfig_from_tiling(t));
            json cs = json::array();
            double F = 0;
            for (auto& ct : d.contours) {
                cs.push_back(contour_json(ct, k));
                F += f_energy(ct, k);
            }
            tj["contours"] = cs;
            tj["F_total"] = F;
            if (best_i < 0 || F < best - 1e-15) {
                best = F;
                best_i = int(i);
                best_n = 1;
            } else if (std::abs(F - best) <= 1e-15) {
                best_n++;
            }
        }
        list.push_back(tj);
        if (render) {
            char name[32];
            std::snprintf(name, sizeof name, "tiling_%04zu.svg", i);
            c.write(name, tiling_svg(t));
        }
    }
    json tj;
    tj["provenance"] = c.provenance();
    tj["triangles"] = reg.size();
    tj["tilings"] = list;
    c.write_json("tilings.json", tj);

    json s;
    s["provenance"] = c.provenance();
    s["triangles"] = reg.size();
    s["count"] = tilings.size();
    s["limited"] = limit > 0 && tilings.size() >= limit;
    s["type0_compatible"] = compat;
    if (!reg.empty() && reg.size() % 2 == 0 && limit == 0) {
        DegeneracyReport dr = degeneracy_bounds_check(reg);
        s["bounds"] = {{"area", dr.area},         {"lower", dr.lower},         {"upper", dr.upper},
                       {"lower_ok", dr.lower_ok}, {"upper_ok", dr.upper_ok},   {"in_regime", dr.in_regime},
                       {"pass", dr.pass}};
    }
    if (best_i >= 0) s["ground_state"] = {{"index", best_i}, {"F", best}, {"unique", best_n == 1}};
    c.write_json("summary.json", s);
    json out = s;
    out.erase("provenance");
    return out;
}

RunSpec parse_runspec(const Cfg& cfg, std::optional<uint64_t> seed) {
    RunSpec s;
    s.dims = parse_dims(cfg.at("dims"), "mc");
    s.shell = int(cfg.integer("shell", 2));
    s.bc = parse_bc(cfg.str("bc"));
    s.ham = parse_ham(cfg.str("hamiltonian"));
    s.U = cfg.num("U");
    int nb = cfg.has("beta") + cfg.has("beta_over_U") + cfg.has("beta_over_U3");
    if (nb != 1) throw config_error("mc: give exactly one of beta, beta_over_U, beta_over_U3");
    if (cfg.has("beta")) s.beta = cfg.num("beta");
    if (cfg.has("beta_over_U")) s.beta = cfg.num("beta_over_U") * s.U;
    if (cfg.has("beta_over_U3")) s.beta = cfg.num("beta_over_U3") * s.U * s.U * s.U;
    s.sweeps = int(cfg.integer("sweeps"));
    s.thermalization = int(cfg.integer("thermalization", s.sweeps / 5));
    s.moves = parse_moves(cfg.str("moves", "single"));
    s.stride = int(cfg.integer("stride", 10));
    s.replicas = int(cfg.integer("replicas", 1));
    s.check_every = int(cfg.integer("check_every", 50));
    s.start = cfg.str("start", "ground");
    s.workers = int(cfg.integer("workers", 0));
    s.seed = seed ? *seed : uint64_t(cfg.integer("seed", 1));
    validate(s);
    return s;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

json cmd_mc(Ctx& c) {
    Cfg cfg(c.cfg, "mc", {"dims", "shell", "bc", "hamiltonian", "U", "beta", "beta_over_U", "beta_over_U3", "sweeps",
                          "thermalization", "moves", "stride", "replicas", "check_every", "start", "seed", "workers",
                          "snapshot"});
    RunSpec spec = parse_runspec(cfg, c.seed);
    c.seed = spec.seed;
    bool snapshot = cfg.boolean("snapshot", false);
    RunResult rr = mc_run(spec);
    Summary sm = summarize(rr);
    const bool b111 = spec.bc == BC::BC111;

    for (size_t r = 0; r < rr.replicas.size(); ++r) {
        std::ostringstream os;
        os << "sweep,energy,width" << (b111 ? ",good_pair_fraction,overlap" : "") << "\n";
        for (auto& m : rr.replicas[r].series) {
            os << m.sweep << "," << fmt(m.energy) << "," << fmt(m.width);
            if (b111) os << "," << fmt(m.good_fraction) << "," << (m.overlap ? 1 : 0);
            os << "\n";
        }
        c.write("replica_" + std::to_string(r) + ".csv", os.str());
        if (snapshot && b111) c.write("snapshot_" + std::to_string(r) + ".svg", interface_svg(rr.replicas[r].final_config));
    }
    {
        std::ostringstream os;
        os << "layer,mean_m";
        for (size_t r = 0; r < rr.replicas.size(); ++r) os << ",replica_" << r;
        os << "\n";
        for (size_t l = 0; l < rr.layer_index.size(); ++l) {
            os << rr.layer_index[l] << "," << fmt(sm.mean_layers[l]);
            for (auto& rep : rr.replicas) {
                double acc = 0;
                for (auto& m : rep.series) acc += m.layers[l];
                os << "," << fmt(rep.series.empty() ? 0.0 : acc / double(rep.series.size()));
            }
            os << "\n";
        }
        c.write("layers.csv", os.str());
    }
    json s;
    s["provenance"] = c.provenance();
    s["spec"] = {{"dims", spec.dims},         {"shell", spec.shell},         {"bc", bc_name(spec.bc)},
                 {"hamiltonian", ham_name(spec.ham)}, {"U", spec.U},          {"beta", spec.beta},
                 {"sweeps", spec.sweeps},     {"thermalization", spec.thermalization},
                 {"moves", moves_name(spec.moves)}, {"stride", spec.stride}, {"replicas", spec.replicas},
                 {"check_every", spec.check_every}, {"start", spec.start}};
    s["energy"] = {{"mean", sm.mean_energy}, {"se", sm.se_energy}};
    s["width"] = {{"mean", sm.mean_width}, {"se", sm.se_width}};
    if (b111) s["good_pair_fraction"] = {{"mean", sm.mean_good}, {"se", sm.se_good}};
    s["layers"] = {{"index", rr.layer_index}, {"mean_m", sm.mean_layers}, {"min_abs", sm.min_abs_layer}};
    s["acceptance_single"] = sm.acceptance;
    json reps = json::array();
    for (auto& rep : rr.replicas)
        reps.push_back({{"single_proposed", rep.single_proposed}, {"single_accepted", rep.single_accepted},
                        {"hex_proposed", rep.hex_proposed},       {"hex_accepted", rep.hex_accepted},
                        {"hex_noop", rep.hex_noop},               {"energy_checks", rep.checks},
                        {"max_drift", rep.max_drift},             {"stationary", rep.stationary}});
    s["replicas"] = reps;
    c.write_json("summary.json", s);
    json out = s;
    out.erase("provenance");
    return out;
}

json polymer_json(const ConvergenceReport& r) {
    json j;
    j["inputs"] = {{"C1", r.in.C1}, {"C2", r.in.C2}, {"lambda", r.in.lambda}, {"b", r.in.b}, {"a", r.in.a}, {"c_d", r.in.c_d}};
    j["beta"] = r.beta;
    j["k0"] = r.k0;
    j["alpha"] = r.alpha;
    j["a0"] = r.a0;
    j["C3"] = r.C3;
    j["C4"] = r.C4;
    j["a_prime"] = r.a_prime;
    j["a_double_prime"] = r.a_double_prime;
    j["z"] = r.z;
    j["a1"] = r.a1;
    j["q"] = r.q;
    j["Zpol_bound"] = r.Zpol_available ? json(r.Zpol_bound) : json(nullptr);
    j["Zpol_available"] = r.Zpol_available;
    j["flags"] = {{"cond1", r.cond1}, {"cond2", r.cond2}, {"cond4", r.cond4}};
    j["note"] = r.note;
    return j;
}

json cmd_bounds(Ctx& c) {
    if (!c.cfg.is_object() || !c.cfg.contains("mode") || !c.cfg["mode"].is_string())
        throw config_error("bounds: missing required key 'mode'");
    const std::string mode = c.cfg["mode"].get<std::string>();
    json rep;
    if (mode == "polymer") {
        Cfg cfg(c.cfg, "bounds", {"mode", "C1", "C2", "lambda", "b", "a", "c_d"});
        PolymerInputs in{cfg.num("C1"), cfg.num("C2"), cfg.num("lambda"), cfg.num("b"), cfg.num("a", 2), cfg.num("c_d", 36)};
        rep = polymer_json(polymer_report(in));
    } else if (mode == "cj") {
        Cfg cfg(c.cfg, "bounds", {"mode", "d", "t", "U", "beta", "c", "jmax"});
        CjReport r = cj_sequence(int(cfg.integer("d", 3)), cfg.num("t", 1), cfg.num("U"), cfg.num("beta"),
                                 cfg.num("c", 0.5), int(cfg.integer("jmax", 60)));
        rep = {{"ratio", r.ratio},           {"C", r.C},
               {"C0", r.C0},                 {"tail_closed", r.convergent ? json(r.tail_closed) : json(nullptr)},
               {"tail_direct", r.tail_direct}, {"convergent", r.convergent},
               {"sum_below_one", r.sum_below_one}};
    } else if (mode == "b0") {
        Cfg cfg(c.cfg, "bounds", {"mode", "C1", "C2", "lambda", "a", "c_d"});
        B0Result r = find_b0(cfg.num("C1"), cfg.num("C2"), cfg.num("lambda"), cfg.num("a", 2), cfg.num("c_d", 36));
        rep = {{"b0", r.found ? json(r.b0) : json(nullptr)},
               {"lambda0", r.lambda0},
               {"B", r.B},
               {"lambda1", r.lambda1},
               {"lambda2", r.lambda2},
               {"lambda_ok", r.lambda_ok},
               {"found", r.found},
               {"bracket", {r.b_lo, r.b_hi}},
               {"band_k0", r.band},
               {"note", r.note}};
    } else if (mode == "cprime") {
        Cfg cfg(c.cfg, "bounds", {"mode", "C1", "C2", "b", "a", "c_d"});
        const json& bj = cfg.at("b");
        std::vector<double> bs;
        if (bj.is_number()) bs.push_back(bj.get<double>());
        else if (bj.is_array()) for (auto& x : bj) {
            if (!x.is_number()) throw config_error("bounds: b must hold numbers");
            bs.push_back(x.get<double>());
        } else throw config_error("bounds: b must be a number or a list");
        json arr = json::array();
        for (double b : bs) {
            double v = log_C_prime(cfg.num("C1"), cfg.num("C2"), b, cfg.num("a", 2), cfg.num("c_d", 36));
            arr.push_back({{"b", b}, {"log_C_prime", std::isfinite(v) ? json(v) : json(nullptr)}});
        }
        rep = {{"values", arr}};
    } else if (mode == "audit") {
        Cfg cfg(c.cfg, "bounds", {"mode", "couplings", "C1", "c1_over_U"});
        std::ifstream f(cfg.str("couplings"));
        if (!f) throw config_error("bounds: cannot read couplings file");
        json cj;
        try {
            f >> cj;
        } catch (const json::exception& e) {
            throw config_error(std::string("bounds: couplings file: ") + e.what());
        }
        CouplingTable t;
        try {
            t.U = cj.at("metadata").at("U").get<double>();
            t.beta = cj.at("metadata").at("beta").get<double>();
            t.t = cj.at("metadata").at("t").get<double>();
            t.window = parse_sites(cj.at("metadata").at("window"), "couplings.window");
            for (auto& e : cj.at("couplings"))
                t.entries.push_back({parse_sites(e.at("cluster"), "couplings"), e.at("g").get<int>(), e.at("value").get<double>()});
        } catch (const json::exception& e) {
            throw config_error(std::string("bounds: malformed couplings file: ") + e.what());
        }
        AuditReport ar = decay_audit(t, cfg.num("C1"), cfg.num("c1_over_U"));
        json lv = json::array();
        for (auto& l : ar.fit.levels) lv.push_back({{"g", l.g}, {"clusters", l.clusters}, {"max_abs", l.max_abs}});
        rep = {{"C1", ar.C1},
               {"ratio", ar.ratio},
               {"checked", ar.checked},
               {"violations", ar.violations},
               {"vacuous", ar.vacuous},
               {"levels", lv},
               {"fit", {{"valid", ar.fit.fit_valid}, {"C1", ar.fit.fit_C1}, {"c", ar.fit.fit_c}}},
               {"pair_residual_max", ar.pair_residual_max},
               {"pair_bound", ar.pair_bound},
               {"pair_ok", ar.pair_ok},
               {"pass", ar.pass}};
    } else {
        throw config_error("bounds: unknown mode '" + mode + "'");
    }
    rep["mode"] = mode;
    json file = rep;
    file["provenance"] = c.provenance();
    c.write_json("report.json", file);
    return rep;
}

SpinConfig config_with_flips(const Cfg& cfg, const std::string& ctx) {
    Volume v = Volume::centered(parse_dims(cfg.at("dims"), ctx), int(cfg.integer("shell", 2)));
    SpinConfig c(v, parse_bc(cfg.str("bc")));
    if (cfg.has("flips"))
        for (auto& s : parse_sites(cfg.at("flips"), ctx + ".flips")) {
            if (!v.contains(s)) throw config_error(ctx + ": flipped site outside the volume");
            c.flip(s);
        }
    return c;
}

json cmd_energy(Ctx& c) {
    Cfg cfg(c.cfg, "energy", {"dims", "shell", "bc", "U", "flips", "corner_connectivity", "c0"});
    SpinConfig sc = config_with_flips(cfg, "energy");
    Coeffs k = Coeffs::from_U(cfg.num("U"));
    auto contours = extract_contours(sc, cfg.boolean("corner_connectivity", false));
    json out;
    out["h2"] = h2_relative_energy(sc, k);
    out["h4"] = sc.volume().shell >= 2 ? json(h4_relative_energy(sc, k)) : json(nullptr);
    json cs = json::array();
    for (auto& ct : contours) cs.push_back({{"area", ct.area}, {"pinned", ct.pinned}});
    out["contours"] = cs;
    PeierlsReport pr = peierls_check(contours, k, cfg.num("c0", 0.4));
    out["peierls"] = {{"pass", pr.pass}, {"max_c0", pr.max_c0}, {"checked", pr.contours_checked}, {"violations", pr.violations}};
    json file = out;
    file["provenance"] = c.provenance();
    c.write_json("energy.json", file);
    return out;
}

json cmd_render(Ctx& c) {
    Cfg cfg(c.cfg, "render", {"tilings_file", "hexagon", "index", "interface", "highlight"});
    SvgStyle st;
    st.highlight_edges = cfg.boolean("highlight", true);
    json out;
    if (cfg.has("interface")) {
        Cfg ic(cfg.at("interface"), "render.interface", {"dims", "shell", "bc", "flips"});
        SpinConfig sc = config_with_flips(ic, "render.interface");
        if (sc.bc() != BC::BC111) throw config_error("render: interface rendering needs bc111");
        c.write("interface.svg", interface_svg(sc, st));
        out["file"] = "interface.svg";
        return out;
    }
    size_t index = size_t(cfg.integer("index", 0));
    Tiling t;
    if (cfg.has("tilings_file")) {
        std::ifstream f(cfg.str("tilings_file"));
        if (!f) throw config_error("render: cannot read tilings file");
        json tj;
        try {
            f >> tj;
            const json& e = tj.at("tilings").at(index);
            for (auto& r : e.at("rhombi")) {
                Rhombus rh{r.at("axis").get<int>(), r.at("a").get<int>(), r.at("b").get<int>()};
                t.rhombi.push_back(rh);
                for (auto& tr : rh.triangles()) t.region.insert(tr);
            }
        } catch (const json::exception& e) {
            throw config_error(std::string("render: malformed tilings file: ") + e.what());
        }
    } else {
        int side = int(cfg.integer("hexagon"));
        json rj = {{"hexagon", side}};
        auto all = enumerate_tilings(parse_region(rj, nullptr), 60, index + 1);
        if (index >= all.size()) throw config_error("render: tiling index out of range");
        t = all[index];
    }
    std::string why;
    if (!tiling_valid(t, &why)) throw config_error("render: invalid tiling: " + why);
    char name[32];
    std::snprintf(name, sizeof name, "tiling_%04zu.svg", index);
    c.write(name, tiling_svg(t, st));
    out["file"] = name;
    return out;
}

}  // namespace

std::string config_hash(const std::string& config_json) {
    try {
        return hex64(fnv1a(json::parse(config_json).dump()));
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
}

std::string run_command(const std::string& command, const std::string& config_json, const std::string& out_dir,
                        std::optional<uint64_t> seed) {
    Ctx c;
    c.command = command;
    c.seed = seed;
    try {
        c.cfg = json::parse(config_json);
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    c.out = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(c.out, ec);
    if (ec) throw Error(ErrorKind::Generic, "cannot create output directory " + c.out.string());

    json result;
    try {
        if (command == "heff") result = cmd_heff(c);
        else if (command == "tilings") result = cmd_tilings(c);
        else if (command == "mc") result = cmd_mc(c);
        else if (command == "bounds") result = cmd_bounds(c);
        else if (command == "render") result = cmd_render(c);
        else if (command == "energy") result = cmd_energy(c);
        else throw config_error("unknown command '" + command + "'");
    } catch (const json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    json s;
    s["command"] = command;
    s["provenance"] = c.provenance();
    s["result"] = result;
    s["files"] = c.files;
    return s.dump(2);
}

}  // namespace fkr
