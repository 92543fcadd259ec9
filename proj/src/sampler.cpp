#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "errors.hpp"
#include "quantum.hpp"

namespace fkr {

Ham parse_ham(const std::string& s) {
    if (s == "H2" || s == "h2") return Ham::H2;
    if (s == "H4" || s == "h4") return Ham::H4;
    throw config_error("unknown hamiltonian '" + s + "'");
}

std::string ham_name(Ham h) { return h == Ham::H2 ? "H2" : "H4"; }

MoveSet parse_moves(const std::string& s) {
    if (s == "single") return MoveSet::Single;
    if (s == "single+hexagon") return MoveSet::SingleHex;
    throw config_error("unknown move set '" + s + "'");
}

std::string moves_name(MoveSet m) { return m == MoveSet::Single ? "single" : "single+hexagon"; }

void validate(const RunSpec& s) {
    for (int d : s.dims)
        if (d < 1) throw config_error("dims must be positive");
    if (!(s.U > 0)) throw config_error("U must be positive");
    if (!(s.beta >= 0)) throw config_error("beta must be non-negative");
    if (s.sweeps <= s.thermalization) throw config_error("sweeps must exceed thermalization");
    if (s.thermalization < 0 || s.stride < 1 || s.replicas < 1 || s.check_every < 1)
        throw config_error("invalid sweep bookkeeping");
    if (s.shell < (s.ham == Ham::H4 ? 2 : 1)) throw config_error("shell depth below interaction range");
    if (s.start != "ground" && s.start != "plus" && s.start != "minus" && s.start != "random")
        throw config_error("unknown start '" + s.start + "'");
}

SweepRng::SweepRng(uint64_t seed, uint64_t replica, uint64_t sweep) {
    std::seed_seq seq{uint32_t(seed), uint32_t(seed >> 32), uint32_t(replica), uint32_t(replica >> 32),
                      uint32_t(sweep), uint32_t(sweep >> 32)};
    eng_.seed(seq);
}

double SweepRng::uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

uint64_t SweepRng::below(uint64_t n) {
    // Lemire's multiply-shift with rejection of the biased low range.
    uint64_t x = eng_();
    __uint128_t m = __uint128_t(x) * n;
    uint64_t low = uint64_t(m);
    if (low < n) {
        uint64_t thresh = (0 - n) % n;
        while (low < thresh) {
            x = eng_();
            m = __uint128_t(x) * n;
            low = uint64_t(m);
        }
    }
    return uint64_t(m >> 64);
}

double metropolis_accept(double beta, double dE) {
    if (dE <= 0 || beta == 0) return 1.0;
    return std::exp(-beta * dE);
}

LayerProfile layer_magnetization(const SpinConfig& c, int normal) {
    std::map<int, std::pair<long, long>> acc;
    for (auto& s : c.volume().sites()) {
        int key = normal == 0 ? s.k3 : s.sum();
        acc[key].first += c.spin(s);
        acc[key].second++;
    }
    LayerProfile p;
    for (auto& [k, v] : acc) {
        p.index.push_back(k);
        p.m.push_back(double(v.first) / double(v.second));
    }
    return p;
}

GoodPairStats good_pair_fraction(const SpinConfig& c) {
    if (c.bc() != BC::BC111) throw config_error("good-pair fraction needs the 111 boundary condition");
    GoodPairStats st;
    auto faces = pinned_interface_faces(c);
    std::map<Triangle, int> cov;
    for (auto& f : faces)
        for (auto& t : project_face(f).rhombus.triangles()) cov[t]++;
    const Volume& v = c.volume();
    std::map<Edge3, std::vector<int>> at_edge;
    for (int i = 0; i < int(faces.size()); ++i) {
        const Face& f = faces[i];
        if (!v.contains(f.lo) && !v.contains(f.hi())) continue;
        Rhombus r = project_face(f).rhombus;
        bool ov = false;
        for (auto& t : r.triangles()) ov = ov || cov[t] > 1;
        if (ov) {
            st.overlap = true;
            continue;
        }
        for (auto& e : face_sides(f)) at_edge[e].push_back(i);
    }
    for (auto& [e, list] : at_edge) {
        if (list.size() != 2) continue;
        st.edges++;
        if (project_face(faces[list[0]]).rhombus.type() == project_face(faces[list[1]]).rhombus.type()) st.good++;
    }
    st.fraction = st.edges ? double(st.good) / st.edges : 1.0;
    return st;
}

double height_std(const SpinConfig& c) {
    const bool diag = c.bc() == BC::BC111;
    std::map<std::pair<int, int>, std::pair<int, int>> col;  // key -> (max minus label, flags)
    for (auto& s : c.volume().sites()) {
        std::pair<int, int> key;
        int label;
        if (diag) {
            PVertex p = project(s);
            key = {p.a, p.b};
            label = s.sum();
        } else {
            key = {s.k1, s.k2};
            label = s.k3;
        }
        auto [it, fresh] = col.emplace(key, std::pair<int, int>{INT32_MIN, 0});
        if (c.spin(s) < 0) {
            it->second.first = std::max(it->second.first, label);
            it->second.second |= 1;
        } else {
            it->second.second |= 2;
        }
    }
    double sum = 0, sq = 0;
    long n = 0;
    for (auto& [k, v] : col) {
        if (v.second != 3) continue;
        double h = v.first + (diag ? 3 : 1);
        sum += h;
        sq += h * h;
        ++n;
    }
    if (n == 0) return 0;
    double mean = sum / n;
    return std::sqrt(std::max(0.0, sq / n - mean * mean));
}

double interface_width(const SpinConfig& c) {
    SpinConfig ground(c.volume(), c.bc());
    return height_std(c) - height_std(ground);
}

bool hexagon_flippable(const SpinConfig& c, Site k) {
    for (int ax = 0; ax < 3; ++ax)
        if (c.spin(k.shifted(ax, -1)) != -1 || c.spin(k.shifted(ax, 1)) != 1) return false;
    return true;
}

SpinConfig initial_config(const RunSpec& s, uint64_t replica) {
    Volume v = Volume::centered(s.dims, s.shell);
    SpinConfig c(v, s.bc);
    if (s.start == "ground") return c;
    SweepRng rng(s.seed, replica, ~uint64_t(0));
    for (auto& site : v.sites()) {
        int val = s.start == "plus" ? 1 : s.start == "minus" ? -1 : (rng.uniform() < 0.5 ? -1 : 1);
        c.set(site, val);
    }
    return c;
}

namespace {

ReplicaResult run_replica(const RunSpec& s, uint64_t replica, const Coeffs& k) {
    ReplicaResult res;
    SpinConfig c = initial_config(s, replica);
    const Volume& v = c.volume();
    const auto sites = v.sites();
    auto energy = [&](const SpinConfig& x) { return s.ham == Ham::H2 ? h2_relative_energy(x, k) : h4_relative_energy(x, k); };
    auto delta = [&](Site x) { return s.ham == Ham::H2 ? h2_flip_delta(c, x, k) : h4_flip_delta(c, x, k); };

    std::vector<std::vector<Site>> columns;
    if (s.moves == MoveSet::SingleHex) {
        std::map<PVertex, std::vector<Site>> by;
        for (auto& x : sites) by[project(x)].push_back(x);
        for (auto& [p, list] : by) columns.push_back(list);
    }
    const int normal = s.bc == BC::BC111 ? 1 : 0;

    double E = energy(c);
    std::vector<double> trace;
    for (int sweep = 0; sweep < s.sweeps; ++sweep) {
        SweepRng rng(s.seed, replica, uint64_t(sweep));
        for (size_t step = 0; step < sites.size(); ++step) {
            bool hex = s.moves == MoveSet::SingleHex && rng.uniform() < 0.5;
            Site x;
            if (hex) {
                res.hex_proposed++;
                const auto& col = columns[rng.below(columns.size())];
                std::vector<Site> cand;
                for (auto& y : col)
                    if (hexagon_flippable(c, y)) cand.push_back(y);
                if (cand.empty()) {
                    res.hex_noop++;
                    continue;
                }
                x = cand[rng.below(cand.size())];
            } else {
                res.single_proposed++;
                x = sites[rng.below(sites.size())];
            }
            double dE = delta(x);
            double u = rng.uniform();
            if (u < metropolis_accept(s.beta, dE)) {
                c.flip(x);
                E += dE;
                (hex ? res.hex_accepted : res.single_accepted)++;
            }
        }
        if ((sweep + 1) % s.check_every == 0 || sweep + 1 == s.sweeps) {
            double full = energy(c);
            double drift = std::abs(full - E);
            res.max_drift = std::max(res.max_drift, drift);
            res.checks++;
            if (drift > 1e-9 * std::max(1.0, std::abs(full)))
                throw invariant_error("energy bookkeeping drifted by " + std::to_string(drift));
            E = full;
        }
        if (sweep >= s.thermalization) {
            trace.push_back(E);
            if ((sweep - s.thermalization) % s.stride == 0) {
                Measurement m;
                m.sweep = sweep;
                m.energy = E;
                m.layers = layer_magnetization(c, normal).m;
                if (s.bc == BC::BC111 || s.bc == BC::BC100) m.width = interface_width(c);
                if (s.bc == BC::BC111) {
                    auto gp = good_pair_fraction(c);
                    m.good_fraction = gp.fraction;
                    m.overlap = gp.overlap;
                }
                res.series.push_back(std::move(m));
            }
        }
    }
    res.stationary = two_window_stationary(trace);
    res.final_config = std::move(c);
    return res;
}

}  // namespace

bool two_window_stationary(const std::vector<double>& x) {
    if (x.size() < 4) return false;
    size_t h = x.size() / 2;
    auto stats = [&](size_t a, size_t b) {
        double m = 0, q = 0;
        for (size_t i = a; i < b; ++i) m += x[i];
        m /= double(b - a);
        for (size_t i = a; i < b; ++i) q += (x[i] - m) * (x[i] - m);
        double var = q / double(b - a - 1);
        return std::pair{m, var / double(b - a)};
    };
    auto [m1, v1] = stats(0, h);
    auto [m2, v2] = stats(h, x.size());
    double tol = 3 * std::sqrt(v1 + v2) + 1e-12 * std::max({1.0, std::abs(m1), std::abs(m2)});
    return std::abs(m1 - m2) <= tol;
}

RunResult mc_run(const RunSpec& spec) {
    validate(spec);
    RunResult out;
    out.spec = spec;
    Coeffs k = Coeffs::from_U(spec.U);
    {
        SpinConfig c0 = initial_config(spec, 0);
        out.layer_index = layer_magnetization(c0, spec.bc == BC::BC111 ? 1 : 0).index;
    }
    out.replicas.resize(spec.replicas);
    std::vector<std::exception_ptr> errs(spec.replicas);
    int nthreads = std::min(spec.replicas, worker_count(spec.workers));
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] {
            for (int r = t; r < spec.replicas; r += nthreads) {
                try {
                    out.replicas[r] = run_replica(spec, uint64_t(r), k);
                } catch (...) {
                    errs[r] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

Summary summarize(const RunResult& r) {
    Summary s;
    auto mean_se = [](const std::vector<double>& v, double& mean, double& se) {
        mean = 0;
        se = 0;
        if (v.empty()) return;
        for (double x : v) mean += x;
        mean /= double(v.size());
        if (v.size() < 2) return;
        double q = 0;
        for (double x : v) q += (x - mean) * (x - mean);
        se = std::sqrt(q / double(v.size() - 1) / double(v.size()));
    };
    std::vector<double> e, g, w;
    size_t nl = r.layer_index.size();
    s.mean_layers.assign(nl, 0.0);
    long nmeas = 0, prop = 0, acc = 0;
    for (auto& rep : r.replicas) {
        double se_, me = 0, mg = 0, mw = 0;
        std::vector<double> ee, gg, ww;
        for (auto& m : rep.series) {
            ee.push_back(m.energy);
            gg.push_back(m.good_fraction);
            ww.push_back(m.width);
            for (size_t i = 0; i < nl && i < m.layers.size(); ++i) s.mean_layers[i] += m.layers[i];
            ++nmeas;
        }
        mean_se(ee, me, se_);
        mean_se(gg, mg, se_);
        mean_se(ww, mw, se_);
        e.push_back(me);
        g.push_back(mg);
        w.push_back(mw);
        prop += rep.single_proposed;
        acc += rep.single_accepted;
    }
    for (auto& x : s.mean_layers) x = nmeas ? x / double(nmeas) : 0.0;
    mean_se(e, s.mean_energy, s.se_energy);
    mean_se(g, s.mean_good, s.se_good);
    mean_se(w, s.mean_width, s.se_width);
    s.min_abs_layer = nl ? 1.0 : 0.0;
    for (double x : s.mean_layers) s.min_abs_layer = std::min(s.min_abs_layer, std::abs(x));
    s.acceptance = prop ? double(acc) / double(prop) : 0.0;
    return s;
}

}  // namespace fkr
