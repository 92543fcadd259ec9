#include "quantum.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "errors.hpp"

namespace fkr {

QLattice::QLattice(std::vector<Site> s) : sites(std::move(s)) {
    if (int(sites.size()) > kMaxElectronSites)
        throw cap_error("electron lattice of " + std::to_string(sites.size()) + " sites exceeds cap " +
                        std::to_string(kMaxElectronSites));
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (l1(sites[i], sites[j]) == 1) bonds.push_back({i, j});
}

namespace {

void check_ions(const QLattice& lat, const std::vector<int>& W) {
    if (int(W.size()) != lat.size()) throw config_error("ion configuration size does not match lattice");
    for (int w : W)
        if (w != 0 && w != 1) throw config_error("ion occupations must be 0 or 1");
}

// (-1)^(occupied sites strictly between i and j)
int hop_sign(uint32_t state, int i, int j) {
    int lo = std::min(i, j), hi = std::max(i, j);
    uint32_t mask = ((1u << hi) - 1) & ~((1u << (lo + 1)) - 1);
    return (std::popcount(state & mask) & 1) ? -1 : 1;
}

}  // namespace

Eigen::MatrixXd build_block(const QLattice& lat, const std::vector<int>& W, const FKParams& p, int n_el,
                            std::vector<uint32_t>* states_out) {
    check_ions(lat, W);
    const int L = lat.size();
    std::vector<uint32_t> states;
    for (uint32_t s = 0; s < (1u << L); ++s)
        if (std::popcount(s) == n_el) states.push_back(s);
    std::vector<int> index(size_t(1) << L, -1);
    for (int k = 0; k < int(states.size()); ++k) index[states[k]] = k;

    double ions = 0;
    for (int w : W) ions += w;
    const int D = int(states.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D, D);
    for (int k = 0; k < D; ++k) {
        uint32_t s = states[k];
        double diag = -p.mu_i * ions;
        for (int x = 0; x < L; ++x)
            if (s >> x & 1) diag += 2 * p.U * W[x] - p.mu_e;
        H(k, k) = diag;
        if (p.t == 0) continue;
        for (auto [i, j] : lat.bonds) {
            for (auto [from, to] : {std::pair{i, j}, std::pair{j, i}}) {
                if (!(s >> from & 1) || (s >> to & 1)) continue;
                uint32_t s2 = (s & ~(1u << from)) | (1u << to);
                H(index[s2], k) += -p.t * hop_sign(s, from, to);
            }
        }
    }
    if (states_out) *states_out = std::move(states);
    return H;
}

Eigen::MatrixXd build_hamiltonian(const QLattice& lat, const std::vector<int>& W, const FKParams& p) {
    const int L = lat.size();
    if (L > kMaxDenseSites)
        throw cap_error("dense Fock-space matrix capped at " + std::to_string(kMaxDenseSites) + " sites");
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(1 << L, 1 << L);
    for (int n = 0; n <= L; ++n) {
        std::vector<uint32_t> st;
        Eigen::MatrixXd B = build_block(lat, W, p, n, &st);
        for (int a = 0; a < int(st.size()); ++a)
            for (int b = 0; b < int(st.size()); ++b) H(st[a], st[b]) = B(a, b);
    }
    return H;
}

double effective_energy(const QLattice& lat, const std::vector<int>& W, const FKParams& p) {
    if (!(p.beta > 0)) throw config_error("beta must be positive");
    std::vector<double> ev;
    for (int n = 0; n <= lat.size(); ++n) {
        Eigen::MatrixXd B = build_block(lat, W, p, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw invariant_error("eigensolver failed");
        for (int k = 0; k < B.rows(); ++k) ev.push_back(es.eigenvalues()(k));
    }
    double emin = *std::min_element(ev.begin(), ev.end());
    double acc = 0;
    for (double e : ev) acc += std::exp(-p.beta * (e - emin));
    double h = emin - std::log(acc) / p.beta;
    if (!std::isfinite(h)) throw invariant_error("non-finite effective energy");
    return h;
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FKR_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

Window Window::with_neel_exterior(std::vector<Site> sites, std::vector<Site> exterior) {
    Window w;
    w.free = std::move(sites);
    w.frozen = std::move(exterior);
    for (auto& s : w.frozen) w.frozen_W.push_back(sublattice_parity(s) > 0 ? 1 : 0);
    return w;
}

std::vector<double> heff_table(const Window& w, const FKParams& p, int workers) {
    const int n = int(w.free.size());
    if (n > kMaxWindowSites)
        throw cap_error("window of " + std::to_string(n) + " sites exceeds 2^" + std::to_string(kMaxWindowSites) +
                        " configurations");
    if (w.frozen.size() != w.frozen_W.size()) throw config_error("frozen exterior occupations missing");
    std::vector<Site> all = w.free;
    all.insert(all.end(), w.frozen.begin(), w.frozen.end());
    QLattice lat(all);
    const size_t N = size_t(1) << n;
    std::vector<double> out(N);
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errs(worker_count(workers));
    auto job = [&](int id) {
        try {
            std::vector<int> W(all.size());
            for (size_t k = 0; k < w.frozen_W.size(); ++k) W[n + k] = w.frozen_W[k];
            for (size_t c; (c = next.fetch_add(1)) < N;) {
                for (int i = 0; i < n; ++i) W[i] = int(c >> i & 1);
                out[c] = effective_energy(lat, W, p);
            }
        } catch (...) {
            errs[id] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (int id = 0; id < int(errs.size()); ++id) pool.emplace_back(job, id);
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

void walsh_transform(std::vector<double>& f) {
    const size_t N = f.size();
    if (N == 0 || (N & (N - 1))) throw std::invalid_argument("transform length must be a power of two");
    for (size_t bit = 1; bit < N; bit <<= 1)
        for (size_t i = 0; i < N; ++i)
            if (!(i & bit)) {
                double h0 = f[i], h1 = f[i | bit];
                f[i] = h0 + h1;
                f[i | bit] = h1 - h0;
            }
    const double scale = 1.0 / double(N);
    for (auto& x : f) x *= scale;
}

const Coupling* CouplingTable::find(std::vector<Site> cluster) const {
    std::sort(cluster.begin(), cluster.end());
    for (auto& e : entries)
        if (e.cluster == cluster) return &e;
    return nullptr;
}

double CouplingTable::resynthesize(const std::vector<int>& W) const {
    std::map<Site, int> spin;
    for (size_t i = 0; i < window.size(); ++i) spin[window[i]] = 2 * W[i] - 1;
    double acc = 0;
    for (auto& e : entries) {
        int prod = 1;
        for (auto& s : e.cluster) prod *= spin.at(s);
        acc += e.value * prod;
    }
    return acc;
}

CouplingTable extract_couplings(const Window& w, const FKParams& p, int max_g, int workers) {
    std::vector<double> f = heff_table(w, p, workers);
    walsh_transform(f);
    const int n = int(w.free.size());
    CouplingTable table;
    table.U = p.U;
    table.beta = p.beta;
    table.t = p.t;
    table.window = w.free;
    table.max_g = max_g;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        Coupling c;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) c.cluster.push_back(w.free[i]);
        std::sort(c.cluster.begin(), c.cluster.end());
        c.g = c.cluster.empty() ? 0 : walk_g(c.cluster);
        if (max_g >= 0 && c.g > max_g) continue;
        c.value = f[mask];
        table.entries.push_back(std::move(c));
    }
    std::sort(table.entries.begin(), table.entries.end(), [](const Coupling& a, const Coupling& b) {
        if (a.cluster.size() != b.cluster.size()) return a.cluster.size() < b.cluster.size();
        return a.cluster < b.cluster;
    });
    return table;
}

DecayReport verify_decay(const CouplingTable& table, double U) {
    DecayReport r;
    std::map<int, DecayLevel> lv;
    for (auto& e : table.entries) {
        if (e.g < 1) continue;
        auto& L = lv[e.g];
        L.g = e.g;
        L.clusters++;
        L.max_abs = std::max(L.max_abs, std::abs(e.value));
    }
    r.trivial = true;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (auto& [g, L] : lv) {
        r.levels.push_back(L);
        if (L.max_abs > 1e-12) {
            r.trivial = false;
            double y = std::log(L.max_abs);
            sx += g; sy += y; sxx += double(g) * g; sxy += g * y;
            ++m;
        }
    }
    if (m >= 2) {
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        double icpt = (sy - slope * sx) / m;
        r.fit_c = U * std::exp(slope);
        r.fit_C1 = std::exp(icpt);
        r.fit_valid = true;
    }
    return r;
}

}  // namespace fkr
