#include "lattice.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "errors.hpp"

namespace fkr {

BC parse_bc(const std::string& s) {
    if (s == "hom_plus" || s == "homplus") return BC::HomPlus;
    if (s == "hom_minus" || s == "homminus") return BC::HomMinus;
    if (s == "bc100") return BC::BC100;
    if (s == "bc111") return BC::BC111;
    throw config_error("unknown boundary condition '" + s + "'");
}

std::string bc_name(BC bc) {
    switch (bc) {
        case BC::HomPlus: return "hom_plus";
        case BC::HomMinus: return "hom_minus";
        case BC::BC100: return "bc100";
        case BC::BC111: return "bc111";
    }
    return "?";
}

// x3 >= 1/2  <=>  k3 >= 0;  x1+x2+x3 >= 1/2  <=>  k1+k2+k3 >= -1.
int boundary_spin(BC bc, Site s) {
    switch (bc) {
        case BC::HomPlus: return 1;
        case BC::HomMinus: return -1;
        case BC::BC100: return s.k3 >= 0 ? 1 : -1;
        case BC::BC111: return s.sum() >= -1 ? 1 : -1;
    }
    return 1;
}

Volume Volume::centered(std::array<int, 3> dims, int shell) {
    Volume v;
    v.dims = dims;
    v.shell = shell;
    for (int i = 0; i < 3; ++i) v.origin[i] = -(dims[i] / 2);
    return v;
}

bool Volume::contains(Site s) const {
    for (int i = 0; i < 3; ++i)
        if (s[i] < origin[i] || s[i] >= origin[i] + dims[i]) return false;
    return true;
}

bool Volume::in_box(Site s) const {
    for (int i = 0; i < 3; ++i)
        if (s[i] < origin[i] - shell || s[i] >= origin[i] + dims[i] + shell) return false;
    return true;
}

int Volume::box_index(Site s) const {
    auto e = ext();
    int x = s.k1 - origin[0] + shell, y = s.k2 - origin[1] + shell, z = s.k3 - origin[2] + shell;
    return (x * e[1] + y) * e[2] + z;
}

Site Volume::box_site(int idx) const {
    auto e = ext();
    int z = idx % e[2];
    int y = (idx / e[2]) % e[1];
    int x = idx / (e[1] * e[2]);
    return {x + origin[0] - shell, y + origin[1] - shell, z + origin[2] - shell};
}

std::vector<Site> Volume::sites() const {
    std::vector<Site> out;
    out.reserve(size());
    for (int x = 0; x < dims[0]; ++x)
        for (int y = 0; y < dims[1]; ++y)
            for (int z = 0; z < dims[2]; ++z) out.push_back({origin[0] + x, origin[1] + y, origin[2] + z});
    return out;
}

SpinConfig::SpinConfig(const Volume& v, BC bc) : vol_(v), bc_(bc), data_(v.box_size()) {
    if (v.shell < 1) throw config_error("shell depth must be positive");
    for (int i = 0; i < v.box_size(); ++i) data_[i] = int8_t(boundary_spin(bc, v.box_site(i)));
}

void SpinConfig::set(Site s, int v) {
    if (!vol_.in_box(s)) throw std::out_of_range("site outside stored box");
    data_[vol_.box_index(s)] = int8_t(v > 0 ? 1 : -1);
}

bool SpinConfig::shell_consistent() const {
    for (int i = 0; i < vol_.box_size(); ++i) {
        Site s = vol_.box_site(i);
        if (!vol_.contains(s) && data_[i] != boundary_spin(bc_, s)) return false;
    }
    return true;
}

SpinConfig stagger(const SpinConfig& c) {
    SpinConfig out = c;
    auto& d = out.raw();
    for (int i = 0; i < int(d.size()); ++i) d[i] = int8_t(d[i] * sublattice_parity(c.volume().box_site(i)));
    return out;
}

int closed_walk_length(const std::vector<Site>& sites) {
    const int n = int(sites.size());
    if (n <= 1) return 0;
    if (n > 12) throw cap_error("closed walk search capped at 12 sites");
    // Held-Karp over tours starting at site 0.
    const int full = 1 << n;
    const int INF = std::numeric_limits<int>::max() / 4;
    std::vector<int> dp(size_t(full) * n, INF);
    dp[1 * n + 0] = 0;
    for (int mask = 1; mask < full; mask += 2) {
        for (int last = 0; last < n; ++last) {
            int cur = dp[size_t(mask) * n + last];
            if (cur >= INF || !(mask & (1 << last))) continue;
            for (int nxt = 1; nxt < n; ++nxt) {
                if (mask & (1 << nxt)) continue;
                int nm = mask | (1 << nxt);
                int val = cur + l1(sites[last], sites[nxt]);
                int& slot = dp[size_t(nm) * n + nxt];
                if (val < slot) slot = val;
            }
        }
    }
    int best = INF;
    for (int last = 1; last < n; ++last)
        best = std::min(best, dp[size_t(full - 1) * n + last] + l1(sites[last], sites[0]));
    return best;
}

int walk_g(const std::vector<Site>& sites) {
    if (sites.empty()) throw config_error("empty cluster");
    if (sites.size() == 1) return 0;
    return closed_walk_length(sites) - 1;
}

bool nn_connected(const std::vector<Site>& sites) {
    if (sites.empty()) return false;
    std::vector<char> seen(sites.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    size_t count = 1;
    while (!q.empty()) {
        int i = q.front();
        q.pop();
        for (size_t j = 0; j < sites.size(); ++j)
            if (!seen[j] && l1(sites[i], sites[j]) == 1) {
                seen[j] = 1;
                ++count;
                q.push(int(j));
            }
    }
    return count == sites.size();
}

int connectivity_g(const std::vector<Site>& sites) {
    if (!nn_connected(sites)) throw config_error("cluster is not nearest-neighbour connected");
    return walk_g(sites);
}

std::vector<BondCluster> enumerate_clusters(const Volume& v, Site anchor, int max_g) {
    if (max_g < 0 || max_g > 8) throw config_error("max_g must lie in [0, 8]");
    if (!v.contains(anchor)) throw config_error("anchor outside volume");
    std::vector<BondCluster> out;
    std::set<std::vector<Site>> seen;
    std::vector<std::vector<Site>> frontier{{anchor}};
    seen.insert({anchor});
    out.push_back({{anchor}, 0});
    // g is monotone under adding sites, so growth can stop as soon as g exceeds the cap.
    while (!frontier.empty()) {
        std::vector<std::vector<Site>> next;
        for (const auto& cl : frontier) {
            for (const Site& s : cl)
                for (int ax = 0; ax < 3; ++ax)
                    for (int d : {-1, 1}) {
                        Site n = s.shifted(ax, d);
                        if (!v.contains(n) || std::binary_search(cl.begin(), cl.end(), n)) continue;
                        std::vector<Site> grown = cl;
                        grown.insert(std::upper_bound(grown.begin(), grown.end(), n), n);
                        if (seen.count(grown)) continue;
                        seen.insert(grown);
                        int g = walk_g(grown);
                        if (g > max_g) continue;
                        out.push_back({grown, g});
                        next.push_back(std::move(grown));
                    }
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end(), [](const BondCluster& a, const BondCluster& b) {
        if (a.sites.size() != b.sites.size()) return a.sites.size() < b.sites.size();
        return a.sites < b.sites;
    });
    return out;
}

}  // namespace fkr
