#include "effective.hpp"

#include <array>
#include <numeric>
#include <unordered_map>

#include "errors.hpp"
#include "unionfind.hpp"

namespace fkr {

Coeffs Coeffs::from_U(double U) {
    Coeffs k;
    const double U3 = U * U * U;
    k.U = U;
    k.J = 1.0 / (4 * U);
    k.c_nn = 1.0 / (4 * U) - 11.0 / (16 * U3);
    k.c_nnn = 3.0 / (16 * U3);
    k.c_2 = 1.0 / (8 * U3);
    k.c_plq = 5.0 / (16 * U3);
    k.J1 = 1.0 / (2 * U);
    k.J2 = 1.0 / (2 * U) - 11.0 / (8 * U3);
    k.K2 = 1.0 / (4 * U3);
    return k;
}

// Diagonals are (x,z) and (y,t).
int plaquette_potential(int sx, int sy, int sz, int st) {
    return 5 * (sx * sy * sz * st - 1) + 3 * (sx * sz + sy * st - 2);
}

int nnn_potential(int sx, int sz) { return sx * sz - 1; }

int bosonic_plaquette_potential(int sx, int sy, int sz, int st) {
    return 1 - sx * sy * sz * st + 5 * (sx * sz + sy * st - 2);
}

namespace {

const std::array<Site, 3> kNN = {Site{1, 0, 0}, Site{0, 1, 0}, Site{0, 0, 1}};
const std::array<Site, 6> kDiag = {Site{1, 1, 0}, Site{1, -1, 0}, Site{1, 0, 1},
                                   Site{1, 0, -1}, Site{0, 1, 1}, Site{0, 1, -1}};
const std::array<Site, 3> kStraight2 = {Site{2, 0, 0}, Site{0, 2, 0}, Site{0, 0, 2}};
const std::array<std::pair<int, int>, 3> kPlanes = {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}};

Site neg(Site s) { return {-s.k1, -s.k2, -s.k3}; }

void require_range(const SpinConfig& c, int range) {
    if (c.volume().shell < range)
        throw config_error("shell depth " + std::to_string(c.volume().shell) +
                           " below interaction range " + std::to_string(range));
}

// Visits every term whose sites all lie in the box and touch the volume.
template <class F>
void for_each_pair(const Volume& v, const Site* offs, int n, F&& f) {
    for (int i = 0; i < v.box_size(); ++i) {
        Site x = v.box_site(i);
        for (int o = 0; o < n; ++o) {
            Site y = x + offs[o];
            if (!v.in_box(y)) continue;
            if (!v.contains(x) && !v.contains(y)) continue;
            f(x, y);
        }
    }
}

}  // namespace

double h2_relative_energy(const SpinConfig& c, const Coeffs& k) {
    require_range(c, 1);
    long broken = 0;
    for_each_pair(c.volume(), kNN.data(), 3, [&](Site x, Site y) {
        if (c.spin(x) != c.spin(y)) ++broken;
    });
    return 2.0 * k.J * double(broken);
}

double h4_relative_energy(const SpinConfig& c, const Coeffs& k) {
    require_range(c, 2);
    const Volume& v = c.volume();
    long nn = 0, dg = 0, st = 0, pl = 0;  // sums of (product - 1), all even and <= 0
    for_each_pair(v, kNN.data(), 3, [&](Site x, Site y) { nn += c.spin(x) * c.spin(y) - 1; });
    for_each_pair(v, kDiag.data(), 6, [&](Site x, Site y) { dg += c.spin(x) * c.spin(y) - 1; });
    for_each_pair(v, kStraight2.data(), 3, [&](Site x, Site y) { st += c.spin(x) * c.spin(y) - 1; });
    for (int i = 0; i < v.box_size(); ++i) {
        Site x = v.box_site(i);
        for (auto [a, b] : kPlanes) {
            Site p[4] = {x, x.shifted(a, 1), x.shifted(a, 1).shifted(b, 1), x.shifted(b, 1)};
            bool inside = true, touches = false;
            for (auto& s : p) {
                inside = inside && v.in_box(s);
                touches = touches || v.contains(s);
            }
            if (!inside || !touches) continue;
            pl += c.spin(p[0]) * c.spin(p[1]) * c.spin(p[2]) * c.spin(p[3]) - 1;
        }
    }
    return -k.c_nn * double(nn) + k.c_nnn * double(dg) + k.c_2 * double(st) + k.c_plq * double(pl);
}

double h2_flip_delta(const SpinConfig& c, Site s, const Coeffs& k) {
    int sx = c.spin(s), acc = 0;
    for (auto& d : kNN) acc += c.spin(s + d) + c.spin(s - d);
    return 2.0 * k.J * sx * acc;
}

double h4_flip_delta(const SpinConfig& c, Site s, const Coeffs& k) {
    const int sx = c.spin(s);
    int nn = 0, dg = 0, st = 0, pl = 0;
    for (auto& d : kNN) nn += c.spin(s + d) + c.spin(s - d);
    for (auto& d : kDiag) dg += c.spin(s + d) + c.spin(s - d);
    for (auto& d : kStraight2) st += c.spin(s + d) + c.spin(s - d);
    for (auto [a, b] : kPlanes) {
        for (int da = -1; da <= 0; ++da)
            for (int db = -1; db <= 0; ++db) {
                Site x = s.shifted(a, da).shifted(b, db);
                Site p[4] = {x, x.shifted(a, 1), x.shifted(a, 1).shifted(b, 1), x.shifted(b, 1)};
                pl += c.spin(p[0]) * c.spin(p[1]) * c.spin(p[2]) * c.spin(p[3]);
            }
    }
    return sx * (2.0 * k.c_nn * nn - 2.0 * k.c_nnn * dg - 2.0 * k.c_2 * st) - 2.0 * k.c_plq * pl;
}

namespace {

uint64_t point_key(Site s, int tag) {
    return (uint64_t(uint32_t(s.k1 + 4096)) << 40) ^ (uint64_t(uint32_t(s.k2 + 4096)) << 20) ^
           uint64_t(uint32_t(s.k3 + 4096)) ^ (uint64_t(tag) << 60);
}

}  // namespace

std::vector<IsingContour> extract_contours(const SpinConfig& c, bool corner_connectivity) {
    const Volume& v = c.volume();
    std::vector<Face> faces;
    for (int i = 0; i < v.box_size(); ++i) {
        Site x = v.box_site(i);
        for (int ax = 0; ax < 3; ++ax) {
            Site y = x.shifted(ax, 1);
            if (v.in_box(y) && c.spin(x) != c.spin(y)) faces.push_back({x, ax});
        }
    }
    UnionFind uf(int(faces.size()));
    std::unordered_map<uint64_t, int> owner;
    for (int f = 0; f < int(faces.size()); ++f) {
        const Face& fc = faces[f];
        Site C = fc.corner();
        int j = (fc.axis + 1) % 3, l = (fc.axis + 2) % 3;
        std::vector<uint64_t> keys;
        if (corner_connectivity) {
            keys = {point_key(C, 0), point_key(C.shifted(j, 1), 0), point_key(C.shifted(l, 1), 0),
                    point_key(C.shifted(j, 1).shifted(l, 1), 0)};
        } else {
            keys = {point_key(C, 1 + j), point_key(C, 1 + l), point_key(C.shifted(j, 1), 1 + l),
                    point_key(C.shifted(l, 1), 1 + j)};
        }
        for (auto key : keys) {
            auto [it, fresh] = owner.emplace(key, f);
            if (!fresh) uf.unite(f, it->second);
        }
    }
    std::unordered_map<int, int> comp_index;
    std::vector<IsingContour> out;
    std::vector<char> wall;
    for (int f = 0; f < int(faces.size()); ++f) {
        int r = uf.find(f);
        auto [it, fresh] = comp_index.emplace(r, int(out.size()));
        if (fresh) {
            out.emplace_back();
            wall.push_back(0);
        }
        IsingContour& ct = out[it->second];
        bool touches = v.contains(faces[f].lo) || v.contains(faces[f].hi());
        if (touches) {
            ct.faces.push_back(faces[f]);
            ct.area++;
        } else {
            wall[it->second] = 1;
        }
    }
    std::vector<IsingContour> kept;
    for (size_t i = 0; i < out.size(); ++i) {
        out[i].pinned = wall[i] != 0;
        if (out[i].area > 0) kept.push_back(std::move(out[i]));
    }
    return kept;
}

PeierlsReport peierls_check(const std::vector<IsingContour>& contours, const Coeffs& k, double c0) {
    PeierlsReport r;
    r.max_c0 = k.U * k.J1;
    for (const auto& ct : contours) {
        if (ct.pinned) continue;
        r.contours_checked++;
        double e = k.J1 * ct.area;
        if (e < (c0 / k.U) * ct.area) r.violations++;
    }
    r.pass = r.violations == 0;
    return r;
}

}  // namespace fkr
