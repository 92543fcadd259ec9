#include "interface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

#include "errors.hpp"

namespace fkr {

PVertex project(Site p) { return {p.k1 - p.k3, p.k2 - p.k3}; }

Site lift(PVertex v, int height) {
    int r = height - v.a - v.b;
    if (mod3(r) != 0) throw std::invalid_argument("height incompatible with vertex class");
    int z = r / 3;
    return {v.a + z, v.b + z, z};
}

PVertex axis_step(int axis) {
    if (axis == 0) return {1, 0};
    if (axis == 1) return {0, 1};
    return {-1, -1};
}

int hex_distance(PVertex v) { return std::max({std::abs(v.a), std::abs(v.b), std::abs(v.a - v.b)}); }

std::array<PVertex, 3> Triangle::vertices() const {
    if (up == 0) return {PVertex{a, b}, PVertex{a + 1, b}, PVertex{a + 1, b + 1}};
    return {PVertex{a, b}, PVertex{a + 1, b + 1}, PVertex{a, b + 1}};
}

Triangle triangle_from_vertices(PVertex x, PVertex y, PVertex z) {
    std::array<PVertex, 3> v = {x, y, z};
    std::sort(v.begin(), v.end());
    PVertex m = v[0];
    std::array<PVertex, 3> t0 = {m, PVertex{m.a + 1, m.b}, PVertex{m.a + 1, m.b + 1}};
    std::array<PVertex, 3> t1 = {m, PVertex{m.a, m.b + 1}, PVertex{m.a + 1, m.b + 1}};
    std::sort(t0.begin(), t0.end());
    std::sort(t1.begin(), t1.end());
    if (v == t0) return {m.a, m.b, 0};
    if (v == t1) return {m.a, m.b, 1};
    throw std::invalid_argument("vertices do not form a unit triangle");
}

std::array<PVertex, 4> Rhombus::corners() const {
    int j = (axis + 1) % 3, l = (axis + 2) % 3;
    PVertex L{a, b};
    return {L, L + axis_step(j), L + axis_step(j) + axis_step(l), L + axis_step(l)};
}

std::array<Triangle, 2> Rhombus::triangles() const {
    auto c = corners();
    return {triangle_from_vertices(c[0], c[2], c[1]), triangle_from_vertices(c[0], c[2], c[3])};
}

std::array<PEdge, 4> Rhombus::sides() const {
    auto c = corners();
    return {PEdge::of(c[0], c[1]), PEdge::of(c[1], c[2]), PEdge::of(c[2], c[3]), PEdge::of(c[3], c[0])};
}

ProjectedFace project_face(const Face& f) {
    Site L = f.corner();
    PVertex p = project(L);
    return {Rhombus{f.axis, p.a, p.b}, L.sum() + 1};
}

Face lift_face(const ProjectedFace& pf) {
    Site L = lift(pf.rhombus.low(), pf.level - 1);
    return {L.shifted(pf.rhombus.axis, -1), pf.rhombus.axis};
}

namespace {

// The short diagonal of a face projection runs along minus the projected normal.
Rhombus rhombus_on_diagonal(PVertex p, PVertex q) {
    PVertex d = q - p;
    for (int ax = 0; ax < 3; ++ax) {
        PVertex s = axis_step(ax);
        if (d == PVertex{-s.a, -s.b}) return {ax, p.a, p.b};
        if (d == s) return {ax, q.a, q.b};
    }
    throw std::invalid_argument("not a unit edge");
}

}  // namespace

std::array<Rhombus, 3> rhombi_containing(const Triangle& t) {
    auto v = t.vertices();
    return {rhombus_on_diagonal(v[0], v[1]), rhombus_on_diagonal(v[1], v[2]), rhombus_on_diagonal(v[2], v[0])};
}

Rhombus type0_rhombus(const Triangle& t) {
    for (auto& r : rhombi_containing(t))
        if (r.type() == 0) return r;
    throw std::logic_error("triangle without a type-0 rhombus");
}

std::array<Triangle, 3> triangle_neighbours(const Triangle& t) {
    if (t.up == 0) return {Triangle{t.a, t.b - 1, 1}, Triangle{t.a + 1, t.b, 1}, Triangle{t.a, t.b, 1}};
    return {Triangle{t.a, t.b, 0}, Triangle{t.a - 1, t.b, 0}, Triangle{t.a, t.b + 1, 0}};
}

Region hexagon_region(int side, PVertex c) {
    if (side < 0) throw config_error("hexagon side must be non-negative");
    Region r;
    for (int a = c.a - side - 1; a <= c.a + side; ++a)
        for (int b = c.b - side - 1; b <= c.b + side; ++b)
            for (int up = 0; up < 2; ++up) {
                Triangle t{a, b, up};
                bool inside = true;
                for (auto& v : t.vertices()) inside = inside && hex_distance(v - c) <= side;
                if (inside) r.insert(t);
            }
    return r;
}

std::set<PVertex> region_vertices(const Region& r) {
    std::set<PVertex> out;
    for (auto& t : r)
        for (auto& v : t.vertices()) out.insert(v);
    return out;
}

std::vector<PEdge> region_boundary(const Region& r) {
    std::map<PEdge, int> cnt;
    for (auto& t : r) {
        auto v = t.vertices();
        cnt[PEdge::of(v[0], v[1])]++;
        cnt[PEdge::of(v[1], v[2])]++;
        cnt[PEdge::of(v[2], v[0])]++;
    }
    std::vector<PEdge> out;
    for (auto& [e, n] : cnt)
        if (n == 1) out.push_back(e);
    return out;
}

bool type0_compatible(const Region& r) {
    for (auto& e : region_boundary(r))
        if (e.p.cls() != 0 && e.q.cls() != 0) return false;
    return true;
}

bool tiling_valid(const Tiling& t, std::string* why) {
    std::map<Triangle, int> cover;
    for (auto& rh : t.rhombi)
        for (auto& tr : rh.triangles()) cover[tr]++;
    for (auto& [tr, n] : cover) {
        if (n != 1) {
            if (why) *why = "triangle covered more than once";
            return false;
        }
        if (!t.region.count(tr)) {
            if (why) *why = "rhombus leaves the region";
            return false;
        }
    }
    if (cover.size() != t.region.size()) {
        if (why) *why = "region not fully covered";
        return false;
    }
    return true;
}

std::map<PEdge, int> tiling_edges(const Tiling& t) {
    std::map<PEdge, int> out;
    for (auto& rh : t.rhombi)
        for (auto& e : rh.sides()) out[e]++;
    return out;
}

HeightResult tiling_heights(const Tiling& t) {
    HeightResult res;
    if (t.rhombi.empty()) return res;
    std::map<PVertex, std::vector<PVertex>> adj;
    auto edges = tiling_edges(t);
    for (auto& [e, n] : edges) {
        adj[e.p].push_back(e.q);
        adj[e.q].push_back(e.p);
    }
    auto boundary = region_boundary(t.region);
    PVertex start = boundary.empty() ? adj.begin()->first : boundary.front().p;
    for (auto& e : boundary) start = std::min({start, e.p, e.q});
    res.h[start] = staircase_height(start);
    std::queue<PVertex> q;
    q.push(start);
    while (!q.empty()) {
        PVertex v = q.front();
        q.pop();
        for (auto& w : adj[v]) {
            if (res.h.count(w)) continue;
            res.h[w] = res.h[v] + height_step(v, w);
            q.push(w);
        }
    }
    for (auto& [e, n] : edges) {
        if (!res.h.count(e.p) || !res.h.count(e.q) || res.h[e.q] - res.h[e.p] != height_step(e.p, e.q)) {
            res.consistent = false;
            res.bad_cycle.push_back(e);
        }
    }
    return res;
}

std::vector<Face> tiling_to_interface(const Tiling& t) {
    std::string why;
    if (!tiling_valid(t, &why)) throw invariant_error("invalid tiling: " + why);
    HeightResult hr = tiling_heights(t);
    if (!hr.consistent) {
        std::ostringstream os;
        os << "inconsistent height increments on " << hr.bad_cycle.size() << " edges, first ("
           << hr.bad_cycle[0].p.a << "," << hr.bad_cycle[0].p.b << ")-(" << hr.bad_cycle[0].q.a << ","
           << hr.bad_cycle[0].q.b << ")";
        throw invariant_error(os.str());
    }
    std::vector<Face> out;
    for (auto& rh : t.rhombi) {
        auto c = rh.corners();
        int h0 = hr.h.at(c[0]);
        if (hr.h.at(c[1]) != h0 + 1 || hr.h.at(c[3]) != h0 + 1 || hr.h.at(c[2]) != h0 + 2)
            throw invariant_error("rhombus corner heights do not match a lattice face");
        out.push_back(lift_face({rh, h0 + 1}));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Tiling interface_to_tiling(const std::vector<Face>& faces, OverlapReport* report) {
    Tiling t;
    std::map<Triangle, int> cover;
    for (auto& f : faces) {
        Rhombus r = project_face(f).rhombus;
        t.rhombi.push_back(r);
        for (auto& tr : r.triangles()) cover[tr]++;
    }
    OverlapReport rep;
    for (auto& [tr, n] : cover) {
        if (n > 1) rep.overlapping.push_back(tr);
        t.region.insert(tr);
    }
    if (report) *report = rep;
    if (!rep.overlapping.empty())
        throw invariant_error("interface is not minimal: " + std::to_string(rep.overlapping.size()) +
                              " overlapping triangles");
    std::sort(t.rhombi.begin(), t.rhombi.end());
    return t;
}

std::vector<Tiling> enumerate_tilings(const Region& r, size_t max_triangles, size_t limit) {
    if (r.size() > max_triangles)
        throw cap_error("region has " + std::to_string(r.size()) + " triangles, cap is " +
                        std::to_string(max_triangles));
    std::vector<Tiling> out;
    if (r.size() % 2) return out;
    std::vector<Triangle> tris(r.begin(), r.end());
    std::map<Triangle, int> idx;
    for (int i = 0; i < int(tris.size()); ++i) idx[tris[i]] = i;
    std::vector<std::array<int, 3>> nb(tris.size());
    for (int i = 0; i < int(tris.size()); ++i) {
        auto ns = triangle_neighbours(tris[i]);
        std::vector<int> ids;
        for (auto& n : ns) ids.push_back(idx.count(n) ? idx[n] : -1);
        std::sort(ids.begin(), ids.end());
        nb[i] = {ids[0], ids[1], ids[2]};
    }
    std::vector<char> covered(tris.size(), 0);
    std::vector<Rhombus> stack;
    auto pair_rhombus = [&](int i, int j) {
        for (auto& rh : rhombi_containing(tris[i])) {
            auto tt = rh.triangles();
            if (tt[0] == tris[j] || tt[1] == tris[j]) return rh;
        }
        throw std::logic_error("adjacent triangles without a common rhombus");
    };
    // Dimer matching: the first free triangle is paired with each free neighbour in turn.
    std::function<void(int)> rec = [&](int from) {
        if (limit && out.size() >= limit) return;
        int i = from;
        while (i < int(tris.size()) && covered[i]) ++i;
        if (i == int(tris.size())) {
            Tiling t{r, stack};
            std::sort(t.rhombi.begin(), t.rhombi.end());
            out.push_back(std::move(t));
            return;
        }
        covered[i] = 1;
        for (int j : nb[i]) {
            if (j < 0 || covered[j]) continue;
            covered[j] = 1;
            stack.push_back(pair_rhombus(i, j));
            rec(i + 1);
            stack.pop_back();
            covered[j] = 0;
        }
        covered[i] = 0;
    };
    rec(0);
    return out;
}

DegeneracyReport degeneracy_bounds_check(const Region& r) {
    DegeneracyReport rep;
    rep.area = int(r.size() / 2);
    rep.count = enumerate_tilings(r, 60).size();
    rep.lower = std::pow(2.0, rep.area / 3.0);
    rep.upper = std::pow(2.0, 2.0 * rep.area);
    rep.lower_ok = double(rep.count) >= rep.lower;
    rep.upper_ok = double(rep.count) <= rep.upper;
    rep.in_regime = rep.area >= 3;
    rep.pass = rep.upper_ok && (rep.lower_ok || !rep.in_regime);
    return rep;
}

SpinConfig config_from_heights(const Volume& v, const HeightMap& h) {
    SpinConfig c(v, BC::BC111);
    for (int i = 0; i < v.box_size(); ++i) {
        Site k = v.box_site(i);
        PVertex p = project(k);
        auto it = h.find(p);
        int H = it == h.end() ? staircase_height(p) : it->second;
        c.raw()[i] = int8_t(k.sum() + 3 <= H ? -1 : 1);
    }
    return c;
}

SpinConfig config_from_tiling(const Volume& v, const Tiling& t) {
    HeightResult hr = tiling_heights(t);
    if (!hr.consistent) throw invariant_error("tiling heights inconsistent");
    return config_from_heights(v, hr.h);
}

}  // namespace fkr
