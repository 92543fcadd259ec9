#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "errors.hpp"
#include "interface.hpp"
#include "rcontour.hpp"

using namespace fkr;

namespace {

// Boxed plane partitions in an n x n x n box.
double macmahon(int n) {
    double p = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) p *= double(i + j + k - 1) / double(i + j + k - 2);
    return std::round(p);
}

// Perfect matchings of the triangle adjacency graph, memoised on the uncovered set.
// Adjacency comes from shared vertex pairs, not from the library's neighbour function.
size_t count_matchings(const Region& r) {
    std::vector<Triangle> tris(r.begin(), r.end());
    const int n = int(tris.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto a = tris[i].vertices(), b = tris[j].vertices();
            int shared = 0;
            for (auto& x : a)
                for (auto& y : b) shared += x == y;
            if (shared == 2) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    std::map<std::vector<bool>, size_t> memo;
    std::function<size_t(std::vector<bool>&)> rec = [&](std::vector<bool>& used) -> size_t {
        int i = 0;
        while (i < n && used[i]) ++i;
        if (i == n) return 1;
        auto it = memo.find(used);
        if (it != memo.end()) return it->second;
        size_t total = 0;
        used[i] = true;
        for (int j : adj[i])
            if (!used[j]) {
                used[j] = true;
                total += rec(used);
                used[j] = false;
            }
        used[i] = false;
        memo[used] = total;
        return total;
    };
    std::vector<bool> used(n, false);
    return n % 2 ? 0 : rec(used);
}

PVertex centre_for(int side) { return side == 1 ? PVertex{1, 0} : PVertex{0, 0}; }

}  // namespace

TEST_CASE("projection geometry") {
    for (int a = 0; a < 3; ++a) CHECK(axis_step(a) == project(unit(a)));
    std::mt19937 rng(1);
    for (int t = 0; t < 100; ++t) {
        Site s{int(rng() % 11) - 5, int(rng() % 11) - 5, int(rng() % 11) - 5};
        CHECK(lift(project(s), s.sum()) == s);
        CHECK(project(s).cls() == ((s.sum() % 3) + 3) % 3);
    }
    CHECK_THROWS(lift({0, 0}, 1));
}

TEST_CASE("triangles and rhombi") {
    for (int up = 0; up < 2; ++up) {
        Triangle t{2, -1, up};
        auto v = t.vertices();
        CHECK(triangle_from_vertices(v[2], v[0], v[1]) == t);
        auto rs = rhombi_containing(t);
        std::set<int> types;
        for (auto& r : rs) {
            auto tt = r.triangles();
            CHECK((tt[0] == t || tt[1] == t));
            types.insert(r.type());
        }
        CHECK(types.size() == 3);
        CHECK(type0_rhombus(t).type() == 0);
        // Neighbours share exactly two vertices.
        for (auto& n : triangle_neighbours(t)) {
            int shared = 0;
            for (auto& x : n.vertices())
                for (auto& y : v) shared += x == y;
            CHECK(shared == 2);
        }
    }
}

TEST_CASE("faces project to rhombi and lift back") {
    for (int a = 0; a < 3; ++a)
        for (Site lo : {Site{0, 0, 0}, Site{1, -2, 3}, Site{-1, 0, -1}}) {
            Face f{lo, a};
            ProjectedFace pf = project_face(f);
            CHECK(pf.rhombus.axis == a);
            CHECK(lift_face(pf) == f);
            // The four corners of the dual square project onto the rhombus corners.
            Site C = f.corner();
            int j = (a + 1) % 3, l = (a + 2) % 3;
            std::set<PVertex> want = {project(C), project(C + unit(j)), project(C + unit(l)),
                                      project(C + unit(j) + unit(l))};
            auto cs = pf.rhombus.corners();
            CHECK(std::set<PVertex>(cs.begin(), cs.end()) == want);
        }
}

TEST_CASE("hexagon tiling counts match MacMahon and an independent matching count") {
    for (int side = 1; side <= 3; ++side) {
        Region r = hexagon_region(side, centre_for(side));
        CHECK(r.size() == size_t(6 * side * side));
        auto ts = enumerate_tilings(r);
        CHECK(double(ts.size()) == macmahon(side));
        if (side <= 2) CHECK(ts.size() == count_matchings(r));
        std::set<std::vector<Rhombus>> distinct;
        for (auto& t : ts) {
            CHECK(tiling_valid(t));
            distinct.insert(t.rhombi);
        }
        CHECK(distinct.size() == ts.size());
    }
}

TEST_CASE("irregular regions agree with the matching oracle") {
    std::mt19937 rng(9);
    Region hex = hexagon_region(2, {0, 0});
    std::vector<Triangle> all(hex.begin(), hex.end());
    for (int trial = 0; trial < 30; ++trial) {
        Region r;
        for (auto& t : all)
            if (rng() % 5) r.insert(t);
        CHECK(enumerate_tilings(r).size() == count_matchings(r));
    }
}

TEST_CASE("enumeration respects the cap and the limit") {
    Region r = hexagon_region(4, {0, 0});
    try {
        enumerate_tilings(r);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Cap);
    }
    CHECK(enumerate_tilings(hexagon_region(3, {0, 0}), 60, 5).size() == 5);
    auto a = enumerate_tilings(hexagon_region(2, {0, 0}));
    auto b = enumerate_tilings(hexagon_region(2, {0, 0}));
    CHECK(a == b);
}

TEST_CASE("heights step by one along every tiling edge") {
    for (int side = 1; side <= 2; ++side)
        for (auto& t : enumerate_tilings(hexagon_region(side, centre_for(side)))) {
            HeightResult hr = tiling_heights(t);
            REQUIRE(hr.consistent);
            for (auto& [e, n] : tiling_edges(t)) {
                int d = hr.h.at(e.q) - hr.h.at(e.p);
                CHECK(std::abs(d) == 1);
                // Height is congruent to the vertex class mod 3.
                CHECK(mod3(hr.h.at(e.p)) == e.p.cls());
                CHECK(mod3(hr.h.at(e.q)) == e.q.cls());
            }
        }
}

TEST_CASE("tiling and interface round trip") {
    for (int side = 1; side <= 2; ++side)
        for (auto& t : enumerate_tilings(hexagon_region(side, centre_for(side)))) {
            auto faces = tiling_to_interface(t);
            CHECK(faces.size() == t.rhombi.size());
            CHECK(interface_to_tiling(faces) == t);
        }
}

TEST_CASE("spin configurations built from tilings carry the tiling as pinned interface") {
    Volume v = Volume::centered({8, 8, 8}, 2);
    for (auto& t : enumerate_tilings(hexagon_region(2, {0, 0}))) {
        SpinConfig c = config_from_tiling(v, t);
        auto faces = pinned_interface_faces(c);
        Tiling full = interface_to_tiling(faces);
        // The hexagon is a patch of the projected interface.
        std::set<Rhombus> all(full.rhombi.begin(), full.rhombi.end());
        for (auto& r : t.rhombi) CHECK(all.count(r));
    }
}

TEST_CASE("a pyramid on the staircase is not minimal") {
    Volume v = Volume::centered({6, 6, 6}, 2);
    SpinConfig c(v, BC::BC111);
    c.flip({0, 0, 0});
    OverlapReport rep;
    CHECK_THROWS_AS(interface_to_tiling(pinned_interface_faces(c), &rep), Error);
    CHECK_FALSE(rep.overlapping.empty());
}

TEST_CASE("degeneracy bounds on hexagons") {
    for (int side = 1; side <= 3; ++side) {
        DegeneracyReport d = degeneracy_bounds_check(hexagon_region(side, {0, 0}));
        CHECK(d.area == 3 * side * side);
        CHECK(d.pass);
        CHECK(d.lower_ok);
    }
}

TEST_CASE("type-0 compatible hexagons") {
    CHECK(type0_compatible(hexagon_region(1, {1, 0})));
    CHECK(type0_compatible(hexagon_region(2, {0, 0})));
    CHECK_FALSE(type0_compatible(hexagon_region(1, {0, 0})));
}
