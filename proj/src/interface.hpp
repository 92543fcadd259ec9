#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lattice.hpp"

namespace fkr {

inline int mod3(int x) { return ((x % 3) + 3) % 3; }

// Vertex of the triangular lattice in axial coordinates. The projection of an integer point
// (x,y,z) is (x-z, y-z); axial unit vectors sit at 120 degrees so (1,1) is also a unit step.
struct PVertex {
    int a = 0, b = 0;
    auto operator<=>(const PVertex&) const = default;
    int cls() const { return mod3(a + b); }
};

inline PVertex operator+(PVertex p, PVertex q) { return {p.a + q.a, p.b + q.b}; }
inline PVertex operator-(PVertex p, PVertex q) { return {p.a - q.a, p.b - q.b}; }

PVertex project(Site p);                        // integer point -> plane
Site lift(PVertex v, int height);               // inverse, height = coordinate sum
PVertex axis_step(int axis);                    // projection of e_axis
inline int staircase_height(PVertex v) { int c = v.cls(); return c == 2 ? -1 : c; }
int hex_distance(PVertex v);

// up = 0: {(a,b),(a+1,b),(a+1,b+1)}; up = 1: {(a,b),(a+1,b+1),(a,b+1)}
struct Triangle {
    int a = 0, b = 0, up = 0;
    auto operator<=>(const Triangle&) const = default;
    std::array<PVertex, 3> vertices() const;
};

struct PEdge {
    PVertex p, q;  // p < q
    auto operator<=>(const PEdge&) const = default;
    static PEdge of(PVertex x, PVertex y) { return x < y ? PEdge{x, y} : PEdge{y, x}; }
};

// Projection of a face: normal axis plus the projected lowest corner.
struct Rhombus {
    int axis = 0;
    int a = 0, b = 0;
    auto operator<=>(const Rhombus&) const = default;

    int type() const { return mod3(a + b + 1); }
    PVertex low() const { return {a, b}; }
    std::array<PVertex, 4> corners() const;     // low, mid_j, far, mid_l
    std::array<Triangle, 2> triangles() const;
    std::array<PEdge, 4> sides() const;
    Rhombus translated(PVertex d) const { return {axis, a + d.a, b + d.b}; }
};

struct ProjectedFace {
    Rhombus rhombus;
    int level = 0;  // coordinate sum of the middle corners
};

ProjectedFace project_face(const Face& f);
Face lift_face(const ProjectedFace& pf);

std::array<Rhombus, 3> rhombi_containing(const Triangle& t);
Rhombus type0_rhombus(const Triangle& t);
std::array<Triangle, 3> triangle_neighbours(const Triangle& t);
Triangle triangle_from_vertices(PVertex x, PVertex y, PVertex z);

using Region = std::set<Triangle>;

Region hexagon_region(int side, PVertex center);
std::set<PVertex> region_vertices(const Region& r);
std::vector<PEdge> region_boundary(const Region& r);
bool type0_compatible(const Region& r);

struct Tiling {
    Region region;
    std::vector<Rhombus> rhombi;  // sorted
    bool operator==(const Tiling& o) const { return region == o.region && rhombi == o.rhombi; }
};

using HeightMap = std::map<PVertex, int>;

bool tiling_valid(const Tiling& t, std::string* why = nullptr);
// Edges of the tiling: sides of its rhombi, with their multiplicity (1 = boundary, 2 = interior).
std::map<PEdge, int> tiling_edges(const Tiling& t);

// +1 if stepping from p to q along a tiling edge raises the class by one.
inline int height_step(PVertex p, PVertex q) { return mod3(q.cls() - p.cls()) == 1 ? 1 : -1; }

struct HeightResult {
    HeightMap h;
    bool consistent = true;
    std::vector<PEdge> bad_cycle;  // edges violating the increment rule when inconsistent
};

// Heights by summing edge increments from the smallest boundary vertex, whose value is its
// staircase coordinate sum.
HeightResult tiling_heights(const Tiling& t);

std::vector<Face> tiling_to_interface(const Tiling& t);

struct OverlapReport {
    std::vector<Triangle> overlapping;
};

// Projection of a minimal interface; throws with the overlap list otherwise.
Tiling interface_to_tiling(const std::vector<Face>& faces, OverlapReport* report = nullptr);

std::vector<Tiling> enumerate_tilings(const Region& r, size_t max_triangles = 60, size_t limit = 0);

struct DegeneracyReport {
    int area = 0;           // rhombi per tiling
    size_t count = 0;
    double lower = 0, upper = 0;
    bool lower_ok = false, upper_ok = false;
    bool in_regime = false;  // area >= 3
    bool pass = false;
};

DegeneracyReport degeneracy_bounds_check(const Region& r);

// Spin configuration whose minus region lies below the surface given by heights (staircase
// heights wherever the map is silent).
SpinConfig config_from_heights(const Volume& v, const HeightMap& h);
SpinConfig config_from_tiling(const Volume& v, const Tiling& t);

}  // namespace fkr
