#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "effective.hpp"
#include "interface.hpp"

namespace fkr {

using SpinFn = std::function<int(Site)>;

// Lattice edge from integer point c to c + e_j.
struct Edge3 {
    Site c;
    int j = 0;
    auto operator<=>(const Edge3&) const = default;
};

enum class EdgeKind { None, Good, Delta, Omega };

const char* edge_kind_name(EdgeKind k);

// The four sites whose cubes share the edge, in cyclic order.
std::array<Site, 4> sites_around_edge(const Edge3& e);
// Faces of the four bonds around the edge, between consecutive sites of the cycle.
std::array<Face, 4> faces_around_edge(const Edge3& e);
// 3:1 -> good (bent pair), adjacent 2:2 -> delta (flat pair), diagonal 2:2 -> omega.
EdgeKind classify_edge(const SpinFn& spin, const Edge3& e);
// Plane rule for tilings: adjacent rhombi of equal type form a good pair.
EdgeKind classify_planar(const Tiling& t, const PEdge& e);
// Two parallel broken faces stacked along `axis` through site k (+-+ or -+-).
bool is_lambda(const SpinFn& spin, Site k, int axis);

std::array<Edge3, 4> face_sides(const Face& f);
PEdge project_edge(const Edge3& e);

struct RConfiguration {
    std::vector<Face> faces;  // sorted, unique
    SpinFn spin;
    std::map<Triangle, int> coverage() const;
};

SpinFn spin_from_heights(HeightMap h);
RConfiguration rconfig_from_tiling(const Tiling& t);
// Faces of the interface component pinned to the shell, including shell faces.
std::vector<Face> pinned_interface_faces(const SpinConfig& c);
RConfiguration rconfig_from_spins(const SpinConfig& c);

struct BaseInfo {
    int type = 0;
    int size = 0;  // rhombi in the configuration
    bool exterior = false;
};

struct OverlapSub {
    std::vector<int> faces;
    std::set<Triangle> support;
    int overlap_sum = 0;  // sum of o(t) over the support
    double a_ov = 0;
    int delta = 0, omega = 0, lambda = 0;
};

struct RContour {
    std::set<PVertex> vertices;
    std::set<PEdge> edges;          // sides of non-base rhombi and non-good sides
    std::set<Triangle> triangles;   // covered by non-base rhombi
    std::vector<int> faces;         // non-base faces
    std::set<Edge3> delta_st;       // delta edges away from overlapping rhombi
    std::vector<OverlapSub> ov;
    int omega_st = 0, lambda_st = 0;
};

struct Decomposition {
    std::vector<BaseInfo> bases;
    std::vector<int> face_base;  // base index per face, -1 for contour faces
    std::vector<RContour> contours;
    int unassigned_links = 0;
};

Decomposition decompose(const RConfiguration& rc);

double f_energy(const RContour& c, const Coeffs& k);
int total_delta(const RContour& c);
int total_omega(const RContour& c);
int total_lambda(const RContour& c);
double total_a_ov(const RContour& c);

// Minimal number of rhombi inside the support whose union is the support.
int min_rhombus_cover(const std::set<Triangle>& support, int max_rhombi = 12);

struct GeometricContour {
    std::set<PEdge> std_edges;
    std::set<Rhombus> std_rhombi;
    std::vector<std::set<Triangle>> supports;  // sorted
    std::vector<int> r_ov;                      // aligned with supports
    bool operator==(const GeometricContour& o) const {
        return std_edges == o.std_edges && std_rhombi == o.std_rhombi && supports == o.supports;
    }
};

GeometricContour geometric_class(const RConfiguration& rc, const RContour& c);

struct RemovalResult {
    Tiling tiling;
    int contours_before = 0, contours_after = 0;
    int interiors = 0;
    int translated = 0;
    std::vector<double> f_before_others, f_after;  // sorted
};

// Erases one contour of a tiling, translating each enclosed region so that its outer base
// matches the base outside the contour, then fills the holes with that base type.
// Throws an invariant error when any of the post-conditions fails.
RemovalResult dobrushin_remove(const Tiling& t, int contour_index, const Coeffs& k);

}  // namespace fkr
