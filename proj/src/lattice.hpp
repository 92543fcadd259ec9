#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fkr {

// Lattice site with integer label k; physical coordinate is k + 1/2.
struct Site {
    int k1 = 0, k2 = 0, k3 = 0;
    auto operator<=>(const Site&) const = default;
    int sum() const { return k1 + k2 + k3; }
    int operator[](int i) const { return i == 0 ? k1 : (i == 1 ? k2 : k3); }
    Site shifted(int axis, int d) const {
        Site s = *this;
        if (axis == 0) s.k1 += d; else if (axis == 1) s.k2 += d; else s.k3 += d;
        return s;
    }
};

inline Site operator+(Site a, Site b) { return {a.k1 + b.k1, a.k2 + b.k2, a.k3 + b.k3}; }
inline Site operator-(Site a, Site b) { return {a.k1 - b.k1, a.k2 - b.k2, a.k3 - b.k3}; }
inline Site unit(int axis) { return Site{}.shifted(axis, 1); }
inline int l1(Site a, Site b) { return std::abs(a.k1 - b.k1) + std::abs(a.k2 - b.k2) + std::abs(a.k3 - b.k3); }

struct SiteHash {
    size_t operator()(const Site& s) const {
        uint64_t h = (uint64_t(uint32_t(s.k1)) * 0x9E3779B97F4A7C15ULL) ^
                     (uint64_t(uint32_t(s.k2)) * 0xC2B2AE3D27D4EB4FULL) ^
                     (uint64_t(uint32_t(s.k3)) * 0x165667B19E3779F9ULL);
        return size_t(h ^ (h >> 29));
    }
};

enum class BC { HomPlus, HomMinus, BC100, BC111 };

BC parse_bc(const std::string& s);
std::string bc_name(BC bc);

int boundary_spin(BC bc, Site s);

inline int sublattice_parity(Site s) { return ((s.k1 + s.k2 + s.k3) & 1) ? -1 : 1; }

// Axis-aligned box of sites origin <= k < origin + dims, surrounded by a frozen shell.
struct Volume {
    std::array<int, 3> dims{1, 1, 1};
    int shell = 2;
    std::array<int, 3> origin{0, 0, 0};

    static Volume centered(std::array<int, 3> dims, int shell);
    bool contains(Site s) const;        // inside the dynamic volume
    bool in_box(Site s) const;          // inside volume or shell
    int size() const { return dims[0] * dims[1] * dims[2]; }
    std::array<int, 3> ext() const { return {dims[0] + 2 * shell, dims[1] + 2 * shell, dims[2] + 2 * shell}; }
    int box_size() const { auto e = ext(); return e[0] * e[1] * e[2]; }
    int box_index(Site s) const;
    Site box_site(int idx) const;
    std::vector<Site> sites() const;    // volume sites in box order
};

class SpinConfig {
public:
    SpinConfig() = default;
    SpinConfig(const Volume& v, BC bc);

    const Volume& volume() const { return vol_; }
    BC bc() const { return bc_; }

    // Spin anywhere on the lattice; outside the stored box the boundary condition applies.
    int spin(Site s) const {
        if (!vol_.in_box(s)) return boundary_spin(bc_, s);
        return data_[vol_.box_index(s)];
    }
    int at_index(int idx) const { return data_[idx]; }
    void set(Site s, int v);
    void flip(Site s) { int i = vol_.box_index(s); data_[i] = int8_t(-data_[i]); }
    bool shell_consistent() const;
    const std::vector<int8_t>& raw() const { return data_; }
    std::vector<int8_t>& raw() { return data_; }
    bool operator==(const SpinConfig& o) const { return bc_ == o.bc_ && data_ == o.data_; }

private:
    Volume vol_;
    BC bc_ = BC::HomPlus;
    std::vector<int8_t> data_;
};

// Ionic <-> ferromagnetic frame change by sublattice parity; an involution.
SpinConfig stagger(const SpinConfig& c);

// A face bisects the bond lo -> lo + e_axis.
struct Face {
    Site lo;
    int axis = 0;
    auto operator<=>(const Face&) const = default;
    Site hi() const { return lo.shifted(axis, 1); }
    Site corner() const { return hi(); }  // lowest integer corner of the dual square
};

// Minimal closed lattice walk through all sites (L1 metric tour), exact for n <= 12.
int closed_walk_length(const std::vector<Site>& sites);
// n(B) - 1, with the singleton convention g = 0. Defined for any finite site set.
int walk_g(const std::vector<Site>& sites);
bool nn_connected(const std::vector<Site>& sites);
// As walk_g but rejects clusters that are not nearest-neighbour connected.
int connectivity_g(const std::vector<Site>& sites);

struct BondCluster {
    std::vector<Site> sites;  // sorted
    int g = 0;
};

std::vector<BondCluster> enumerate_clusters(const Volume& v, Site anchor, int max_g);

}  // namespace fkr
