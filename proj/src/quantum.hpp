#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "lattice.hpp"

namespace fkr {

struct FKParams {
    double U = 16;
    double t = 1;
    double mu_e = 16;
    double mu_i = 16;
    double beta = 160;

    static FKParams half_filled(double U, double beta, double t = 1.0) { return {U, t, U, U, beta}; }
};

// Electron lattice: an ordered site list (the order fixes fermion phases) and its bonds.
struct QLattice {
    std::vector<Site> sites;
    std::vector<std::pair<int, int>> bonds;  // nearest neighbours, i < j

    explicit QLattice(std::vector<Site> s);
    int size() const { return int(sites.size()); }
};

constexpr int kMaxElectronSites = 14;
constexpr int kMaxDenseSites = 12;
constexpr int kMaxWindowSites = 12;

// Hamiltonian restricted to the sector with n_el electrons; rows follow `states`.
Eigen::MatrixXd build_block(const QLattice& lat, const std::vector<int>& W, const FKParams& p, int n_el,
                            std::vector<uint32_t>* states = nullptr);
// Whole Fock space in occupation-bitstring order (dimension 2^L, L <= kMaxDenseSites).
Eigen::MatrixXd build_hamiltonian(const QLattice& lat, const std::vector<int>& W, const FKParams& p);

// -(1/beta) log Tr exp(-beta H) over all electron numbers.
double effective_energy(const QLattice& lat, const std::vector<int>& W, const FKParams& p);

struct Coupling {
    std::vector<Site> cluster;  // sorted; empty for the constant
    int g = 0;
    double value = 0;
};

struct CouplingTable {
    double U = 0, beta = 0, t = 1;
    std::vector<Site> window;
    std::vector<Coupling> entries;  // every subset of the window, by size then lexicographic
    int max_g = -1;                 // -1: no g cutoff applied

    const Coupling* find(std::vector<Site> cluster) const;
    // Sum of couplings times ion-frame spin products.
    double resynthesize(const std::vector<int>& W) const;
};

// Ions outside the window stay frozen; exterior_W gives their occupations.
struct Window {
    std::vector<Site> free;
    std::vector<Site> frozen;
    std::vector<int> frozen_W;

    static Window plain(std::vector<Site> sites) { return {std::move(sites), {}, {}}; }
    // Frozen ions on the given exterior sites in the Neel pattern W = 1 on even parity.
    static Window with_neel_exterior(std::vector<Site> sites, std::vector<Site> exterior);
};

// H_eff for every window configuration; index bit i set means W = 1 on window site i.
std::vector<double> heff_table(const Window& w, const FKParams& p, int workers = 0);

// In-place Walsh-Hadamard transform over the ion-frame spins s' = 2W - 1, normalised so that
// f(S) = sum_A phi_A prod_{x in A} s'_x.
void walsh_transform(std::vector<double>& f);

CouplingTable extract_couplings(const Window& w, const FKParams& p, int max_g = -1, int workers = 0);

struct DecayLevel {
    int g = 0;
    int clusters = 0;
    double max_abs = 0;
};

struct DecayReport {
    std::vector<DecayLevel> levels;  // g >= 1, ascending
    bool trivial = false;            // every level below 1e-12
    double fit_C1 = 0, fit_c = 0;    // max|phi_g| ~ C1 (c/U)^g over nonzero levels
    bool fit_valid = false;
};

DecayReport verify_decay(const CouplingTable& table, double U);

int worker_count(int requested = 0);

}  // namespace fkr
