#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "effective.hpp"
#include "rcontour.hpp"

namespace fkr {

enum class Ham { H2, H4 };
enum class MoveSet { Single, SingleHex };

Ham parse_ham(const std::string& s);
std::string ham_name(Ham h);
MoveSet parse_moves(const std::string& s);
std::string moves_name(MoveSet m);

struct RunSpec {
    std::array<int, 3> dims{8, 8, 8};
    int shell = 2;
    BC bc = BC::HomPlus;
    Ham ham = Ham::H2;
    double U = 8;
    double beta = 1;
    int sweeps = 1000;         // total, including thermalization
    int thermalization = 100;
    uint64_t seed = 1;
    MoveSet moves = MoveSet::Single;
    int stride = 10;
    int replicas = 1;
    int check_every = 50;      // sweeps between energy re-evaluations
    std::string start = "ground";  // ground | plus | minus | random
    int workers = 0;
};

void validate(const RunSpec& s);

// Per-(replica, sweep) generator.
class SweepRng {
public:
    SweepRng(uint64_t seed, uint64_t replica, uint64_t sweep);
    double uniform();                 // [0,1)
    uint64_t below(uint64_t n);       // uniform in [0,n)
private:
    std::mt19937_64 eng_;
};

double metropolis_accept(double beta, double dE);

struct LayerProfile {
    std::vector<int> index;   // layer label: k3, or k1+k2+k3
    std::vector<double> m;
};

// normal 0: layers of constant k3; normal 1: layers of constant k1+k2+k3. Volume sites only.
LayerProfile layer_magnetization(const SpinConfig& c, int normal);

struct GoodPairStats {
    int edges = 0, good = 0;
    double fraction = 1.0;
    bool overlap = false;
};

GoodPairStats good_pair_fraction(const SpinConfig& c);

// Raw height spread over columns crossing the interface; 111 columns for BC111, else k3 columns.
double height_std(const SpinConfig& c);
double interface_width(const SpinConfig& c);  // minus the ground-state value

// Flip condition of the local tiling move: lower neighbours minus, upper neighbours plus.
bool hexagon_flippable(const SpinConfig& c, Site k);

struct Measurement {
    int sweep = 0;
    double energy = 0;
    double width = 0;
    double good_fraction = 1.0;
    bool overlap = false;
    std::vector<double> layers;
};

struct ReplicaResult {
    std::vector<Measurement> series;
    long single_proposed = 0, single_accepted = 0;
    long hex_proposed = 0, hex_accepted = 0, hex_noop = 0;
    double max_drift = 0;  // largest |accumulated - recomputed| energy seen
    int checks = 0;
    bool stationary = false;
    SpinConfig final_config;
};

struct RunResult {
    RunSpec spec;
    std::vector<int> layer_index;
    std::vector<ReplicaResult> replicas;
};

SpinConfig initial_config(const RunSpec& s, uint64_t replica);
RunResult mc_run(const RunSpec& spec);

// Two-window test on a trace: means agree within three combined standard errors.
bool two_window_stationary(const std::vector<double>& x);

struct Summary {
    double mean_energy = 0, se_energy = 0;
    double mean_good = 0, se_good = 0;
    double mean_width = 0, se_width = 0;
    std::vector<double> mean_layers;
    double min_abs_layer = 0;
    double acceptance = 0;
};

Summary summarize(const RunResult& r);

}  // namespace fkr
