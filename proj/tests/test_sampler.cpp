#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "errors.hpp"
#include "sampler.hpp"

using namespace fkr;

namespace {

// Exact Boltzmann mean of the energy by enumerating every volume configuration.
double exact_mean_energy(const RunSpec& s) {
    SpinConfig base(Volume::centered(s.dims, s.shell), s.bc);
    auto sites = base.volume().sites();
    Coeffs k = Coeffs::from_U(s.U);
    std::vector<double> E;
    for (uint32_t m = 0; m < (1u << sites.size()); ++m) {
        SpinConfig c = base;
        for (size_t i = 0; i < sites.size(); ++i) c.set(sites[i], (m >> i & 1) ? -1 : 1);
        E.push_back(s.ham == Ham::H2 ? h2_relative_energy(c, k) : h4_relative_energy(c, k));
    }
    double emin = *std::min_element(E.begin(), E.end());
    double z = 0, ez = 0;
    for (double e : E) {
        double w = std::exp(-s.beta * (e - emin));
        z += w;
        ez += w * e;
    }
    return ez / z;
}

double sampled_mean_energy(const RunResult& r, double* se) {
    std::vector<double> per;
    for (auto& rep : r.replicas) {
        double acc = 0;
        for (auto& m : rep.series) acc += m.energy;
        per.push_back(acc / double(rep.series.size()));
    }
    double mean = 0, q = 0;
    for (double x : per) mean += x;
    mean /= double(per.size());
    for (double x : per) q += (x - mean) * (x - mean);
    *se = std::sqrt(q / double(per.size() - 1) / double(per.size()));
    return mean;
}

}  // namespace

TEST_CASE("sweep generator ranges and reproducibility") {
    SweepRng a(5, 1, 2), b(5, 1, 2), c(5, 1, 3);
    bool differ = false;
    for (int i = 0; i < 100; ++i) {
        double x = a.uniform(), y = b.uniform(), z = c.uniform();
        CHECK(x == y);
        CHECK(x >= 0);
        CHECK(x < 1);
        differ = differ || x != z;
    }
    CHECK(differ);
    std::vector<int> hist(7, 0);
    SweepRng r(9, 0, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        uint64_t v = r.below(7);
        REQUIRE(v < 7);
        hist[v]++;
    }
    double chi2 = 0;
    for (int h : hist) chi2 += (h - n / 7.0) * (h - n / 7.0) / (n / 7.0);
    CHECK(chi2 < 22.5);  // 6 degrees of freedom, p ~ 0.001
}

TEST_CASE("metropolis acceptance") {
    CHECK(metropolis_accept(2, -1) == 1);
    CHECK(metropolis_accept(0, 5) == 1);
    CHECK(metropolis_accept(2, 0.5) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("layer profile of the 100 ground state") {
    SpinConfig c(Volume::centered({4, 4, 6}, 2), BC::BC100);
    LayerProfile p = layer_magnetization(c, 0);
    REQUIRE(p.index.size() == 6);
    for (size_t i = 0; i < p.index.size(); ++i) CHECK(p.m[i] == (p.index[i] >= 0 ? 1.0 : -1.0));
}

TEST_CASE("hexagon moves on the staircase") {
    SpinConfig c(Volume::centered({5, 5, 5}, 2), BC::BC111);
    for (auto& s : c.volume().sites()) CHECK(hexagon_flippable(c, s) == (s.sum() == -1 || s.sum() == -2));
}

TEST_CASE("good pairs and width at the staircase") {
    SpinConfig c(Volume::centered({6, 6, 6}, 2), BC::BC111);
    GoodPairStats g = good_pair_fraction(c);
    CHECK(g.edges > 0);
    CHECK(g.fraction == 1.0);
    CHECK_FALSE(g.overlap);
    CHECK(interface_width(c) == 0);
    // Add one cube on the staircase. The site stays flippable, so the move can be undone.
    c.flip({0, 0, -2});
    REQUIRE(hexagon_flippable(c, {0, 0, -2}));
    GoodPairStats g2 = good_pair_fraction(c);
    CHECK(g2.fraction < 1.0);
    CHECK_FALSE(g2.overlap);
    SpinConfig h(Volume::centered({3, 3, 3}, 1), BC::BC100);
    CHECK_THROWS_AS(good_pair_fraction(h), Error);
}

TEST_CASE("run spec validation") {
    RunSpec s;
    s.sweeps = 10;
    s.thermalization = 20;
    CHECK_THROWS_AS(validate(s), Error);
    s = RunSpec{};
    s.ham = Ham::H4;
    s.shell = 1;
    CHECK_THROWS_AS(validate(s), Error);
    s = RunSpec{};
    s.start = "sideways";
    CHECK_THROWS_AS(validate(s), Error);
    CHECK_THROWS_AS(parse_ham("H3"), Error);
    CHECK_THROWS_AS(parse_moves("cluster"), Error);
}

TEST_CASE("single flips sample the Boltzmann distribution") {
    RunSpec s;
    s.dims = {2, 2, 1};
    s.shell = 1;
    s.bc = BC::HomPlus;
    s.ham = Ham::H2;
    s.U = 8;
    s.beta = 12;
    s.sweeps = 6000;
    s.thermalization = 200;
    s.stride = 1;
    s.replicas = 8;
    s.seed = 3;
    s.start = "random";
    double se, mean = sampled_mean_energy(mc_run(s), &se);
    double exact = exact_mean_energy(s);
    CHECK(std::abs(mean - exact) < 4 * se + 1e-3 * exact);
}

TEST_CASE("hexagon moves keep detailed balance") {
    RunSpec s;
    s.dims = {2, 2, 2};
    s.shell = 2;
    s.bc = BC::BC111;
    s.ham = Ham::H4;
    s.U = 4;
    s.beta = 8;
    s.sweeps = 4000;
    s.thermalization = 200;
    s.stride = 1;
    s.replicas = 8;
    s.seed = 5;
    s.moves = MoveSet::SingleHex;
    RunResult r = mc_run(s);
    long hex_acc = 0;
    for (auto& rep : r.replicas) hex_acc += rep.hex_accepted;
    CHECK(hex_acc > 0);
    double se, mean = sampled_mean_energy(r, &se);
    CHECK(std::abs(mean - exact_mean_energy(s)) < 4 * se + 1e-9);
}

TEST_CASE("runs are reproducible and replicas independent") {
    RunSpec s;
    s.dims = {4, 4, 4};
    s.bc = BC::BC111;
    s.ham = Ham::H2;
    s.U = 8;
    s.beta = 40;
    s.sweeps = 60;
    s.thermalization = 10;
    s.stride = 5;
    s.replicas = 2;
    s.seed = 42;
    s.moves = MoveSet::SingleHex;
    s.check_every = 7;
    s.workers = 2;
    RunResult a = mc_run(s);
    s.workers = 1;
    RunResult b = mc_run(s);
    for (int r = 0; r < 2; ++r) {
        REQUIRE(a.replicas[r].series.size() == b.replicas[r].series.size());
        CHECK(a.replicas[r].final_config == b.replicas[r].final_config);
        for (size_t i = 0; i < a.replicas[r].series.size(); ++i)
            CHECK(a.replicas[r].series[i].energy == b.replicas[r].series[i].energy);
        CHECK(a.replicas[r].checks > 0);
        CHECK(a.replicas[r].max_drift < 1e-9);
    }
    CHECK_FALSE(a.replicas[0].final_config == a.replicas[1].final_config);
    Summary sm = summarize(a);
    CHECK(sm.mean_layers.size() == a.layer_index.size());
    CHECK(sm.acceptance >= 0);
    CHECK(sm.acceptance <= 1);
}

TEST_CASE("two-window stationarity") {
    std::vector<double> flat, ramp;
    for (int i = 0; i < 200; ++i) {
        flat.push_back((i % 2) ? 1.0 : -1.0);
        ramp.push_back(i);
    }
    CHECK(two_window_stationary(flat));
    CHECK_FALSE(two_window_stationary(ramp));
    CHECK_FALSE(two_window_stationary({1, 2}));
}

TEST_CASE("infinite temperature accepts every move") {
    RunSpec s;
    s.dims = {3, 3, 3};
    s.beta = 0;
    s.sweeps = 20;
    s.thermalization = 0;
    s.stride = 5;
    s.start = "random";
    RunResult r = mc_run(s);
    CHECK(r.replicas[0].single_accepted == r.replicas[0].single_proposed);
}

TEST_CASE("a cold plus phase never forms a contour") {
    RunSpec s;
    s.dims = {4, 4, 4};
    s.shell = 1;
    s.bc = BC::HomPlus;
    s.U = 8;
    s.beta = 20 * 4 * s.U;  // beta J = 20
    s.sweeps = 1000;
    s.thermalization = 0;
    s.stride = 10;
    s.start = "plus";
    RunResult r = mc_run(s);
    for (auto& m : r.replicas[0].series) CHECK(m.energy == 0);
    CHECK(r.replicas[0].single_accepted == 0);
}
