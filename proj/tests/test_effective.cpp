#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "effective.hpp"
#include "errors.hpp"

using namespace fkr;

namespace {

// Plain double loop over box site pairs classified by their separation vector.
double h4_oracle(const SpinConfig& c, const Coeffs& k) {
    const Volume& v = c.volume();
    double e = 0;
    for (int i = 0; i < v.box_size(); ++i)
        for (int j = i + 1; j < v.box_size(); ++j) {
            Site x = v.box_site(i), y = v.box_site(j);
            if (!v.contains(x) && !v.contains(y)) continue;
            Site d = y - x;
            int a[3] = {std::abs(d.k1), std::abs(d.k2), std::abs(d.k3)};
            int sq = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
            int nz = (a[0] > 0) + (a[1] > 0) + (a[2] > 0);
            double prod = c.spin(x) * c.spin(y) - 1;
            if (sq == 1) e -= k.c_nn * prod;
            else if (sq == 2) e += k.c_nnn * prod;
            else if (sq == 4 && nz == 1) e += k.c_2 * prod;
        }
    // Unit squares: four box sites, all pairwise within one diagonal, spanning a plane.
    for (int i = 0; i < v.box_size(); ++i) {
        Site x = v.box_site(i);
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                std::vector<Site> sq = {x, x + unit(a), x + unit(a) + unit(b), x + unit(b)};
                bool in = true, touch = false;
                int prod = 1;
                for (auto& s : sq) {
                    in = in && v.in_box(s);
                    touch = touch || v.contains(s);
                }
                if (!in || !touch) continue;
                for (auto& s : sq) prod *= c.spin(s);
                e += k.c_plq * (prod - 1);
            }
    }
    return e;
}

SpinConfig random_config(std::array<int, 3> dims, int shell, BC bc, std::mt19937& rng) {
    SpinConfig c(Volume::centered(dims, shell), bc);
    for (auto& s : c.volume().sites()) c.set(s, rng() & 1 ? 1 : -1);
    return c;
}

int broken_bonds(const SpinConfig& c) {
    const Volume& v = c.volume();
    int n = 0;
    for (auto& x : v.sites())
        for (int a = 0; a < 3; ++a) {
            if (c.spin(x) != c.spin(x + unit(a))) ++n;
            if (!v.contains(x - unit(a)) && c.spin(x) != c.spin(x - unit(a))) ++n;
        }
    return n;
}

}  // namespace

TEST_CASE("coefficients at U = 8") {
    Coeffs k = Coeffs::from_U(8);
    const double U3 = 512;
    CHECK(k.J == doctest::Approx(1.0 / 32));
    CHECK(k.J1 == doctest::Approx(1.0 / 16));
    CHECK(k.J2 == doctest::Approx(1.0 / 16 - 11.0 / (8 * U3)));
    CHECK(k.K2 == doctest::Approx(1.0 / (4 * U3)));
    CHECK(k.c_nnn == doctest::Approx(3.0 / (16 * U3)));
    CHECK(k.c_2 == doctest::Approx(1.0 / (8 * U3)));
    CHECK(k.c_plq == doctest::Approx(5.0 / (16 * U3)));
    CHECK(2 * k.c_nn == doctest::Approx(k.J2));
}

TEST_CASE("local potentials on all patterns") {
    for (int m = 0; m < 16; ++m) {
        int s[4];
        for (int i = 0; i < 4; ++i) s[i] = (m >> i & 1) ? -1 : 1;
        int hp = plaquette_potential(s[0], s[1], s[2], s[3]);
        int minus = __builtin_popcount(m);
        bool diag_pair = (m == 0b0101 || m == 0b1010);
        int want = (minus == 0 || minus == 4) ? 0 : (minus % 2 == 1) ? -16 : diag_pair ? 0 : -12;
        CHECK(hp == want);
        CHECK(hp <= 0);
    }
    for (int m = 0; m < 8; ++m) {
        int x = (m & 1) ? -1 : 1, z = (m & 4) ? -1 : 1;
        CHECK(nnn_potential(x, z) == (x == z ? 0 : -2));
    }
}

TEST_CASE("h2 counts broken bonds touching the volume") {
    std::mt19937 rng(5);
    Coeffs k = Coeffs::from_U(8);
    for (BC bc : {BC::HomPlus, BC::BC100, BC::BC111})
        for (int t = 0; t < 20; ++t) {
            SpinConfig c = random_config({3, 4, 3}, 2, bc, rng);
            CHECK(h2_relative_energy(c, k) == doctest::Approx(k.J1 * broken_bonds(c)).epsilon(1e-12));
        }
}

TEST_CASE("h4 matches the pair-loop oracle") {
    std::mt19937 rng(6);
    for (double U : {8.0, 16.0})
        for (BC bc : {BC::HomPlus, BC::BC111}) {
            Coeffs k = Coeffs::from_U(U);
            for (int t = 0; t < 5; ++t) {
                SpinConfig c = random_config({3, 3, 3}, 2, bc, rng);
                CHECK(h4_relative_energy(c, k) == doctest::Approx(h4_oracle(c, k)).epsilon(1e-12));
            }
        }
}

TEST_CASE("flip deltas equal energy differences") {
    std::mt19937 rng(7);
    Coeffs k = Coeffs::from_U(10);
    for (BC bc : {BC::BC100, BC::BC111}) {
        SpinConfig c = random_config({4, 4, 4}, 2, bc, rng);
        auto sites = c.volume().sites();
        for (int t = 0; t < 60; ++t) {
            Site s = sites[rng() % sites.size()];
            double e2 = h2_relative_energy(c, k), e4 = h4_relative_energy(c, k);
            double d2 = h2_flip_delta(c, s, k), d4 = h4_flip_delta(c, s, k);
            c.flip(s);
            CHECK(h2_relative_energy(c, k) - e2 == doctest::Approx(d2).epsilon(1e-10));
            CHECK(h4_relative_energy(c, k) - e4 == doctest::Approx(d4).epsilon(1e-10));
        }
    }
}

TEST_CASE("h4 needs a two-layer shell") {
    SpinConfig c(Volume::centered({2, 2, 2}, 1), BC::HomPlus);
    CHECK_THROWS_AS(h4_relative_energy(c, Coeffs::from_U(8)), Error);
}

TEST_CASE("contours: single flipped site in the plus phase") {
    SpinConfig c(Volume::centered({3, 3, 3}, 1), BC::HomPlus);
    c.flip({0, 0, 0});
    auto cs = extract_contours(c);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].area == 6);
    CHECK_FALSE(cs[0].pinned);
    // Two diagonal minus sites share only an edge of their cubes: edge-connected, one contour.
    c.flip({1, 1, 0});
    CHECK(extract_contours(c).size() == 1);
    c.flip({1, 1, 0});
    // Body-diagonal sites share a corner only.
    c.flip({1, 1, 1});
    CHECK(extract_contours(c).size() == 2);
    CHECK(extract_contours(c, true).size() == 1);
}

TEST_CASE("contour areas add up to the h2 energy on every 2x2x2 configuration") {
    Coeffs k = Coeffs::from_U(8);
    SpinConfig base(Volume::centered({2, 2, 2}, 1), BC::HomPlus);
    auto sites = base.volume().sites();
    for (int m = 0; m < 256; ++m) {
        SpinConfig c = base;
        for (int i = 0; i < 8; ++i)
            if (m >> i & 1) c.flip(sites[i]);
        double sum = 0;
        for (auto& ct : extract_contours(c)) sum += k.J1 * ct.area;
        CHECK(std::abs(sum - h2_relative_energy(c, k)) <= 1e-12);
    }
}

TEST_CASE("pinned contours under mixed boundary conditions") {
    SpinConfig c(Volume::centered({4, 4, 4}, 1), BC::BC100);
    auto cs = extract_contours(c);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].pinned);
    CHECK(cs[0].area == 16);
}

TEST_CASE("peierls check against the face energy") {
    Coeffs k = Coeffs::from_U(8);
    SpinConfig c(Volume::centered({4, 4, 4}, 1), BC::HomPlus);
    c.flip({0, 0, 0});
    c.flip({-2, -2, -2});
    auto cs = extract_contours(c);
    auto ok = peierls_check(cs, k, 0.4);
    CHECK(ok.pass);
    CHECK(ok.contours_checked == 2);
    CHECK(ok.max_c0 == doctest::Approx(0.5));
    CHECK_FALSE(peierls_check(cs, k, 0.6).pass);
}
