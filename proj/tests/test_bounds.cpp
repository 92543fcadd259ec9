#include <doctest.h>

#include <cmath>
#include <random>

#include "bounds.hpp"
#include "errors.hpp"

using namespace fkr;

namespace {

// Smallest k >= 1 with C2beta * x^k <= 1 by stepping k up in long double.
int k0_scan(double C2beta, double x) {
    long double v = C2beta;
    for (int k = 1;; ++k) {
        v *= x;
        if (v <= 1.0L) return k;
    }
}

}  // namespace

TEST_CASE("k0 is the smallest admissible exponent") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> lg(-2, 30), lx(-6, -0.01);
    for (int i = 0; i < 100; ++i) {
        double C2beta = std::pow(10.0, lg(rng)), x = std::pow(10.0, lx(rng));
        int k = k0_min(C2beta, x);
        CHECK(k == k0_scan(C2beta, x));
    }
    CHECK(k0_min(0.5, 0.5) == 1);
    CHECK_THROWS_AS(k0_min(2, 1.5), Error);
}

TEST_CASE("hopping sequence tail: closed form against direct sum") {
    for (double U : {8.0, 13.0, 24.0, 100.0}) {
        CjReport r = cj_sequence(3, 1, U, 10, 0.5, 400);
        CHECK(r.ratio == doctest::Approx(12.0 / U));
        CHECK(r.convergent == (r.ratio < 1));
        if (r.convergent) {
            double direct = 0;
            for (int j = 2; j <= 400; ++j) direct += std::pow(r.ratio, j);
            CHECK(std::abs(r.tail_closed - direct) <= 1e-12 * std::max(1.0, direct) + std::pow(r.ratio, 401) / (1 - r.ratio));
            CHECK(r.sum_below_one == (r.tail_closed < 1));
        } else {
            CHECK(std::isinf(r.tail_closed));
        }
    }
    CjReport r = cj_sequence(3, 1, 24, 1, 0.5);
    CHECK(r.tail_closed == doctest::Approx(0.5));
    CHECK_THROWS_AS(cj_sequence(3, 1, 24, 1, 1.5), Error);
    CHECK_THROWS_AS(cj_sequence(3, 1, 0.5, 1, 0.5), Error);
}

TEST_CASE("B exceeds one") {
    for (double C1 : {1e-6, 1e-2, 1.0, 1e3})
        for (double C2 : {1e-6, 1e-2, 1.0, 1e3}) {
            double B = bigB(C1, C2);
            CHECK(B > 1);
            // B solves B^2 - B = c_d C2 / C1.
            CHECK(B * B - B == doctest::Approx(36 * C2 / C1).epsilon(1e-10));
        }
}

TEST_CASE("q grows with b inside a band of constant k0") {
    PolymerInputs in{1, 1, 0.5 * 1.6014203207569257e-05, 1, 2, 36};
    for (int k = 2; k <= 12; ++k) {
        auto [lo, hi] = k0_band(in.C2, in.lambda, k);
        double prev = -INFINITY;
        int prev_k = -1;
        // Interior points: at the closed end the k0 test sits on a rounding tie.
        for (int i = 1; i < 40; ++i) {
            double b = lo + (hi - lo) * i / 40.0;
            in.b = b;
            ConvergenceReport r = polymer_report(in);
            if (prev_k >= 0) CHECK(r.k0 == prev_k);
            prev_k = r.k0;
            CHECK(r.k0 == k);
            CHECK(r.q > prev);
            prev = r.q;
        }
    }
}

TEST_CASE("b0 brackets the last sign change") {
    for (double f : {0.1, 0.5, 0.9}) {
        B0Result r = find_b0(1, 1, f * 1.6014203207569257e-05);
        REQUIRE(r.found);
        CHECK(r.lambda_ok);
        PolymerInputs in{1, 1, f * r.lambda0, 1, 2, 36};
        CHECK(q_of_b(in, r.b_lo) <= 0);
        CHECK(q_of_b(in, r.b_hi) > 0);
        CHECK(r.b_hi - r.b_lo <= 1e-6 * r.b_hi);
        // Positive well above b0, across several band changes.
        for (double m : {1.01, 2.0, 10.0, 1e3, 1e6}) CHECK(q_of_b(in, m * r.b0) > 0);
    }
    B0Result bad = find_b0(1, 1, 1e-2);
    CHECK_FALSE(bad.found);
    CHECK_FALSE(bad.note.empty());
}

TEST_CASE("polymer report flags infeasible activity") {
    PolymerInputs in{1, 1, 0.01, 1e3, 2, 36};
    ConvergenceReport r = polymer_report(in);
    CHECK_FALSE(r.cond2);
    CHECK_FALSE(r.Zpol_available);
    CHECK_FALSE(r.note.empty());
    in.lambda = -1;
    CHECK_THROWS_AS(polymer_report(in), Error);
}

TEST_CASE("closing constant decreases with b") {
    double prev = INFINITY;
    for (double b = 1e18; b <= 1e30; b *= 10) {
        double v = log_C_prime(1, 1, b);
        REQUIRE(std::isfinite(v));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(std::isnan(log_C_prime(1, 1, 1)));
}

TEST_CASE("decay audit on a synthetic table") {
    CouplingTable t;
    t.U = 16;
    t.t = 1;
    t.window = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    t.entries = {{{}, 0, -5},
                 {{{0, 0, 0}, {1, 0, 0}}, 1, 1.0 / 64 + 1e-5},
                 {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, 3, 1e-4}};
    AuditReport a = decay_audit(t, 1, 0.125);
    CHECK(a.checked == 2);
    CHECK(a.violations == 0);
    CHECK(a.pair_residual_max == doctest::Approx(1e-5));
    CHECK(a.pair_ok);
    CHECK(a.pass);
    AuditReport b = decay_audit(t, 1e-3, 0.125);
    CHECK(b.violations == 2);
    CHECK_FALSE(b.pass);
}
