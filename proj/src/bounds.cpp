#include "bounds.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace fkr {

CjReport cj_sequence(int d, double t, double U, double beta, double c, int jmax) {
    if (!(c > 0 && c < 1)) throw config_error("c must lie in (0,1)");
    if (!(U > 1)) throw config_error("U must exceed 1");
    if (jmax < 2) throw config_error("jmax must be at least 2");
    CjReport r;
    r.ratio = 2.0 * d * t / (c * U);
    r.C0 = std::exp(-beta * c * U);
    r.C.assign(jmax + 1, 0.0);
    r.C[0] = r.C0;
    for (int j = 2; j <= jmax; ++j) {
        r.C[j] = std::pow(r.ratio, j);
        r.tail_direct += r.C[j];
    }
    r.convergent = r.ratio < 1;
    r.tail_closed = r.convergent ? r.ratio * r.ratio / (1 - r.ratio) : std::numeric_limits<double>::infinity();
    r.sum_below_one = r.tail_closed < 1;
    return r;
}

int k0_min(double C2beta, double x) {
    if (!(x > 0 && x < 1)) throw config_error("k0 needs 0 < x < 1");
    if (!(C2beta > 0)) return 1;
    auto ok = [&](int k) { return std::log(C2beta) + k * std::log(x) <= 0; };
    int k = std::max(1, int(std::ceil(std::log(C2beta) / -std::log(x))));
    while (k > 1 && ok(k - 1)) --k;
    while (!ok(k)) ++k;
    return k;
}

ConvergenceReport polymer_report(const PolymerInputs& in) {
    ConvergenceReport r;
    r.in = in;
    if (!(in.lambda > 0 && in.b > 0 && in.C1 > 0 && in.C2 > 0 && in.c_d > 0))
        throw config_error("polymer inputs must be positive");
    const double lam = in.lambda, cd = in.c_d, a = in.a;
    r.beta = in.b / lam;
    r.z = lam * std::exp(a);
    r.cond1 = cd * lam < 1;
    r.cond2 = cd * r.z < 1;
    r.a_prime = a + std::log(2.0) / 3;
    r.a_double_prime = a + 0.25;
    if (!r.cond1 || !r.cond2) {
        r.note = !r.cond2 ? "c_d * lambda * e^a >= 1: series bounds unavailable" : "c_d * lambda >= 1";
        return r;
    }
    const double x = cd * r.z;
    r.k0 = k0_min(in.C2 * r.beta, x);
    r.alpha = in.C2 * r.beta * std::pow(x, r.k0);
    r.C3 = in.C2 * cd * cd * cd / (1 - cd * lam);
    r.a0 = r.beta * (in.C1 * lam - r.C3 * lam * lam * lam) - a;
    r.C4 = (r.k0 + 1) * std::pow(cd, r.k0 + 1);
    r.a1 = r.k0 * cd * r.z / ((1 - cd * r.z) * (1 - cd * r.z));
    r.q = r.a0 - std::log(cd) - r.a1 - r.a_double_prime * r.C4;
    r.cond4 = r.q > 0 && std::isfinite(r.q);
    if (r.cond4) {
        double e = std::exp(-r.q);
        r.Zpol_bound = 2 * r.C4 * e / ((1 - e) * (1 - e));
        r.Zpol_available = true;
    } else {
        r.note = "q <= 0: polymer bound unavailable";
    }
    return r;
}

double q_of_b(PolymerInputs in, double b) {
    in.b = b;
    return polymer_report(in).q;
}

double bigB(double C1, double C2, double c_d) { return (1 + std::sqrt(1 + 4 * c_d * C2 / C1)) / 2; }

std::pair<double, double> k0_band(double C2, double lambda, int k, double a, double c_d) {
    double x = lambda * c_d * std::exp(a);
    double upper = lambda / (C2 * std::pow(x, k));
    double lower = k == 1 ? 0.0 : lambda / (C2 * std::pow(x, k - 1));
    return {lower, upper};
}

B0Result find_b0(double C1, double C2, double lambda, double a, double c_d) {
    B0Result r;
    r.B = bigB(C1, C2, c_d);
    r.lambda0 = 1 / (r.B * c_d * c_d * std::exp(a));
    r.lambda1 = 1 / (c_d * std::exp(a));
    r.lambda2 = 2 / (c_d * (1 + std::sqrt(1 + 4 * c_d * C2 / C1)));
    r.lambda_ok = lambda < r.lambda0;
    PolymerInputs in{C1, C2, lambda, 1, a, c_d};
    const double x = lambda * c_d * std::exp(a);
    if (!(x < 1)) {
        r.note = "lambda violates c_d * lambda * e^a < 1";
        return r;
    }
    // q is affine and increasing inside each band of constant k0 and drops where k0 steps up.
    // Scan band starts; the last band whose start is not positive holds the final sign change.
    const double X = C1 - C2 * c_d * c_d * c_d * lambda * lambda / (1 - c_d * lambda);
    if (!(X > 0)) {
        r.note = "q does not grow with b at this lambda";
        return r;
    }
    int last_bad = 0;
    for (int k = 1; k < 2000; ++k) {
        auto [lo, hi] = k0_band(C2, lambda, k, a, c_d);
        if (!std::isfinite(hi) || hi > 1e280) break;
        double start = k == 1 ? hi * 1e-12 : lo * (1 + 1e-12);
        if (q_of_b(in, start) <= 0) last_bad = k;
    }
    if (last_bad == 0) {
        r.note = "q positive on every scanned band";
        return r;
    }
    auto [lo, hi] = k0_band(C2, lambda, last_bad, a, c_d);
    double b_lo = last_bad == 1 ? hi * 1e-12 : lo * (1 + 1e-12);
    double b_hi = hi;
    r.band = last_bad;
    if (q_of_b(in, b_hi) <= 0) {
        // No crossing inside the band: the drop into the next band is the boundary.
        auto [lo2, hi2] = k0_band(C2, lambda, last_bad + 1, a, c_d);
        (void)lo2;
        b_lo = b_hi;
        b_hi = b_hi * (1 + 1e-9);
        if (b_hi > hi2 || q_of_b(in, b_hi) <= 0) {
            r.note = "band boundary crossing not resolved";
            return r;
        }
        r.band = last_bad + 1;
    } else {
        while (b_hi - b_lo > 1e-7 * b_hi) {
            double mid = 0.5 * (b_lo + b_hi);
            (q_of_b(in, mid) > 0 ? b_hi : b_lo) = mid;
        }
    }
    r.b_lo = b_lo;
    r.b_hi = b_hi;
    r.b0 = b_hi;
    r.found = true;
    return r;
}

double log_C_prime(double C1, double C2, double b, double a, double c_d) {
    const double B = bigB(C1, C2, c_d);
    const double lam0 = 1 / (B * c_d * c_d * std::exp(a));
    const double L = std::log(B * c_d);
    const double k0 = 1 + std::log(C2 * c_d * std::exp(a) * b) / L;
    const double w = c_d * lam0 * std::exp(a);
    const double A = a + std::log(c_d) + k0 * w / ((1 - w) * (1 - w)) +
                     (a + 0.25) * (k0 + 1) * std::pow(c_d, k0 + 1);
    const double X = C1 - C2 * c_d * c_d * c_d * lam0 * lam0 / (1 - c_d * lam0);
    const double q = b * X - A;
    if (!(q > 0)) return std::numeric_limits<double>::quiet_NaN();
    const double r = std::log(c_d) / L;
    const double bracket = 2 + std::log(C1 * b) / L;
    if (!(bracket > 0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(2 * c_d * c_d) + std::log(bracket) + r * std::log(C1 * b) - q -
           2 * std::log1p(-std::exp(-q));
}

AuditReport decay_audit(const CouplingTable& table, double C1, double c1_over_U) {
    AuditReport r;
    r.C1 = C1;
    r.ratio = c1_over_U;
    r.fit = verify_decay(table, table.U);
    r.vacuous = r.fit.trivial;
    r.pair_bound = C1 * std::pow(c1_over_U, 3);
    for (auto& e : table.entries) {
        if (e.g < 1) continue;
        r.checked++;
        double bound = C1 * std::pow(c1_over_U, e.g);
        if (std::abs(e.value) > bound * (1 + 1e-12)) r.violations++;
        if (e.cluster.size() == 2 && l1(e.cluster[0], e.cluster[1]) == 1) {
            double res = std::abs(e.value - (table.t == 0 ? 0.0 : 1.0 / (4 * table.U)));
            r.pair_residual_max = std::max(r.pair_residual_max, res);
        }
    }
    r.pair_ok = r.vacuous || r.pair_residual_max <= r.pair_bound * (1 + 1e-12);
    r.pass = r.vacuous || (r.violations == 0 && r.pair_ok);
    return r;
}

}  // namespace fkr
