#pragma once

#include <string>
#include <vector>

#include "quantum.hpp"

namespace fkr {

struct CjReport {
    double ratio = 0;            // 2dt/(cU)
    std::vector<double> C;       // C[j] for j = 0..jmax; C[1] unused (0)
    double C0 = 0;
    double tail_closed = 0;      // sum_{j>=2} ratio^j, infinite when divergent
    double tail_direct = 0;      // partial sum up to jmax
    bool convergent = false;     // ratio < 1
    bool sum_below_one = false;  // tail_closed < 1
};

CjReport cj_sequence(int d, double t, double U, double beta, double c, int jmax = 60);

struct PolymerInputs {
    double C1 = 1, C2 = 1;
    double lambda = 1e-4;
    double b = 1;
    double a = 2;
    double c_d = 36;
};

struct ConvergenceReport {
    PolymerInputs in;
    double beta = 0;
    int k0 = 0;
    double alpha = 0, a0 = 0, C3 = 0, C4 = 0, a_prime = 0, a_double_prime = 0, z = 0, a1 = 0, q = 0;
    double Zpol_bound = 0;
    bool Zpol_available = false;
    bool cond1 = false, cond2 = false, cond4 = false;
    std::string note;
};

// Smallest k >= 1 with C2 * beta * x^k <= 1, for 0 < x < 1.
int k0_min(double C2beta, double x);
ConvergenceReport polymer_report(const PolymerInputs& in);
double q_of_b(PolymerInputs in, double b);

struct B0Result {
    double B = 0, lambda0 = 0, lambda1 = 0, lambda2 = 0;
    bool lambda_ok = false;  // lambda < lambda0
    bool found = false;
    double b0 = 0;           // q > 0 for every b above b0
    double b_lo = 0, b_hi = 0;  // q(b_lo) <= 0 < q(b_hi), b_hi - b_lo <= 1e-6 b_hi
    int band = 0;            // k0 on the bracket
    std::string note;
};

double bigB(double C1, double C2, double c_d = 36);
B0Result find_b0(double C1, double C2, double lambda, double a = 2, double c_d = 36);

// Interval of b where k0 is constant: (lower, upper].
std::pair<double, double> k0_band(double C2, double lambda, int k, double a = 2, double c_d = 36);

// Closing constant of the polymer estimate at lambda0, in log form; nan when q <= 0.
double log_C_prime(double C1, double C2, double b, double a = 2, double c_d = 36);

struct AuditReport {
    double C1 = 0, ratio = 0;       // bound C1 * ratio^g
    int checked = 0, violations = 0;
    bool vacuous = false;
    DecayReport fit;
    double pair_residual_max = 0;   // max |phi_pair - 1/4U| over nearest-neighbour pairs
    double pair_bound = 0;          // C1 * ratio^3
    bool pair_ok = true;
    bool pass = true;
};

AuditReport decay_audit(const CouplingTable& table, double C1, double c1_over_U);

}  // namespace fkr
