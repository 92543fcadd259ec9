#pragma once

#include <vector>

#include "lattice.hpp"

namespace fkr {

// Truncated strong-coupling coefficients of the classical spin model.
struct Coeffs {
    double U = 0;
    double J = 0;      // nearest-neighbour coupling of the leading part
    double c_nn = 0;   // fourth-order nearest-neighbour coefficient
    double c_nnn = 0;  // diagonal (distance sqrt 2) pairs
    double c_2 = 0;    // collinear pairs at distance 2
    double c_plq = 0;  // unit plaquettes
    double J1 = 0;     // contour energy per face at second order
    double J2 = 0;     // per extra face at fourth order
    double K2 = 0;     // per delta line at fourth order

    static Coeffs from_U(double U);
};

int plaquette_potential(int sx, int sy, int sz, int st);
int nnn_potential(int sx, int sz);
int bosonic_plaquette_potential(int sx, int sy, int sz, int st);

double h2_relative_energy(const SpinConfig& c, const Coeffs& k);
double h4_relative_energy(const SpinConfig& c, const Coeffs& k);
// Energy change when the spin at s (inside the volume) is flipped.
double h2_flip_delta(const SpinConfig& c, Site s, const Coeffs& k);
double h4_flip_delta(const SpinConfig& c, Site s, const Coeffs& k);

struct IsingContour {
    std::vector<Face> faces;  // faces with at least one end in the volume
    int area = 0;
    bool pinned = false;
};

// Broken-bond faces split into maximal components. Faces are joined through shared edges,
// or through shared corners when corner_connectivity is set.
std::vector<IsingContour> extract_contours(const SpinConfig& c, bool corner_connectivity = false);

struct PeierlsReport {
    bool pass = true;
    double max_c0 = 0;       // U * J1
    int contours_checked = 0;
    int violations = 0;
};

PeierlsReport peierls_check(const std::vector<IsingContour>& contours, const Coeffs& k, double c0);

}  // namespace fkr
