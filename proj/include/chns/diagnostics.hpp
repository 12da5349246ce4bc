#pragma once

#include "chns/fields.hpp"
#include "chns/motility.hpp"

#include <optional>

namespace chns {

// Weights of the composite energy functionals:
//   F1 = entropy + fisher_v + c_f1 * kinetic
//   F2 = entropy + c_f2_grad * fisher_v + c_f2_u * kinetic
struct EnergyWeights {
    double c_f1 = 1.0;
    double c_f2_grad = 1.0;
    double c_f2_u = 1.0;
};

// One time sample of every tracked functional.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass_n = 0.0;          // integral of n
    double mass_v = 0.0;          // integral of v
    double entropy = 0.0;         // integral of n ln n
    double fisher_v = 0.0;        // integral of |grad v|^2 / v
    double quartic_v = 0.0;       // integral of |grad v|^4 / v^3
    double kinetic = 0.0;         // integral of |u|^2
    double enstrophy = 0.0;       // integral of |grad u|^2
    double grad_n_weighted = 0.0; // integral of (v/n) |grad n|^2
    double f1 = 0.0;
    double f2 = 0.0;
    double l2_dist_n = 0.0;       // ||n - 1||_L2
    double w1inf_v = 0.0;         // max(||v||_inf, ||grad v||_inf)
    double w12_u = 0.0;           // (kinetic + enstrophy)^(1/2)
    double min_n = 0.0, max_n = 0.0;
    double min_v = 0.0, max_v = 0.0;
    double div_u_inf = 0.0;
    double cum_quartic_v = 0.0;   // running time integrals
    double cum_enstrophy = 0.0;
    double cum_grad_n = 0.0;
};

// Compute every functional by midpoint quadrature. Squared gradient magnitudes come
// from grad_to_faces averaged back to centers. With `prev` present the cum_* fields
// advance by dt * (current integrand); otherwise they start at 0. Pure function.
DiagnosticsRecord record(const ScalarField& n, const ScalarField& v,
                         const StaggeredVectorField& u, double t, const EnergyWeights& w,
                         const std::optional<DiagnosticsRecord>& prev, double dt,
                         double floor = 1e-300);

// c_f2_grad = upper^2/(2 lower), c_f2_u = c2_multiplier * upper^2/lower from the
// motility bounds on [0, K]; c_f1 passes through.
EnergyWeights weights_from_bounds(const Motility& motility, double K, double c_f1 = 1.0,
                                  double c2_multiplier = 1.0);

} // namespace chns
