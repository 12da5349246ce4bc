#pragma once

#include "chns/fields.hpp"

namespace chns {

struct FluidParams {
    FluidParams(int kappa_, ScalarField phi) : kappa(kappa_), phi_potential(std::move(phi)) {}

    int kappa;                 // 0 drops the convective term (Stokes), 1 keeps it
    ScalarField phi_potential; // gravitational potential sampled at cell centers
    double poisson_tol = 1e-10;
    int poisson_max_iter = 50000;
};

// Gravitational potential -g*y at cell centers.
ScalarField gravity_potential(const GridSpec& grid, double g);

// Solve laplacian(q, NeumannZero) = rhs for the mean-zero q, by conjugate gradient on
// the singular Neumann system (mean projection). Residual measured in the max norm.
// `initial` warm-starts the iteration. Requires |integrate(rhs)| <= 1e-8*||rhs||_inf*area.
ScalarField poisson_solve(const ScalarField& rhs, double tol, int max_iter = 50000,
                          const ScalarField* initial = nullptr);

struct ProjectedVelocity {
    StaggeredVectorField u;
    ScalarField pressure;
};

// Remove the gradient part of u_star: solve laplacian(q) = div(u_star)/dt, subtract
// dt*grad q, re-pin boundary faces. Returns the projected field and q (mean-zero).
ProjectedVelocity pressure_project(const StaggeredVectorField& u_star, double dt,
                                   const FluidParams& params, const ScalarField* q_init = nullptr);

// One momentum step: upwind convection (kappa=1 only), implicit viscous solve per
// component with no-slip walls, buoyancy n*grad(Phi) on faces, then projection.
ProjectedVelocity step_u(const StaggeredVectorField& u, const ScalarField& n,
                         const FluidParams& params, double dt, const ScalarField* q_init = nullptr);

// Spatial operators shared with the explicit reference stepper.
StaggeredVectorField convection(const StaggeredVectorField& u);          // upwind (u.grad)u
StaggeredVectorField velocity_laplacian(const StaggeredVectorField& u);  // no-slip walls
StaggeredVectorField buoyancy_force(const ScalarField& n, const ScalarField& phi_potential);

} // namespace chns
