#pragma once

#include "chns/fields.hpp"
#include "chns/motility.hpp"

namespace chns {

struct ChemoParams {
    double mu = 0.0;                  // logistic rate
    double positivity_floor = 1e-300; // guards divisions in diagnostics only
    double linear_solve_tol = 1e-10;
    int max_solver_iter = 50000;
};

// One transport step for the cell density:
//   upwind advection by u, upwinded cross-diffusion along phi'(v) grad v,
//   implicit diffusion with face-averaged phi(v), exact per-cell logistic update.
// Conserves integrate(n) for mu = 0 up to the linear-solve tolerance.
ScalarField step_n(const ScalarField& n, const ScalarField& v, const StaggeredVectorField& u,
                   const Motility& motility, const ChemoParams& p, double dt);

// One step for the signal: upwind advection, implicit heat solve, exact consumption
// v <- v * exp(-n dt). Never exceeds max(v_in) and stays positive.
ScalarField step_v(const ScalarField& n, const ScalarField& v, const StaggeredVectorField& u,
                   const ChemoParams& p, double dt);

// Largest stable step: cfl * min over the advective bound for u, the advective bound
// for the cross drift phi'(v) grad v, and h^2/(4 max phi(v)) for the explicit cross
// term. Epsilon-regularized so degenerate states still give a finite value.
double stable_dt(const ScalarField& n, const ScalarField& v, const StaggeredVectorField& u,
                 const Motility& motility, double cfl);

// Face drift a = -phi'(v) grad v; transporting n with it realizes the
// cross-diffusion contribution div(n phi'(v) grad v).
StaggeredVectorField cross_drift(const ScalarField& v, const Motility& motility);

// div(phi_face(v) grad f) with no-flux walls, the stencil behind the implicit
// diffusion solve of step_n.
ScalarField motility_diffusion(const ScalarField& f, const ScalarField& v,
                               const Motility& motility);

} // namespace chns
