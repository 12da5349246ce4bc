#pragma once

#include "chns/chemo.hpp"
#include "chns/fluid.hpp"
#include "chns/simulation.hpp"

#include <string>
#include <vector>

namespace chns {

// Spatially homogeneous closed form: n solves n' = mu n(1-n), v solves v' = -n v.
struct UniformPoint {
    double n;
    double v;
};
UniformPoint uniform_state_solution(double n0, double v0, double mu, double t);

// Forward Euler on every term of the coupled system with the production spatial
// stencils, then the same pressure projection. Valid only below the explicit
// stability bound dt <= h^2 / (4 max diffusivity).
SimState explicit_reference_step(const SimState& s, const Motility& motility,
                                 const ChemoParams& chemo, const FluidParams& fluid, double dt);

enum class ErrorNorm { LInf, L2 };

struct ConvergenceReport {
    std::vector<double> levels; // dt or h, strictly monotone
    std::vector<double> errors;
    double order = 0.0; // least-squares slope of log error vs log level
    double target = 0.0;
    bool pass = false;
    std::string note;
};

// Named refinement studies against closed-form references:
//   "uniform_state" — production run at fixed dt levels vs the homogeneous solution
//   "heat_cosine"   — pure-diffusion signal step at h levels vs the separable
//                     cosine solution, dt tied to h^2/4
ConvergenceReport convergence_order(const std::string& problem, const std::vector<double>& levels,
                                    ErrorNorm norm, double target_order);

} // namespace chns
