#pragma once

#include "chns/fields.hpp"

#include <vector>

namespace chns::detail {

// Exact inverses of the constant-coefficient implicit operators on the uniform
// grid, built on FFTW real-to-real transforms. The discrete stencils (reflection
// ghosts for cell fields, Dirichlet/odd ghosts for velocity components) are
// diagonalized exactly by the matching cosine/sine bases, so one transform pair
// solves (alpha I - beta Lap) x = b to roundoff. Used as CG preconditioners.
//
// Plans are cached per grid; everything here is single-threaded.

// Cell-centered field with reflection (zero-flux) ghosts. alpha = 0 selects the
// singular pure-Neumann case; the mean mode is zeroed (mean-zero solution).
void solve_cell_helmholtz(const GridSpec& g, double alpha, double beta,
                          const std::vector<double>& b, std::vector<double>& x);

// Velocity components on their face grids, no-slip walls. is_x selects the ux
// layout ((nx-1) x ny interior faces) versus uy (nx x (ny-1)).
void solve_face_helmholtz(const GridSpec& g, bool is_x, double alpha, double beta,
                          const std::vector<double>& b, std::vector<double>& x);

} // namespace chns::detail
