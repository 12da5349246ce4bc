#pragma once

#include <cstddef>
#include <vector>

namespace chns {

// Uniform Cartesian grid over the rectangle [0,lx] x [0,ly].
// Cell centers sit at ((i+1/2)hx, (j+1/2)hy), i = 0..nx-1, j = 0..ny-1.
struct GridSpec {
    GridSpec(int nx_, int ny_, double lx_, double ly_);

    int nx, ny;
    double lx, ly;
    double hx, hy;

    double area() const { return lx * ly; }
    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }

    bool operator==(const GridSpec&) const = default;
};

// Cell-centered scalar field, row-major (j outer, i inner).
struct ScalarField {
    explicit ScalarField(const GridSpec& g, double fill = 0.0)
        : grid(g), data(g.cells(), fill) {}

    GridSpec grid;
    std::vector<double> data;

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(j) * grid.nx + i]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(j) * grid.nx + i]; }
};

// MAC-staggered velocity: ux on vertical faces ((nx+1) x ny, at (i*hx, (j+1/2)hy)),
// uy on horizontal faces (nx x (ny+1), at ((i+1/2)hx, j*hy)).
// Boundary faces carry the no-slip value 0 for velocities.
struct StaggeredVectorField {
    explicit StaggeredVectorField(const GridSpec& g)
        : grid(g),
          ux_(static_cast<std::size_t>(g.nx + 1) * g.ny, 0.0),
          uy_(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0) {}

    GridSpec grid;
    std::vector<double> ux_, uy_;

    double& ux(int i, int j) { return ux_[static_cast<std::size_t>(j) * (grid.nx + 1) + i]; }
    double ux(int i, int j) const { return ux_[static_cast<std::size_t>(j) * (grid.nx + 1) + i]; }
    double& uy(int i, int j) { return uy_[static_cast<std::size_t>(j) * grid.nx + i]; }
    double uy(int i, int j) const { return uy_[static_cast<std::size_t>(j) * grid.nx + i]; }

    // Zero all domain-boundary faces (no-slip normal components).
    void pin_boundary();
};

// Ghost-cell convention for cell-centered fields: reflection (zero normal
// derivative) or odd extension (zero boundary value).
enum class BcKind { NeumannZero, DirichletZero };

// 5-point Laplacian with ghost cells per `bc`. Equals divergence(grad_to_faces(f, bc))
// term for term.
ScalarField laplacian(const ScalarField& f, BcKind bc);

// Centered differences onto faces. NeumannZero zeroes the boundary-face components;
// DirichletZero uses odd-extension ghosts.
StaggeredVectorField grad_to_faces(const ScalarField& f, BcKind bc);

// Per-cell flux balance (Fx(i+1,j)-Fx(i,j))/hx + (Fy(i,j+1)-Fy(i,j))/hy.
ScalarField divergence(const StaggeredVectorField& F);

// Midpoint quadrature, fixed row-major accumulation order.
double integrate(const ScalarField& f);

// First-order upwind flux divergence of u*f. Returns div(u f); a transport step is
// f - dt * advect_conservative(f, u). Boundary faces contribute a*f(adjacent cell),
// which vanishes for no-slip u. Sums to zero over the domain for any face field
// whose boundary faces are zero.
ScalarField advect_conservative(const ScalarField& f, const StaggeredVectorField& u);

double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const StaggeredVectorField& u);

} // namespace chns
