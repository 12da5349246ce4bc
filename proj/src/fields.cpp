#include "chns/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chns {

GridSpec::GridSpec(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_), hx(lx_ / nx_), hy(ly_ / ny_) {
    if (nx < 4 || ny < 4)
        throw std::invalid_argument("grid must have at least 4 cells per direction");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("domain lengths must be positive");
}

void StaggeredVectorField::pin_boundary() {
    for (int j = 0; j < grid.ny; ++j) {
        ux(0, j) = 0.0;
        ux(grid.nx, j) = 0.0;
    }
    for (int i = 0; i < grid.nx; ++i) {
        uy(i, 0) = 0.0;
        uy(i, grid.ny) = 0.0;
    }
}

StaggeredVectorField grad_to_faces(const ScalarField& f, BcKind bc) {
    const GridSpec& g = f.grid;
    StaggeredVectorField grad(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i)
            grad.ux(i, j) = (f(i, j) - f(i - 1, j)) / g.hx;
        if (bc == BcKind::DirichletZero) {
            grad.ux(0, j) = 2.0 * f(0, j) / g.hx;
            grad.ux(g.nx, j) = -2.0 * f(g.nx - 1, j) / g.hx;
        }
    }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            grad.uy(i, j) = (f(i, j) - f(i, j - 1)) / g.hy;
    if (bc == BcKind::DirichletZero) {
        for (int i = 0; i < g.nx; ++i) {
            grad.uy(i, 0) = 2.0 * f(i, 0) / g.hy;
            grad.uy(i, g.ny) = -2.0 * f(i, g.ny - 1) / g.hy;
        }
    }
    return grad;
}

ScalarField divergence(const StaggeredVectorField& F) {
    const GridSpec& g = F.grid;
    ScalarField div(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            div(i, j) = (F.ux(i + 1, j) - F.ux(i, j)) / g.hx + (F.uy(i, j + 1) - F.uy(i, j)) / g.hy;
    return div;
}

ScalarField laplacian(const ScalarField& f, BcKind bc) {
    return divergence(grad_to_faces(f, bc));
}

double integrate(const ScalarField& f) {
    const GridSpec& g = f.grid;
    double sum = 0.0;
    for (double v : f.data)
        sum += v;
    return sum * g.hx * g.hy;
}

ScalarField advect_conservative(const ScalarField& f, const StaggeredVectorField& u) {
    const GridSpec& g = f.grid;
    StaggeredVectorField flux(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double a = u.ux(i, j);
            const double up = (a > 0.0) ? f(std::max(i - 1, 0), j) : f(std::min(i, g.nx - 1), j);
            flux.ux(i, j) = a * up;
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double a = u.uy(i, j);
            const double up = (a > 0.0) ? f(i, std::max(j - 1, 0)) : f(i, std::min(j, g.ny - 1));
            flux.uy(i, j) = a * up;
        }
    return divergence(flux);
}

double min_value(const ScalarField& f) {
    return *std::min_element(f.data.begin(), f.data.end());
}

double max_value(const ScalarField& f) {
    return *std::max_element(f.data.begin(), f.data.end());
}

bool all_finite(const ScalarField& f) {
    for (double v : f.data)
        if (!std::isfinite(v))
            return false;
    return true;
}

bool all_finite(const StaggeredVectorField& u) {
    for (double v : u.ux_)
        if (!std::isfinite(v))
            return false;
    for (double v : u.uy_)
        if (!std::isfinite(v))
            return false;
    return true;
}

} // namespace chns
