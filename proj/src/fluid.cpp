#include "chns/fluid.hpp"

#include "chns/errors.hpp"
#include "cg.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>

namespace chns {

namespace {

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

// out = -laplacian(in, NeumannZero), flux expressions identical to
// divergence(grad_to_faces(.)) so the projection residual matches the public
// operators bit for bit.
void neg_neumann_laplacian(const GridSpec& g, const std::vector<double>& in,
                           std::vector<double>& out) {
    const int nx = g.nx, ny = g.ny;
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = row + i;
            const double c = in[k];
            const double ge = (i + 1 < nx) ? (in[k + 1] - c) / g.hx : 0.0;
            const double gw = (i > 0) ? (c - in[k - 1]) / g.hx : 0.0;
            const double gn = (j + 1 < ny) ? (in[k + nx] - c) / g.hy : 0.0;
            const double gs = (j > 0) ? (c - in[k - nx]) / g.hy : 0.0;
            out[k] = -((ge - gw) / g.hx + (gn - gs) / g.hy);
        }
    }
}

// Implicit viscous solve for one velocity component on its own face grid.
// Unknowns exclude the fixed (zero) normal-boundary faces; tangential walls enter
// through odd-extension ghosts.
class ComponentSolver {
public:
    // is_x: solving for ux (unknowns i=1..nx-1, j=0..ny-1); otherwise uy.
    ComponentSolver(const GridSpec& g, bool is_x) : g_(g), is_x_(is_x) {
        mx_ = is_x ? g.nx - 1 : g.nx;
        my_ = is_x ? g.ny : g.ny - 1;
    }

    std::size_t size() const { return static_cast<std::size_t>(mx_) * my_; }

    void apply(double dt, const std::vector<double>& x, std::vector<double>& out) const {
        const double ax = dt / (g_.hx * g_.hx);
        const double ay = dt / (g_.hy * g_.hy);
        for (int j = 0; j < my_; ++j)
            for (int i = 0; i < mx_; ++i) {
                const std::size_t k = idx(i, j);
                const double c = x[k];
                double lap = 0.0;
                // Across-direction: Dirichlet 0 at the normal walls for the solved
                // component, odd ghosts at the tangential walls.
                if (is_x_) {
                    lap += ax * ((i + 1 < mx_ ? x[k + 1] : 0.0) - 2.0 * c + (i > 0 ? x[k - 1] : 0.0));
                    lap += ay * ((j + 1 < my_ ? x[k + mx_] : -c) - 2.0 * c + (j > 0 ? x[k - mx_] : -c));
                } else {
                    lap += ax * ((i + 1 < mx_ ? x[k + 1] : -c) - 2.0 * c + (i > 0 ? x[k - 1] : -c));
                    lap += ay * ((j + 1 < my_ ? x[k + mx_] : 0.0) - 2.0 * c + (j > 0 ? x[k - mx_] : 0.0));
                }
                out[k] = c - lap;
            }
    }

    std::vector<double> gather(const StaggeredVectorField& u) const {
        std::vector<double> x(size());
        for (int j = 0; j < my_; ++j)
            for (int i = 0; i < mx_; ++i)
                x[idx(i, j)] = is_x_ ? u.ux(i + 1, j) : u.uy(i, j + 1);
        return x;
    }

    void scatter(const std::vector<double>& x, StaggeredVectorField& u) const {
        for (int j = 0; j < my_; ++j)
            for (int i = 0; i < mx_; ++i) {
                if (is_x_)
                    u.ux(i + 1, j) = x[idx(i, j)];
                else
                    u.uy(i, j + 1) = x[idx(i, j)];
            }
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * mx_ + i; }

    GridSpec g_;
    bool is_x_;
    int mx_, my_;
};

void viscous_solve(StaggeredVectorField& u, double dt, double tol, int max_iter) {
    for (bool is_x : {true, false}) {
        const ComponentSolver comp(u.grid, is_x);
        std::vector<double> b = comp.gather(u);
        std::vector<double> x = b;
        detail::CgOptions opt;
        opt.rel_tol = tol;
        opt.max_iter = max_iter;
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
            comp.apply(dt, in, out);
        };
        auto precond = [&](const std::vector<double>& r, std::vector<double>& z) {
            detail::solve_face_helmholtz(u.grid, is_x, 1.0, dt, r, z);
        };
        const detail::CgResult res = detail::cg_solve(apply, precond, b, x, opt);
        if (!res.converged)
            throw SolverError("viscous solve did not converge", res.rel_residual, res.iterations);
        comp.scatter(x, u);
    }
}

} // namespace

// Advective-form upwind convection (u . grad) applied to each component.
StaggeredVectorField convection(const StaggeredVectorField& u) {
    const GridSpec& g = u.grid;
    StaggeredVectorField conv(g);
    const int nx = g.nx, ny = g.ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double ax = u.ux(i, j);
            const double ay = 0.25 * (u.uy(i - 1, j) + u.uy(i, j) + u.uy(i - 1, j + 1) + u.uy(i, j + 1));
            const double c = u.ux(i, j);
            const double ddx = (ax >= 0.0) ? (c - u.ux(i - 1, j)) / g.hx : (u.ux(i + 1, j) - c) / g.hx;
            double ddy;
            if (ay >= 0.0)
                ddy = (j > 0) ? (c - u.ux(i, j - 1)) / g.hy : 2.0 * c / g.hy;
            else
                ddy = (j + 1 < ny) ? (u.ux(i, j + 1) - c) / g.hy : -2.0 * c / g.hy;
            conv.ux(i, j) = ax * ddx + ay * ddy;
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double ay = u.uy(i, j);
            const double ax = 0.25 * (u.ux(i, j - 1) + u.ux(i + 1, j - 1) + u.ux(i, j) + u.ux(i + 1, j));
            const double c = u.uy(i, j);
            const double ddy = (ay >= 0.0) ? (c - u.uy(i, j - 1)) / g.hy : (u.uy(i, j + 1) - c) / g.hy;
            double ddx;
            if (ax >= 0.0)
                ddx = (i > 0) ? (c - u.uy(i - 1, j)) / g.hx : 2.0 * c / g.hx;
            else
                ddx = (i + 1 < nx) ? (u.uy(i + 1, j) - c) / g.hx : -2.0 * c / g.hx;
            conv.uy(i, j) = ax * ddx + ay * ddy;
        }
    return conv;
}

StaggeredVectorField velocity_laplacian(const StaggeredVectorField& u) {
    StaggeredVectorField lap(u.grid);
    for (bool is_x : {true, false}) {
        const ComponentSolver comp(u.grid, is_x);
        const std::vector<double> x = comp.gather(u);
        std::vector<double> out(x.size());
        comp.apply(1.0, x, out); // out = x - lap(x)
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = x[k] - out[k];
        comp.scatter(out, lap);
    }
    return lap;
}

StaggeredVectorField buoyancy_force(const ScalarField& n, const ScalarField& phi) {
    const GridSpec& g = n.grid;
    StaggeredVectorField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            f.ux(i, j) = 0.5 * (n(i - 1, j) + n(i, j)) * (phi(i, j) - phi(i - 1, j)) / g.hx;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.uy(i, j) = 0.5 * (n(i, j - 1) + n(i, j)) * (phi(i, j) - phi(i, j - 1)) / g.hy;
    return f;
}

ScalarField gravity_potential(const GridSpec& grid, double g) {
    ScalarField phi(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            phi(i, j) = -g * grid.yc(j);
    return phi;
}

namespace {

ScalarField poisson_core(const ScalarField& rhs, double tol, int max_iter,
                         const ScalarField* initial) {
    const GridSpec& g = rhs.grid;
    // Solve (-lap) q = -(rhs - mean) on the mean-zero subspace; CG is definite there.
    ScalarField b(g);
    const double m = mean(rhs.data);
    for (std::size_t k = 0; k < b.data.size(); ++k)
        b.data[k] = -(rhs.data[k] - m);

    ScalarField q = initial && initial->grid == g ? *initial : ScalarField(g);
    {
        const double qm = mean(q.data);
        for (double& x : q.data)
            x -= qm;
    }

    detail::CgOptions opt;
    opt.abs_inf_tol = tol;
    opt.max_iter = max_iter;
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        neg_neumann_laplacian(g, in, out);
    };
    auto precond = [&](const std::vector<double>& r, std::vector<double>& z) {
        detail::solve_cell_helmholtz(g, 0.0, 1.0, r, z); // mean-zero spectral inverse
    };
    const detail::CgResult res = detail::cg_solve(apply, precond, b.data, q.data, opt);
    if (!res.converged)
        throw SolverError("pressure poisson solve did not converge", res.inf_residual,
                          res.iterations);
    const double qm = mean(q.data);
    for (double& x : q.data)
        x -= qm;
    return q;
}

} // namespace

ScalarField poisson_solve(const ScalarField& rhs, double tol, int max_iter,
                          const ScalarField* initial) {
    if (!all_finite(rhs))
        throw std::invalid_argument("poisson rhs contains non-finite values");
    double rinf = 0.0;
    for (double x : rhs.data)
        rinf = std::max(rinf, std::abs(x));
    if (std::abs(integrate(rhs)) > 1e-8 * rinf * rhs.grid.area() && rinf > 0.0)
        throw std::invalid_argument("poisson rhs violates the Neumann compatibility condition");
    return poisson_core(rhs, tol, max_iter, initial);
}

ProjectedVelocity pressure_project(const StaggeredVectorField& u_star, double dt,
                                   const FluidParams& params, const ScalarField* q_init) {
    ScalarField rhs = divergence(u_star);
    for (double& x : rhs.data)
        x /= dt;
    // No compatibility check here: div(u_star) sums to zero by construction for
    // no-slip fields, up to roundoff that a relative check would misjudge.
    ScalarField q = poisson_core(rhs, params.poisson_tol, params.poisson_max_iter, q_init);
    const StaggeredVectorField gq = grad_to_faces(q, BcKind::NeumannZero);
    ProjectedVelocity out{u_star, std::move(q)};
    for (std::size_t k = 0; k < out.u.ux_.size(); ++k)
        out.u.ux_[k] -= dt * gq.ux_[k];
    for (std::size_t k = 0; k < out.u.uy_.size(); ++k)
        out.u.uy_[k] -= dt * gq.uy_[k];
    out.u.pin_boundary();
    return out;
}

ProjectedVelocity step_u(const StaggeredVectorField& u, const ScalarField& n,
                         const FluidParams& params, double dt, const ScalarField* q_init) {
    if (!all_finite(u))
        throw StateError("velocity field contains non-finite values");
    StaggeredVectorField ustar = u;

    if (params.kappa != 0) {
        const StaggeredVectorField conv = convection(u);
        for (std::size_t k = 0; k < ustar.ux_.size(); ++k)
            ustar.ux_[k] -= dt * conv.ux_[k];
        for (std::size_t k = 0; k < ustar.uy_.size(); ++k)
            ustar.uy_[k] -= dt * conv.uy_[k];
        ustar.pin_boundary();
    }

    viscous_solve(ustar, dt, params.poisson_tol, params.poisson_max_iter);

    // Buoyancy after the viscous solve, so a gradient force reaches the projection
    // unfiltered and is absorbed into the pressure exactly.
    const StaggeredVectorField force = buoyancy_force(n, params.phi_potential);
    for (std::size_t k = 0; k < ustar.ux_.size(); ++k)
        ustar.ux_[k] += dt * force.ux_[k];
    for (std::size_t k = 0; k < ustar.uy_.size(); ++k)
        ustar.uy_[k] += dt * force.uy_[k];

    return pressure_project(ustar, dt, params, q_init);
}

} // namespace chns
