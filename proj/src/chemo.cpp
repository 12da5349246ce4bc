#include "chns/chemo.hpp"

#include "chns/errors.hpp"
#include "cg.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>

namespace chns {

namespace {

void check_state(const ScalarField& f, const char* name) {
    if (!all_finite(f))
        throw StateError(std::string(name) + " field contains non-finite values");
    if (min_value(f) < 0.0)
        throw StateError(std::string(name) + " field has negative values");
}

// out = x - dt * div(coef_face * grad x), homogeneous Neumann (no boundary flux).
void apply_helmholtz(const GridSpec& g, const StaggeredVectorField& coef, double dt,
                     const std::vector<double>& x, std::vector<double>& out) {
    const int nx = g.nx, ny = g.ny;
    const double ax = dt / (g.hx * g.hx);
    const double ay = dt / (g.hy * g.hy);
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = row + i;
            double flux = 0.0;
            if (i + 1 < nx)
                flux += ax * coef.ux(i + 1, j) * (x[k + 1] - x[k]);
            if (i > 0)
                flux -= ax * coef.ux(i, j) * (x[k] - x[k - 1]);
            if (j + 1 < ny)
                flux += ay * coef.uy(i, j + 1) * (x[k + nx] - x[k]);
            if (j > 0)
                flux -= ay * coef.uy(i, j) * (x[k] - x[k - nx]);
            out[k] = x[k] - flux;
        }
    }
}

// Stopping targets for the implicit solves. ||r||_inf <= tol ||b||_inf bounds the
// solution error in the max norm as well (the row sums of the inverse operator are
// exactly 1), which is what keeps the discrete maximum principle and positivity
// intact through inexact solves; |sum r| <= tol |sum b| caps the per-step mass
// defect. Both targets are floored at the roundoff level attainable for the
// operator's infinity norm, so large-dt solves terminate.
detail::CgOptions diffusion_stop(const GridSpec& g, const StaggeredVectorField& coef, double dt,
                                 double tol, int max_iter, const std::vector<double>& b) {
    double binf = 0.0, bsum = 0.0;
    for (double x : b) {
        binf = std::max(binf, std::abs(x));
        bsum += x;
    }
    double cx = 0.0, cy = 0.0;
    for (double c : coef.ux_)
        cx = std::max(cx, c);
    for (double c : coef.uy_)
        cy = std::max(cy, c);
    const double op_norm = 1.0 + 4.0 * dt * (cx / (g.hx * g.hx) + cy / (g.hy * g.hy));
    const double eps_floor = 16.0 * 2.22e-16 * op_norm;

    detail::CgOptions opt;
    opt.rel_tol = tol;
    opt.abs_inf_tol = std::max(tol, eps_floor) * binf;
    opt.mass_stop = true;
    opt.mass_abs_tol = std::max(tol * std::abs(bsum),
                                eps_floor * binf * std::sqrt(static_cast<double>(b.size())));
    opt.max_iter = max_iter;
    return opt;
}

ScalarField implicit_diffusion(const ScalarField& rhs, const StaggeredVectorField& coef,
                               double dt, double tol, int max_iter, const char* what) {
    ScalarField x = rhs; // warm start
    const GridSpec& g = rhs.grid;
    const detail::CgOptions opt = diffusion_stop(g, coef, dt, tol, max_iter, rhs.data);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        apply_helmholtz(g, coef, dt, in, out);
    };
    const detail::CgResult res = detail::cg_solve(apply, rhs.data, x.data, opt);
    if (!res.converged)
        throw SolverError(std::string(what) + " diffusion solve did not converge",
                          res.rel_residual, res.iterations);
    return x;
}

// (I - dt Lap) x = rhs with unit diffusivity: CG preconditioned by the exact
// spectral inverse, so it converges in a step or two at any dt.
ScalarField implicit_heat(const ScalarField& rhs, double dt, double tol, int max_iter) {
    const GridSpec& g = rhs.grid;
    ScalarField x = rhs;
    StaggeredVectorField unit(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            unit.ux(i, j) = 1.0;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            unit.uy(i, j) = 1.0;
    const detail::CgOptions opt = diffusion_stop(g, unit, dt, tol, max_iter, rhs.data);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        apply_helmholtz(g, unit, dt, in, out);
    };
    auto precond = [&](const std::vector<double>& r, std::vector<double>& z) {
        detail::solve_cell_helmholtz(g, 1.0, dt, r, z);
    };
    const detail::CgResult res = detail::cg_solve(apply, precond, rhs.data, x.data, opt);
    if (!res.converged)
        throw SolverError("signal diffusion solve did not converge", res.rel_residual,
                          res.iterations);
    return x;
}

// Largest per-cell outflow rate of an upwind transport step with face speeds a;
// dt * rate <= 1 keeps the update a convex combination.
double max_outflow_rate(const StaggeredVectorField& a) {
    const GridSpec& g = a.grid;
    double rate = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double r = (std::max(a.ux(i + 1, j), 0.0) + std::max(-a.ux(i, j), 0.0)) / g.hx +
                             (std::max(a.uy(i, j + 1), 0.0) + std::max(-a.uy(i, j), 0.0)) / g.hy;
            rate = std::max(rate, r);
        }
    return rate;
}

} // namespace

StaggeredVectorField cross_drift(const ScalarField& v, const Motility& motility) {
    const GridSpec& g = v.grid;
    StaggeredVectorField a(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double dp = 0.5 * (motility.phi_prime(v(i - 1, j)) + motility.phi_prime(v(i, j)));
            a.ux(i, j) = -dp * (v(i, j) - v(i - 1, j)) / g.hx;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dp = 0.5 * (motility.phi_prime(v(i, j - 1)) + motility.phi_prime(v(i, j)));
            a.uy(i, j) = -dp * (v(i, j) - v(i, j - 1)) / g.hy;
        }
    return a;
}

// phi(v) on faces by arithmetic mean of phi at adjacent centers; this keeps the
// diffusion operator symmetric for the CG solve.
static StaggeredVectorField phi_faces(const ScalarField& v, const Motility& motility) {
    const GridSpec& g = v.grid;
    StaggeredVectorField coef(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            coef.ux(i, j) = 0.5 * (motility.phi(v(i - 1, j)) + motility.phi(v(i, j)));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            coef.uy(i, j) = 0.5 * (motility.phi(v(i, j - 1)) + motility.phi(v(i, j)));
    return coef;
}

ScalarField motility_diffusion(const ScalarField& f, const ScalarField& v,
                               const Motility& motility) {
    const StaggeredVectorField coef = phi_faces(v, motility);
    ScalarField out(f.grid);
    // out = f - (f - 1*div(coef grad f))
    apply_helmholtz(f.grid, coef, 1.0, f.data, out.data);
    for (std::size_t k = 0; k < out.data.size(); ++k)
        out.data[k] = f.data[k] - out.data[k];
    return out;
}

ScalarField step_n(const ScalarField& n, const ScalarField& v, const StaggeredVectorField& u,
                   const Motility& motility, const ChemoParams& p, double dt) {
    check_state(n, "n");
    check_state(v, "v");

    ScalarField work = advect_conservative(n, u);
    ScalarField nb = n;
    for (std::size_t k = 0; k < nb.data.size(); ++k)
        nb.data[k] -= dt * work.data[k];

    const StaggeredVectorField drift = cross_drift(v, motility);
    work = advect_conservative(nb, drift);
    for (std::size_t k = 0; k < nb.data.size(); ++k)
        nb.data[k] -= dt * work.data[k];

    const StaggeredVectorField coef = phi_faces(v, motility);
    ScalarField out = implicit_diffusion(nb, coef, dt, p.linear_solve_tol, p.max_solver_iter, "density");

    if (p.mu > 0.0) {
        const double growth = std::exp(p.mu * dt);
        const double gm1 = std::expm1(p.mu * dt);
        for (double& x : out.data)
            x = x * growth / (1.0 + x * gm1);
    }
    return out;
}

ScalarField step_v(const ScalarField& n, const ScalarField& v, const StaggeredVectorField& u,
                   const ChemoParams& p, double dt) {
    check_state(n, "n");
    check_state(v, "v");

    ScalarField work = advect_conservative(v, u);
    ScalarField vb = v;
    for (std::size_t k = 0; k < vb.data.size(); ++k)
        vb.data[k] -= dt * work.data[k];

    ScalarField out = implicit_heat(vb, dt, p.linear_solve_tol, p.max_solver_iter);

    // Consumption last, integrated exactly per cell: unconditionally positive and
    // bounded by the pre-step maximum.
    for (std::size_t k = 0; k < out.data.size(); ++k)
        out.data[k] *= std::exp(-n.data[k] * dt);
    return out;
}

double stable_dt(const ScalarField& n, const ScalarField& v, const StaggeredVectorField& u,
                 const Motility& motility, double cfl) {
    if (!(cfl > 0.0) || cfl > 1.0)
        throw std::domain_error("cfl must lie in (0, 1]");
    check_state(n, "n");
    check_state(v, "v");
    const GridSpec& g = v.grid;
    const double eps = 1e-12;

    const double adv_rate = max_outflow_rate(u);
    const double cross_rate = max_outflow_rate(cross_drift(v, motility));

    double phi_max = 0.0;
    for (double x : v.data)
        phi_max = std::max(phi_max, motility.phi(x));
    const double h = std::min(g.hx, g.hy);
    const double diff_rate = 4.0 * phi_max / (h * h);

    const double rate = std::max({adv_rate, cross_rate, diff_rate, eps});
    return cfl / rate;
}

} // namespace chns
