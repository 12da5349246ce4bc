#include "chns/oracle.hpp"

#include "chns/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chns {

UniformPoint uniform_state_solution(double n0, double v0, double mu, double t) {
    if (!(n0 > 0.0) || !(v0 > 0.0))
        throw std::domain_error("uniform state needs positive n0 and v0");
    if (mu == 0.0)
        return {n0, v0 * std::exp(-n0 * t)};
    const double decay = std::exp(-mu * t);
    const double denom = n0 + (1.0 - n0) * decay;
    const double n = n0 / denom;
    // integral of n over (0,t) = t + ln(denom)/mu
    const double consumed = t + std::log(denom) / mu;
    return {n, v0 * std::exp(-consumed)};
}

SimState explicit_reference_step(const SimState& s, const Motility& motility,
                                 const ChemoParams& chemo, const FluidParams& fluid, double dt) {
    const GridSpec& g = s.n.grid;
    double phi_max = 0.0;
    for (double x : s.v.data)
        phi_max = std::max(phi_max, motility.phi(x));
    const double h = std::min(g.hx, g.hy);
    const double bound = h * h / (4.0 * std::max(1.0, phi_max));
    if (!(dt > 0.0) || dt > bound)
        throw std::invalid_argument("explicit reference step needs dt <= h^2/(4 max diffusivity)");

    SimState out(g);
    out.t = s.t + dt;
    out.step_count = s.step_count + 1;

    // All right-hand sides evaluated at the time-t state.
    const ScalarField adv_n = advect_conservative(s.n, s.u);
    const ScalarField cross_n = advect_conservative(s.n, cross_drift(s.v, motility));
    const ScalarField diff_n = motility_diffusion(s.n, s.v, motility);
    out.n = s.n;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double ni = s.n(i, j);
            out.n(i, j) += dt * (-adv_n(i, j) - cross_n(i, j) + diff_n(i, j) +
                                 chemo.mu * ni * (1.0 - ni));
        }

    const ScalarField adv_v = advect_conservative(s.v, s.u);
    const ScalarField lap_v = laplacian(s.v, BcKind::NeumannZero);
    out.v = s.v;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.v(i, j) += dt * (-adv_v(i, j) + lap_v(i, j) - s.n(i, j) * s.v(i, j));

    StaggeredVectorField ustar = s.u;
    const StaggeredVectorField lap_u = velocity_laplacian(s.u);
    const StaggeredVectorField force = buoyancy_force(s.n, fluid.phi_potential);
    if (fluid.kappa != 0) {
        const StaggeredVectorField conv = convection(s.u);
        for (std::size_t k = 0; k < ustar.ux_.size(); ++k)
            ustar.ux_[k] += dt * (-conv.ux_[k] + lap_u.ux_[k] + force.ux_[k]);
        for (std::size_t k = 0; k < ustar.uy_.size(); ++k)
            ustar.uy_[k] += dt * (-conv.uy_[k] + lap_u.uy_[k] + force.uy_[k]);
    } else {
        for (std::size_t k = 0; k < ustar.ux_.size(); ++k)
            ustar.ux_[k] += dt * (lap_u.ux_[k] + force.ux_[k]);
        for (std::size_t k = 0; k < ustar.uy_.size(); ++k)
            ustar.uy_[k] += dt * (lap_u.uy_[k] + force.uy_[k]);
    }
    ustar.pin_boundary();
    ProjectedVelocity pv = pressure_project(ustar, dt, fluid, &s.pressure);
    out.u = std::move(pv.u);
    out.pressure = std::move(pv.pressure);
    return out;
}

namespace {

double field_error(const ScalarField& a, const ScalarField& b, ErrorNorm norm) {
    double e = 0.0;
    if (norm == ErrorNorm::LInf) {
        for (std::size_t k = 0; k < a.data.size(); ++k)
            e = std::max(e, std::abs(a.data[k] - b.data[k]));
    } else {
        for (std::size_t k = 0; k < a.data.size(); ++k) {
            const double d = a.data[k] - b.data[k];
            e += d * d;
        }
        e = std::sqrt(e * a.grid.hx * a.grid.hy);
    }
    return e;
}

double uniform_state_error(double dt, ErrorNorm norm) {
    SimConfig cfg;
    cfg.nx = cfg.ny = 4;
    cfg.preset = "uniform";
    cfg.n0 = 2.0;
    cfg.v0 = 1.0;
    cfg.mu = 1.0;
    cfg.t_end = 1.0;
    cfg.cfl = 1.0;
    cfg.dt_fixed = dt;
    cfg.output_every = cfg.t_end;
    cfg.detect_convergence = false;
    const RunSummary sum = run(cfg);
    if (sum.termination == Termination::Error)
        throw SolverError("uniform-state study run failed: " + sum.message, 0.0, 0);
    const UniformPoint ref = uniform_state_solution(cfg.n0, cfg.v0, cfg.mu, cfg.t_end);
    ScalarField n_ref(sum.state.n.grid, ref.n), v_ref(sum.state.n.grid, ref.v);
    return std::max(field_error(sum.state.n, n_ref, norm), field_error(sum.state.v, v_ref, norm));
}

double heat_cosine_error(double h, ErrorNorm norm) {
    const int cells = static_cast<int>(std::lround(1.0 / h));
    const GridSpec grid(cells, cells, 1.0, 1.0);
    const double pi = 3.14159265358979323846;
    const double t_end = 0.05;

    ScalarField v(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            v(i, j) = 1.0 + 0.5 * std::cos(pi * grid.xc(i)) * std::cos(pi * grid.yc(j));
    const ScalarField n(grid, 1e-300); // consumption negligible: pure heat flow
    const StaggeredVectorField u(grid);

    ChemoParams chemo;
    chemo.linear_solve_tol = 1e-12;
    const double dt = 0.25 * h * h;
    double t = 0.0;
    while (t < t_end - 1e-14) {
        const double step = std::min(dt, t_end - t);
        v = step_v(n, v, u, chemo, step);
        t += step;
    }

    ScalarField exact(grid);
    const double amp = 0.5 * std::exp(-2.0 * pi * pi * t_end);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            exact(i, j) = 1.0 + amp * std::cos(pi * grid.xc(i)) * std::cos(pi * grid.yc(j));
    return field_error(v, exact, norm);
}

} // namespace

ConvergenceReport convergence_order(const std::string& problem, const std::vector<double>& levels,
                                    ErrorNorm norm, double target_order) {
    if (levels.size() < 3)
        throw std::invalid_argument("convergence study needs at least 3 levels");
    for (std::size_t k = 1; k < levels.size(); ++k)
        if (!(levels[k] < levels[k - 1]))
            throw std::invalid_argument("levels must be strictly decreasing");

    ConvergenceReport rep;
    rep.levels = levels;
    rep.target = target_order;
    for (double lv : levels) {
        double err;
        if (problem == "uniform_state")
            err = uniform_state_error(lv, norm);
        else if (problem == "heat_cosine")
            err = heat_cosine_error(lv, norm);
        else
            throw std::invalid_argument("unknown convergence problem '" + problem + "'");
        if (!(err > 0.0)) {
            rep.pass = false;
            rep.note = "error vanished; study degenerate";
            return rep;
        }
        rep.errors.push_back(err);
    }

    bool monotone = true;
    for (std::size_t k = 1; k < rep.errors.size(); ++k)
        if (!(rep.errors[k] < rep.errors[k - 1]))
            monotone = false;

    // Least-squares slope in log-log.
    const std::size_t m = levels.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = std::log(levels[k]);
        const double y = std::log(rep.errors[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.pass = monotone && rep.order >= target_order;
    if (!monotone)
        rep.note = "error sequence is not monotonically decreasing";
    return rep;
}

} // namespace chns
