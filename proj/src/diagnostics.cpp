#include "chns/diagnostics.hpp"

#include "chns/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chns {

namespace {

// |grad f|^2 at the cell center: face-gradient squares averaged per direction.
ScalarField grad_sq_centers(const ScalarField& f) {
    const StaggeredVectorField grad = grad_to_faces(f, BcKind::NeumannZero);
    const GridSpec& g = f.grid;
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double gw = grad.ux(i, j), ge = grad.ux(i + 1, j);
            const double gs = grad.uy(i, j), gn = grad.uy(i, j + 1);
            out(i, j) = 0.5 * (gw * gw + ge * ge) + 0.5 * (gs * gs + gn * gn);
        }
    return out;
}

} // namespace

DiagnosticsRecord record(const ScalarField& n, const ScalarField& v,
                         const StaggeredVectorField& u, double t, const EnergyWeights& w,
                         const std::optional<DiagnosticsRecord>& prev, double dt,
                         double floor) {
    const GridSpec& g = n.grid;
    const double cell = g.hx * g.hy;
    DiagnosticsRecord r;
    r.t = t;

    const ScalarField gn2 = grad_sq_centers(n);
    const ScalarField gv2 = grad_sq_centers(v);

    double mass_n = 0, mass_v = 0, entropy = 0, fisher = 0, quartic = 0, gradn = 0, l2n = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double ni = n(i, j);
            const double vi = v(i, j);
            const double vg = std::max(vi, 1e-14);
            mass_n += ni;
            mass_v += vi;
            if (ni > floor)
                entropy += ni * std::log(ni);
            fisher += gv2(i, j) / vg;
            quartic += gv2(i, j) * gv2(i, j) / (vg * vg * vg);
            gradn += (ni > floor ? vi / ni : 0.0) * gn2(i, j);
            l2n += (ni - 1.0) * (ni - 1.0);
        }
    r.mass_n = mass_n * cell;
    r.mass_v = mass_v * cell;
    r.entropy = entropy * cell;
    r.fisher_v = fisher * cell;
    r.quartic_v = quartic * cell;
    r.grad_n_weighted = gradn * cell;
    r.l2_dist_n = std::sqrt(l2n * cell);

    double kinetic = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double uw = u.ux(i, j), ue = u.ux(i + 1, j);
            const double us = u.uy(i, j), un = u.uy(i, j + 1);
            kinetic += 0.5 * (uw * uw + ue * ue) + 0.5 * (us * us + un * un);
        }
    r.kinetic = kinetic * cell;

    // H1 seminorm of u on the component grids; tangential walls contribute through
    // odd ghosts with half-cell weight.
    double ens = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (u.ux(i + 1, j) - u.ux(i, j)) / g.hx;
            ens += d * d;
        }
    for (int i = 1; i < g.nx; ++i) {
        for (int j = 1; j < g.ny; ++j) {
            const double d = (u.ux(i, j) - u.ux(i, j - 1)) / g.hy;
            ens += d * d;
        }
        const double db = 2.0 * u.ux(i, 0) / g.hy;
        const double dtp = 2.0 * u.ux(i, g.ny - 1) / g.hy;
        ens += 0.5 * (db * db + dtp * dtp);
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (u.uy(i, j + 1) - u.uy(i, j)) / g.hy;
            ens += d * d;
        }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double d = (u.uy(i, j) - u.uy(i - 1, j)) / g.hx;
            ens += d * d;
        }
        const double dl = 2.0 * u.uy(0, j) / g.hx;
        const double dr = 2.0 * u.uy(g.nx - 1, j) / g.hx;
        ens += 0.5 * (dl * dl + dr * dr);
    }
    r.enstrophy = ens * cell;

    r.f1 = r.entropy + r.fisher_v + w.c_f1 * r.kinetic;
    r.f2 = r.entropy + w.c_f2_grad * r.fisher_v + w.c_f2_u * r.kinetic;
    r.w12_u = std::sqrt(r.kinetic + r.enstrophy);

    r.min_n = min_value(n);
    r.max_n = max_value(n);
    r.min_v = min_value(v);
    r.max_v = max_value(v);

    double ginf = 0;
    const StaggeredVectorField gv = grad_to_faces(v, BcKind::NeumannZero);
    for (double x : gv.ux_)
        ginf = std::max(ginf, std::abs(x));
    for (double x : gv.uy_)
        ginf = std::max(ginf, std::abs(x));
    double vinf = 0;
    for (double x : v.data)
        vinf = std::max(vinf, std::abs(x));
    r.w1inf_v = std::max(vinf, ginf);

    const ScalarField div = divergence(u);
    double dinf = 0;
    for (double x : div.data)
        dinf = std::max(dinf, std::abs(x));
    r.div_u_inf = dinf;

    if (prev) {
        r.cum_quartic_v = prev->cum_quartic_v + dt * r.quartic_v;
        r.cum_enstrophy = prev->cum_enstrophy + dt * r.enstrophy;
        r.cum_grad_n = prev->cum_grad_n + dt * r.grad_n_weighted;
    }
    return r;
}

EnergyWeights weights_from_bounds(const Motility& motility, double K, double c_f1,
                                  double c2_multiplier) {
    const MotilityBounds b = motility.bounds(K);
    EnergyWeights w;
    w.c_f1 = c_f1;
    w.c_f2_grad = b.upper * b.upper / (2.0 * b.lower);
    w.c_f2_u = c2_multiplier * b.upper * b.upper / b.lower;
    return w;
}

} // namespace chns
