#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace chns::detail {

struct CgOptions {
    double rel_tol = 1e-10;     // on ||r||_2 / ||b||_2
    double abs_inf_tol = -1.0;  // when >= 0, replaces the l2 test by ||r||_inf <= abs_inf_tol
    bool mass_stop = false;     // additionally require |sum r| <= mass_abs_tol
    double mass_abs_tol = -1.0; // < 0: default to rel_tol * |sum b|
    int max_iter = 20000;
};

struct CgResult {
    int iterations = 0;
    double rel_residual = 0.0;
    double inf_residual = 0.0;
    bool converged = false;
};

// Preconditioned conjugate gradient with fixed (sequential) reduction order.
// apply(x, out) writes A*x; precond(r, z) writes an SPD approximation of A^{-1} r.
// Convergence is always judged on the explicitly recomputed residual.
template <class Apply, class Precond>
CgResult cg_solve(const Apply& apply, const Precond& precond, const std::vector<double>& b,
                  std::vector<double>& x, const CgOptions& opt) {
    const std::size_t n = b.size();
    std::vector<double> r(n), z(n), p(n), ap(n);

    double bnorm2 = 0.0, bsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        bnorm2 += b[k] * b[k];
        bsum += b[k];
    }
    const double bnorm = std::sqrt(bnorm2);
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        return {0, 0.0, 0.0, true};
    }
    const double mass_tol = opt.mass_abs_tol >= 0.0
                                ? opt.mass_abs_tol
                                : opt.rel_tol * std::max(std::abs(bsum), 1e-30);

    auto residual_state = [&](double& rr, double& rsum, double& rinf) {
        rr = 0.0;
        rsum = 0.0;
        rinf = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            rr += r[k] * r[k];
            rsum += r[k];
            rinf = std::max(rinf, std::abs(r[k]));
        }
    };
    auto done = [&](double rr, double rsum, double rinf) {
        if (opt.abs_inf_tol >= 0.0) {
            if (rinf > opt.abs_inf_tol)
                return false;
        } else if (std::sqrt(rr) > opt.rel_tol * bnorm) {
            return false;
        }
        if (opt.mass_stop && std::abs(rsum) > mass_tol)
            return false;
        return true;
    };
    auto refresh_residual = [&] {
        apply(x, ap);
        for (std::size_t k = 0; k < n; ++k)
            r[k] = b[k] - ap[k];
    };

    refresh_residual();
    double rr, rsum, rinf;
    residual_state(rr, rsum, rinf);
    CgResult res;
    if (done(rr, rsum, rinf)) {
        res.converged = true;
        res.rel_residual = std::sqrt(rr) / bnorm;
        res.inf_residual = rinf;
        return res;
    }

    precond(r, z);
    p = z;
    double rz = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        rz += r[k] * z[k];

    int it = 0;
    for (; it < opt.max_iter; ++it) {
        apply(p, ap);
        double pap = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            pap += p[k] * ap[k];
        if (pap <= 0.0)
            break; // operator lost definiteness; report as-is
        const double alpha = rz / pap;
        for (std::size_t k = 0; k < n; ++k)
            x[k] += alpha * p[k];
        for (std::size_t k = 0; k < n; ++k)
            r[k] -= alpha * ap[k];

        bool restarted = false;
        if ((it + 1) % 64 == 0) {
            refresh_residual();
            restarted = true;
        }

        double rr_new, rsum_new, rinf_new;
        residual_state(rr_new, rsum_new, rinf_new);
        if (done(rr_new, rsum_new, rinf_new)) {
            refresh_residual();
            residual_state(rr_new, rsum_new, rinf_new);
            if (done(rr_new, rsum_new, rinf_new)) {
                res.converged = true;
                res.iterations = it + 1;
                res.rel_residual = std::sqrt(rr_new) / bnorm;
                res.inf_residual = rinf_new;
                return res;
            }
            restarted = true;
        }

        precond(r, z);
        double rz_new = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            rz_new += r[k] * z[k];
        if (restarted) {
            p = z; // direction restart after residual replacement
        } else {
            const double beta = rz_new / rz;
            for (std::size_t k = 0; k < n; ++k)
                p[k] = z[k] + beta * p[k];
        }
        rz = rz_new;
    }

    residual_state(rr, rsum, rinf);
    res.converged = false;
    res.iterations = it;
    res.rel_residual = std::sqrt(rr) / bnorm;
    res.inf_residual = rinf;
    return res;
}

template <class Apply>
CgResult cg_solve(const Apply& apply, const std::vector<double>& b, std::vector<double>& x,
                  const CgOptions& opt) {
    return cg_solve(
        apply, [](const std::vector<double>& r, std::vector<double>& z) { z = r; }, b, x, opt);
}

} // namespace chns::detail
