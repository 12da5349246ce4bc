#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <tuple>

namespace chns::detail {

namespace {

const double pi = 3.14159265358979323846;

struct TransformSolver {
    TransformSolver(int mx, int my, fftw_r2r_kind fwd_x, fftw_r2r_kind fwd_y,
                    fftw_r2r_kind inv_x, fftw_r2r_kind inv_y, std::vector<double> lx,
                    std::vector<double> ly, double norm)
        : mx_(mx), my_(my), lamx_(std::move(lx)), lamy_(std::move(ly)), norm_(norm) {
        buf_ = fftw_alloc_real(static_cast<std::size_t>(mx) * my);
        fwd_ = fftw_plan_r2r_2d(my, mx, buf_, buf_, fwd_y, fwd_x, FFTW_ESTIMATE);
        inv_ = fftw_plan_r2r_2d(my, mx, buf_, buf_, inv_y, inv_x, FFTW_ESTIMATE);
    }
    ~TransformSolver() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(buf_);
    }
    TransformSolver(const TransformSolver&) = delete;
    TransformSolver& operator=(const TransformSolver&) = delete;

    void solve(double alpha, double beta, const std::vector<double>& b, std::vector<double>& x) {
        const std::size_t n = static_cast<std::size_t>(mx_) * my_;
        for (std::size_t k = 0; k < n; ++k)
            buf_[k] = b[k];
        fftw_execute(fwd_);
        for (int j = 0; j < my_; ++j)
            for (int i = 0; i < mx_; ++i) {
                const double denom = alpha + beta * (lamx_[i] + lamy_[j]);
                double& c = buf_[static_cast<std::size_t>(j) * mx_ + i];
                c = (denom != 0.0) ? c / denom : 0.0; // zero the singular mean mode
            }
        fftw_execute(inv_);
        x.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            x[k] = buf_[k] / norm_;
    }

    int mx_, my_;
    std::vector<double> lamx_, lamy_;
    double norm_;
    double* buf_;
    fftw_plan fwd_, inv_;
};

// Eigenvalues of -d^2/dx^2 for the matching basis; `offset` shifts the mode index
// (DST bases start at mode 1 or at half-integer phases).
std::vector<double> second_difference_spectrum(int modes, int cells, double h, int offset) {
    std::vector<double> lam(modes);
    for (int k = 0; k < modes; ++k)
        lam[k] = (2.0 - 2.0 * std::cos(pi * (k + offset) / cells)) / (h * h);
    return lam;
}

TransformSolver& cell_solver(const GridSpec& g) {
    static std::map<std::pair<int, int>, std::unique_ptr<TransformSolver>> cache;
    const auto key = std::make_pair(g.nx, g.ny);
    auto it = cache.find(key);
    if (it == cache.end()) {
        // DCT-II basis cos(pi k (i+1/2)/n) matches the reflection ghosts.
        auto solver = std::make_unique<TransformSolver>(
            g.nx, g.ny, FFTW_REDFT10, FFTW_REDFT10, FFTW_REDFT01, FFTW_REDFT01,
            second_difference_spectrum(g.nx, g.nx, g.hx, 0),
            second_difference_spectrum(g.ny, g.ny, g.hy, 0), 4.0 * g.nx * g.ny);
        it = cache.emplace(key, std::move(solver)).first;
    }
    return *it->second;
}

TransformSolver& face_solver(const GridSpec& g, bool is_x) {
    static std::map<std::tuple<int, int, bool>, std::unique_ptr<TransformSolver>> cache;
    const auto key = std::make_tuple(g.nx, g.ny, is_x);
    auto it = cache.find(key);
    if (it == cache.end()) {
        std::unique_ptr<TransformSolver> solver;
        if (is_x) {
            // ux: DST-I in x (zero values on the wall faces), DST-II in y (odd
            // half-sample ghosts at the tangential walls).
            solver = std::make_unique<TransformSolver>(
                g.nx - 1, g.ny, FFTW_RODFT00, FFTW_RODFT10, FFTW_RODFT00, FFTW_RODFT01,
                second_difference_spectrum(g.nx - 1, g.nx, g.hx, 1),
                second_difference_spectrum(g.ny, g.ny, g.hy, 1), 4.0 * g.nx * g.ny);
        } else {
            solver = std::make_unique<TransformSolver>(
                g.nx, g.ny - 1, FFTW_RODFT10, FFTW_RODFT00, FFTW_RODFT01, FFTW_RODFT00,
                second_difference_spectrum(g.nx, g.nx, g.hx, 1),
                second_difference_spectrum(g.ny - 1, g.ny, g.hy, 1), 4.0 * g.nx * g.ny);
        }
        it = cache.emplace(key, std::move(solver)).first;
    }
    return *it->second;
}

} // namespace

void solve_cell_helmholtz(const GridSpec& g, double alpha, double beta,
                          const std::vector<double>& b, std::vector<double>& x) {
    cell_solver(g).solve(alpha, beta, b, x);
}

void solve_face_helmholtz(const GridSpec& g, bool is_x, double alpha, double beta,
                          const std::vector<double>& b, std::vector<double>& x) {
    face_solver(g, is_x).solve(alpha, beta, b, x);
}

} // namespace chns::detail
