#include "chns/motility.hpp"

#include "chns/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chns {

namespace {

void require_nonnegative(double v) {
    if (!(v >= 0.0))
        throw std::domain_error("motility evaluated at negative signal value");
}

} // namespace

Motility Motility::linear(double c) {
    if (!(c > 0.0))
        throw ConfigError("linear motility coefficient must be positive");
    return Motility(Family::Linear, c);
}

Motility Motility::saturating(double a) {
    if (!(a > 0.0))
        throw ConfigError("saturating motility parameter must be positive");
    return Motility(Family::SaturatingRational, a);
}

Motility Motility::exponential(double chi) {
    if (!(chi > 0.0))
        throw ConfigError("exponential motility decay rate must be positive");
    return Motility(Family::ExponentialDecay, chi);
}

Motility Motility::tabulated(const std::string& table_text) {
    Motility m(Family::Tabulated, 0.0);
    std::istringstream in(table_text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream row(line);
        double v, p;
        if (!(row >> v))
            continue; // blank line
        if (!(row >> p))
            throw ConfigError("motility table row needs two columns", lineno);
        m.tv_.push_back(v);
        m.tphi_.push_back(p);
    }
    const std::size_t n = m.tv_.size();
    if (n < 3)
        throw ConfigError("motility table needs at least 3 rows");
    if (m.tv_[0] != 0.0 || m.tphi_[0] != 0.0)
        throw ConfigError("motility table must start at (0, 0)");
    for (std::size_t k = 1; k < n; ++k) {
        if (!(m.tv_[k] > m.tv_[k - 1]))
            throw ConfigError("motility table abscissae must be strictly increasing");
        if (!(m.tphi_[k] > 0.0))
            throw ConfigError("motility table values must be positive for v > 0");
    }

    // Fritsch-Carlson monotone cubic slopes.
    std::vector<double> d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k)
        d[k] = (m.tphi_[k + 1] - m.tphi_[k]) / (m.tv_[k + 1] - m.tv_[k]);
    m.tslope_.assign(n, 0.0);
    m.tslope_[0] = d[0];
    m.tslope_[n - 1] = d[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k)
        m.tslope_[k] = (d[k - 1] * d[k] > 0.0) ? 0.5 * (d[k - 1] + d[k]) : 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (d[k] == 0.0) {
            m.tslope_[k] = m.tslope_[k + 1] = 0.0;
            continue;
        }
        const double alpha = m.tslope_[k] / d[k];
        const double beta = m.tslope_[k + 1] / d[k];
        const double s = alpha * alpha + beta * beta;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            m.tslope_[k] = tau * alpha * d[k];
            m.tslope_[k + 1] = tau * beta * d[k];
        }
    }

    if (!(m.tslope_[0] > 0.0))
        throw ConfigError("motility table must have positive slope at v = 0");
    // Sampled admissibility check: phi > 0 on (0, Vmax].
    const double vmax = m.tv_.back();
    for (int k = 1; k <= 10000; ++k) {
        const double v = vmax * k / 10000.0;
        if (!(m.table_eval(v) > 0.0))
            throw ConfigError("motility table interpolant is not positive on (0, Vmax]");
    }
    return m;
}

double Motility::table_eval(double v) const {
    if (v > tv_.back())
        throw std::domain_error("motility table does not cover requested signal value");
    const auto it = std::upper_bound(tv_.begin(), tv_.end(), v);
    const std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - tv_.begin() - 1, 0), tv_.size() - 2);
    const double h = tv_[k + 1] - tv_[k];
    const double t = (v - tv_[k]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * tphi_[k] + h10 * h * tslope_[k] + h01 * tphi_[k + 1] + h11 * h * tslope_[k + 1];
}

double Motility::table_deriv(double v) const {
    if (v > tv_.back())
        throw std::domain_error("motility table does not cover requested signal value");
    const auto it = std::upper_bound(tv_.begin(), tv_.end(), v);
    const std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - tv_.begin() - 1, 0), tv_.size() - 2);
    const double h = tv_[k + 1] - tv_[k];
    const double t = (v - tv_[k]) / h;
    const double g00 = 6 * t * (t - 1) / h;
    const double g10 = (1 - t) * (1 - 3 * t);
    const double g01 = -g00;
    const double g11 = t * (3 * t - 2);
    return g00 * tphi_[k] + g10 * tslope_[k] + g01 * tphi_[k + 1] + g11 * tslope_[k + 1];
}

double Motility::phi(double v) const {
    require_nonnegative(v);
    if (v == 0.0)
        return 0.0;
    switch (family_) {
    case Family::Linear: return param_ * v;
    case Family::SaturatingRational: return v / (1.0 + param_ * v);
    case Family::ExponentialDecay: return v * std::exp(-param_ * v);
    case Family::Tabulated: return table_eval(v);
    }
    return 0.0;
}

double Motility::phi_prime(double v) const {
    require_nonnegative(v);
    switch (family_) {
    case Family::Linear: return param_;
    case Family::SaturatingRational: {
        const double d = 1.0 + param_ * v;
        return 1.0 / (d * d);
    }
    case Family::ExponentialDecay: return (1.0 - param_ * v) * std::exp(-param_ * v);
    case Family::Tabulated: return table_deriv(v);
    }
    return 0.0;
}

MotilityBounds Motility::bounds(double K) const {
    if (!(K > 0.0))
        throw std::domain_error("motility bounds need a positive signal ceiling");
    switch (family_) {
    case Family::Linear:
        return {param_, param_};
    case Family::SaturatingRational:
        // phi/v = 1/(1+av) decreasing; phi' = 1/(1+av)^2 <= 1 with max at 0.
        return {1.0 / (1.0 + param_ * K), 1.0};
    case Family::ExponentialDecay: {
        // phi/v = exp(-chi v) decreasing; |phi'| peaks at v=0 (value 1) or v=2/chi
        // (value exp(-2)), so 1 dominates on any [0,K].
        return {std::exp(-param_ * K), 1.0};
    }
    case Family::Tabulated: {
        const int samples = 10000;
        double lo = table_deriv(0.0); // limit of phi(v)/v at v -> 0+
        double hi = lo;
        for (int k = 1; k <= samples; ++k) {
            const double v = K * k / samples;
            const double ratio = table_eval(v) / v;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        for (int k = 0; k <= samples; ++k)
            hi = std::max(hi, std::abs(table_deriv(K * k / samples)));
        return {lo, hi};
    }
    }
    return {0.0, 0.0};
}

} // namespace chns
