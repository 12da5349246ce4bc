#pragma once

#include <string>
#include <vector>

namespace chns {

// phi(v)/v stays within [lower, upper] on (0, K], and |phi'(v)| <= upper on [0, K].
struct MotilityBounds {
    double lower;
    double upper;
};

// Motility function phi with phi(0) = 0, phi'(0) > 0 and phi > 0 on (0, inf).
// Families:
//   Linear              phi(v) = c v
//   SaturatingRational  phi(v) = v / (1 + a v)
//   ExponentialDecay    phi(v) = v exp(-chi v)
//   Tabulated           monotone-cubic interpolant of a sampled table
class Motility {
public:
    enum class Family { Linear, SaturatingRational, ExponentialDecay, Tabulated };

    static Motility linear(double c);
    static Motility saturating(double a);
    static Motility exponential(double chi);
    // Two-column text: rows "v phi(v)", strictly increasing v, first row "0 0".
    static Motility tabulated(const std::string& table_text);

    double phi(double v) const;
    double phi_prime(double v) const;

    // lower = inf of phi(v)/v over (0,K], upper = max(sup phi(v)/v, sup |phi'|) over [0,K].
    // Analytic per family; dense sampling (1e4 points) for Tabulated.
    MotilityBounds bounds(double K) const;

    Family family() const { return family_; }
    double param() const { return param_; }

private:
    Motility(Family f, double p) : family_(f), param_(p) {}

    Family family_;
    double param_ = 0.0;

    // Tabulated data: knots, values, Fritsch-Carlson slopes.
    std::vector<double> tv_, tphi_, tslope_;
    double table_eval(double v) const;
    double table_deriv(double v) const;
};

} // namespace chns
