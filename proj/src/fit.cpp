#include "quench/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace quench {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_power_law: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("fit_power_law: data must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) throw std::domain_error("fit_power_law: degenerate abscissae");
    const double p = (n * sxy - sx * sy) / den;
    const double c = (sy - p * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = std::log(y[i]) - c - p * std::log(x[i]);
        ss_res += r * r;
    }
    return {p, std::exp(c), ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

}  // namespace quench
