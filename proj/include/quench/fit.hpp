#pragma once

#include <span>

namespace quench {

struct PowerLawFit {
    double exponent;
    double prefactor;
    double r2;
};

/// Least-squares fit of log y = log A + p log x. Requires >= 2 points with positive x, y.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace quench
