#pragma once

#include "quench/ode.hpp"

#include <limits>
#include <span>

namespace quench::fold {

/// delta = infinity selects the blow-up section z = -infinity (s = arctan z = -pi/2).
inline constexpr double kBlowUpSection = std::numeric_limits<double>::infinity();

struct FoldDelayRecord {
    double c = 0.0;
    double epsilon = 0.0;
    double theta_exit = 0.0;
    double delta = 0.25;
    bool compact_chart_used = false;
    long steps = 0;
};

struct FoldOptions {
    double theta0 = -0.25;
    double z_offset = 0.0;       // added to the slow-manifold start
    bool compact_chart = true;
    double chart_switch = -1.0;  // change to s = arctan z once z drops below this
    double rtol = 1e-11;
    double atol = 1e-13;
};

/// Slow drift 1 - (theta + c^2/4)^2 of the fold parameter.
double slow_rate(double c, double theta);

/// Start on the attracting slow manifold: sqrt(-theta0) + eps g(theta0) / (4 (-theta0)).
double slow_manifold_start(double c, double epsilon, double theta0);

/// Integrates z' = -z^2 - theta, theta' = eps (1 - (theta + c^2/4)^2) from the slow manifold and
/// records theta where z reaches -delta. Throws std::runtime_error if the section is not reached
/// before theta saturates at 1 - c^2/4.
FoldDelayRecord run_fold_passage(double c, double epsilon, double delta = 0.25, const FoldOptions& opts = {});

struct NormalFormScaling {
    double x_factor;    // a = (1 - c^4/16)^{1/3}: z = -a x
    double y_factor;    // a^2: theta = -a^2 y
    double tau_factor;  // 1/a: zeta = tau / a
    /// dx/dtau = x^2 - y, dy/dtau = -eps (1 - (theta + c^2/4)^2) / a^3.
    OdeField field(double c, double epsilon) const;
};

NormalFormScaling normal_form_transform(double c);

/// Same passage integrated in normal-form variables and mapped back to theta.
FoldDelayRecord run_normal_form_passage(double c, double epsilon, double delta = 0.25, const FoldOptions& opts = {});

struct DelayFit {
    double exponent;
    double prefactor;
    double predicted_prefactor;  // Omega0 (1 - c^4/16)^{2/3}
    double prefactor_rel_error;
};

/// Least squares of log theta_exit on log eps. Needs >= 5 records at one c spanning >= 1.5 decades.
DelayFit fit_delay_scaling(std::span<const FoldDelayRecord> records);

}  // namespace quench::fold
