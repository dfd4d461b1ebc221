#pragma once

#include "quench/eigen_tridiag.hpp"
#include "quench/mesh.hpp"
#include "quench/newton.hpp"
#include "quench/travelingwave.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace quench::pii {

/// Solution of w'' = eta w + 2 w^3 on [-L_minus, L_plus].
struct HMSolution {
    Mesh mesh;
    std::vector<double> w;
    std::vector<double> wprime;
    NewtonReport report;
    std::pair<double, double> boundary_residuals{0.0, 0.0};  // (left, right)
};

class HMSolveError : public std::runtime_error {
public:
    HMSolveError(const std::string& what, NewtonReport rep) : std::runtime_error(what), report_(std::move(rep)) {}
    const NewtonReport& report() const { return report_; }

private:
    NewtonReport report_;
};

/// Two-term left trans-series sqrt(-eta/2) (1 + 1/(8 eta^3) - 73/(128 eta^6)), eta < 0.
double hm_left_series(double eta);

/// Global Newton solve with a Dirichlet trans-series closure on the left and the Airy Robin
/// condition w'/w = Ai'/Ai on the right. Requires L_minus >= 8, L_plus >= 6, n >= 4001.
/// Throws HMSolveError("left separatrix missed") if w overshoots 10 sqrt(L_minus/2).
HMSolution solve_hastings_mcleod(double L_minus = 12.0, double L_plus = 8.0, std::size_t n = 8001,
                                 const NewtonOptions& opts = {});

enum class TailClass { oscillatory_decay, pole, separatrix };

struct TailClassification {
    TailClass kind;
    double pole_position = 0.0;               // first eta with |w| > 1e3 (pole)
    std::pair<double, double> bracket{0, 0};  // last step before / event time
    int sign_changes = 0;
    double w_end = 0.0;                       // w at the left end of the integration
};

/// Integrates w'' = eta w + 2 w^3 backward from eta = L_plus with data (k Ai, k Ai').
/// |k| = 1 is the (reflected) Hastings-McLeod separatrix and is resolved through the BVP.
TailClassification classify_airy_tail(double k, double L_minus, double L_plus = 8.0);

struct PotentialCertificate {
    double min_value = 0.0;
    double argmin = 0.0;
    double grid_spacing = 0.0;
    double margin_bound = 0.0;
    bool passed = false;
};

/// min of V = eta + 6 w^2 over nodes, less a cellwise Lipschitz margin h/2 (1 + 12 max w max |w'|).
PotentialCertificate certify_potential_positive(const HMSolution& sol);

struct LowerBoundCheck {
    bool passed = false;
    double min_gap = 0.0;    // min over eta <= 0 cells of (lower bound of w) - sqrt(-eta/6)
    double worst_eta = 0.0;
};

/// w > sqrt(-eta/6) on eta <= 0, with the Lipschitz margin h/2 max |w'| per cell.
LowerBoundCheck certify_lower_bound(const HMSolution& sol);

/// Largest 5 eigenvalues of d^2/deta^2 - (eta + 6 w^2) with Dirichlet truncation on the solution mesh.
Spectrum linearization_ground_state(const HMSolution& sol, std::size_t k = 5);

/// Backward shooting from (w, w')(L_plus) of the BVP solution down to eta_stop.
double shoot_back_from_right(const HMSolution& sol, double eta_stop);

/// Interpolated w at eta (cubic Hermite using w').
double evaluate(const HMSolution& sol, double eta);

/// sqrt(2) eps^{1/3} w(eps^{1/3} xi): the inner profile of the stationary (c = 0) front.
double inner_profile(const HMSolution& sol, double epsilon, double xi);

struct InnerComparison {
    double deviation = 0.0;  // sup |u - inner_profile| over |xi| <= eps^{-1/3}
    double scaled = 0.0;     // deviation / eps^{2/3}
    double u0 = 0.0;
    double window = 0.0;     // eps^{-1/3}
};

/// Compares a c = 0 front (xi orientation) with the rescaled Hastings-McLeod profile on its mesh nodes.
InnerComparison compare_inner_expansion(const tw::FrontSolution& front, const HMSolution& sol);

}  // namespace quench::pii
