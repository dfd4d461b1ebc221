#pragma once

#include "quench/newton.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace quench {

struct ContinuationEntry {
    double param = 0.0;
    std::vector<double> solution;
    NewtonReport report;
    std::map<std::string, double> diagnostics;
};

struct ContinuationBranch {
    std::vector<ContinuationEntry> entries;
    int direction = 1;
    std::vector<double> step_history;  // accepted parameter (or arclength) steps
    bool stalled = false;
};

struct ContinuationOptions {
    double min_step = 1e-10;
    double max_step = 1e300;
    double grow = 1.3;
    int grow_after = 3;
    int max_entries = 100000;
    NewtonOptions newton;
};

/// Natural-parameter continuation with caller-supplied predictor and corrector.
/// The solution dimension may change between entries.
struct NaturalProblem {
    /// Guess at `param` from the accepted history (most recent last).
    std::function<std::vector<double>(double param, std::span<const ContinuationEntry> history)> predict;
    std::function<std::pair<std::vector<double>, NewtonReport>(double param, std::vector<double> guess)> correct;
    /// Optional extra acceptance test; a rejected entry counts as a failed step.
    std::function<bool(const ContinuationEntry&)> accept;
    /// Optional diagnostics hook run on accepted entries.
    std::function<void(ContinuationEntry&)> diagnose;
};

/// Steps from start.param toward param_end (either direction). Halves on failure, grows by
/// `grow` after `grow_after` consecutive successes, stalls below min_step.
/// Throws std::runtime_error if the start entry is not converged.
ContinuationBranch continue_branch(const NaturalProblem& problem, ContinuationEntry start, double param_end,
                                   double step0, const ContinuationOptions& opts = {});

/// Fixed-dimension parameterized system F(x, p) = 0 with banded F_x.
struct ParamSystem {
    std::size_t kl = 1;
    std::size_t ku = 1;
    std::function<void(std::span<const double> x, double p, std::span<double> r)> residual;
    std::function<void(std::span<const double> x, double p, BandedMatrix& jac)> jacobian;
    /// dF/dp; central difference in p when empty.
    std::function<void(std::span<const double> x, double p, std::span<double> dr)> dparam;
};

/// Natural-parameter continuation with secant predictor.
ContinuationBranch continue_natural(const ParamSystem& sys, ContinuationEntry start, double param_end,
                                    double step0, const ContinuationOptions& opts = {});

/// Pseudo-arclength continuation (bordered solves); passes folds. Stops once the parameter leaves
/// [p_lo, p_hi] or after opts.max_entries entries.
ContinuationBranch continue_arclength(const ParamSystem& sys, ContinuationEntry start, double p_lo, double p_hi,
                                      double ds0, int direction, const ContinuationOptions& opts = {});

}  // namespace quench
