#pragma once

#include "quench/banded.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace quench {

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 50;
    double min_damping = 1.0 / 1024.0;
    std::size_t max_bandwidth = 64;
};

struct NewtonReport {
    int iterations = 0;
    double final_residual_norm = 0.0;
    bool converged = false;
    std::vector<double> damping_history;
};

using ResidualFn = std::function<void(std::span<const double> x, std::span<double> r)>;
using JacobianFn = std::function<void(std::span<const double> x, BandedMatrix& jac)>;
/// Optional per-row tolerance multipliers (>= 1); the convergence norm is max_i |r_i| / w_i.
using RowScaleFn = std::function<void(std::span<const double> x, std::span<double> w)>;

struct BvpSystem {
    std::size_t kl = 1;
    std::size_t ku = 1;
    ResidualFn residual;
    JacobianFn jacobian;
    RowScaleFn row_scale;
};

/// Damped Newton with residual-decrease line search (halving down to min_damping).
/// Throws JacobianSingular when a factorization breaks down.
std::pair<std::vector<double>, NewtonReport> solve_bvp(const BvpSystem& sys, std::vector<double> guess,
                                                       const NewtonOptions& opts = {});

double sup_norm(std::span<const double> v);

}  // namespace quench
