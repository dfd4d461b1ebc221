#pragma once

#include "quench/eigen_tridiag.hpp"
#include "quench/travelingwave.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace quench::stab {

/// Symmetric tridiagonal discretization of d^2 + q on interior nodes x (Dirichlet ends).
struct TridiagOperator {
    std::vector<double> x;       // interior nodes, uniform spacing h
    double h = 0.0;
    std::vector<double> diag;
    std::vector<double> off;
    std::vector<double> q;       // potential
    std::vector<double> u_star;  // resampled profile (empty for synthetic operators)
    double c = 0.0;
    OperatorTag tag = OperatorTag::generic;
    double window_length() const { return (static_cast<double>(x.size()) + 1.0) * h; }
};

struct LcOptions {
    /// Resampling window in the front's mesh variable; whole domain when unset.
    std::optional<std::pair<double, double>> window;
    /// Target spacing of the uniform sub-mesh; the front's own (max) spacing when <= 0.
    double h = 0.0;
};

/// L_c u = u'' + (mu - c^2/4 - 3 u*^2) u on a uniform resampling (cubic Hermite in u*, closed-form mu).
TridiagOperator build_Lc(const tw::FrontSolution& front, const LcOptions& opts = {});

/// Constant potential q0 on the box (-L, L) with n interior nodes.
TridiagOperator box_operator(double q0, double L, std::size_t n);

/// k largest eigenvalues; k = 0 raises std::domain_error.
Spectrum leading_eigenvalues(const TridiagOperator& op, std::size_t k);

/// Sup of the Fourier symbols at the two ends: (-2, -1 - c^2/4).
std::pair<double, double> essential_spectrum_edges(double c);

/// Eigenvector of the tridiagonal operator for an (accurate) eigenvalue, sup-normalized.
std::vector<double> eigenvector(const TridiagOperator& op, double lambda);

/// Applies the discrete L_0 = d^2 - c d + (mu - 3 u*^2) (central differences, Dirichlet ends).
std::vector<double> apply_L0(const TridiagOperator& op, std::span<const double> v);

struct ConjugationCheck {
    double lambda;
    double defect;  // sup |L_0 (E phi) - lambda E phi| / sup |E phi|, E = exp(c (x - x_ref) / 2)
    double h;
};

/// Compares L_0 acting on exp(c x / 2) phi with lambda exp(c x / 2) phi for the leading eigenpair of L_c.
ConjugationCheck conjugation_check(const TridiagOperator& lc);

}  // namespace quench::stab
