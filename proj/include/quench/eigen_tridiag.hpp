#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace quench {

enum class OperatorTag { generic, L0, Lc, PIILinearization };

struct Spectrum {
    std::vector<double> eigenvalues;  // descending
    std::size_t n = 0;
    double domain_halflength = 0.0;
    OperatorTag tag = OperatorTag::generic;
};

/// Number of eigenvalues strictly below x (Sturm count via LDL^T pivots).
std::size_t sturm_count_below(std::span<const double> diag, std::span<const double> offdiag, double x);

/// k largest eigenvalues of a symmetric tridiagonal matrix by bisection, sorted descending.
/// Absolute tolerance 1e-10 * max|diag| (or of the Gershgorin radius when diag is zero).
Spectrum eig_tridiag_symmetric(std::span<const double> diag, std::span<const double> offdiag, std::size_t k_largest);

/// k largest eigenvalues of d^2/dx^2 + q(x) with Dirichlet ends, on interior nodes spaced h apart.
/// The box is (n + 1) h long for n = q.size().
Spectrum dirichlet_schrodinger(double h, std::span<const double> q, std::size_t k_largest,
                               OperatorTag tag = OperatorTag::generic);

}  // namespace quench
