#include "quench/eigen_tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace quench {

std::size_t sturm_count_below(std::span<const double> d, std::span<const double> e, double x) {
    std::size_t count = 0;
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = d[i] - x - (i > 0 ? e[i - 1] * e[i - 1] / q : 0.0);
        // an exact zero pivot counts as negative
        if (std::abs(q) < tiny) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

Spectrum eig_tridiag_symmetric(std::span<const double> diag, std::span<const double> offdiag, std::size_t k) {
    const std::size_t n = diag.size();
    if (n == 0) throw std::invalid_argument("eig_tridiag_symmetric: empty matrix");
    if (offdiag.size() + 1 != n) throw std::invalid_argument("eig_tridiag_symmetric: offdiag length must be n-1");
    if (k == 0 || k > n) throw std::domain_error("eig_tridiag_symmetric: k must lie in [1, n]");
    double lo = INFINITY, hi = -INFINITY, dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(offdiag[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
        dmax = std::max(dmax, std::abs(diag[i]));
    }
    const double scale = dmax > 0.0 ? dmax : std::max(std::abs(lo), std::abs(hi));
    const double tol = std::max(1e-10 * scale, 4.0 * std::numeric_limits<double>::epsilon() * (hi - lo));
    lo -= tol;
    hi += tol;
    Spectrum s;
    s.n = n;
    s.eigenvalues.resize(k);
    // j-th largest eigenvalue = eigenvalue with index n-1-j in ascending order
    double upper = hi;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t idx = n - 1 - j;
        double a = lo, b = upper;
        while (b - a > tol) {
            const double mid = 0.5 * (a + b);
            if (sturm_count_below(diag, offdiag, mid) > idx) {
                b = mid;
            } else {
                a = mid;
            }
        }
        s.eigenvalues[j] = 0.5 * (a + b);
        upper = std::min(upper, b + tol);
    }
    return s;
}

Spectrum dirichlet_schrodinger(double h, std::span<const double> q, std::size_t k_largest, OperatorTag tag) {
    if (!(h > 0.0)) throw std::invalid_argument("dirichlet_schrodinger: spacing must be positive");
    const std::size_t n = q.size();
    std::vector<double> d(n), o(n > 0 ? n - 1 : 0, 1.0 / (h * h));
    for (std::size_t i = 0; i < n; ++i) d[i] = -2.0 / (h * h) + q[i];
    Spectrum s = eig_tridiag_symmetric(d, o, k_largest);
    s.domain_halflength = 0.5 * static_cast<double>(n + 1) * h;
    s.tag = tag;
    return s;
}

}  // namespace quench
