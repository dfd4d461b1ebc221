#include "quench/newton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quench {

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return INFINITY;
        m = std::max(m, std::abs(x));
    }
    return m;
}

namespace {

double scaled_norm(const BvpSystem& sys, std::span<const double> x, std::span<const double> r,
                   std::vector<double>& w) {
    if (!sys.row_scale) return sup_norm(r);
    sys.row_scale(x, w);
    double m = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i])) return INFINITY;
        m = std::max(m, std::abs(r[i]) / w[i]);
    }
    return m;
}

}  // namespace

std::pair<std::vector<double>, NewtonReport> solve_bvp(const BvpSystem& sys, std::vector<double> x,
                                                       const NewtonOptions& opts) {
    if (sys.kl > opts.max_bandwidth || sys.ku > opts.max_bandwidth)
        throw std::invalid_argument("solve_bvp: jacobian bandwidth exceeds configured bound");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_bvp: initial guess not finite");
    const std::size_t n = x.size();
    std::vector<double> r(n), rt(n), dx(n), xt(n), w(n, 1.0);
    BandedMatrix jac(n, sys.kl, sys.ku);
    NewtonReport rep;

    sys.residual(x, r);
    double nr = scaled_norm(sys, x, r, w);
    for (int it = 0;; ++it) {
        rep.iterations = it;
        rep.final_residual_norm = nr;
        if (nr <= opts.tol) {
            rep.converged = true;
            break;
        }
        if (it >= opts.max_iter || !std::isfinite(nr)) break;
        jac.set_zero();
        sys.jacobian(x, jac);
        BandedLU lu(jac);
        for (std::size_t i = 0; i < n; ++i) dx[i] = -r[i];
        lu.solve(dx);
        double lam = 1.0;
        double nt = INFINITY;
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + lam * dx[i];
            sys.residual(xt, rt);
            nt = scaled_norm(sys, xt, rt, w);
            if (std::isfinite(nt) && nt < (1.0 - 1e-4 * lam) * nr) break;
            if (lam <= opts.min_damping) break;
            lam *= 0.5;
        }
        rep.damping_history.push_back(lam);
        if (!std::isfinite(nt)) {
            rep.iterations = it + 1;
            break;
        }
        x.swap(xt);
        r.swap(rt);
        nr = nt;
    }
    return {std::move(x), std::move(rep)};
}

}  // namespace quench
