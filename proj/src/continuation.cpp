#include "quench/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quench {

ContinuationBranch continue_branch(const NaturalProblem& problem, ContinuationEntry start, double param_end,
                                   double step0, const ContinuationOptions& opts) {
    if (!start.report.converged) throw std::runtime_error("continuation: start entry not converged");
    ContinuationBranch br;
    br.direction = param_end >= start.param ? 1 : -1;
    if (problem.diagnose) problem.diagnose(start);
    br.entries.push_back(std::move(start));
    double step = std::min(std::abs(step0), opts.max_step);
    int successes = 0;
    while (static_cast<int>(br.entries.size()) < opts.max_entries) {
        const double p0 = br.entries.back().param;
        const double remaining = std::abs(param_end - p0);
        if (remaining <= 1e-14 * std::max(1.0, std::abs(param_end))) break;
        const bool last = step >= remaining;
        const double p = last ? param_end : p0 + br.direction * step;
        bool ok = false;
        ContinuationEntry e;
        try {
            auto guess = problem.predict(p, br.entries);
            auto [x, rep] = problem.correct(p, std::move(guess));
            e.param = p;
            e.solution = std::move(x);
            e.report = std::move(rep);
            ok = e.report.converged;
            if (ok && problem.diagnose) problem.diagnose(e);
            if (ok && problem.accept) ok = problem.accept(e);
        } catch (const JacobianSingular&) {
            ok = false;
        }
        if (!ok) {
            step *= 0.5;
            successes = 0;
            if (step < opts.min_step) {
                br.stalled = true;
                break;
            }
            continue;
        }
        br.step_history.push_back(std::abs(p - p0));
        br.entries.push_back(std::move(e));
        if (++successes >= opts.grow_after) {
            step = std::min(step * opts.grow, opts.max_step);
            successes = 0;
        }
    }
    return br;
}

namespace {

void param_derivative(const ParamSystem& sys, std::span<const double> x, double p, std::span<double> dr) {
    if (sys.dparam) {
        sys.dparam(x, p, dr);
        return;
    }
    const double h = 1e-7 * std::max(1.0, std::abs(p));
    std::vector<double> rp(x.size()), rm(x.size());
    sys.residual(x, p + h, rp);
    sys.residual(x, p - h, rm);
    for (std::size_t i = 0; i < x.size(); ++i) dr[i] = (rp[i] - rm[i]) / (2.0 * h);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

ContinuationBranch continue_natural(const ParamSystem& sys, ContinuationEntry start, double param_end, double step0,
                                    const ContinuationOptions& opts) {
    NaturalProblem prob;
    prob.predict = [](double p, std::span<const ContinuationEntry> hist) {
        const auto& a = hist.back();
        if (hist.size() < 2) return a.solution;
        const auto& b = hist[hist.size() - 2];
        const double t = (p - a.param) / (a.param - b.param);
        std::vector<double> g(a.solution.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = a.solution[i] + t * (a.solution[i] - b.solution[i]);
        return g;
    };
    prob.correct = [&](double p, std::vector<double> guess) {
        BvpSystem bs;
        bs.kl = sys.kl;
        bs.ku = sys.ku;
        bs.residual = [&, p](std::span<const double> x, std::span<double> r) { sys.residual(x, p, r); };
        bs.jacobian = [&, p](std::span<const double> x, BandedMatrix& j) { sys.jacobian(x, p, j); };
        return solve_bvp(bs, std::move(guess), opts.newton);
    };
    return continue_branch(prob, std::move(start), param_end, step0, opts);
}

ContinuationBranch continue_arclength(const ParamSystem& sys, ContinuationEntry start, double p_lo, double p_hi,
                                      double ds0, int direction, const ContinuationOptions& opts) {
    if (!start.report.converged) throw std::runtime_error("continuation: start entry not converged");
    const std::size_t n = start.solution.size();
    ContinuationBranch br;
    br.direction = direction >= 0 ? 1 : -1;
    BandedMatrix jac(n, sys.kl, sys.ku);
    std::vector<double> r(n), rp(n), a(n), b(n);

    // tangent (tx, tp) from J a = F_p: (tx, tp) ~ (-a, 1), normalized, oriented by `direction`
    auto tangent = [&](std::span<const double> x, double p, std::vector<double>& tx, double& tp) {
        jac.set_zero();
        sys.jacobian(x, p, jac);
        param_derivative(sys, x, p, rp);
        BandedLU lu(jac);
        a.assign(rp.begin(), rp.end());
        lu.solve(a);
        double nrm = 1.0 + dot(a, a);
        nrm = std::sqrt(nrm);
        tx.resize(n);
        for (std::size_t i = 0; i < n; ++i) tx[i] = -a[i] / nrm;
        tp = 1.0 / nrm;
    };

    std::vector<double> tx;
    double tp = 0.0;
    tangent(start.solution, start.param, tx, tp);
    if (tp * br.direction < 0) {
        for (double& v : tx) v = -v;
        tp = -tp;
    }
    br.entries.push_back(std::move(start));
    double ds = std::min(std::abs(ds0), opts.max_step);
    int successes = 0;
    while (static_cast<int>(br.entries.size()) < opts.max_entries) {
        const auto& cur = br.entries.back();
        if (cur.param < p_lo || cur.param > p_hi) break;
        std::vector<double> x(n), xp(n);
        for (std::size_t i = 0; i < n; ++i) xp[i] = x[i] = cur.solution[i] + ds * tx[i];
        const double pp = cur.param + ds * tp;
        double p = pp;
        bool ok = false;
        NewtonReport rep;
        try {
            for (int it = 0; it <= opts.newton.max_iter; ++it) {
                sys.residual(x, p, r);
                double arc = 0.0;
                for (std::size_t i = 0; i < n; ++i) arc += tx[i] * (x[i] - xp[i]);
                arc += tp * (p - pp);
                const double nr = std::max(sup_norm(r), std::abs(arc));
                rep.iterations = it;
                rep.final_residual_norm = nr;
                if (!std::isfinite(nr)) break;
                if (nr <= opts.newton.tol) {
                    ok = true;
                    break;
                }
                jac.set_zero();
                sys.jacobian(x, p, jac);
                param_derivative(sys, x, p, rp);
                BandedLU lu(jac);
                a.assign(rp.begin(), rp.end());
                lu.solve(a);
                for (std::size_t i = 0; i < n; ++i) b[i] = -r[i];
                lu.solve(b);
                const double den = tp - dot(tx, a);
                if (den == 0.0) break;
                const double dp = (-arc - dot(tx, b)) / den;
                for (std::size_t i = 0; i < n; ++i) x[i] += b[i] - a[i] * dp;
                p += dp;
                rep.damping_history.push_back(1.0);
            }
        } catch (const JacobianSingular&) {
            ok = false;
        }
        rep.converged = ok;
        if (!ok) {
            ds *= 0.5;
            successes = 0;
            if (ds < opts.min_step) {
                br.stalled = true;
                break;
            }
            continue;
        }
        std::vector<double> ntx;
        double ntp = 0.0;
        tangent(x, p, ntx, ntp);
        if (dot(ntx, tx) + ntp * tp < 0) {
            for (double& v : ntx) v = -v;
            ntp = -ntp;
        }
        tx = std::move(ntx);
        tp = ntp;
        ContinuationEntry e;
        e.param = p;
        e.solution = std::move(x);
        e.report = std::move(rep);
        br.entries.push_back(std::move(e));
        br.step_history.push_back(ds);
        if (++successes >= opts.grow_after) {
            ds = std::min(ds * opts.grow, opts.max_step);
            successes = 0;
        }
    }
    return br;
}

}  // namespace quench
