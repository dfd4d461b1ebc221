#include "quench/pdesim.hpp"

#include "quench/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace quench::pde {

void SimConfig::validate() const {
    if (n < 11) throw std::invalid_argument("SimConfig: need at least 11 nodes");
    if (!(x_max > x_min)) throw std::invalid_argument("SimConfig: empty domain");
    if (!(t_end >= 0.0)) throw std::invalid_argument("SimConfig: t_end must be nonnegative");
    if (!(epsilon > 0.0) && !frozen_mu) throw std::invalid_argument("SimConfig: epsilon must be positive");
    if (alpha < 0.0) throw std::invalid_argument("SimConfig: alpha must be nonnegative");
    if (!(step() > 0.0) || step() > 0.4 * h() * h() * (1.0 + 1e-12))
        throw std::invalid_argument("SimConfig: dt must satisfy dt <= 0.4 h^2");
    if (!(track_every > 0.0)) throw std::invalid_argument("SimConfig: track_every must be positive");
}

double SimConfig::mu(double x, double t) const {
    if (frozen_mu) return *frozen_mu;
    const double s = frame == Frame::comoving ? x : alpha * x - t;
    if (ramp == tw::Ramp::tanh) return -std::tanh(epsilon * s);
    return std::clamp(-epsilon * s, -1.0, 1.0);
}

std::optional<double> level_crossing(std::span<const double> x, std::span<const double> u, double level, int* count) {
    int k = 0;
    std::optional<double> pos;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const bool a = u[i] >= level, b = u[i + 1] >= level;
        if (a == b) continue;
        ++k;
        if (a && !b) pos = x[i] + (level - u[i]) / (u[i + 1] - u[i]) * (x[i + 1] - x[i]);
    }
    if (count) *count = k;
    return pos;
}

namespace {

// Thomas factorization of a diagonally dominant tridiagonal matrix (no pivoting).
class Tridiag {
public:
    void factor(std::span<const double> lo, std::span<const double> d, std::span<const double> up) {
        const std::size_t n = d.size();
        lo_.assign(lo.begin(), lo.end());
        cp_.resize(n);
        inv_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            inv_[i] = 1.0 / (i > 0 ? d[i] - lo[i] * cp_[i - 1] : d[0]);
            cp_[i] = up[i] * inv_[i];
        }
    }
    void solve(std::span<double> b) const {
        const std::size_t n = b.size();
        b[0] *= inv_[0];
        for (std::size_t i = 1; i < n; ++i) b[i] = (b[i] - lo_[i] * b[i - 1]) * inv_[i];
        for (std::size_t i = n - 1; i-- > 0;) b[i] -= cp_[i] * b[i + 1];
    }

private:
    std::vector<double> lo_, cp_, inv_;
};

// Constant-coefficient three-point operator with its Neumann end rows.
struct Band3 {
    std::vector<double> lo, up;
    double d = 0.0;

    static Band3 neumann(std::size_t n, double l, double d, double r) {
        Band3 b{std::vector<double>(n, l), std::vector<double>(n, r), d};
        b.up[0] = l + r;
        b.lo[n - 1] = l + r;
        return b;
    }
    void apply(std::span<const double> v, std::span<double> out) const {
        const std::size_t n = v.size();
        out[0] = d * v[0] + up[0] * v[1];
        for (std::size_t i = 1; i + 1 < n; ++i) out[i] = lo[i] * v[i - 1] + d * v[i] + up[i] * v[i + 1];
        out[n - 1] = lo[n - 1] * v[n - 2] + d * v[n - 1];
    }
};

std::vector<double> initial_profile(const SimConfig& cfg, std::span<const double> x) {
    std::vector<double> u(x.size(), 0.0);
    const auto& ic = cfg.ic;
    switch (ic.kind) {
    case InitialKind::zero:
        break;
    case InitialKind::small_bump:
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - ic.center;
            if (std::abs(d) < ic.width) {
                const double cs = std::cos(std::numbers::pi * d / (2.0 * ic.width));
                u[i] = ic.amplitude * cs * cs;
            }
        }
        break;
    case InitialKind::front_seed:
        if (ic.front) {
            const auto& f = *ic.front;
            const double sgn = f.variable == tw::FrontVariable::zeta ? -1.0 : 1.0;
            for (std::size_t i = 0; i < x.size(); ++i) u[i] = interp_linear(f.mesh.nodes(), f.u, sgn * x[i]);
        } else {
            tw::QuenchParams q{cfg.c, cfg.epsilon, cfg.ramp};
            const double xi_c = -q.zeta_of_mu(q.mu_c());
            for (std::size_t i = 0; i < x.size(); ++i)
                u[i] = 0.5 * (1.0 - std::tanh(x[i] - xi_c)) * std::sqrt(std::max(cfg.mu(x[i], 0.0), 0.0));
        }
        break;
    }
    return u;
}

}  // namespace

SimResult simulate(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n;
    const double h = cfg.h();
    const double dt = cfg.step();
    const double c = cfg.frame == Frame::comoving ? cfg.c : 0.0;
    SimResult res;
    res.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.x[i] = cfg.x_min + h * static_cast<double>(i);
    std::vector<double> u = initial_profile(cfg, res.x);

    // Compact fourth-order form of u_xx + c u_x: P g = M u with P = I + h^2/12 (D2 + c D1) and
    // M = (1 + c^2 h^2/12) D2 + c D1. Crank-Nicolson on M + mu, Adams-Bashforth on -u^3.
    // Neumann ghosts u_{-1} = u_1, u_n = u_{n-2} fold into the end rows.
    const double a = 1.0 + c * c * h * h / 12.0;
    const Band3 P = Band3::neumann(n, 1.0 / 12.0 - c * h / 24.0, 5.0 / 6.0, 1.0 / 12.0 + c * h / 24.0);
    const Band3 M = Band3::neumann(n, a / (h * h) - c / (2.0 * h), -2.0 * a / (h * h), a / (h * h) + c / (2.0 * h));
    std::vector<double> alo(n), ad(n), aup(n);
    Tridiag lu;
    // A = P (I - dt/2 diag(mu)) - dt/2 M
    auto factor = [&](std::span<const double> m) {
        for (std::size_t i = 0; i < n; ++i) {
            ad[i] = P.d * (1.0 - 0.5 * dt * m[i]) - 0.5 * dt * M.d;
            if (i > 0) alo[i] = P.lo[i] * (1.0 - 0.5 * dt * m[i - 1]) - 0.5 * dt * M.lo[i];
            if (i + 1 < n) aup[i] = P.up[i] * (1.0 - 0.5 * dt * m[i + 1]) - 0.5 * dt * M.up[i];
        }
        lu.factor(alo, ad, aup);
    };
    std::vector<double> cubic(n), cubic_prev(n), w(n), pw(n), mw(n);

    const auto nsteps = static_cast<long>(std::ceil(cfg.t_end / dt - 1e-9));
    const long track_stride = std::max(1L, std::lround(cfg.track_every / dt));
    const long snap_stride = cfg.snapshot_every > 0.0 ? std::max(1L, std::lround(cfg.snapshot_every / dt)) : 0;
    res.track.level = cfg.track_level;
    bool warned = false;
    auto record = [&](double t) {
        int cnt = 0;
        auto pos = level_crossing(res.x, u, cfg.track_level, &cnt);
        if (!pos) return;
        res.track.times.push_back(t);
        res.track.x_fr_num.push_back(*pos);
        res.track.crossings.push_back(cnt);
        if (cfg.frame == Frame::comoving && cfg.c > 0.0) {
            auto p2 = level_crossing(res.x, u, cfg.c / 4.0);
            res.track.x_threshold.push_back(p2 ? *p2 : std::nan(""));
        }
        if (!warned && (*pos - cfg.x_min < 10.0 || cfg.x_max - *pos < 10.0)) {
            res.warnings.push_back("front within 10 units of a boundary at t=" + std::to_string(t));
            warned = true;
        }
    };

    res.snapshots.push_back({0.0, u});
    record(0.0);
    std::vector<double> mu(n), mu_next(n);
    const bool time_dependent = !cfg.frozen_mu && cfg.frame == Frame::lab;
    for (std::size_t i = 0; i < n; ++i) mu[i] = cfg.mu(res.x[i], 0.0);
    if (!time_dependent) factor(mu);
    Snapshot healthy{0.0, u};
    for (long k = 1; k <= nsteps; ++k) {
        if (time_dependent) {
            const double t1 = dt * static_cast<double>(k);
            for (std::size_t i = 0; i < n; ++i) mu_next[i] = cfg.mu(res.x[i], t1);
            factor(mu_next);
        }
        for (std::size_t i = 0; i < n; ++i) cubic[i] = u[i] * u[i] * u[i];
        if (k == 1) cubic_prev = cubic;
        for (std::size_t i = 0; i < n; ++i)
            w[i] = u[i] * (1.0 + 0.5 * dt * mu[i]) - dt * (1.5 * cubic[i] - 0.5 * cubic_prev[i]);
        P.apply(w, pw);
        M.apply(u, mw);
        for (std::size_t i = 0; i < n; ++i) u[i] = pw[i] + 0.5 * dt * mw[i];
        lu.solve(u);
        std::swap(cubic, cubic_prev);
        if (time_dependent) std::swap(mu, mu_next);
        const double t = dt * static_cast<double>(k);
        ++res.steps;
        if (k % 64 == 0 || k == nsteps) {
            for (double v : u)
                if (!std::isfinite(v) || std::abs(v) > 1e6) throw SimulationAbort("simulate: non-finite state", healthy);
            healthy = {t, u};
        }
        if (k % track_stride == 0 || k == nsteps) record(t);
        if (snap_stride > 0 && k % snap_stride == 0 && k != nsteps) res.snapshots.push_back({t, u});
    }
    if (nsteps > 0) res.snapshots.push_back({dt * static_cast<double>(nsteps), u});
    return res;
}

namespace {

double simpson_adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    return simpson_adaptive(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

}  // namespace

std::vector<double> predicted_front_path(double epsilon, tw::Ramp ramp, double x0, std::span<const double> t_grid,
                                         double tol) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("predicted_front_path: epsilon must be positive");
    auto mu = [&](double s) {
        return ramp == tw::Ramp::tanh ? std::tanh(epsilon * s) : std::clamp(epsilon * s, 0.0, 1.0);
    };
    // sigma = s^2 removes the square-root endpoint singularity
    std::function<double(double)> f = [&](double s) { return 4.0 * s * std::sqrt(mu(s * s)); };
    double prev_t = 0.0, acc = 0.0;
    std::vector<std::size_t> order(t_grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t_grid[a] < t_grid[b]; });
    std::vector<double> val(t_grid.size());
    for (std::size_t idx : order) {
        const double t = t_grid[idx];
        if (t < 0.0) throw std::domain_error("predicted_front_path: negative mu before the quench starts");
        acc += integrate(f, std::sqrt(prev_t), std::sqrt(t), tol);
        prev_t = t;
        val[idx] = x0 + acc;
    }
    return val;
}

double linear_ramp_path(double epsilon, double x0, double t) {
    return x0 + 4.0 / 3.0 * std::sqrt(epsilon) * std::pow(t, 1.5);
}

double envelope_velocity(double nu, double mu) {
    if (nu == 0.0) throw std::domain_error("envelope_velocity: nu must be nonzero");
    return -(nu * nu + mu) / nu;
}

EnvelopeMinimum min_envelope_velocity(double mu) {
    if (!(mu > 0.0)) throw std::domain_error("min_envelope_velocity: mu must be positive");
    const double s = std::sqrt(mu);
    return {-s, 2.0 * s};
}

double track_speed(const FrontTrack& track, double t1, double t2) {
    if (track.times.size() < 2 || t1 < track.times.front() || t2 > track.times.back() || !(t2 > t1))
        throw std::invalid_argument("track_speed: interval outside the track");
    const double x1 = interp_linear(track.times, track.x_fr_num, t1);
    const double x2 = interp_linear(track.times, track.x_fr_num, t2);
    return (x2 - x1) / (t2 - t1);
}

QuenchComparison compare_track(const FrontTrack& track, double epsilon, tw::Ramp ramp, double t_end,
                               const QuenchCompareOptions& opts, double default_x0) {
    QuenchComparison out;
    out.x0 = opts.x0.value_or(default_x0);
    out.t = track.times;
    out.x_num = track.x_fr_num;
    out.x_pred = predicted_front_path(epsilon, ramp, out.x0, out.t);
    out.diff.resize(out.t.size());
    for (std::size_t i = 0; i < out.t.size(); ++i) out.diff[i] = out.x_num[i] - out.x_pred[i];
    if (out.t.empty()) return out;

    if (opts.t_transient) {
        out.t_transient = *opts.t_transient;
    } else {
        out.t_transient = out.t.back();
        for (std::size_t i = 0; i < out.t.size(); ++i)
            if (out.x_num[i] - out.x_num.front() >= opts.move) {
                out.t_transient = out.t[i];
                break;
            }
    }
    out.after_transient_nonnegative = true;
    for (std::size_t i = 0; i < out.t.size(); ++i)
        if (out.t[i] >= out.t_transient && out.diff[i] < 0.0) out.after_transient_nonnegative = false;
    // last sign change to nonnegative
    for (std::size_t i = out.t.size(); i-- > 0;) {
        if (out.diff[i] < 0.0) {
            if (i + 1 < out.t.size()) out.t_nonnegative = out.t[i + 1];
            break;
        }
        if (i == 0) out.t_nonnegative = out.t[0];
    }
    std::vector<double> ts, ds;
    out.second_half_min = INFINITY;
    for (std::size_t i = 0; i < out.t.size(); ++i) {
        if (out.t[i] < 0.5 * t_end) continue;
        ts.push_back(out.t[i]);
        ds.push_back(out.diff[i]);
        out.second_half_min = std::min(out.second_half_min, out.diff[i]);
    }
    if (ts.size() >= 2) {
        double mt = 0.0, md = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            mt += ts[i];
            md += ds[i];
        }
        mt /= static_cast<double>(ts.size());
        md /= static_cast<double>(ts.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            sxy += (ts[i] - mt) * (ds[i] - md);
            sxx += (ts[i] - mt) * (ts[i] - mt);
        }
        out.second_half_slope = sxy / sxx;
        out.second_half_nonnegative_growing = out.second_half_min >= 0.0 && out.second_half_slope > 0.0;
    }
    return out;
}

QuenchComparison compare_homogeneous_quench(const SimConfig& cfg, const QuenchCompareOptions& opts) {
    if (cfg.alpha != 0.0 || cfg.frame != Frame::lab || cfg.frozen_mu)
        throw std::invalid_argument("compare_homogeneous_quench: needs the lab frame with alpha = 0");
    if (cfg.ic.kind != InitialKind::small_bump) throw std::invalid_argument("compare_homogeneous_quench: needs a bump");
    const auto res = simulate(cfg);
    return compare_track(res.track, cfg.epsilon, cfg.ramp, cfg.t_end, opts, cfg.ic.center + cfg.ic.width);
}

}  // namespace quench::pde
