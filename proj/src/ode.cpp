#include "quench/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace quench {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
    const OdeField& f;
    std::size_t n;
    std::array<std::vector<double>, 7> k;
    std::vector<double> tmp;

    Stepper(const OdeField& field, std::size_t dim) : f(field), n(dim), tmp(dim) {
        for (auto& v : k) v.resize(dim);
    }

    // One step of size h from (t, y) with k[0] = f(t, y) already set. Writes y5 and the error estimate.
    void step(double t, const std::vector<double>& y, double h, std::vector<double>& y5, std::vector<double>& err) {
        auto stage = [&](int s, double c, std::initializer_list<double> a) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                int j = 0;
                for (double aj : a) acc += aj * k[j++][i];
                tmp[i] = y[i] + h * acc;
            }
            f(t + c * h, tmp, k[s]);
        };
        stage(1, c2, {a21});
        stage(2, c3, {a31, a32});
        stage(3, c4, {a41, a42, a43});
        stage(4, c5, {a51, a52, a53, a54});
        stage(5, 1.0, {a61, a62, a63, a64, a65});
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
        f(t + h, y5, k[6]);
        for (std::size_t i = 0; i < n; ++i)
            err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
    }
};

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool crosses(double g0, double g1, int direction) {
    if (direction > 0) return g0 < 0.0 && g1 >= 0.0;
    if (direction < 0) return g0 > 0.0 && g1 <= 0.0;
    return (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0);
}

}  // namespace

Trajectory integrate_ode(const OdeField& field, std::vector<double> y, double t0, double t1, const OdeOptions& opts,
                         const std::vector<EventSpec>& events) {
    const std::size_t n = y.size();
    Trajectory tr;
    if (!all_finite(y)) throw std::invalid_argument("integrate_ode: non-finite initial state");
    Stepper st(field, n);
    field(t0, y, st.k[0]);
    if (!all_finite(st.k[0])) throw std::invalid_argument("integrate_ode: field not finite at y0");
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double t = t0;
    if (opts.store_steps) {
        tr.t.push_back(t);
        tr.y.push_back(y);
    }
    std::vector<double> g(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) g[e] = events[e].fn(t, y);

    double h;
    if (opts.h0 > 0.0) {
        h = opts.h0;
    } else {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opts.atol + opts.rtol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(st.k[0][i]) / sc);
        }
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, span);
    }
    if (opts.h_max > 0.0) h = std::min(h, opts.h_max);
    std::vector<double> y5(n), err(n), ymid(n), errmid(n);

    while (dir * (t1 - t) > 0.0) {
        if (tr.steps >= opts.max_steps) throw OdeBlowUp("integrate_ode: step budget exhausted", t, y);
        const double remaining = std::abs(t1 - t);
        const bool final_step = h >= remaining;
        const double hs = final_step ? remaining : h;
        if (hs < opts.h_min && !final_step) throw OdeBlowUp("stiff/blow-up: step size underflow", t, y);
        st.step(t, y, dir * hs, y5, err);
        double en = 0.0;
        bool finite = all_finite(y5) && all_finite(st.k[6]);
        if (finite) {
            for (std::size_t i = 0; i < n; ++i) {
                const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                en = std::max(en, std::abs(err[i]) / sc);
            }
        }
        if (!finite || !std::isfinite(en)) {
            h = 0.25 * hs;
            if (h < opts.h_min) throw OdeBlowUp("stiff/blow-up: non-finite state", t, y);
            continue;
        }
        if (en > 1.0) {
            h = hs * std::max(0.2, 0.9 * std::pow(en, -0.2));
            if (h < opts.h_min) throw OdeBlowUp("stiff/blow-up: step size underflow", t, y);
            continue;
        }
        // accepted; check events on [t, t + dir*hs]
        const double tn = final_step ? t1 : t + dir * hs;
        const std::size_t first_new = tr.events.size();
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double gn = events[e].fn(tn, y5);
            if (!crosses(g[e], gn, events[e].direction)) continue;
            // bisection in time with a fresh single step from (t, y)
            double lo = 0.0, hi = hs, glo = g[e];
            std::vector<double> yb = y5;
            while (hi - lo > opts.event_tol) {
                const double mid = 0.5 * (lo + hi);
                Stepper sub(field, n);
                sub.k[0] = st.k[0];
                sub.step(t, y, dir * mid, ymid, errmid);
                const double gm = events[e].fn(t + dir * mid, ymid);
                if (crosses(glo, gm, events[e].direction) || gm == 0.0) {
                    hi = mid;
                    yb = ymid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            tr.events.push_back({e, t + dir * hi, std::move(yb)});
        }
        std::sort(tr.events.begin() + static_cast<std::ptrdiff_t>(first_new), tr.events.end(),
                  [dir](const EventRecord& a, const EventRecord& b) { return dir * (a.t - b.t) < 0.0; });
        double t_hit = tn;
        std::vector<double> y_hit;
        bool stop = false;
        for (std::size_t i = first_new; i < tr.events.size(); ++i) {
            if (events[tr.events[i].index].terminal) {
                stop = true;
                t_hit = tr.events[i].t;
                y_hit = tr.events[i].y;
                tr.events.resize(i + 1);
                break;
            }
        }
        ++tr.steps;
        if (stop) {
            if (opts.store_steps) {
                tr.t.push_back(t_hit);
                tr.y.push_back(y_hit);
            }
            tr.terminated_by_event = true;
            return tr;
        }
        t = tn;
        y.swap(y5);
        st.k[0].swap(st.k[6]);
        for (std::size_t e = 0; e < events.size(); ++e) g[e] = events[e].fn(t, y);
        if (opts.store_steps) {
            tr.t.push_back(t);
            tr.y.push_back(y);
        }
        const double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
        h = hs * std::clamp(fac, 0.2, 5.0);
        if (opts.h_max > 0.0) h = std::min(h, opts.h_max);
    }
    return tr;
}

}  // namespace quench
