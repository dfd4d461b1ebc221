#include "quench/folddelay.hpp"

#include "quench/fit.hpp"
#include "quench/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace quench::fold {

double slow_rate(double c, double theta) {
    const double m = theta + c * c / 4.0;
    return 1.0 - m * m;
}

double slow_manifold_start(double c, double epsilon, double theta0) {
    if (!(theta0 < 0.0)) throw std::invalid_argument("slow manifold start needs theta0 < 0");
    return std::sqrt(-theta0) + epsilon * slow_rate(c, theta0) / (4.0 * -theta0);
}

namespace {

void check_args(double c, double epsilon, double delta) {
    if (!(c > 0.0 && c < 2.0)) throw std::invalid_argument("fold passage: c must lie in (0, 2)");
    if (!(epsilon > 0.0 && epsilon <= 1e-2)) throw std::invalid_argument("fold passage: epsilon must lie in (0, 1e-2]");
    if (!(delta > 0.0 && (delta <= 0.5 || std::isinf(delta))))
        throw std::invalid_argument("fold passage: delta must lie in (0, 0.5] or be the blow-up section");
}

// Two-chart passage for a fold field in (x, y): plain chart until x crosses the switch, then s = arctan x.
struct Passage {
    OdeField field;          // (x, y)
    double sign;             // fall direction
    double section;          // finite target value of x, or infinity for the blow-up
    double y_limit;          // y value that signals saturation
    bool y_increasing;
};

FoldDelayRecord integrate_passage(const Passage& p, std::vector<double> y0, double t_end, const FoldOptions& opts,
                                  FoldDelayRecord rec) {
    OdeOptions o;
    o.rtol = opts.rtol;
    o.atol = opts.atol;
    o.store_steps = false;
    const bool blow = std::isinf(p.section);
    if (blow && !opts.compact_chart) throw std::invalid_argument("fold passage: the blow-up section needs the compact chart");
    const double sw = p.sign * std::abs(opts.chart_switch);
    // first chart: stop at the section or the chart switch, whichever comes first
    std::vector<EventSpec> ev;
    const bool switch_first = opts.compact_chart && (blow || p.sign * (sw - p.section) < 0.0);
    const double stop1 = switch_first ? sw : p.section;
    ev.push_back({[stop1](double, std::span<const double> y) { return y[0] - stop1; }, true, 0});
    const double yl = p.y_limit;
    const bool inc = p.y_increasing;
    ev.push_back({[yl, inc](double, std::span<const double> y) { return inc ? y[1] - yl : yl - y[1]; }, true, +1});
    auto tr = integrate_ode(p.field, std::move(y0), 0.0, t_end, o, ev);
    rec.steps = tr.steps;
    if (!tr.terminated_by_event || tr.events.back().index != 0)
        throw std::runtime_error("fold passage: section not reached before theta saturated");
    const auto& e1 = tr.events.back();
    if (!switch_first) {
        rec.theta_exit = e1.y[1];
        return rec;
    }
    rec.compact_chart_used = true;
    // second chart: s = arctan x, s' = x'/(1 + x^2)
    const OdeField& f = p.field;
    OdeField g = [&f](double t, std::span<const double> y, std::span<double> dy) {
        const double x = std::tan(y[0]);
        double buf[2];
        const double in[2] = {x, y[1]};
        f(t, std::span<const double>(in, 2), std::span<double>(buf, 2));
        const double c2 = std::cos(y[0]) * std::cos(y[0]);
        // x' = q(x, y) is quadratic in x; multiply by cos^2 to stay bounded at s = +-pi/2
        dy[0] = buf[0] * c2;
        dy[1] = buf[1];
    };
    const double s_target = blow ? p.sign * std::numbers::pi / 2.0 : std::atan(p.section);
    std::vector<EventSpec> ev2{{[s_target](double, std::span<const double> y) { return y[0] - s_target; }, true, 0}};
    auto tr2 = integrate_ode(g, {std::atan(e1.y[0]), e1.y[1]}, e1.t, e1.t + t_end, o, ev2);
    rec.steps += tr2.steps;
    if (!tr2.terminated_by_event) throw std::runtime_error("fold passage: compact chart did not reach the section");
    rec.theta_exit = tr2.events.back().y[1];
    return rec;
}

}  // namespace

FoldDelayRecord run_fold_passage(double c, double epsilon, double delta, const FoldOptions& opts) {
    check_args(c, epsilon, delta);
    Passage p;
    p.field = [c, epsilon](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = -y[0] * y[0] - y[1];
        dy[1] = epsilon * slow_rate(c, y[1]);
    };
    p.sign = -1.0;
    p.section = std::isinf(delta) ? delta : -delta;
    p.y_limit = (1.0 - c * c / 4.0) * (1.0 - 1e-9);
    p.y_increasing = true;
    const double z0 = slow_manifold_start(c, epsilon, opts.theta0) + opts.z_offset;
    FoldDelayRecord rec{c, epsilon, 0.0, delta};
    const double t_end = 50.0 / epsilon;
    return integrate_passage(p, {z0, opts.theta0}, t_end, opts, rec);
}

OdeField NormalFormScaling::field(double c, double epsilon) const {
    const double a3 = x_factor * x_factor * x_factor;
    const double yf = y_factor;
    return [=](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[0] * y[0] - y[1];
        dy[1] = -epsilon * slow_rate(c, -yf * y[1]) / a3;
    };
}

NormalFormScaling normal_form_transform(double c) {
    const double g = 1.0 - std::pow(c, 4) / 16.0;
    if (!(g > 0.0)) throw std::invalid_argument("normal_form_transform: c must lie in [0, 2)");
    const double a = std::cbrt(g);
    return {a, a * a, 1.0 / a};
}

FoldDelayRecord run_normal_form_passage(double c, double epsilon, double delta, const FoldOptions& opts) {
    check_args(c, epsilon, delta);
    const auto nf = normal_form_transform(c);
    Passage p;
    p.field = nf.field(c, epsilon);
    p.sign = +1.0;
    p.section = std::isinf(delta) ? delta : delta / nf.x_factor;
    p.y_limit = -(1.0 - c * c / 4.0) * (1.0 - 1e-9) / nf.y_factor;
    p.y_increasing = false;
    FoldOptions o = opts;
    o.chart_switch = std::abs(opts.chart_switch) / nf.x_factor;
    const double z0 = slow_manifold_start(c, epsilon, opts.theta0) + opts.z_offset;
    FoldDelayRecord rec{c, epsilon, 0.0, delta};
    const double t_end = 50.0 / epsilon;
    rec = integrate_passage(p, {-z0 / nf.x_factor, -opts.theta0 / nf.y_factor}, t_end, o, rec);
    rec.theta_exit = -nf.y_factor * rec.theta_exit;
    return rec;
}

DelayFit fit_delay_scaling(std::span<const FoldDelayRecord> records) {
    if (records.size() < 5) throw std::invalid_argument("fit_delay_scaling: need at least 5 records");
    const double c = records.front().c;
    std::vector<double> e, t;
    for (const auto& r : records) {
        if (r.c != c) throw std::invalid_argument("fit_delay_scaling: records must share c");
        e.push_back(r.epsilon);
        t.push_back(r.theta_exit);
    }
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    if (std::log10(*hi / *lo) < 1.5) throw std::invalid_argument("fit_delay_scaling: epsilon must span 1.5 decades");
    const auto f = fit_power_law(e, t);
    const double pred = specfun::omega0().value * std::pow(1.0 - std::pow(c, 4) / 16.0, 2.0 / 3.0);
    return {f.exponent, f.prefactor, pred, std::abs(f.prefactor - pred) / pred};
}

}  // namespace quench::fold
