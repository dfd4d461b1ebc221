#include "quench/painleve.hpp"

#include "quench/ode.hpp"
#include "quench/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quench::pii {

double hm_left_series(double eta) {
    if (!(eta < 0.0)) throw std::domain_error("hm_left_series: eta must be negative");
    const double e3 = eta * eta * eta;
    return std::sqrt(-eta / 2.0) * (1.0 + 1.0 / (8.0 * e3) - 73.0 / (128.0 * e3 * e3));
}

HMSolution solve_hastings_mcleod(double L_minus, double L_plus, std::size_t n, const NewtonOptions& opts) {
    if (L_minus < 8.0 || L_plus < 6.0 || n < 4001)
        throw std::invalid_argument("solve_hastings_mcleod: need L_minus >= 8, L_plus >= 6, n >= 4001");
    Mesh mesh = Mesh::uniform(-L_minus, L_plus, n);
    const double h = mesh.spacing(0);
    const auto ai = specfun::airy(L_plus);
    const double k = ai.derivative / ai.value;
    const double wl = hm_left_series(-L_minus);
    const auto x = mesh.nodes();

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::max(std::sqrt(std::max(-x[i] / 2.0, 0.0)), specfun::airy(x[i]).value);

    BvpSystem sys;
    sys.residual = [&](std::span<const double> v, std::span<double> r) {
        r[0] = v[0] - wl;
        for (std::size_t i = 1; i + 1 < n; ++i)
            r[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h) - x[i] * v[i] - 2.0 * v[i] * v[i] * v[i];
        const std::size_t m = n - 1;
        const double ghost = v[m - 1] + 2.0 * h * k * v[m];
        r[m] = (ghost - 2.0 * v[m] + v[m - 1]) / (h * h) - x[m] * v[m] - 2.0 * v[m] * v[m] * v[m];
    };
    sys.jacobian = [&](std::span<const double> v, BandedMatrix& j) {
        j(0, 0) = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            j(i, i - 1) = 1.0 / (h * h);
            j(i, i) = -2.0 / (h * h) - x[i] - 6.0 * v[i] * v[i];
            j(i, i + 1) = 1.0 / (h * h);
        }
        const std::size_t m = n - 1;
        j(m, m - 1) = 2.0 / (h * h);
        j(m, m) = -2.0 / (h * h) + 2.0 * k / h - x[m] - 6.0 * v[m] * v[m];
    };
    // the second difference of an O(1) profile carries roundoff ~ eps_mach |w| / h^2
    const double tol = opts.tol;
    sys.row_scale = [&](std::span<const double> v, std::span<double> s) {
        for (std::size_t i = 0; i < n; ++i)
            s[i] = 1.0 + 16.0 * std::numeric_limits<double>::epsilon() *
                             (4.0 * std::abs(v[i]) / (h * h) + std::abs(x[i] * v[i]) + 2.0 * std::pow(std::abs(v[i]), 3)) /
                             tol;
    };
    auto [sol, rep] = solve_bvp(sys, std::move(w), opts);
    const double cap = 10.0 * std::sqrt(L_minus / 2.0);
    for (double v : sol)
        if (!std::isfinite(v) || std::abs(v) > cap) throw HMSolveError("left separatrix missed", rep);
    if (!rep.converged) throw HMSolveError("solve_hastings_mcleod: Newton divergence", rep);

    HMSolution out{mesh, std::move(sol), std::vector<double>(n), std::move(rep)};
    auto& v = out.w;
    auto& d = out.wprime;
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d[n - 1] = k * v[n - 1];
    std::vector<double> r(n);
    sys.residual(v, r);
    // the right row times h/2 is the one-sided Robin defect
    out.boundary_residuals = {std::abs(r[0]), 0.5 * h * std::abs(r[n - 1])};
    return out;
}

double evaluate(const HMSolution& sol, double eta) {
    const auto& m = sol.mesh;
    if (eta <= m.front()) return sol.w.front();
    if (eta >= m.back()) return sol.w.back();
    const std::size_t i = m.locate(eta);
    const double h = m.spacing(i);
    const double t = (eta - m[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * sol.w[i] + h10 * h * sol.wprime[i] + h01 * sol.w[i + 1] + h11 * h * sol.wprime[i + 1];
}

namespace {

void pii_field(double eta, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = eta * y[0] + 2.0 * y[0] * y[0] * y[0];
}

}  // namespace

double shoot_back_from_right(const HMSolution& sol, double eta_stop) {
    OdeOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    auto tr = integrate_ode(pii_field, {sol.w.back(), sol.wprime.back()}, sol.mesh.back(), eta_stop, o);
    return tr.y.back()[0];
}

TailClassification classify_airy_tail(double k, double L_minus, double L_plus) {
    if (!std::isfinite(k)) throw std::invalid_argument("classify_airy_tail: k must be finite");
    if (!(L_minus > 0.0)) throw std::invalid_argument("classify_airy_tail: L_minus must be positive");
    TailClassification out{TailClass::oscillatory_decay};
    if (k == 0.0) return out;
    if (std::abs(k) == 1.0) {
        const auto hm = solve_hastings_mcleod(std::max(L_minus, 8.0), std::max(L_plus, 6.0));
        out.kind = TailClass::separatrix;
        out.w_end = k * evaluate(hm, -L_minus);
        return out;
    }
    const auto ai = specfun::airy(L_plus);
    OdeOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-13;
    EventSpec pole{[](double, std::span<const double> y) { return std::abs(y[0]) - 1e3; }, true, +1};
    Trajectory tr;
    try {
        tr = integrate_ode(pii_field, {k * ai.value, k * ai.derivative}, L_plus, -L_minus, o, {pole});
    } catch (const OdeBlowUp& e) {
        throw std::runtime_error(std::string("classify_airy_tail: integration stalled: ") + e.what());
    }
    if (tr.terminated_by_event) {
        out.kind = TailClass::pole;
        out.pole_position = tr.events.back().t;
        out.bracket = {tr.t.size() >= 2 ? tr.t[tr.t.size() - 2] : L_plus, out.pole_position};
        out.w_end = tr.y.back()[0];
        return out;
    }
    for (std::size_t i = 1; i < tr.y.size(); ++i)
        if ((tr.y[i - 1][0] > 0.0) != (tr.y[i][0] > 0.0)) ++out.sign_changes;
    out.w_end = tr.y.back()[0];
    if (out.sign_changes < 2)
        throw std::runtime_error("classify_airy_tail: neither pole nor oscillation on the window; extend L_minus");
    return out;
}

PotentialCertificate certify_potential_positive(const HMSolution& sol) {
    const auto x = sol.mesh.nodes();
    double wmax = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        wmax = std::max(wmax, std::abs(sol.w[i]));
        dmax = std::max(dmax, std::abs(sol.wprime[i]));
    }
    PotentialCertificate c;
    c.grid_spacing = sol.mesh.max_spacing();
    c.margin_bound = 0.5 * c.grid_spacing * (1.0 + 12.0 * wmax * dmax);
    c.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i] + 6.0 * sol.w[i] * sol.w[i];
        if (v < c.min_value) {
            c.min_value = v;
            c.argmin = x[i];
        }
    }
    c.passed = c.min_value - c.margin_bound > 0.0;
    return c;
}

LowerBoundCheck certify_lower_bound(const HMSolution& sol) {
    const auto x = sol.mesh.nodes();
    double dmax = 0.0;
    for (double d : sol.wprime) dmax = std::max(dmax, std::abs(d));
    LowerBoundCheck out;
    out.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < x.size() && x[i] < 0.0; ++i) {
        const double b = std::min(x[i + 1], 0.0);
        const double h = b - x[i];
        // sqrt(-eta/6) is largest at the left end of the cell
        const double lo = std::min(sol.w[i], sol.w[i + 1]) - 0.5 * h * dmax;
        const double gap = lo - std::sqrt(-x[i] / 6.0);
        if (gap < out.min_gap) {
            out.min_gap = gap;
            out.worst_eta = x[i];
        }
    }
    out.passed = out.min_gap > 0.0;
    return out;
}

Spectrum linearization_ground_state(const HMSolution& sol, std::size_t k) {
    if (!sol.mesh.is_uniform()) throw std::invalid_argument("linearization_ground_state: needs a uniform mesh");
    const auto x = sol.mesh.nodes();
    const std::size_t n = x.size();
    std::vector<double> q(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) q[i - 1] = -(x[i] + 6.0 * sol.w[i] * sol.w[i]);
    return dirichlet_schrodinger(sol.mesh.spacing(0), q, k, OperatorTag::PIILinearization);
}

double inner_profile(const HMSolution& sol, double epsilon, double xi) {
    const double s = std::cbrt(epsilon);
    return std::sqrt(2.0) * s * evaluate(sol, s * xi);
}

InnerComparison compare_inner_expansion(const tw::FrontSolution& front, const HMSolution& sol) {
    if (front.variable != tw::FrontVariable::xi || front.params.c != 0.0)
        throw std::invalid_argument("compare_inner_expansion: needs a c = 0 front");
    const double eps = front.params.epsilon;
    InnerComparison out;
    out.window = 1.0 / std::cbrt(eps);
    if (out.window * std::cbrt(eps) > sol.mesh.back() || -out.window * std::cbrt(eps) < sol.mesh.front())
        throw std::invalid_argument("compare_inner_expansion: Hastings-McLeod window too short");
    for (std::size_t i = 0; i < front.u.size(); ++i) {
        const double x = front.mesh[i];
        if (std::abs(x) > out.window) continue;
        out.deviation = std::max(out.deviation, std::abs(front.u[i] - inner_profile(sol, eps, x)));
    }
    out.scaled = out.deviation / std::pow(eps, 2.0 / 3.0);
    out.u0 = tw::amplitude_at_origin(front);
    return out;
}

}  // namespace quench::pii
