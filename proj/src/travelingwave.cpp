#include "quench/travelingwave.hpp"

#include "quench/fit.hpp"
#include "quench/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace quench::tw {

void QuenchParams::validate() const {
    if (!(c >= 0.0 && c < 2.0)) throw std::invalid_argument("QuenchParams: c must lie in [0, 2)");
    if (!(epsilon > 0.0 && epsilon <= 0.1)) throw std::invalid_argument("QuenchParams: epsilon must lie in (0, 0.1]");
}

double QuenchParams::mu(double zeta) const {
    if (ramp == Ramp::tanh) return std::tanh(epsilon * zeta);
    return std::clamp(epsilon * zeta, -1.0, 1.0);
}

double QuenchParams::zeta_of_mu(double m) const {
    if (ramp == Ramp::tanh) return std::atanh(m) / epsilon;
    return m / epsilon;
}

DispersionPoint dispersion_branch_point(double c, double mu) { return {mu - c * c / 4.0, -c / 2.0, c * c / 4.0}; }

EquilibriumEigenpairs equilibrium_eigenpairs(double c, double epsilon) {
    const double sl = std::sqrt(c * c / 4.0 + 1.0);
    const double sr = std::sqrt(c * c / 4.0 + 2.0);
    return {{2.0 * epsilon, c / 2.0 + sl, c / 2.0 - sl}, {-2.0 * epsilon, c / 2.0 + sr, c / 2.0 - sr}};
}

double left_projection_slope(double c, double mu_left) {
    const double disc = c * c / 4.0 - mu_left;
    if (disc < 0.0) throw std::domain_error("left truncation inside the oscillatory region");
    return c / 2.0 + std::sqrt(disc);
}

double right_projection_slope(double c, double mu_right) { return c / 2.0 - std::sqrt(c * c / 4.0 + 2.0 * mu_right); }

double predicted_delay(double c, double epsilon) {
    if (!(c >= 0.0 && c < 2.0)) throw std::invalid_argument("predicted_delay: c must lie in [0, 2)");
    static const double om = specfun::omega0().value;
    const double mc = c * c / 4.0;
    if (epsilon <= 0.0) return mc;
    return mc + om * std::pow(1.0 - std::pow(c, 4) / 16.0, 2.0 / 3.0) * std::pow(epsilon, 2.0 / 3.0);
}

std::size_t FrontDiscretization::nodes(double epsilon) const {
    const double len = 2.0 * halflength_factor / epsilon;
    return std::max(min_nodes, static_cast<std::size_t>(std::llround(len / h)) + 1);
}

namespace {

constexpr double kRoundoff = 16.0 * std::numeric_limits<double>::epsilon();

// Residual of p'' - c p' + p'^2 + mu - e^{2p} on a zeta mesh with ghost-node projection closures.
struct LogFrontSystem {
    const Mesh& mesh;
    std::vector<double> mu;
    double c;
    double nu_left;
    double nu_right;
    double u_plus;

    LogFrontSystem(const QuenchParams& prm, const Mesh& m)
        : mesh(m), mu(m.size()), c(prm.c) {
        for (std::size_t i = 0; i < m.size(); ++i) mu[i] = prm.mu(m[i]);
        nu_left = left_projection_slope(c, mu.front());
        nu_right = right_projection_slope(c, mu.back());
        u_plus = std::sqrt(std::max(mu.back(), 0.0));
    }

    void residual(std::span<const double> p, std::span<double> r) const {
        const std::size_t n = p.size();
        {
            const double h = mesh.spacing(0);
            r[0] = 2.0 * (p[1] - p[0] - h * nu_left) / (h * h) - c * nu_left + nu_left * nu_left + mu[0] -
                   std::exp(2.0 * p[0]);
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hm = mesh.spacing(i - 1), hp = mesh.spacing(i);
            const double s = hm + hp;
            const double d2 = 2.0 * (p[i - 1] / (hm * s) - p[i] / (hm * hp) + p[i + 1] / (hp * s));
            const double d1 = (-hp / (hm * s)) * p[i - 1] + ((hp - hm) / (hm * hp)) * p[i] + (hm / (hp * s)) * p[i + 1];
            r[i] = d2 - c * d1 + d1 * d1 + mu[i] - std::exp(2.0 * p[i]);
        }
        {
            const double h = mesh.spacing(n - 2);
            const double s = nu_right * (1.0 - u_plus * std::exp(-p[n - 1]));
            r[n - 1] = (2.0 * p[n - 2] - 2.0 * p[n - 1] + 2.0 * h * s) / (h * h) - c * s + s * s + mu[n - 1] -
                       std::exp(2.0 * p[n - 1]);
        }
    }

    void jacobian(std::span<const double> p, BandedMatrix& j) const {
        const std::size_t n = p.size();
        {
            const double h = mesh.spacing(0);
            j(0, 0) = -2.0 / (h * h) - 2.0 * std::exp(2.0 * p[0]);
            j(0, 1) = 2.0 / (h * h);
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hm = mesh.spacing(i - 1), hp = mesh.spacing(i);
            const double s = hm + hp;
            const double a1 = -hp / (hm * s), b1 = (hp - hm) / (hm * hp), c1 = hm / (hp * s);
            const double al = 2.0 / (hm * s), ga = 2.0 / (hp * s), be = -(al + ga);
            const double d1 = a1 * p[i - 1] + b1 * p[i] + c1 * p[i + 1];
            const double g = 2.0 * d1 - c;
            j(i, i - 1) = al + g * a1;
            j(i, i) = be + g * b1 - 2.0 * std::exp(2.0 * p[i]);
            j(i, i + 1) = ga + g * c1;
        }
        {
            const double h = mesh.spacing(n - 2);
            const double e = std::exp(-p[n - 1]);
            const double s = nu_right * (1.0 - u_plus * e);
            const double ds = nu_right * u_plus * e;
            j(n - 1, n - 2) = 2.0 / (h * h);
            j(n - 1, n - 1) = -2.0 / (h * h) + (2.0 / h + 2.0 * s - c) * ds - 2.0 * std::exp(2.0 * p[n - 1]);
        }
    }

    // |p| reaches O(1/eps) on the left plateau, so the residual has a roundoff floor ~ eps_mach |p| / h^2.
    void row_scale(std::span<const double> p, std::span<double> w, double tol) const {
        const std::size_t n = p.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double h = i == 0 ? mesh.spacing(0) : (i + 1 == n ? mesh.spacing(n - 2)
                                                                   : std::min(mesh.spacing(i - 1), mesh.spacing(i)));
            w[i] = 1.0 + kRoundoff * std::abs(p[i]) / (h * h * tol);
        }
    }
};

void require_domain(const QuenchParams& params, const Mesh& mesh) {
    const double need = 5.0 / params.epsilon * (1.0 - 1e-12);
    if (-mesh.front() < need || mesh.back() < need)
        throw std::invalid_argument("solve_front: domain half-length must be at least 5/epsilon");
    if (mesh.size() < 2001) throw std::invalid_argument("solve_front: need at least 2001 nodes");
}

// Locate in zeta orientation. Returns node index/fraction of the first crossing of `thr`.
std::optional<std::pair<std::size_t, double>> first_crossing(std::span<const double> u, double thr) {
    if (u.empty()) return std::nullopt;
    if (u[0] >= thr) return std::pair<std::size_t, double>{0, 0.0};
    for (std::size_t i = 1; i < u.size(); ++i) {
        if (u[i] == thr) return std::pair<std::size_t, double>{i, 0.0};
        if (u[i] > thr) return std::pair<std::size_t, double>{i - 1, (thr - u[i - 1]) / (u[i] - u[i - 1])};
    }
    return std::nullopt;
}

FrontSolution assemble(const QuenchParams& params, const Mesh& zmesh, std::vector<double> p, NewtonReport rep) {
    const std::size_t n = p.size();
    LogFrontSystem sys(params, zmesh);
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(p[i]);
    v[0] = sys.nu_left * u[0];
    v[n - 1] = sys.nu_right * (u[n - 1] - sys.u_plus);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = zmesh.spacing(i - 1), hp = zmesh.spacing(i), s = hm + hp;
        const double d1 = (-hp / (hm * s)) * p[i - 1] + ((hp - hm) / (hm * hp)) * p[i] + (hm / (hp * s)) * p[i + 1];
        v[i] = u[i] * d1;
    }
    std::vector<double> mu = sys.mu;

    FrontSolution sol{zmesh, std::move(u), std::move(v), std::move(mu), std::move(p), params, std::move(rep)};
    if (params.c > 0.0) {
        if (auto cr = first_crossing(sol.u, params.c / 4.0)) {
            const auto [i, t] = *cr;
            sol.mu_fr = t == 0.0 ? sol.mu[i] : sol.mu[i] + t * (sol.mu[i + 1] - sol.mu[i]);
            sol.zeta_fr = params.zeta_of_mu(sol.mu_fr);
            sol.has_interface = true;
        }
        return sol;
    }
    // c = 0: report in xi = -zeta
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = -zmesh[n - 1 - i];
    std::reverse(sol.u.begin(), sol.u.end());
    std::reverse(sol.v.begin(), sol.v.end());
    for (double& x : sol.v) x = -x;
    std::reverse(sol.mu.begin(), sol.mu.end());
    std::reverse(sol.log_u.begin(), sol.log_u.end());
    sol.mesh = Mesh(std::move(xs));
    sol.variable = FrontVariable::xi;
    return sol;
}

// zeta-ordered (nodes, log u) of a stored front.
std::pair<std::vector<double>, std::vector<double>> zeta_view(const FrontSolution& f) {
    std::vector<double> z(f.mesh.nodes().begin(), f.mesh.nodes().end());
    std::vector<double> p = f.log_u;
    if (f.variable == FrontVariable::xi) {
        std::reverse(z.begin(), z.end());
        for (double& x : z) x = -x;
        std::reverse(p.begin(), p.end());
    }
    return {std::move(z), std::move(p)};
}

std::vector<double> predict_from(const QuenchParams& params, const Mesh& mesh, const QuenchParams& old,
                                 std::span<const double> zold, std::span<const double> pold) {
    const double mc = params.mu_c();
    const double r = std::pow(old.epsilon / params.epsilon, 2.0 / 3.0);
    std::vector<double> g(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double m = params.mu(mesh[i]);
        double mo = m;
        if (m >= mc) mo = std::min(mc + (m - mc) * r, 1.0 - 1e-15);
        else if (mc == 0.0) mo = std::max(m * r, -1.0 + 1e-15);
        double zo;
        if (mo <= -1.0 || mo >= 1.0 || (old.ramp == Ramp::linear_clipped && std::abs(mo) >= 1.0))
            zo = mesh[i] * params.epsilon / old.epsilon;
        else
            zo = old.zeta_of_mu(mo);
        g[i] = interp_linear(zold, pold, zo);
    }
    return g;
}

FrontSolution solve_zeta(const QuenchParams& params, const Mesh& mesh, std::vector<double> guess,
                         const FrontSolveOptions& opts) {
    LogFrontSystem sys(params, mesh);
    const double tol = opts.newton.tol;
    BvpSystem bs;
    bs.kl = bs.ku = 1;
    bs.residual = [&](std::span<const double> x, std::span<double> r) { sys.residual(x, r); };
    bs.jacobian = [&](std::span<const double> x, BandedMatrix& j) { sys.jacobian(x, j); };
    bs.row_scale = [&](std::span<const double> x, std::span<double> w) { sys.row_scale(x, w, tol); };
    auto [p, rep] = solve_bvp(bs, std::move(guess), opts.newton);
    if (!rep.converged) {
        throw FrontSolveError("solve_front: Newton failed (c=" + std::to_string(params.c) +
                                  ", eps=" + std::to_string(params.epsilon) +
                                  ", residual=" + std::to_string(rep.final_residual_norm) + ")",
                              std::move(rep));
    }
    return assemble(params, mesh, std::move(p), std::move(rep));
}

Mesh zeta_mesh(double epsilon, const FrontDiscretization& disc) {
    const double L = disc.halflength_factor / epsilon;
    return Mesh::uniform(-L, L, disc.nodes(epsilon));
}

}  // namespace

std::vector<double> seed_log_profile(const QuenchParams& params, const Mesh& mesh, double mu_floor) {
    const double zc = params.zeta_of_mu(params.mu_c());
    std::vector<double> p(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double x = -2.0 * (mesh[i] - zc);
        // log((1 + tanh(zeta - zc)) / 2) = -log(1 + e^{-2(zeta - zc)})
        const double lae = x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
        p[i] = -lae + 0.5 * std::log(std::max(params.mu(mesh[i]), mu_floor));
    }
    return p;
}

std::vector<double> predict_log_profile(const QuenchParams& params, const Mesh& mesh, const FrontSolution& prev) {
    auto [z, p] = zeta_view(prev);
    return predict_from(params, mesh, prev.params, z, p);
}

FrontSolution solve_front_on_mesh(const QuenchParams& params, Mesh mesh, const FrontSolution* guess,
                                  const FrontSolveOptions& opts) {
    params.validate();
    require_domain(params, mesh);
    std::vector<double> g = guess ? predict_log_profile(params, mesh, *guess)
                                  : seed_log_profile(params, mesh, opts.seed_mu_floor);
    return solve_zeta(params, mesh, std::move(g), opts);
}

FrontSolution solve_front(const QuenchParams& params, double domain_halflength, std::size_t n,
                          const FrontSolution* guess, const FrontSolveOptions& opts) {
    params.validate();
    if (domain_halflength < 5.0 / params.epsilon * (1.0 - 1e-12))
        throw std::invalid_argument("solve_front: domain half-length must be at least 5/epsilon");
    if (n < 2001) throw std::invalid_argument("solve_front: need at least 2001 nodes");
    return solve_front_on_mesh(params, Mesh::uniform(-domain_halflength, domain_halflength, n), guess, opts);
}

FrontLocation front_location(const FrontSolution& sol) {
    if (!(sol.params.c > 0.0)) throw std::invalid_argument("front_location: requires c > 0");
    if (!sol.report.converged) throw std::invalid_argument("front_location: solution not converged");
    std::vector<double> u = sol.u, mu = sol.mu;
    if (sol.variable == FrontVariable::xi) {
        std::reverse(u.begin(), u.end());
        std::reverse(mu.begin(), mu.end());
    }
    auto cr = first_crossing(u, sol.params.c / 4.0);
    if (!cr) throw NoInterface();
    const auto [i, t] = *cr;
    const double m = t == 0.0 ? mu[i] : mu[i] + t * (mu[i + 1] - mu[i]);
    return {m, sol.params.zeta_of_mu(m)};
}

double amplitude_at_origin(const FrontSolution& sol) {
    return interp_linear(sol.mesh.nodes(), sol.u, 0.0);
}

double min_increment(const FrontSolution& sol) {
    double m = std::numeric_limits<double>::infinity();
    const double sgn = sol.variable == FrontVariable::xi ? -1.0 : 1.0;
    for (std::size_t i = 0; i + 1 < sol.u.size(); ++i) m = std::min(m, sgn * (sol.u[i + 1] - sol.u[i]));
    return m;
}

PlateauCheck plateau_check(const FrontSolution& sol, double delta) {
    PlateauCheck pc{0.0, 0.0};
    const double mc = sol.params.mu_c();
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        if (sol.mu[i] <= mc - delta) pc.max_u_below = std::max(pc.max_u_below, sol.u[i]);
        if (sol.mu[i] >= mc + delta)
            pc.max_dev_above = std::max(pc.max_dev_above, std::abs(sol.u[i] - std::sqrt(sol.mu[i])));
    }
    return pc;
}

double stationary_amplitude_exponent(std::span<const AmplitudeSample> samples) {
    std::vector<double> e, u;
    for (const auto& s : samples) {
        if (!s.converged || !(s.epsilon > 0.0) || !(s.u0 > 0.0)) continue;
        e.push_back(s.epsilon);
        u.push_back(s.u0);
    }
    if (e.size() < 4) throw std::invalid_argument("stationary amplitude fit: fewer than 4 usable points");
    return fit_power_law(e, u).exponent;
}

FrontSolution front_from_entry(double c, const ContinuationEntry& e, const FrontDiscretization& disc) {
    QuenchParams prm{c, std::exp(e.param), Ramp::tanh};
    return assemble(prm, zeta_mesh(prm.epsilon, disc), e.solution, e.report);
}

FrontBranch continue_front_in_epsilon(double c, double eps_start, double eps_end, const FrontDiscretization& disc,
                                      double step_ln, std::vector<double> stops, const FrontSolveOptions& opts) {
    if (!(eps_start > 0.0) || !(eps_end > 0.0)) throw std::invalid_argument("continuation: epsilon must be positive");
    QuenchParams p0{c, eps_start, Ramp::tanh};
    p0.validate();
    const Mesh m0 = zeta_mesh(eps_start, disc);
    FrontSolution f0 = solve_front_on_mesh(p0, m0, nullptr, opts);

    ContinuationEntry start;
    start.param = std::log(eps_start);
    start.solution = f0.variable == FrontVariable::xi ? zeta_view(f0).second : f0.log_u;
    start.report = f0.report;

    NaturalProblem prob;
    prob.predict = [&](double lp, std::span<const ContinuationEntry> hist) {
        const auto& a = hist.back();
        QuenchParams old{c, std::exp(a.param), Ramp::tanh};
        QuenchParams cur{c, std::exp(lp), Ramp::tanh};
        const Mesh mo = zeta_mesh(old.epsilon, disc);
        const Mesh mn = zeta_mesh(cur.epsilon, disc);
        return predict_from(cur, mn, old, mo.nodes(), a.solution);
    };
    prob.correct = [&](double lp, std::vector<double> guess) {
        QuenchParams cur{c, std::exp(lp), Ramp::tanh};
        const Mesh mn = zeta_mesh(cur.epsilon, disc);
        LogFrontSystem sys(cur, mn);
        const double tol = opts.newton.tol;
        BvpSystem bs;
        bs.residual = [&](std::span<const double> x, std::span<double> r) { sys.residual(x, r); };
        bs.jacobian = [&](std::span<const double> x, BandedMatrix& j) { sys.jacobian(x, j); };
        bs.row_scale = [&](std::span<const double> x, std::span<double> w) { sys.row_scale(x, w, tol); };
        return solve_bvp(bs, std::move(guess), opts.newton);
    };
    prob.accept = [](const ContinuationEntry& e) {
        for (std::size_t i = 0; i + 1 < e.solution.size(); ++i)
            if (std::exp(e.solution[i + 1]) - std::exp(e.solution[i]) < -1e-9) return false;
        return true;
    };
    prob.diagnose = [&](ContinuationEntry& e) {
        const double eps = std::exp(e.param);
        e.diagnostics["epsilon"] = eps;
        const Mesh mn = zeta_mesh(eps, disc);
        if (c > 0.0) {
            std::vector<double> u(e.solution.size());
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(e.solution[i]);
            if (auto cr = first_crossing(u, c / 4.0)) {
                const auto [i, t] = *cr;
                QuenchParams q{c, eps, Ramp::tanh};
                const double mi = q.mu(mn[i]);
                const double mfr = t == 0.0 ? mi : mi + t * (q.mu(mn[i + 1]) - mi);
                e.diagnostics["mu_fr"] = mfr;
                e.diagnostics["zeta_fr"] = q.zeta_of_mu(mfr);
            }
            e.diagnostics["mu_fr_pred"] = predicted_delay(c, eps);
        } else {
            e.diagnostics["u0"] = std::exp(interp_linear(mn.nodes(), e.solution, 0.0));
        }
        e.diagnostics["residual"] = e.report.final_residual_norm;
        e.diagnostics["iterations"] = e.report.iterations;
    };

    // segments end at each requested stop so those epsilons appear exactly
    std::sort(stops.begin(), stops.end(), [&](double a, double b) {
        return eps_end < eps_start ? a > b : a < b;
    });
    std::vector<double> targets;
    for (double s : stops) {
        const bool inside = eps_end < eps_start ? (s < eps_start && s > eps_end) : (s > eps_start && s < eps_end);
        if (inside) targets.push_back(std::log(s));
    }
    targets.push_back(std::log(eps_end));

    ContinuationOptions copts;
    copts.newton = opts.newton;
    copts.max_step = std::abs(step_ln);

    FrontBranch out;
    out.raw.direction = eps_end < eps_start ? -1 : 1;
    out.raw.entries.push_back(std::move(start));
    out.fronts.push_back(std::move(f0));
    const double step = std::abs(step_ln);
    for (double tgt : targets) {
        ContinuationEntry seg_start = std::move(out.raw.entries.back());
        out.raw.entries.pop_back();
        auto br = continue_branch(prob, std::move(seg_start), tgt, step, copts);
        for (auto& e : br.entries) out.raw.entries.push_back(std::move(e));
        for (double s : br.step_history) out.raw.step_history.push_back(s);
        if (br.stalled) {
            out.stalled = out.raw.stalled = true;
            break;
        }
        out.fronts.push_back(front_from_entry(c, out.raw.entries.back(), disc));
    }
    return out;
}

}  // namespace quench::tw
