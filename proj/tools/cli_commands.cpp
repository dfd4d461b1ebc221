#include "cli_commands.hpp"

#include "quench/fit.hpp"
#include "quench/folddelay.hpp"
#include "quench/painleve.hpp"
#include "quench/pdesim.hpp"
#include "quench/specfun.hpp"
#include "quench/travelingwave.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <thread>

namespace quench::cli {

namespace {

using json = nlohmann::ordered_json;

const double kNaN = std::nan("");

json report_json(const NewtonReport& r) {
    json j;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["final_residual_norm"] = r.final_residual_norm;
    j["damping_history"] = r.damping_history;
    return j;
}

std::vector<double> log_spaced(double lo, double hi, int points) {
    if (points == 1 || lo == hi) return std::vector<double>(static_cast<std::size_t>(points), lo);
    std::vector<double> e;
    for (int i = 0; i < points; ++i)
        e.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1)));
    return e;
}

void check_c(double c, bool allow_zero) {
    if (!((allow_zero ? c >= 0.0 : c > 0.0) && c < 2.0))
        throw UsageError(allow_zero ? "--c must lie in [0, 2)" : "--c must lie in (0, 2)");
}

tw::FrontSolution compute_front(double c, double eps, double eps_start, const tw::FrontDiscretization& disc,
                                double step, std::vector<ContinuationEntry>* history = nullptr) {
    if (eps >= eps_start) {
        tw::QuenchParams p{c, eps, tw::Ramp::tanh};
        return tw::solve_front(p, disc.halflength_factor / eps, disc.nodes(eps));
    }
    auto br = tw::continue_front_in_epsilon(c, eps_start, eps, disc, step);
    if (history) *history = br.raw.entries;
    if (br.stalled) {
        const auto& last = br.raw.entries.back();
        throw tw::FrontSolveError("continuation stalled at eps=" + fmt(std::exp(last.param)), last.report);
    }
    return std::move(br.fronts.back());
}

}  // namespace

ExitCode cmd_front(const FrontArgs& a, OutputSet& out, const KeyValues& meta, std::ostream& log) {
    check_c(a.c, true);
    if (!(a.eps > 0.0 && a.eps <= 0.1)) throw UsageError("--eps must lie in (0, 0.1]");
    if (!(a.h > 0.0) || !(a.halflength_factor >= 5.0)) throw UsageError("need --dx > 0 and --halflength-factor >= 5");
    tw::FrontDiscretization disc;
    disc.h = a.h;
    disc.halflength_factor = a.halflength_factor;
    std::vector<ContinuationEntry> hist;
    std::optional<tw::FrontSolution> solved;
    try {
        solved = compute_front(a.c, a.eps, a.eps_start, disc, a.step, &hist);
    } catch (const tw::FrontSolveError& e) {
        json j;
        j["error"] = e.what();
        j["report"] = report_json(e.report());
        write_json(out.add("front_failure.json"), j);
        throw;
    }
    const tw::FrontSolution& f = *solved;

    const bool stationary = f.variable == tw::FrontVariable::xi;
    std::optional<pii::HMSolution> hm;
    if (stationary) hm = pii::solve_hastings_mcleod();

    {
        std::vector<std::string> cols{"zeta", "xi", "mu", "u", "v_zeta"};
        if (hm) cols.push_back("hm_inner");
        CsvWriter w(out.add("front_profile.csv"), meta, cols);
        for (std::size_t i = 0; i < f.u.size(); ++i) {
            const double x = f.mesh[i];
            const double zeta = stationary ? -x : x;
            const double vz = stationary ? -f.v[i] : f.v[i];
            std::vector<Cell> row{zeta, -zeta, f.mu[i], f.u[i], vz};
            if (hm) row.emplace_back(std::abs(x) * std::cbrt(a.eps) <= 1.0 ? pii::inner_profile(*hm, a.eps, x) : kNaN);
            w.row(row);
        }
    }
    {
        std::vector<std::string> cols{"c", "epsilon", "mu_fr", "zeta_fr", "mu_fr_pred", "residual", "iterations"};
        if (hm) cols.insert(cols.end(), {"u0", "hm_deviation", "hm_deviation_over_eps23"});
        CsvWriter w(out.add("front_diagnostics.csv"), meta, cols);
        double mu_fr = kNaN, zeta_fr = kNaN, pred = kNaN;
        if (!stationary) {
            try {
                const auto loc = tw::front_location(f);
                mu_fr = loc.mu_fr;
                zeta_fr = loc.zeta_fr;
            } catch (const tw::NoInterface&) {
                log << "warning: profile never crosses c/4\n";
            }
            pred = tw::predicted_delay(a.c, a.eps);
        }
        std::vector<Cell> row{a.c, a.eps, mu_fr, zeta_fr, pred, f.report.final_residual_norm, f.report.iterations};
        if (hm) {
            const auto cmp = pii::compare_inner_expansion(f, *hm);
            row.insert(row.end(), {cmp.u0, cmp.deviation, cmp.scaled});
            log << "u0=" << fmt(cmp.u0) << " hm_deviation=" << fmt(cmp.deviation)
                << " (over eps^{2/3}: " << fmt(cmp.scaled) << ")\n";
        } else {
            log << "mu_fr=" << fmt(mu_fr) << " mu_fr_pred=" << fmt(pred) << " zeta_fr=" << fmt(zeta_fr) << "\n";
        }
        w.row(row);
    }
    if (!hist.empty()) {
        CsvWriter w(out.add("front_branch.csv"), meta, {"epsilon", "mu_fr", "u0", "residual", "iterations"});
        for (const auto& e : hist) {
            auto get = [&](const char* k) { return e.diagnostics.count(k) ? e.diagnostics.at(k) : kNaN; };
            w.row({std::exp(e.param), get("mu_fr"), get("u0"), e.report.final_residual_norm, e.report.iterations});
        }
    }
    return kOk;
}

ExitCode cmd_delay_sweep(const SweepArgs& a, OutputSet& out, const KeyValues& meta, std::ostream& log) {
    check_c(a.c, false);
    const int points = a.points > 0 ? a.points : (a.fold ? 7 : 10);
    const auto [lo, hi] = parse_range(a.eps_decade.empty() ? (a.fold ? "1e-5:1e-3" : "2.5e-4:2.5e-3") : a.eps_decade);
    if (a.jobs < 1) throw UsageError("--jobs must be at least 1");
    const auto eps = log_spaced(lo, hi, points);
    std::vector<double> xs, ys;
    json summary;
    summary["c"] = a.c;
    summary["mode"] = a.fold ? "fold" : "bvp";
    std::size_t converged = 0;

    if (a.fold) {
        if (hi > 1e-2) throw UsageError("fold sweep needs eps <= 1e-2");
        double delta = fold::kBlowUpSection;
        if (a.delta != "inf") {
            delta = parse_list(a.delta).at(0);
            if (!(delta > 0.0 && delta <= 0.5)) throw UsageError("--delta must lie in (0, 0.5] or be inf");
        }
        std::vector<std::optional<fold::FoldDelayRecord>> recs(eps.size());
        std::vector<std::string> errors(eps.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < eps.size(); i = next++) {
                try {
                    recs[i] = fold::run_fold_passage(a.c, eps[i], delta);
                } catch (const std::runtime_error& e) {
                    errors[i] = e.what();
                }
            }
        };
        std::vector<std::jthread> pool;
        for (int j = 1; j < std::min<int>(a.jobs, static_cast<int>(eps.size())); ++j) pool.emplace_back(worker);
        worker();
        pool.clear();
        CsvWriter w(out.add("delay_sweep.csv"), meta,
                    {"epsilon", "theta_exit", "theta_over_eps23", "steps", "compact_chart", "converged"});
        std::vector<fold::FoldDelayRecord> good;
        for (std::size_t i = 0; i < eps.size(); ++i) {
            if (recs[i]) {
                const auto& r = *recs[i];
                w.row({r.epsilon, r.theta_exit, r.theta_exit / std::pow(r.epsilon, 2.0 / 3.0), r.steps,
                       r.compact_chart_used, true});
                good.push_back(r);
                xs.push_back(r.epsilon);
                ys.push_back(r.theta_exit);
            } else {
                w.row({eps[i], kNaN, kNaN, 0L, false, false});
                log << "eps=" << fmt(eps[i]) << " failed: " << errors[i] << "\n";
            }
        }
        converged = good.size();
    } else {
        if (hi > a.eps_start) throw UsageError("BVP sweep needs eps <= --eps-start");
        tw::FrontDiscretization disc;
        disc.h = a.h;
        disc.halflength_factor = a.halflength_factor;
        auto br = tw::continue_front_in_epsilon(a.c, a.eps_start, lo, disc, 0.2231435513142097, eps);
        if (br.stalled) log << "continuation stalled; remaining points marked unconverged\n";
        CsvWriter w(out.add("delay_sweep.csv"), meta,
                    {"epsilon", "mu_fr", "delay", "mu_fr_pred", "zeta_fr", "residual", "iterations", "converged"});
        const double mc = a.c * a.c / 4.0;
        for (double e : eps) {
            const ContinuationEntry* hit = nullptr;
            for (const auto& en : br.raw.entries)
                if (std::abs(en.param - std::log(e)) < 1e-9 && en.report.converged) hit = &en;
            if (!hit || !hit->diagnostics.count("mu_fr")) {
                w.row({e, kNaN, kNaN, tw::predicted_delay(a.c, e), kNaN, kNaN, 0, false});
                continue;
            }
            const auto& d = hit->diagnostics;
            const double mfr = d.at("mu_fr");
            w.row({e, mfr, mfr - mc, d.at("mu_fr_pred"), d.at("zeta_fr"), hit->report.final_residual_norm,
                   hit->report.iterations, true});
            ++converged;
            if (mfr - mc > 0.0) {
                xs.push_back(e);
                ys.push_back(mfr - mc);
            }
        }
    }

    const double predicted = specfun::omega0().value * std::pow(1.0 - std::pow(a.c, 4) / 16.0, 2.0 / 3.0);
    summary["points"] = points;
    summary["converged"] = converged;
    if (xs.size() >= 2 && xs.front() != xs.back()) {
        const auto f = fit_power_law(xs, ys);
        summary["fit"] = {{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"r2", f.r2},
                          {"predicted_exponent", 2.0 / 3.0}, {"predicted_prefactor", predicted}};
        log << "slope=" << fmt(f.exponent) << " prefactor=" << fmt(f.prefactor) << " (predicted " << fmt(predicted)
            << ")\n";
    } else {
        summary["fit"] = nullptr;
        summary["fit_refused"] = "need at least two distinct converged points";
        log << "fit refused: need at least two distinct converged points\n";
    }
    write_json(out.add("delay_fit.json"), summary);
    return 5 * converged >= 4 * eps.size() ? kOk : kSolverFailure;
}

ExitCode cmd_painleve(const PainleveArgs& a, OutputSet& out, const KeyValues& meta, std::ostream& log) {
    if (a.window.size() != 2) throw UsageError("--window takes L_minus L_plus");
    const double lm = a.window[0], lp = a.window[1];
    if (lm < 8.0 || lp < 6.0 || a.n < 4001) throw UsageError("need L_minus >= 8, L_plus >= 6 and n >= 4001");
    std::vector<double> ks;
    if (!a.classify.empty()) ks = parse_list(a.classify);

    const auto sol = pii::solve_hastings_mcleod(lm, lp, a.n);
    {
        CsvWriter w(out.add("hm_solution.csv"), meta, {"eta", "w", "wprime"});
        for (std::size_t i = 0; i < sol.w.size(); ++i) w.row({sol.mesh[i], sol.w[i], sol.wprime[i]});
    }
    const double w0 = pii::evaluate(sol, 0.0);
    const auto pot = pii::certify_potential_positive(sol);
    const auto lb = pii::certify_lower_bound(sol);
    const double max_wp = *std::max_element(sol.wprime.begin(), sol.wprime.end());
    const double eta_l = sol.mesh.front();
    const double ratio = sol.w.front() / std::sqrt(-eta_l / 2.0);
    const double series = 1.0 + 1.0 / (8.0 * eta_l * eta_l * eta_l);
    const auto spec = pii::linearization_ground_state(sol);
    const bool br_ok = sol.boundary_residuals.first < 1e-8 && sol.boundary_residuals.second < 1e-8;

    json j;
    j["newton"] = report_json(sol.report);
    j["boundary_residuals"] = {sol.boundary_residuals.first, sol.boundary_residuals.second};
    j["boundary_residuals_pass"] = br_ok;
    j["w0"] = {{"value", w0}, {"bound", specfun::kAi0}, {"pass", w0 >= specfun::kAi0}};
    j["potential"] = {{"min_value", pot.min_value}, {"argmin", pot.argmin}, {"margin_bound", pot.margin_bound},
                      {"grid_spacing", pot.grid_spacing}, {"pass", pot.passed}};
    j["lower_bound"] = {{"min_gap", lb.min_gap}, {"worst_eta", lb.worst_eta}, {"pass", lb.passed}};
    j["monotone"] = {{"max_wprime", max_wp}, {"pass", max_wp < 0.0}};
    j["left_series"] = {{"eta", eta_l}, {"ratio", ratio}, {"series", series},
                        {"pass", std::abs(ratio - series) < 1e-5}};
    j["ground_state"] = {{"eigenvalues", spec.eigenvalues}, {"pass", spec.eigenvalues.front() < 0.0}};
    const bool all = br_ok && w0 >= specfun::kAi0 && pot.passed && lb.passed && max_wp < 0.0 &&
                     std::abs(ratio - series) < 1e-5 && spec.eigenvalues.front() < 0.0;
    j["all_pass"] = all;
    write_json(out.add("hm_certificates.json"), j);

    log << "w(0)=" << fmt(w0) << (w0 >= specfun::kAi0 ? " >= " : " < ") << "0.355028 = Ai(0)\n";
    log << "min(eta + 6 w^2)=" << fmt(pot.min_value) << " margin=" << fmt(pot.margin_bound)
        << (pot.passed ? " pass" : " FAIL") << "\n";
    log << "w - sqrt(-eta/6) >= " << fmt(lb.min_gap) << (lb.passed ? " pass" : " FAIL") << "\n";
    log << "boundary residuals " << fmt(sol.boundary_residuals.first) << " " << fmt(sol.boundary_residuals.second)
        << "\n";
    log << "ground state " << fmt(spec.eigenvalues.front()) << "\n";

    bool class_fail = false;
    if (!ks.empty()) {
        CsvWriter w(out.add("hm_classes.csv"), meta, {"k", "class", "pole_position", "sign_changes", "w_end"});
        for (double k : ks) {
            try {
                const auto t = pii::classify_airy_tail(k, lm, lp);
                const char* name = t.kind == pii::TailClass::pole          ? "pole"
                                   : t.kind == pii::TailClass::separatrix ? "separatrix"
                                                                          : "oscillatory_decay";
                w.row({k, name, t.kind == pii::TailClass::pole ? t.pole_position : kNaN, t.sign_changes, t.w_end});
                log << "k=" << fmt(k) << " " << name << "\n";
            } catch (const std::runtime_error& e) {
                w.row({k, "unresolved", kNaN, 0, kNaN});
                log << "k=" << fmt(k) << " unresolved: " << e.what() << "\n";
                class_fail = true;
            }
        }
    }
    if (!all) return kCertificateFailure;
    return class_fail ? kSolverFailure : kOk;
}

ExitCode cmd_pde(const PdeArgs& a, OutputSet& out, const KeyValues& meta, std::ostream& log) {
    pde::SimConfig cfg;
    if (a.frame == "lab") cfg.frame = pde::Frame::lab;
    else if (a.frame == "comoving") cfg.frame = pde::Frame::comoving;
    else throw UsageError("--frame must be lab or comoving");
    if (a.ramp == "tanh") cfg.ramp = tw::Ramp::tanh;
    else if (a.ramp == "linear") cfg.ramp = tw::Ramp::linear_clipped;
    else throw UsageError("--ramp must be tanh or linear");
    if (!(a.h > 0.0) || !(a.x_max > a.x_min)) throw UsageError("need --dx > 0 and --x-max > --x-min");
    cfg.alpha = a.alpha;
    cfg.c = a.c;
    cfg.epsilon = a.eps;
    cfg.frozen_mu = a.frozen_mu;
    cfg.x_min = a.x_min;
    cfg.x_max = a.x_max;
    cfg.n = static_cast<std::size_t>(std::llround((a.x_max - a.x_min) / a.h)) + 1;
    cfg.t_end = a.t_end;
    cfg.dt = a.dt;
    cfg.snapshot_every = a.snapshot_every;
    cfg.track_every = a.track_every;
    cfg.track_level = a.level;
    if (a.ic == "bump") cfg.ic.kind = pde::InitialKind::small_bump;
    else if (a.ic == "front") cfg.ic.kind = pde::InitialKind::front_seed;
    else if (a.ic == "zero") cfg.ic.kind = pde::InitialKind::zero;
    else throw UsageError("--ic must be bump, front or zero");
    cfg.ic.center = a.ic_center;
    cfg.ic.width = a.ic_width;
    cfg.ic.amplitude = a.ic_amplitude;
    if (a.bvp_front) {
        if (cfg.frame != pde::Frame::comoving || cfg.frozen_mu) throw UsageError("--bvp-front needs the comoving frame");
        check_c(a.c, false);
        tw::FrontDiscretization disc;
        cfg.ic.front = std::make_shared<tw::FrontSolution>(compute_front(a.c, a.eps, 0.05, disc, 0.2231435513142097));
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    pde::SimResult res;
    try {
        res = pde::simulate(cfg);
    } catch (const pde::SimulationAbort& e) {
        CsvWriter w(out.add("pde_last_healthy.csv"), meta, {"t", "x", "u"});
        const auto& s = e.last_healthy();
        for (std::size_t i = 0; i < s.u.size(); ++i)
            w.row({s.t, cfg.x_min + cfg.h() * static_cast<double>(i), s.u[i]});
        log << "simulation aborted: " << e.what() << "\n";
        return kSimulationAbort;
    }
    for (const auto& m : res.warnings) log << "warning: " << m << "\n";
    {
        CsvWriter w(out.add("pde_snapshots.csv"), meta, {"t", "x", "u"});
        for (const auto& s : res.snapshots)
            for (std::size_t i = 0; i < s.u.size(); ++i) w.row({s.t, res.x[i], s.u[i]});
    }

    const auto& tr = res.track;
    const double x0 = a.ic_center + a.ic_width;
    std::vector<double> pred(tr.times.size(), kNaN);
    std::optional<pde::QuenchComparison> cmp;
    const bool homogeneous = cfg.frame == pde::Frame::lab && a.alpha == 0.0 && !cfg.frozen_mu;
    if (homogeneous && cfg.ic.kind == pde::InitialKind::small_bump) {
        pde::QuenchCompareOptions o;
        o.t_transient = a.t_transient;
        cmp = pde::compare_track(tr, cfg.epsilon, cfg.ramp, cfg.t_end, o, x0);
        pred = cmp->x_pred;
    } else if (cfg.frozen_mu && *cfg.frozen_mu > 0.0) {
        for (std::size_t i = 0; i < tr.times.size(); ++i) pred[i] = x0 + 2.0 * std::sqrt(*cfg.frozen_mu) * tr.times[i];
    }
    {
        std::vector<std::string> cols{"t", "x_fr_num", "x_fr_pred", "diff", "crossings"};
        const bool thr = !tr.x_threshold.empty();
        if (thr) cols.push_back("x_threshold");
        CsvWriter w(out.add("pde_track.csv"), meta, cols);
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            std::vector<Cell> row{tr.times[i], tr.x_fr_num[i], pred[i], tr.x_fr_num[i] - pred[i], tr.crossings[i]};
            if (thr) row.emplace_back(tr.x_threshold[i]);
            w.row(row);
        }
    }

    json s;
    s["steps"] = res.steps;
    s["n"] = cfg.n;
    s["dt"] = cfg.step();
    s["warnings"] = res.warnings;
    CsvWriter checks(out.add("pde_checks.csv"), meta, {"check", "value", "target", "tolerance", "pass"});
    if (cfg.frozen_mu && *cfg.frozen_mu > 0.0 && tr.times.size() >= 2) {
        const double t1 = std::max(tr.times.front(), 0.5 * cfg.t_end), t2 = tr.times.back();
        const double v = pde::track_speed(tr, t1, t2);
        const double target = 2.0 * std::sqrt(*cfg.frozen_mu);
        checks.row({"speed", v, target, 0.05, std::abs(v - target) <= 0.05});
        s["speed"] = {{"t1", t1}, {"t2", t2}, {"value", v}, {"target", target}};
        log << "front speed over [" << fmt(t1) << ", " << fmt(t2) << "] = " << fmt(v) << " (target " << fmt(target)
            << ")\n";
    }
    if (cfg.frozen_mu && *cfg.frozen_mu < 0.0) {
        double m = 0.0;
        for (double v : res.snapshots.back().u) m = std::max(m, std::abs(v));
        checks.row({"decay", m, 0.0, 1e-6, m < 1e-6});
        log << "sup|u(t_end)| = " << fmt(m) << "\n";
    }
    if (cmp) {
        checks.row({"diff_after_transient_nonnegative", cmp->after_transient_nonnegative ? 1.0 : 0.0, 1.0, 0.0,
                    cmp->after_transient_nonnegative});
        checks.row({"diff_second_half_min", cmp->second_half_min, 0.0, 0.0, cmp->second_half_min >= 0.0});
        checks.row({"diff_second_half_slope", cmp->second_half_slope, 0.0, 0.0, cmp->second_half_slope > 0.0});
        s["comparison"] = {{"x0", cmp->x0},
                           {"t_transient", cmp->t_transient},
                           {"t_nonnegative", cmp->t_nonnegative},
                           {"second_half_min", cmp->second_half_min},
                           {"second_half_slope", cmp->second_half_slope},
                           {"after_transient_nonnegative", cmp->after_transient_nonnegative},
                           {"second_half_nonnegative_growing", cmp->second_half_nonnegative_growing}};
        log << "transient ends t=" << fmt(cmp->t_transient) << "; diff >= 0 from t=" << fmt(cmp->t_nonnegative)
            << "; second-half min diff=" << fmt(cmp->second_half_min) << " slope=" << fmt(cmp->second_half_slope)
            << "\n";
    }
    if (cfg.ic.front) {
        const auto& f = *cfg.ic.front;
        double d = 0.0;
        const auto& u = res.snapshots.back().u;
        for (std::size_t i = 0; i < u.size(); ++i)
            d = std::max(d, std::abs(u[i] - interp_linear(f.mesh.nodes(), f.u, -res.x[i])));
        checks.row({"bvp_sup_deviation", d, kNaN, kNaN, "n/a"});
        s["bvp_sup_deviation"] = d;
        log << "sup |u - u_bvp| at t_end = " << fmt(d) << "\n";
    }
    write_json(out.add("pde_summary.json"), s);
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fronts of the Allen-Cahn equation under a slow quench: traveling waves, fold delay, "
                 "Hastings-McLeod certification and direct simulation."};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string out_dir, config_path;
    auto common = [&](CLI::App* s) {
        s->add_option("--out", out_dir, "Output directory (default $" + std::string(kOutDirEnv) + " or .)");
        s->add_option("--config", config_path, "Flat key=value file; flags take precedence");
    };

    FrontArgs fa;
    auto* front = app.add_subcommand(
        "front", "Traveling front continued in eps from --eps-start. Claim: the interface sits past the "
                 "absolute-instability point, mu_fr ~ c^2/4 + Omega0 (1 - c^4/16)^{2/3} eps^{2/3}; at c = 0 the "
                 "profile follows sqrt(2) eps^{1/3} w_HM(eps^{1/3} xi).");
    front->add_option("--c", fa.c, "Quench speed in [0, 2)");
    front->add_option("--eps", fa.eps, "Ramp slope");
    front->add_option("--eps-start", fa.eps_start, "Continuation start");
    front->add_option("--dx", fa.h, "Mesh spacing");
    front->add_option("--halflength-factor", fa.halflength_factor, "Domain half-length in units of 1/eps");
    front->add_option("--step", fa.step, "Continuation step in ln eps");
    common(front);

    SweepArgs sa;
    auto* sweep = app.add_subcommand(
        "delay-sweep", "Interface delay over a range of eps. Claim: mu_fr - c^2/4 scales like eps^{2/3} "
                       "(measured slope about 0.65 on the front); --fold gives the fold-passage law "
                       "theta ~ Omega0 (1 - c^4/16)^{2/3} eps^{2/3}.");
    sweep->add_option("--c", sa.c, "Quench speed in (0, 2)");
    sweep->add_option("--eps-decade", sa.eps_decade, "lo:hi (default 2.5e-4:2.5e-3, or 1e-5:1e-3 with --fold)");
    sweep->add_option("--points", sa.points, "Log-spaced points (default 10, or 7 with --fold)");
    sweep->add_flag("--fold", sa.fold, "Sweep the fold passage instead of the front");
    sweep->add_option("--delta", sa.delta, "Fold exit section z = -delta, or inf for the blow-up section");
    sweep->add_option("--jobs", sa.jobs, "Concurrent fold jobs");
    sweep->add_option("--eps-start", sa.eps_start, "Continuation start");
    sweep->add_option("--dx", sa.h, "Mesh spacing");
    sweep->add_option("--halflength-factor", sa.halflength_factor, "Domain half-length in units of 1/eps");
    common(sweep);

    PainleveArgs pa;
    auto* pain = app.add_subcommand(
        "painleve", "Hastings-McLeod solution of w'' = eta w + 2 w^3. Claim: w(0) >= Ai(0), eta + 6 w^2 > 0, "
                    "w > sqrt(-eta/6) for eta <= 0, negative linearized ground state; tails k Ai decay for "
                    "|k| < 1 and blow up for |k| > 1.");
    pain->add_option("--window", pa.window, "L_minus L_plus")->expected(2);
    pain->add_option("--n", pa.n, "Mesh nodes");
    pain->add_option("--classify", pa.classify, "Comma-separated k values for Airy-tail classification");
    common(pain);

    PdeArgs da;
    auto* pdec = app.add_subcommand(
        "pde", "Direct simulation of u_t = u_xx + c u_x + mu u - u^3. Claim: fronts spread at speed 2 into a "
               "frozen unstable state; under a homogeneous quench the measured front runs slightly ahead of "
               "x0 + int 2 sqrt(mu) dt.");
    pdec->add_option("--frame", da.frame, "lab or comoving");
    pdec->add_option("--alpha", da.alpha, "Quench slope in mu(eps (alpha x - t))");
    pdec->add_option("--c", da.c, "Frame speed (comoving)");
    pdec->add_option("--eps", da.eps, "Ramp rate");
    pdec->add_option("--ramp", da.ramp, "tanh or linear");
    pdec->add_option("--frozen-mu", da.frozen_mu, "Constant mu instead of the ramp");
    pdec->add_option("--x-min", da.x_min, "Left end");
    pdec->add_option("--x-max", da.x_max, "Right end");
    pdec->add_option("--dx", da.h, "Grid spacing");
    pdec->add_option("--t-end", da.t_end, "Final time");
    pdec->add_option("--dt", da.dt, "Time step (0: 0.4 h^2)");
    pdec->add_option("--ic", da.ic, "bump, front or zero");
    pdec->add_option("--ic-center", da.ic_center, "Bump center");
    pdec->add_option("--ic-width", da.ic_width, "Bump half-width");
    pdec->add_option("--ic-amplitude", da.ic_amplitude, "Bump amplitude");
    pdec->add_option("--snapshot-every", da.snapshot_every, "Snapshot cadence (0: first and last)");
    pdec->add_option("--track-every", da.track_every, "Front-track cadence");
    pdec->add_option("--level", da.level, "Tracked level");
    pdec->add_option("--t-transient", da.t_transient, "Transient cutoff (default: front moved 5 units)");
    pdec->add_flag("--bvp-front", da.bvp_front, "Seed the comoving run with the BVP front and report the deviation");
    common(pdec);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (!config_path.empty()) apply_config(*sub, load_config(config_path));
        const KeyValues eff = effective_config(*sub);
        const std::string digest = sha256_hex(canonical_config(sub->get_name(), eff));
        KeyValues meta = eff;
        meta["command"] = sub->get_name();
        meta["config_digest"] = digest;
        meta["tool_version"] = kToolVersion;
        OutputSet outs(out_dir.empty() ? default_output_dir() : std::filesystem::path(out_dir));

        ExitCode rc = kOk;
        if (sub == front) rc = cmd_front(fa, outs, meta, out);
        else if (sub == sweep) rc = cmd_delay_sweep(sa, outs, meta, out);
        else if (sub == pain) rc = cmd_painleve(pa, outs, meta, out);
        else rc = cmd_pde(da, outs, meta, out);

        RunManifest m{sub->get_name(), digest, kToolVersion, outs.files(),
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
        write_manifest(outs.dir() / (sub->get_name() + "_manifest.json"), m);
        return rc;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << "\n";
        return kSolverFailure;
    }
}

}  // namespace quench::cli
