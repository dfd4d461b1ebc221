#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quench/ode.hpp"
#include "quench/specfun.hpp"
#include "quench/travelingwave.hpp"

#include <cmath>
#include <vector>

using namespace quench;
using namespace quench::tw;

namespace {

const FrontSolution& reference_front() {
    static const FrontSolution f = [] {
        auto br = continue_front_in_epsilon(1.2, 0.05, 0.0025);
        REQUIRE_FALSE(br.stalled);
        return br.fronts.back();
    }();
    return f;
}

FrontSolution synthetic(double c, std::vector<double> u) {
    const std::size_t n = u.size();
    QuenchParams p{c, 0.01, Ramp::tanh};
    Mesh m = Mesh::uniform(-100.0, 100.0, n);
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) mu[i] = p.mu(m[i]);
    NewtonReport rep;
    rep.converged = true;
    return FrontSolution{m, std::move(u), std::vector<double>(n, 0.0), mu, {}, p, rep};
}

// z' = -z^2 - theta + u^2, u' = (z + c/2) u  (frozen theta, eps = 0)
OdeField zu_field(double c, double theta, double sign) {
    return [=](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = sign * (-y[0] * y[0] - theta + y[1] * y[1]);
        dy[1] = sign * (y[0] + c / 2.0) * y[1];
    };
}

double b1(double c, double theta) {
    return (-c - std::sqrt(3.0 * c * c + 8.0 * theta)) / (2.0 * std::sqrt(c * c + 4.0 * theta));
}

}  // namespace

TEST_CASE("dispersion branch point") {
    auto a = dispersion_branch_point(1.2, 0.36);
    CHECK(a.lambda_br == doctest::Approx(0.0));
    CHECK(a.nu_br == doctest::Approx(-0.6));
    CHECK(a.mu_c == doctest::Approx(0.36));
    auto b = dispersion_branch_point(0.0, 1.0);
    CHECK(b.lambda_br == doctest::Approx(1.0));
    CHECK(b.nu_br == doctest::Approx(0.0));
    auto d = dispersion_branch_point(2.0, 1.0);
    CHECK(d.lambda_br == doctest::Approx(0.0));
    CHECK(d.mu_c == doctest::Approx(1.0));
    // double root: d = 0 and d_nu = 0
    const double r = d.nu_br * d.nu_br + 2.0 * d.nu_br + 1.0 - d.lambda_br;
    CHECK(std::abs(r) < 1e-14);
}

TEST_CASE("end-state eigenpairs") {
    const auto e = equilibrium_eigenpairs(1.2, 0.0);
    CHECK(std::abs(e.left.nu_plus - 1.766190) < 1e-6);
    // 0.6 - sqrt(0.36 + 2)
    CHECK(std::abs(e.right.nu_minus - (-0.9362291495737216)) < 1e-12);
    CHECK(std::abs(e.left.nu_minus - (0.6 - std::sqrt(1.36))) < 1e-12);
    CHECK(std::abs(e.right.nu_plus - (0.6 + std::sqrt(2.36))) < 1e-12);
    const auto s = equilibrium_eigenpairs(0.0, 0.01);
    CHECK(s.left.slow == doctest::Approx(0.02));
    CHECK(s.right.slow == doctest::Approx(-0.02));
    // projection slopes are roots of their characteristic polynomials
    const double nl = left_projection_slope(1.2, -0.9);
    CHECK(nl > 0.0);
    CHECK(std::abs(nl * nl - 1.2 * nl - 0.9) < 1e-12);
    const double nr = right_projection_slope(1.2, 0.9);
    CHECK(nr < 0.0);
    CHECK(std::abs(nr * nr - 1.2 * nr - 2.0 * 0.9) < 1e-12);
}

TEST_CASE("predicted delay") {
    // 0.36 + Omega0 (1 - 1.2^4/16)^{2/3} 0.0025^{2/3}
    const double expect = 0.36 + 2.3381074104597670 * std::cbrt(std::pow(1.0 - std::pow(1.2, 4) / 16.0, 2)) *
                                     std::cbrt(0.0025 * 0.0025);
    CHECK(std::abs(predicted_delay(1.2, 0.0025) - 0.39927) < 1e-5);
    CHECK(std::abs(predicted_delay(1.2, 0.0025) - expect) < 1e-12);
    CHECK(predicted_delay(1.2, 0.0) == doctest::Approx(0.36));
    CHECK(std::abs(predicted_delay(1e-6, 0.001) - (specfun::omega0().value * 0.01)) < 1e-10);
}

TEST_CASE("front_location on synthetic profiles") {
    std::vector<double> step(201, 0.0);
    for (std::size_t i = 120; i < step.size(); ++i) step[i] = 1.0;
    auto s = synthetic(1.2, step);
    // the threshold lies strictly inside the jump; interpolation in mu lands on the bracketing cell
    const auto loc = front_location(s);
    CHECK(loc.mu_fr > s.mu[119]);
    CHECK(loc.mu_fr < s.mu[120]);

    std::vector<double> tie(201, 0.0);
    tie[120] = 0.3;  // exactly c/4
    for (std::size_t i = 121; i < tie.size(); ++i) tie[i] = 1.0;
    auto t = synthetic(1.2, tie);
    CHECK(front_location(t).mu_fr == doctest::Approx(t.mu[120]).epsilon(1e-14));
    CHECK(front_location(t).zeta_fr == doctest::Approx(t.mesh[120]).epsilon(1e-10));

    auto z = synthetic(1.2, std::vector<double>(201, 0.0));
    CHECK_THROWS_AS(front_location(z), NoInterface);
    auto c0 = synthetic(0.0, tie);
    CHECK_THROWS_AS(front_location(c0), std::invalid_argument);
}

TEST_CASE("solve_front preconditions") {
    QuenchParams p{1.2, 0.01, Ramp::tanh};
    CHECK_THROWS_AS(solve_front(p, 100.0, 4001), std::invalid_argument);
    CHECK_THROWS_AS(solve_front(p, 600.0, 1000), std::invalid_argument);
    QuenchParams bad{2.5, 0.01, Ramp::tanh};
    CHECK_THROWS(bad.validate());
}

TEST_CASE("front at c = 1.2, eps = 0.0025") {
    const auto& f = reference_front();
    REQUIRE(f.report.converged);
    CHECK(f.report.final_residual_norm <= 1e-10);
    CHECK(f.params.epsilon == doctest::Approx(0.0025));
    CHECK(f.mu_fr - 0.36 > 0.0);
    CHECK(min_increment(f) >= -1e-9);
    const auto pc = plateau_check(f, 0.1);
    CHECK(pc.max_u_below < 1e-3);
    CHECK(pc.max_dev_above < 1e-2);
    const double pred = predicted_delay(1.2, 0.0025);
    CHECK(std::abs((f.mu_fr - 0.36) - (pred - 0.36)) <= 0.2 * (pred - 0.36));
}

TEST_CASE("front location is mesh invariant") {
    const auto& f = reference_front();
    FrontDiscretization fine;
    fine.h = 0.05;
    auto br = continue_front_in_epsilon(1.2, 0.05, 0.0025, fine);
    REQUIRE_FALSE(br.stalled);
    const auto& g = br.fronts.back();
    CHECK(g.mesh.size() > 2 * f.mesh.size() - 10);
    CHECK(std::abs(g.mu_fr - f.mu_fr) < 1e-4);
}

TEST_CASE("monotone fronts across speeds") {
    for (double c : {0.4, 0.8, 1.6}) {
        CAPTURE(c);
        auto br = continue_front_in_epsilon(c, 0.05, 0.01);
        REQUIRE_FALSE(br.stalled);
        const auto& f = br.fronts.back();
        CHECK(min_increment(f) >= -1e-9);
        CHECK(f.mu_fr > c * c / 4.0);
    }
}

TEST_CASE("amplitude exponent fit") {
    std::vector<AmplitudeSample> s;
    for (double e : {1e-3, 2e-3, 4e-3, 8e-3, 1e-2}) s.push_back({e, std::cbrt(e)});
    CHECK(stationary_amplitude_exponent(s) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    for (auto& x : s) x.u0 = 0.7;
    CHECK(std::abs(stationary_amplitude_exponent(s)) < 1e-12);
    s.resize(3);
    CHECK_THROWS_AS(stationary_amplitude_exponent(s), std::invalid_argument);
    std::vector<AmplitudeSample> partial{{1e-3, 0.1}, {2e-3, 0.12}, {4e-3, 0.15}, {8e-3, 0.2, false}, {1e-2, 0.21}};
    CHECK_NOTHROW(stationary_amplitude_exponent(partial));
    partial[0].converged = false;
    CHECK_THROWS_AS(stationary_amplitude_exponent(partial), std::invalid_argument);
}

TEST_CASE("frozen stable manifold obeys the trapping bound") {
    const double c = 1.2;
    OdeOptions o;
    o.rtol = 1e-11;
    o.atol = 1e-13;
    for (double theta : {0.001, 0.005, 0.01, 0.02, 0.035, 0.05}) {
        CAPTURE(theta);
        const double zs = -c / 2.0, us = std::sqrt(theta + c * c / 4.0);
        const double d = 1e-7;
        std::vector<double> y0{zs + d, us + b1(c, theta) * d};
        std::vector<EventSpec> ev{{[](double, std::span<const double> y) { return y[0]; }, true, 0}};
        const auto tr = integrate_ode(zu_field(c, theta, -1.0), y0, 0.0, 500.0, o, ev);
        REQUIRE(tr.terminated_by_event);
        const double u_s = tr.events.back().y[1];
        CHECK(u_s > 0.0);
        CHECK(u_s <= theta / us);
    }
}

TEST_CASE("stable manifold leaves along the b1 direction") {
    const double c = 1.2;
    OdeOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    for (double theta : {0.01, 0.05}) {
        CAPTURE(theta);
        const double zs = -c / 2.0, us = std::sqrt(theta + c * c / 4.0);
        // eigenvector of the stable eigenvalue, independent of the b1 closed form
        const double nu = c / 2.0 - std::sqrt(3.0 * c * c / 4.0 + 2.0 * theta);
        const double slope = us / nu;
        const double d = 1e-9;
        std::vector<double> y0{zs + d, us + slope * d};
        const double r = 1e-3;
        std::vector<EventSpec> ev{{[=](double, std::span<const double> y) {
                                       return std::hypot(y[0] - zs, y[1] - us) - r;
                                   },
                                   true, +1}};
        const auto tr = integrate_ode(zu_field(c, theta, -1.0), y0, 0.0, 500.0, o, ev);
        REQUIRE(tr.terminated_by_event);
        const auto& y = tr.events.back().y;
        CHECK(std::abs((y[1] - us) / (y[0] - zs) - b1(c, theta)) < 1e-3);
    }
}
