#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quench/banded.hpp"
#include "quench/continuation.hpp"
#include "quench/eigen_tridiag.hpp"
#include "quench/mesh.hpp"
#include "quench/newton.hpp"
#include "quench/ode.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

using namespace quench;

namespace {

// u'' = u on [0, 1], u(0) = 1, u(1) = 0; exact sinh(1 - x) / sinh(1)
BvpSystem sinh_system(const Mesh& m) {
    BvpSystem s;
    const std::size_t n = m.size();
    s.residual = [&m, n](std::span<const double> u, std::span<double> r) {
        r[0] = u[0] - 1.0;
        r[n - 1] = u[n - 1];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = m.spacing(i - 1), hr = m.spacing(i);
            r[i] = 2.0 * (hl * u[i + 1] - (hl + hr) * u[i] + hr * u[i - 1]) / (hl * hr * (hl + hr)) - u[i];
        }
    };
    s.jacobian = [&m, n](std::span<const double>, BandedMatrix& j) {
        j.set_zero();
        j(0, 0) = 1.0;
        j(n - 1, n - 1) = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = m.spacing(i - 1), hr = m.spacing(i);
            const double d = hl * hr * (hl + hr);
            j(i, i - 1) = 2.0 * hr / d;
            j(i, i) = -2.0 * (hl + hr) / d - 1.0;
            j(i, i + 1) = 2.0 * hl / d;
        }
    };
    return s;
}

double sinh_error(std::size_t n) {
    const Mesh m = Mesh::uniform(0.0, 1.0, n);
    auto [u, rep] = solve_bvp(sinh_system(m), std::vector<double>(n, 0.5), {.tol = 1e-9});
    REQUIRE(rep.converged);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(u[i] - std::sinh(1.0 - m[i]) / std::sinh(1.0)));
    return e;
}

}  // namespace

TEST_CASE("mesh invariants") {
    CHECK_THROWS_AS(Mesh(std::vector<double>(3, 0.0)), std::invalid_argument);
    std::vector<double> bad{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 8.5};
    CHECK_THROWS_AS(Mesh{bad}, std::invalid_argument);
    std::vector<double> ratio{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9.1};
    CHECK_THROWS_AS(Mesh{ratio}, std::invalid_argument);
    const Mesh u = Mesh::uniform(-1.0, 1.0, 21);
    CHECK(u.is_uniform());
    CHECK(u.size() == 21);
    CHECK(u.locate(0.05) == 10);
    CHECK(u.locate(5.0) == 19);
    const Mesh g = Mesh::graded(-100.0, 100.0, 10.0, 5.0, 0.1, 1.05, 2.0);
    CHECK(g.front() == -100.0);
    CHECK(g.back() == 100.0);
    CHECK(g.max_spacing_ratio() <= 4.0);
    CHECK(g.min_spacing() <= 0.1 + 1e-12);
    CHECK(g.max_spacing() <= 2.0 + 1e-12);
    const std::vector<double> xs{0.0, 1.0, 2.0}, ys{0.0, 2.0, 6.0};
    CHECK(interp_linear(xs, ys, 1.5) == doctest::Approx(4.0));
    CHECK(interp_linear(xs, ys, -1.0) == 0.0);
    CHECK(interp_linear(xs, ys, 9.0) == 6.0);
}

TEST_CASE("banded LU matches a dense solve") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const std::size_t n = 40, kl = 2, ku = 3;
    BandedMatrix a(n, kl, ku);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = (i > kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
            const double v = d(rng) + (i == j ? 0.1 : 0.0);
            a(i, j) = v;
            dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    Eigen::VectorXd b(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b(static_cast<Eigen::Index>(i)) = d(rng);
    const Eigen::VectorXd ref = dense.fullPivLu().solve(b);
    BandedLU lu(a);
    lu.solve(x);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref(static_cast<Eigen::Index>(i))) < 1e-10);
    std::vector<double> y(n);
    a.multiply(x, y);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - b(static_cast<Eigen::Index>(i))) < 1e-10);
    CHECK_THROWS_AS(a(0, 10), std::out_of_range);
}

TEST_CASE("singular band matrix reports the pivot") {
    BandedMatrix a(4, 1, 1);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    a(3, 3) = 1.0;
    try {
        BandedLU lu(a);
        FAIL("expected JacobianSingular");
    } catch (const JacobianSingular& e) {
        CHECK(e.pivot() == 2);
    }
}

TEST_CASE("Newton on a linear SPD tridiagonal system takes one iteration") {
    const std::size_t n = 50;
    BvpSystem s;
    s.residual = [n](std::span<const double> x, std::span<double> r) {
        for (std::size_t i = 0; i < n; ++i)
            r[i] = 4.0 * x[i] - (i > 0 ? x[i - 1] : 0.0) - (i + 1 < n ? x[i + 1] : 0.0) - 1.0;
    };
    s.jacobian = [n](std::span<const double>, BandedMatrix& j) {
        for (std::size_t i = 0; i < n; ++i) {
            j(i, i) = 4.0;
            if (i > 0) j(i, i - 1) = -1.0;
            if (i + 1 < n) j(i, i + 1) = -1.0;
        }
    };
    auto [x, rep] = solve_bvp(s, std::vector<double>(n, 0.0));
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);
    CHECK(rep.final_residual_norm <= 1e-10);
}

TEST_CASE("Newton without a root reports non-convergence") {
    BvpSystem s;
    s.kl = s.ku = 0;
    s.residual = [](std::span<const double> x, std::span<double> r) { r[0] = x[0] * x[0] + 1.0; };
    s.jacobian = [](std::span<const double> x, BandedMatrix& j) { j(0, 0) = 2.0 * x[0]; };
    auto [x, rep] = solve_bvp(s, {0.7});
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations <= 50);
}

TEST_CASE("Newton rejects bad input") {
    BvpSystem s;
    s.kl = s.ku = 100;
    s.residual = [](std::span<const double>, std::span<double>) {};
    s.jacobian = [](std::span<const double>, BandedMatrix&) {};
    CHECK_THROWS_AS(solve_bvp(s, {1.0}), std::invalid_argument);
    s.kl = s.ku = 0;
    CHECK_THROWS_AS(solve_bvp(s, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("sinh BVP: accuracy and second-order convergence") {
    const double e101 = sinh_error(101), e201 = sinh_error(201), e401 = sinh_error(401);
    CHECK(e101 <= 1e-6);
    const double order1 = std::log2(e101 / e201), order2 = std::log2(e201 / e401);
    CHECK(order1 >= 1.8);
    CHECK(order1 <= 2.2);
    CHECK(order2 >= 1.8);
    CHECK(order2 <= 2.2);

    const Mesh m1 = Mesh::uniform(0.0, 1.0, 101), m2 = Mesh::uniform(0.0, 1.0, 201);
    auto [u1, r1] = solve_bvp(sinh_system(m1), std::vector<double>(101, 0.5), {.tol = 1e-9});
    auto [u2, r2] = solve_bvp(sinh_system(m2), std::vector<double>(201, 0.5), {.tol = 1e-9});
    double er = 0.0;
    for (std::size_t i = 0; i < 101; ++i)
        er = std::max(er, std::abs((4.0 * u2[2 * i] - u1[i]) / 3.0 - std::sinh(1.0 - m1[i]) / std::sinh(1.0)));
    CHECK(er <= 1e-6);
}

TEST_CASE("sinh BVP on a graded mesh") {
    std::vector<double> nodes;
    for (int i = 0; i <= 120; ++i) nodes.push_back(std::pow(i / 120.0, 1.3));
    const Mesh m(nodes);
    auto [u, rep] = solve_bvp(sinh_system(m), std::vector<double>(m.size(), 0.5), {.tol = 1e-9});
    REQUIRE(rep.converged);
    double e = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) e = std::max(e, std::abs(u[i] - std::sinh(1.0 - m[i]) / std::sinh(1.0)));
    CHECK(e < 1e-4);
}

TEST_CASE("natural continuation of the pitchfork branch") {
    ParamSystem sys;
    sys.kl = sys.ku = 0;
    sys.residual = [](std::span<const double> x, double mu, std::span<double> r) { r[0] = mu * x[0] - x[0] * x[0] * x[0]; };
    sys.jacobian = [](std::span<const double> x, double mu, BandedMatrix& j) { j(0, 0) = mu - 3.0 * x[0] * x[0]; };
    ContinuationEntry start;
    start.param = 0.1;
    start.solution = {std::sqrt(0.1)};
    start.report.converged = true;
    ContinuationOptions o;
    o.newton.tol = 1e-13;
    const auto br = continue_natural(sys, start, 1.0, 0.05, o);
    CHECK_FALSE(br.stalled);
    CHECK(br.entries.back().param == doctest::Approx(1.0));
    for (std::size_t i = 0; i < br.entries.size(); ++i) {
        const auto& e = br.entries[i];
        CHECK(std::abs(e.solution[0] - std::sqrt(e.param)) < 1e-8);
        if (i > 0) CHECK(e.param > br.entries[i - 1].param);
        // post-hoc residual
        CHECK(std::abs(e.param * e.solution[0] - std::pow(e.solution[0], 3)) <= 1e-12);
    }
}

TEST_CASE("natural continuation stalls at a fold") {
    ParamSystem sys;
    sys.kl = sys.ku = 0;
    sys.residual = [](std::span<const double> x, double mu, std::span<double> r) { r[0] = x[0] * x[0] + mu; };
    sys.jacobian = [](std::span<const double> x, double, BandedMatrix& j) { j(0, 0) = 2.0 * x[0]; };
    ContinuationEntry start;
    start.param = -1.0;
    start.solution = {1.0};
    start.report.converged = true;
    const auto br = continue_natural(sys, start, 1.0, 0.1);
    CHECK(br.stalled);
    CHECK(br.entries.back().param < 0.0);

    ContinuationEntry bad = start;
    bad.report.converged = false;
    CHECK_THROWS_AS(continue_natural(sys, bad, 1.0, 0.1), std::runtime_error);
}

TEST_CASE("pseudo-arclength continuation passes the Bratu fold") {
    // u'' + lam e^u = 0 on [0, 1], homogeneous Dirichlet, interior unknowns
    const std::size_t n = 199;
    const double h = 1.0 / static_cast<double>(n + 1);
    ParamSystem sys;
    sys.residual = [n, h](std::span<const double> u, double lam, std::span<double> r) {
        for (std::size_t i = 0; i < n; ++i) {
            const double l = i > 0 ? u[i - 1] : 0.0, rr = i + 1 < n ? u[i + 1] : 0.0;
            r[i] = (l - 2.0 * u[i] + rr) / (h * h) + lam * std::exp(u[i]);
        }
    };
    sys.jacobian = [n, h](std::span<const double> u, double lam, BandedMatrix& j) {
        for (std::size_t i = 0; i < n; ++i) {
            j(i, i) = -2.0 / (h * h) + lam * std::exp(u[i]);
            if (i > 0) j(i, i - 1) = 1.0 / (h * h);
            if (i + 1 < n) j(i, i + 1) = 1.0 / (h * h);
        }
    };
    ContinuationEntry start;
    start.param = 0.0;
    start.solution.assign(n, 0.0);
    start.report.converged = true;
    ContinuationOptions o;
    o.max_entries = 400;
    o.max_step = 0.5;
    const auto br = continue_arclength(sys, start, -1.0, 3.6, 0.1, +1, o);
    double lam_max = 0.0;
    bool turned = false;
    for (std::size_t i = 1; i < br.entries.size(); ++i) {
        lam_max = std::max(lam_max, br.entries[i].param);
        if (br.entries[i].param < br.entries[i - 1].param) turned = true;
    }
    CHECK(turned);
    // mpmath: max of t^2 / (2 cosh^2(t/4))
    CHECK(std::abs(lam_max - 3.5138307191251612) < 2e-3);
}

TEST_CASE("ODE: decay, events, blow-up and time reversal") {
    OdeOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-12;
    auto decay = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; };
    const auto tr = integrate_ode(decay, {1.0}, 0.0, 1.0, o);
    CHECK(std::abs(tr.y.back()[0] - std::exp(-1.0)) < 1e-9);

    auto fall = [](double, std::span<const double>, std::span<double> dy) { dy[0] = -1.0; };
    std::vector<EventSpec> ev{{[](double, std::span<const double> y) { return y[0]; }, true, -1}};
    const auto te = integrate_ode(fall, {1.0}, 0.0, 5.0, o, ev);
    REQUIRE(te.terminated_by_event);
    CHECK(std::abs(te.events.back().t - 1.0) < 1e-10);

    auto blow = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; };
    try {
        integrate_ode(blow, {1.0}, 0.0, 2.0, o);
        FAIL("expected blow-up");
    } catch (const OdeBlowUp& e) {
        CHECK(e.t() < 1.0);
        CHECK(e.t() > 0.99);
        CHECK(e.y()[0] > 1e6);
    }

    auto osc = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0] - 0.1 * y[0] * y[0] * y[0];
    };
    o.rtol = 1e-9;
    const auto fwd = integrate_ode(osc, {1.0, 0.0}, 0.0, 10.0, o);
    const auto back = integrate_ode(osc, fwd.y.back(), 10.0, 0.0, o);
    CHECK(std::abs(back.y.back()[0] - 1.0) < 10 * o.rtol);
    CHECK(std::abs(back.y.back()[1]) < 10 * o.rtol);
}

TEST_CASE("Sturm bisection: closed-form spectra") {
    const std::size_t n = 100;
    std::vector<double> d(n, -2.0), e(n - 1, 1.0);
    const auto s = eig_tridiag_symmetric(d, e, 5);
    CHECK(std::abs(s.eigenvalues[0] - (-2.0 + 2.0 * std::cos(std::numbers::pi / 101.0))) < 1e-10 * 2.0);
    for (std::size_t k = 0; k < 5; ++k)
        CHECK(std::abs(s.eigenvalues[k] - (-2.0 + 2.0 * std::cos((k + 1.0) * std::numbers::pi / 101.0))) < 2e-10);
    for (std::size_t k = 1; k < 5; ++k) CHECK(s.eigenvalues[k] < s.eigenvalues[k - 1]);

    std::vector<double> c(6, 3.5), z(5, 0.0);
    for (double v : eig_tridiag_symmetric(c, z, 6).eigenvalues) CHECK(std::abs(v - 3.5) < 1e-9);
    const auto two = eig_tridiag_symmetric(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0}, 2);
    CHECK(std::abs(two.eigenvalues[0] - 1.0) < 1e-10);
    CHECK(std::abs(two.eigenvalues[1] + 1.0) < 1e-10);
    CHECK_THROWS_AS(eig_tridiag_symmetric(c, z, 7), std::domain_error);
    CHECK_THROWS_AS(eig_tridiag_symmetric(c, z, 0), std::domain_error);
    CHECK(sturm_count_below(d, e, 0.0) == n);
    CHECK(sturm_count_below(d, e, -4.0) == 0);
}

TEST_CASE("Sturm bisection matches dense QR") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (std::size_t n : {5, 17, 50}) {
        std::vector<double> d(n), e(n - 1);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = d[i] = u(rng);
        for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[i] = u(rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        const auto s = eig_tridiag_symmetric(d, e, n);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(s.eigenvalues[k] - es.eigenvalues()(n - 1 - k)) < 1e-9);
    }
}

TEST_CASE("Dirichlet box spectrum") {
    const double L = 5.0;
    const std::size_t n = 49;
    const double h = 2.0 * L / static_cast<double>(n + 1);
    std::vector<double> q(n, -1.0);
    const auto s = dirichlet_schrodinger(h, q, 3);
    CHECK(s.domain_halflength == doctest::Approx(L));
    for (std::size_t k = 0; k < 3; ++k) {
        // exact discrete eigenvalues of the (1, -2, 1)/h^2 - 1 matrix
        const double exact = -1.0 - 4.0 / (h * h) * std::pow(std::sin((k + 1.0) * std::numbers::pi / (2.0 * (n + 1))), 2);
        CHECK(std::abs(s.eigenvalues[k] - exact) < 1e-8);
    }
}
