#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quench/painleve.hpp"
#include "quench/specfun.hpp"
#include "quench/travelingwave.hpp"

#include <cmath>
#include <numbers>

using namespace quench;
using namespace quench::pii;

namespace {

// mpmath (40 digits) shooting on the separatrix; see oracles/gen_oracles.py
constexpr double kW0 = 0.36706155154807843;
constexpr double kWp0 = -0.29537210544755005;
constexpr double kWm2 = 0.98339134972780534;

const HMSolution& hm() {
    static const HMSolution s = solve_hastings_mcleod();
    return s;
}

std::size_t node_of(const HMSolution& s, double eta) {
    const std::size_t i = s.mesh.locate(eta);
    return std::abs(s.mesh[i] - eta) < std::abs(s.mesh[i + 1] - eta) ? i : i + 1;
}

}  // namespace

TEST_CASE("Hastings-McLeod BVP against the shooting oracle") {
    const auto& s = hm();
    REQUIRE(s.report.converged);
    CHECK(s.boundary_residuals.first <= 1e-8);
    CHECK(s.boundary_residuals.second <= 1e-8);
    CHECK(std::abs(evaluate(s, 0.0) - kW0) < 1e-7);
    CHECK(std::abs(s.wprime[node_of(s, 0.0)] - kWp0) < 1e-6);
    CHECK(std::abs(evaluate(s, -2.0) - kWm2) < 1e-7);
    CHECK(evaluate(s, 0.0) >= specfun::kAi0);
    CHECK(std::abs(s.w.back() / specfun::airy(8.0).value - 1.0) < 1e-4);
    const double left = s.w.front() / std::sqrt(12.0 / 2.0);
    CHECK(std::abs(left - (1.0 + 1.0 / (8.0 * std::pow(-12.0, 3)))) < 1e-5);
    CHECK(std::abs(s.w.front() - hm_left_series(-12.0)) < 1e-12);
}

TEST_CASE("Hastings-McLeod profile is positive and decreasing") {
    const auto& s = hm();
    double max_rise = -1.0;
    for (std::size_t i = 0; i < s.w.size(); ++i) {
        CHECK(s.w[i] > 0.0);
        CHECK(s.wprime[i] < 0.0);
        if (i > 0) max_rise = std::max(max_rise, s.w[i] - s.w[i - 1]);
    }
    CHECK(max_rise <= 1e-9);
}

TEST_CASE("w(0) is stable under refinement and domain growth") {
    const double base = evaluate(hm(), 0.0);
    CHECK(std::abs(evaluate(solve_hastings_mcleod(12.0, 8.0, 16001), 0.0) - base) < 1e-6);
    CHECK(std::abs(evaluate(solve_hastings_mcleod(16.0, 10.0, 10401), 0.0) - base) < 1e-6);
}

TEST_CASE("self-convergence order two") {
    const auto a = solve_hastings_mcleod(12.0, 8.0, 4001);
    const auto b = solve_hastings_mcleod(12.0, 8.0, 8001);
    const auto c = solve_hastings_mcleod(12.0, 8.0, 16001);
    double dab = 0.0, dbc = 0.0;
    for (std::size_t i = 0; i < a.w.size(); ++i) {
        dab = std::max(dab, std::abs(a.w[i] - b.w[2 * i]));
        dbc = std::max(dbc, std::abs(b.w[2 * i] - c.w[4 * i]));
    }
    const double order = std::log2(dab / dbc);
    CHECK(order >= 1.8);
    CHECK(order <= 2.2);
}

TEST_CASE("certificates") {
    const auto& s = hm();
    const auto pc = certify_potential_positive(s);
    CHECK(pc.passed);
    CHECK(pc.min_value - pc.margin_bound > 0.0);
    CHECK(certify_lower_bound(s).passed);

    HMSolution half = s;
    for (std::size_t i = 0; i < half.w.size(); ++i)
        if (half.mesh[i] < -2.0) {
            half.w[i] /= 2.0;
            half.wprime[i] /= 2.0;
        }
    const auto hp = certify_potential_positive(half);
    CHECK_FALSE(hp.passed);
    CHECK(hp.argmin < -2.0);

    HMSolution low = s;
    for (std::size_t i = 0; i < low.w.size(); ++i) {
        const double eta = low.mesh[i];
        low.w[i] = eta < 0.0 ? std::sqrt(-eta / 8.0) : s.w[i];
    }
    const auto lb = certify_lower_bound(low);
    CHECK_FALSE(lb.passed);
    CHECK(lb.worst_eta < 0.0);
}

TEST_CASE("linearization ground state") {
    const auto sp = linearization_ground_state(hm());
    REQUIRE(sp.eigenvalues.size() == 5);
    CHECK(sp.eigenvalues[0] < 0.0);
    CHECK(sp.tag == OperatorTag::PIILinearization);

    // stub with eta + 6 w^2 = 1, i.e. constant potential -1, on a box of length 9
    // spacing balances the O(h^2) discretization error against the bisection tolerance ~ 1/h^2
    const std::size_t n = 533;
    HMSolution stub{Mesh::uniform(-8.0, 1.0, n), std::vector<double>(n), std::vector<double>(n, 0.0), {}};
    for (std::size_t i = 0; i < n; ++i) stub.w[i] = std::sqrt((1.0 - stub.mesh[i]) / 6.0);
    const auto st = linearization_ground_state(stub, 1);
    CHECK(std::abs(st.eigenvalues[0] - (-1.0 - std::numbers::pi * std::numbers::pi / 81.0)) < 1e-6);
}

TEST_CASE("Airy tail classification") {
    CHECK(classify_airy_tail(0.0, 12.0).kind == TailClass::oscillatory_decay);
    const auto lo = classify_airy_tail(0.5, 12.0);
    const auto hi = classify_airy_tail(1.5, 12.0);
    CHECK(lo.kind != TailClass::separatrix);
    CHECK(hi.kind != TailClass::separatrix);
    CHECK(lo.kind != hi.kind);
    for (double k : {0.3, 0.9}) CHECK(classify_airy_tail(k, 12.0).kind == lo.kind);
    for (double k : {1.1, 3.0}) CHECK(classify_airy_tail(k, 12.0).kind == hi.kind);
    const auto& pole = lo.kind == TailClass::pole ? lo : hi;
    CHECK(pole.pole_position < 8.0);
    CHECK(pole.pole_position > -12.0);

    const auto refl = classify_airy_tail(-1.0, 12.0);
    CHECK(refl.kind == TailClass::separatrix);
    CHECK(std::abs(refl.w_end / -std::sqrt(6.0) - 1.0) < 1e-3);
    CHECK_THROWS_AS(classify_airy_tail(std::nan(""), 12.0), std::invalid_argument);
}

TEST_CASE("backward shooting reproduces the BVP") {
    const auto s = solve_hastings_mcleod(8.0, 8.0, 32001);
    CHECK(std::abs(shoot_back_from_right(s, -4.0) - evaluate(s, -4.0)) < 1e-3);
}

TEST_CASE("stationary front matches the rescaled profile") {
    auto br = tw::continue_front_in_epsilon(0.0, 0.05, 0.00981);
    REQUIRE_FALSE(br.stalled);
    const auto& f = br.fronts.back();
    REQUIRE(f.variable == tw::FrontVariable::xi);
    const auto cmp = compare_inner_expansion(f, hm());
    CHECK(cmp.deviation <= 0.05);
    CHECK(cmp.scaled <= 2.0);
    CHECK(cmp.u0 > 0.0);
    CHECK(std::abs(inner_profile(hm(), 0.00981, 0.0) - std::sqrt(2.0) * std::cbrt(0.00981) * evaluate(hm(), 0.0)) < 1e-15);
}
