#include "quench/specfun.hpp"

#include <cmath>
#include <numbers>

namespace quench::specfun {
namespace {

using ld = long double;

constexpr ld kC1 = 0.355028053887817239260L;  // Ai(0)
constexpr ld kC2 = 0.258819403792806798405L;  // -Ai'(0)
constexpr ld kSqrt3 = 1.732050807568877293527L;

void require_finite(double x) {
    if (!std::isfinite(x)) throw std::domain_error("airy: non-finite argument");
}

// f, f', g, g' of the Maclaurin representation Ai = c1 f - c2 g, Bi = sqrt3 (c1 f + c2 g).
struct Maclaurin {
    ld f, fp, g, gp;
};

Maclaurin maclaurin(ld x) {
    const ld x2 = x * x;
    const ld x3 = x2 * x;
    ld fa = 1.0L;  // a_k x^{3k}
    ld gb = x;     // b_k x^{3k+1}
    ld f = fa, g = gb, fp = 0.0L, gp = 1.0L;
    for (int k = 1; k < 400; ++k) {
        const ld k3 = 3.0L * k;
        const ld tfp = fa * x2 / (k3 - 1.0L);  // 3k a_k x^{3k-1}
        fa *= x3 / ((k3 - 1.0L) * k3);
        const ld tgp = gb * x2 / k3;  // (3k+1) b_k x^{3k}
        gb *= x3 / (k3 * (k3 + 1.0L));
        f += fa;
        g += gb;
        fp += tfp;
        gp += tgp;
        const ld scale = std::fabs(f) + std::fabs(g) + std::fabs(fp) + std::fabs(gp);
        if (std::fabs(fa) + std::fabs(gb) + std::fabs(tfp) + std::fabs(tgp) <= 1e-22L * scale) break;
    }
    return {f, fp, g, gp};
}

// u_k, v_k coefficients of the Airy asymptotic expansions.
constexpr int kMaxAsym = 60;
struct AsymCoeffs {
    ld u[kMaxAsym];
    ld v[kMaxAsym];
    AsymCoeffs() {
        u[0] = 1.0L;
        v[0] = 1.0L;
        for (int k = 1; k < kMaxAsym; ++k) {
            const ld kk = k;
            u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216.0L * kk);
            v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
        }
    }
};
const AsymCoeffs& asym() {
    static const AsymCoeffs c;
    return c;
}

// Optimally truncated sum of sign^k c_k / zeta^k over k in {start, start+step, ...}.
ld asym_sum(const ld* c, ld zeta, int start, int step, int alt) {
    ld sum = 0.0L;
    ld prev = INFINITY;
    int sign = 1;
    for (int k = start; k < kMaxAsym; k += step) {
        const ld term = sign * c[k] / std::pow(zeta, static_cast<ld>(k));
        if (std::fabs(term) > prev) break;
        sum += term;
        prev = std::fabs(term);
        if (prev < 1e-22L * std::fabs(sum)) break;
        sign *= alt;
    }
    return sum;
}

// Alternating sign pattern (-1)^k for the decaying branch, all + for the growing one.
ld asym_full(const ld* c, ld zeta, bool alternating) {
    ld sum = 0.0L, prev = INFINITY;
    for (int k = 0; k < kMaxAsym; ++k) {
        ld term = c[k] / std::pow(zeta, static_cast<ld>(k));
        if (alternating && (k % 2)) term = -term;
        if (std::fabs(term) > prev) break;
        sum += term;
        prev = std::fabs(term);
        if (prev < 1e-22L * std::fabs(sum)) break;
    }
    return sum;
}

// Hankel-expansion coefficients a_k(nu) = prod_{j=1}^k (4nu^2 - (2j-1)^2) / (k! 8^k).
ld bessel_hankel(ld nu, ld x) {
    const ld mu = 4.0L * nu * nu;
    ld p = 1.0L, q = 0.0L;
    ld a = 1.0L, prev = INFINITY;
    for (int k = 1; k < 200; ++k) {
        const ld odd = 2.0L * k - 1.0L;
        a *= (mu - odd * odd) / (k * 8.0L * x);
        if (std::fabs(a) > prev) break;
        prev = std::fabs(a);
        // k odd contributes to Q with sign (-1)^{(k-1)/2}; k even to P with sign (-1)^{k/2}
        if (k % 2) {
            q += ((k / 2) % 2 ? -a : a);
        } else {
            p += ((k / 2) % 2 ? -a : a);
        }
        if (prev < 1e-22L) break;
    }
    const ld omega = x - nu * std::numbers::pi_v<ld> / 2.0L - std::numbers::pi_v<ld> / 4.0L;
    return std::sqrt(2.0L / (std::numbers::pi_v<ld> * x)) * (p * std::cos(omega) - q * std::sin(omega));
}

// Ascending series with Gamma(k+nu+1) built from gamma0 = Gamma(nu+1) by recurrence.
ld bessel_series(ld nu, ld gamma0, ld x) {
    const ld half = x / 2.0L;
    const ld h2 = half * half;
    ld term = std::pow(half, nu) / gamma0;
    ld sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -h2 / (k * (k + nu));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > 3) break;
    }
    return sum;
}

// Internal general-order J for the Newton polish of Omega0.
ld bessel_general(ld nu, ld x) { return bessel_series(nu, std::tgamma(nu + 1.0L), x); }

}  // namespace

AiryPair airy_series(double xd) {
    require_finite(xd);
    const Maclaurin m = maclaurin(static_cast<ld>(xd));
    return {static_cast<double>(kC1 * m.f - kC2 * m.g), static_cast<double>(kC1 * m.fp - kC2 * m.gp)};
}

AiryPair airy_integral(double xd) {
    if (!(xd > 0.0)) throw std::domain_error("airy_integral: x must be positive");
    const ld x = xd;
    const ld a = std::sqrt(x);
    const ld zeta = 2.0L / 3.0L * x * a;
    const ld tmax = std::sqrt(50.0L / a);
    const ld h = 0.02L;
    const int n = static_cast<int>(std::ceil(tmax / h));
    ld s0 = 0.5L, s2 = 0.0L;  // t = 0 node weighted 1/2
    for (int i = 1; i <= n; ++i) {
        const ld t = i * h;
        const ld t2 = t * t;
        const ld w = std::exp(-a * t2) * std::cos(t2 * t / 3.0L);
        s0 += w;
        s2 += t2 * w;
    }
    s0 *= h;
    s2 *= h;
    const ld pref = std::exp(-zeta) / std::numbers::pi_v<ld>;
    const ld ai = pref * s0;
    const ld aip = -a * ai - pref * s2 / (2.0L * a);
    return {static_cast<double>(ai), static_cast<double>(aip)};
}

AiryPair airy_asymptotic_positive(double xd) {
    if (!(xd > 0.0)) throw std::domain_error("airy_asymptotic_positive: x must be positive");
    const ld x = xd;
    const ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
    const ld q = std::pow(x, 0.25L);
    const ld e = std::exp(-zeta) / (2.0L * std::sqrt(std::numbers::pi_v<ld>));
    const auto& c = asym();
    return {static_cast<double>(e / q * asym_full(c.u, zeta, true)),
            static_cast<double>(-e * q * asym_full(c.v, zeta, true))};
}

AiryPair airy_asymptotic_negative(double xd) {
    if (!(xd < 0.0)) throw std::domain_error("airy_asymptotic_negative: x must be negative");
    const ld x = -static_cast<ld>(xd);
    const ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
    const ld q = std::pow(x, 0.25L);
    const ld sp = std::sqrt(std::numbers::pi_v<ld>);
    const ld ph = zeta - std::numbers::pi_v<ld> / 4.0L;
    const auto& c = asym();
    const ld ue = asym_sum(c.u, zeta, 0, 2, -1), uo = asym_sum(c.u, zeta, 1, 2, -1);
    const ld ve = asym_sum(c.v, zeta, 0, 2, -1), vo = asym_sum(c.v, zeta, 1, 2, -1);
    const ld ai = (std::cos(ph) * ue + std::sin(ph) * uo) / (sp * q);
    const ld aip = q * (std::sin(ph) * ve - std::cos(ph) * vo) / sp;
    return {static_cast<double>(ai), static_cast<double>(aip)};
}

AiryPair airy(double x) {
    require_finite(x);
    if (x < kAiryMinArgument) throw std::domain_error("airy: argument below -1e6 is out of range");
    if (x < kAiryOscillatorySwitch) return airy_asymptotic_negative(x);
    if (x <= kAirySeriesMax) return airy_series(x);
    if (x < kAiryAsymptoticMin) return airy_integral(x);
    return airy_asymptotic_positive(x);
}

AiryPair airy_bi(double xd) {
    require_finite(xd);
    if (xd < kAiryMinArgument || xd > 100.0) throw std::domain_error("airy_bi: argument out of range");
    if (xd < kAiryOscillatorySwitch) {
        const ld x = -static_cast<ld>(xd);
        const ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
        const ld q = std::pow(x, 0.25L);
        const ld sp = std::sqrt(std::numbers::pi_v<ld>);
        const ld ph = zeta - std::numbers::pi_v<ld> / 4.0L;
        const auto& c = asym();
        const ld ue = asym_sum(c.u, zeta, 0, 2, -1), uo = asym_sum(c.u, zeta, 1, 2, -1);
        const ld ve = asym_sum(c.v, zeta, 0, 2, -1), vo = asym_sum(c.v, zeta, 1, 2, -1);
        return {static_cast<double>((-std::sin(ph) * ue + std::cos(ph) * uo) / (sp * q)),
                static_cast<double>(q * (std::cos(ph) * ve + std::sin(ph) * vo) / sp)};
    }
    if (xd <= 20.0) {
        const Maclaurin m = maclaurin(static_cast<ld>(xd));
        return {static_cast<double>(kSqrt3 * (kC1 * m.f + kC2 * m.g)),
                static_cast<double>(kSqrt3 * (kC1 * m.fp + kC2 * m.gp))};
    }
    const ld x = xd;
    const ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
    const ld q = std::pow(x, 0.25L);
    const ld e = std::exp(zeta) / std::sqrt(std::numbers::pi_v<ld>);
    const auto& c = asym();
    return {static_cast<double>(e / q * asym_full(c.u, zeta, false)),
            static_cast<double>(e * q * asym_full(c.v, zeta, false))};
}

double bessel_j_third(int order_sign, double x) {
    if (order_sign != 1 && order_sign != -1) throw std::invalid_argument("bessel_j_third: order_sign must be +1 or -1");
    if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_j_third: x must be positive");
    const ld nu = order_sign / 3.0L;
    if (x <= 12.0) {
        const ld g0 = order_sign > 0 ? static_cast<ld>(kGamma4_3) : static_cast<ld>(kGamma2_3);
        return static_cast<double>(bessel_series(nu, g0, x));
    }
    return static_cast<double>(bessel_hankel(nu, x));
}

double omega0_combination(double z) {
    const double arg = 2.0 / 3.0 * z * std::sqrt(z);
    return bessel_j_third(-1, arg) + bessel_j_third(1, arg);
}

Omega0 omega0() {
    double lo = 2.0, hi = 3.0;
    double flo = omega0_combination(lo);
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = omega0_combination(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double z = 0.5 * (lo + hi);
    // Newton polish with J'_nu = (J_{nu-1} - J_{nu+1}) / 2 and dX/dz = sqrt(z).
    const ld zl = z;
    const ld X = 2.0L / 3.0L * zl * std::sqrt(zl);
    const ld third = 1.0L / 3.0L;
    const ld dm = 0.5L * (bessel_general(-third - 1.0L, X) - bessel_general(-third + 1.0L, X));
    const ld dp = 0.5L * (bessel_general(third - 1.0L, X) - bessel_general(third + 1.0L, X));
    const ld F = bessel_general(-third, X) + bessel_general(third, X);
    const ld dF = (dm + dp) * std::sqrt(zl);
    const ld znew = zl - F / dF;
    if (std::fabs(znew - zl) < 1e-9L) z = static_cast<double>(znew);
    return {z, std::fabs(omega0_combination(z))};
}

}  // namespace quench::specfun
