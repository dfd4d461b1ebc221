#pragma once

#include <stdexcept>

namespace quench::specfun {

/// Value and first derivative of an Airy-type function.
struct AiryPair {
    double value;
    double derivative;
};

/// Smallest positive zero of J_{-1/3}(2z^{3/2}/3) + J_{1/3}(2z^{3/2}/3), i.e. -a_1 for Ai.
struct Omega0 {
    double value;
    double residual;
};

inline constexpr double kAi0 = 0.355028053887817239260;
inline constexpr double kAiPrime0 = -0.258819403792806798405;
inline constexpr double kGamma2_3 = 1.3541179394264004;
inline constexpr double kGamma4_3 = 0.8929795115692492;

/// Switch points of the Ai evaluation. Maclaurin series (long double) on
/// [kAiryOscillatorySwitch, kAirySeriesMax]; Laplace-type integral on
/// (kAirySeriesMax, kAiryAsymptoticMin); exponential asymptotic beyond.
inline constexpr double kAiryOscillatorySwitch = -8.0;
inline constexpr double kAirySeriesMax = 5.0;
inline constexpr double kAiryAsymptoticMin = 8.0;
inline constexpr double kAiryMinArgument = -1.0e6;

/// Ai(x), Ai'(x). Relative error ~1e-11 or better on |x| <= 20 away from zeros.
/// Throws std::domain_error for x < -1e6 or non-finite x.
AiryPair airy(double x);

/// Bi(x), Bi'(x) on [-1e6, 100].
AiryPair airy_bi(double x);

/// Individual evaluation branches, exposed for overlap checks.
AiryPair airy_series(double x);
AiryPair airy_integral(double x);           // x > 0
AiryPair airy_asymptotic_positive(double x); // x > 0, optimally truncated
AiryPair airy_asymptotic_negative(double x); // x < 0, optimally truncated

/// J_{+1/3}(x) for order_sign = +1, J_{-1/3}(x) for order_sign = -1.
/// Power series for x <= 12, Hankel expansion beyond.
double bessel_j_third(int order_sign, double x);

/// Combination J_{-1/3}(2z^{3/2}/3) + J_{1/3}(2z^{3/2}/3) whose first root is Omega0.
double omega0_combination(double z);

Omega0 omega0();

}  // namespace quench::specfun
