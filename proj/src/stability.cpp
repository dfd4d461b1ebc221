#include "quench/stability.hpp"

#include "quench/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quench::stab {

namespace {

double hermite(const tw::FrontSolution& f, double x) {
    const auto& m = f.mesh;
    if (x < m.front() || x > m.back()) throw std::out_of_range("build_Lc: resampling outside the front domain");
    const std::size_t i = m.locate(x);
    const double h = m.spacing(i);
    const double t = (x - m[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * f.u[i] + h10 * h * f.v[i] + h01 * f.u[i + 1] + h11 * h * f.v[i + 1];
}

void fill_matrix(TridiagOperator& op) {
    const std::size_t n = op.x.size();
    op.diag.resize(n);
    op.off.assign(n > 0 ? n - 1 : 0, 1.0 / (op.h * op.h));
    for (std::size_t i = 0; i < n; ++i) op.diag[i] = -2.0 / (op.h * op.h) + op.q[i];
}

}  // namespace

TridiagOperator build_Lc(const tw::FrontSolution& front, const LcOptions& opts) {
    const auto& m = front.mesh;
    double a = m.front(), b = m.back();
    if (opts.window) {
        a = std::max(a, opts.window->first);
        b = std::min(b, opts.window->second);
        if (!(b > a)) throw std::invalid_argument("build_Lc: empty window");
    }
    const double h_target = opts.h > 0.0 ? opts.h : m.max_spacing();
    const auto cells = static_cast<std::size_t>(std::ceil((b - a) / h_target - 1e-9));
    if (cells < 3) throw std::invalid_argument("build_Lc: window too short");
    TridiagOperator op;
    op.h = (b - a) / static_cast<double>(cells);
    op.c = front.params.c;
    op.tag = OperatorTag::Lc;
    const double mc = front.params.c * front.params.c / 4.0;
    // mu is closed form in the mesh variable: tanh(eps zeta), or -tanh(eps xi) for the c = 0 orientation
    const double sgn = front.variable == tw::FrontVariable::xi ? -1.0 : 1.0;
    for (std::size_t i = 1; i < cells; ++i) {
        const double x = a + op.h * static_cast<double>(i);
        const double u = hermite(front, x);
        const double mu = front.params.mu(sgn * x);
        op.x.push_back(x);
        op.u_star.push_back(u);
        op.q.push_back(mu - mc - 3.0 * u * u);
    }
    fill_matrix(op);
    return op;
}

TridiagOperator box_operator(double q0, double L, std::size_t n) {
    if (!(L > 0.0) || n < 1) throw std::invalid_argument("box_operator: need L > 0 and n >= 1");
    TridiagOperator op;
    op.h = 2.0 * L / static_cast<double>(n + 1);
    for (std::size_t i = 1; i <= n; ++i) op.x.push_back(-L + op.h * static_cast<double>(i));
    op.q.assign(n, q0);
    fill_matrix(op);
    return op;
}

Spectrum leading_eigenvalues(const TridiagOperator& op, std::size_t k) {
    if (k == 0) throw std::domain_error("leading_eigenvalues: k must be at least 1");
    Spectrum s = eig_tridiag_symmetric(op.diag, op.off, k);
    s.domain_halflength = 0.5 * op.window_length();
    s.tag = op.tag;
    return s;
}

std::pair<double, double> essential_spectrum_edges(double c) { return {-2.0, -1.0 - c * c / 4.0}; }

std::vector<double> eigenvector(const TridiagOperator& op, double lambda) {
    const std::size_t n = op.x.size();
    double scale = 1.0;
    for (double d : op.diag) scale = std::max(scale, std::abs(d));
    double shift = lambda + 1e-13 * scale;
    std::vector<double> v(n, 1.0);
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            BandedMatrix a(n, 1, 1);
            for (std::size_t i = 0; i < n; ++i) {
                a(i, i) = op.diag[i] - shift;
                if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = op.off[i];
            }
            BandedLU lu(a);
            for (int it = 0; it < 3; ++it) {
                lu.solve(v);
                double m = 0.0;
                for (double x : v) m = std::max(m, std::abs(x));
                for (double& x : v) x /= m;
            }
            const auto big = std::max_element(v.begin(), v.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
            if (*big < 0.0)
                for (double& x : v) x = -x;
            return v;
        } catch (const JacobianSingular&) {
            shift += 1e-11 * scale;
        }
    }
    throw std::runtime_error("eigenvector: inverse iteration failed");
}

std::vector<double> apply_L0(const TridiagOperator& op, std::span<const double> v) {
    const std::size_t n = v.size();
    if (n != op.x.size()) throw std::invalid_argument("apply_L0: size mismatch");
    const double h = op.h, c = op.c, mc = c * c / 4.0;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = i > 0 ? v[i - 1] : 0.0;
        const double r = i + 1 < n ? v[i + 1] : 0.0;
        // mu - 3 u*^2 = q + c^2/4
        out[i] = (l - 2.0 * v[i] + r) / (h * h) - c * (r - l) / (2.0 * h) + (op.q[i] + mc) * v[i];
    }
    return out;
}

ConjugationCheck conjugation_check(const TridiagOperator& lc) {
    const auto spec = leading_eigenvalues(lc, 1);
    const double lam = spec.eigenvalues.front();
    const auto phi = eigenvector(lc, lam);
    // reference point at the eigenvector peak keeps the weight representable
    const auto peak = std::max_element(phi.begin(), phi.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
    const double xref = lc.x[static_cast<std::size_t>(peak - phi.begin())];
    std::vector<double> w(phi.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(lc.c * (lc.x[i] - xref) / 2.0) * phi[i];
        if (!std::isfinite(w[i])) throw std::invalid_argument("conjugation_check: window too long for the weight");
    }
    const auto lw = apply_L0(lc, w);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        num = std::max(num, std::abs(lw[i] - lam * w[i]));
        den = std::max(den, std::abs(w[i]));
    }
    return {lam, num / den, lc.h};
}

}  // namespace quench::stab
