#include "quench/banded.hpp"

#include <algorithm>
#include <cmath>

namespace quench {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ld_(kl + ku + 1), data_(n * (kl + ku + 1), 0.0) {
    if (n == 0) throw std::invalid_argument("banded matrix: empty");
}

bool BandedMatrix::in_band(std::size_t i, std::size_t j) const {
    return i < n_ && j < n_ && j + kl_ >= i && j <= i + ku_;
}

double& BandedMatrix::operator()(std::size_t i, std::size_t j) {
    if (!in_band(i, j)) throw std::out_of_range("banded matrix: entry outside band");
    return data_[i * ld_ + (j + kl_ - i)];
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
    if (!in_band(i, j)) return 0.0;
    return data_[i * ld_ + (j + kl_ - i)];
}

void BandedMatrix::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) s += data_[i * ld_ + (j + kl_ - i)] * x[j];
        y[i] = s;
    }
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.n_), kl_(a.kl_), ku_(a.ku_), w_(2 * a.kl_ + a.ku_ + 1), lu_(a.n_ * (2 * a.kl_ + a.ku_ + 1), 0.0),
      piv_(a.n_) {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        for (std::size_t j = j0; j <= j1; ++j) at(i, j) = a.data_[i * a.ld_ + (j + kl_ - i)];
    }
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const std::size_t last_col = std::min(n_ - 1, k + kl_ + ku_);
        std::size_t p = k;
        double best = std::abs(at(k, k));
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            if (std::abs(at(i, k)) > best) {
                best = std::abs(at(i, k));
                p = i;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) throw JacobianSingular(k);
        piv_[k] = p;
        if (p != k) {
            for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
        }
        const double d = at(k, k);
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const double l = at(i, k) / d;
            at(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
        }
    }
}

void BandedLU::solve(std::span<double> b) const {
    if (b.size() != n_) throw std::invalid_argument("banded solve: size mismatch");
    for (std::size_t k = 0; k < n_; ++k) {
        if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        for (std::size_t i = k + 1; i <= last_row; ++i) b[i] -= at(i, k) * b[k];
    }
    for (std::size_t ii = n_; ii-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, ii + kl_ + ku_);
        double s = b[ii];
        for (std::size_t j = ii + 1; j <= last_col; ++j) s -= at(ii, j) * b[j];
        b[ii] = s / at(ii, ii);
    }
}

}  // namespace quench
