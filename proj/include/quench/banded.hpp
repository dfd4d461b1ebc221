#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quench {

/// Raised by BandedLU when a pivot vanishes.
class JacobianSingular : public std::runtime_error {
public:
    explicit JacobianSingular(std::size_t pivot)
        : std::runtime_error("jacobian singular at pivot " + std::to_string(pivot)), pivot_(pivot) {}
    std::size_t pivot() const { return pivot_; }

private:
    std::size_t pivot_;
};

/// Square band matrix with kl sub- and ku super-diagonals.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    std::size_t size() const { return n_; }
    std::size_t kl() const { return kl_; }
    std::size_t ku() const { return ku_; }

    /// Entry (i, j); |i - j| must lie inside the band.
    double& operator()(std::size_t i, std::size_t j);
    double operator()(std::size_t i, std::size_t j) const;
    bool in_band(std::size_t i, std::size_t j) const;
    void set_zero();

    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    friend class BandedLU;
    std::size_t n_, kl_, ku_, ld_;
    std::vector<double> data_;  // row-major, ld_ = kl + ku + 1 entries per row
};

/// LU factorization with partial pivoting of a BandedMatrix (fill widens the upper band to kl + ku).
class BandedLU {
public:
    explicit BandedLU(const BandedMatrix& a);

    std::size_t size() const { return n_; }
    /// Solves A x = b in place.
    void solve(std::span<double> b) const;

private:
    std::size_t n_, kl_, ku_, w_;
    std::vector<double> lu_;  // row i holds columns [i - kl, i + kl + ku]
    std::vector<std::size_t> piv_;
    double& at(std::size_t i, std::size_t j) { return lu_[i * w_ + (j + kl_ - i)]; }
    double at(std::size_t i, std::size_t j) const { return lu_[i * w_ + (j + kl_ - i)]; }
};

}  // namespace quench
