#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace quench {

/// Strictly increasing 1-D grid. At least 11 nodes; adjacent spacings differ by at most a factor 4.
class Mesh {
public:
    explicit Mesh(std::vector<double> nodes);

    static Mesh uniform(double a, double b, std::size_t n);

    /// Spacing h_min on [center - core, center + core], growing geometrically by `ratio`
    /// per cell outside the core until h_max, clipped to [a, b].
    static Mesh graded(double a, double b, double center, double core, double h_min, double ratio = 1.05,
                       double h_max = 1.0);

    std::span<const double> nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }
    /// Width of cell [x_i, x_{i+1}].
    double spacing(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }
    double min_spacing() const;
    double max_spacing() const;
    double max_spacing_ratio() const;
    bool is_uniform(double rel_tol = 1e-9) const;
    /// Index i with x_i <= x < x_{i+1}, clamped to [0, size-2].
    std::size_t locate(double x) const;

private:
    std::vector<double> nodes_;
};

/// Linear interpolation of (xs, ys) at x, constant extrapolation.
double interp_linear(std::span<const double> xs, std::span<const double> ys, double x);

}  // namespace quench
