#include "quench/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quench {

Mesh::Mesh(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 11) throw std::invalid_argument("mesh: at least 11 nodes required");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i + 1] > nodes_[i])) throw std::invalid_argument("mesh: nodes must be strictly increasing");
    }
    if (max_spacing_ratio() > 4.0 + 1e-12) throw std::invalid_argument("mesh: adjacent spacing ratio exceeds 4");
}

Mesh Mesh::uniform(double a, double b, std::size_t n) {
    if (!(b > a) || n < 2) throw std::invalid_argument("mesh: bad uniform range");
    std::vector<double> x(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + h * static_cast<double>(i);
    x.back() = b;
    return Mesh(std::move(x));
}

namespace {

// Offsets 0 < s_1 < s_2 < ... reaching at least `extent`: spacing h_min up to `core`, then geometric growth.
std::vector<double> graded_offsets(double extent, double core, double h_min, double ratio, double h_max) {
    std::vector<double> s;
    double pos = 0.0, h = h_min;
    while (pos < extent) {
        if (pos >= core) h = std::min(h * ratio, h_max);
        pos += h;
        s.push_back(std::min(pos, extent));
    }
    // merge a sliver at the end into the preceding cell
    if (s.size() >= 2) {
        const double last = s.back() - s[s.size() - 2];
        const double prev = s.size() >= 3 ? s[s.size() - 2] - s[s.size() - 3] : s[0];
        if (last < 0.25 * prev) {
            s.pop_back();
            s.back() = extent;
        }
    }
    return s;
}

}  // namespace

Mesh Mesh::graded(double a, double b, double center, double core, double h_min, double ratio, double h_max) {
    if (!(b > a) || !(h_min > 0.0) || !(ratio >= 1.0) || !(h_max >= h_min) || center < a || center > b)
        throw std::invalid_argument("mesh: bad graded parameters");
    const auto right = graded_offsets(b - center, core, h_min, ratio, h_max);
    const auto left = graded_offsets(center - a, core, h_min, ratio, h_max);
    std::vector<double> x;
    x.reserve(left.size() + right.size() + 1);
    for (auto it = left.rbegin(); it != left.rend(); ++it) x.push_back(center - *it);
    if (x.empty() || center > x.back()) x.push_back(center);
    for (double s : right) x.push_back(center + s);
    x.front() = a;
    x.back() = b;
    return Mesh(std::move(x));
}

double Mesh::min_spacing() const {
    double m = spacing(0);
    for (std::size_t i = 1; i + 1 < size(); ++i) m = std::min(m, spacing(i));
    return m;
}

double Mesh::max_spacing() const {
    double m = spacing(0);
    for (std::size_t i = 1; i + 1 < size(); ++i) m = std::max(m, spacing(i));
    return m;
}

double Mesh::max_spacing_ratio() const {
    double r = 1.0;
    for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
        const double a = nodes_[i] - nodes_[i - 1], b = nodes_[i + 1] - nodes_[i];
        r = std::max(r, std::max(a / b, b / a));
    }
    return r;
}

bool Mesh::is_uniform(double rel_tol) const {
    const double h = (back() - front()) / static_cast<double>(size() - 1);
    for (std::size_t i = 0; i + 1 < size(); ++i)
        if (std::abs(spacing(i) - h) > rel_tol * h) return false;
    return true;
}

std::size_t Mesh::locate(double x) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(i, size() - 2);
}

double interp_linear(std::span<const double> xs, std::span<const double> ys, double x) {
    if (xs.size() != ys.size() || xs.empty()) throw std::invalid_argument("interp_linear: size mismatch");
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

}  // namespace quench
