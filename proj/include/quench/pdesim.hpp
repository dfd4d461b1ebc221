#pragma once

#include "quench/travelingwave.hpp"

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quench::pde {

enum class Frame { comoving, lab };

enum class InitialKind { small_bump, front_seed, zero };

/// small_bump: amplitude * cos^2(pi (x - center) / (2 width)) on |x - center| < width.
/// front_seed: the BVP front (when given) or (1 + tanh(-(xi - xi_c)))/2 sqrt(max(mu, 0)) otherwise.
struct InitialCondition {
    InitialKind kind = InitialKind::small_bump;
    double center = 0.0;
    double width = 5.0;
    double amplitude = 0.5;
    std::shared_ptr<const tw::FrontSolution> front;
};

/// u_t = u_xx + c u_x + mu u - u^3. Comoving: mu = -tanh(eps x) (x = xi). Lab: mu = -tanh(eps (alpha x - t)).
struct SimConfig {
    Frame frame = Frame::lab;
    double alpha = 0.0;
    double c = 0.0;
    double epsilon = 0.005;
    tw::Ramp ramp = tw::Ramp::tanh;
    std::optional<double> frozen_mu;
    double x_min = 0.0;
    double x_max = 200.0;
    std::size_t n = 801;
    double t_end = 10.0;
    double dt = 0.0;  // 0: 0.4 h^2
    InitialCondition ic;
    double snapshot_every = 0.0;  // 0: initial and final only
    double track_every = 1.0;
    double track_level = 0.2;

    double h() const { return (x_max - x_min) / static_cast<double>(n - 1); }
    double step() const { return dt > 0.0 ? dt : 0.4 * h() * h(); }
    void validate() const;
    double mu(double x, double t) const;
};

struct FrontTrack {
    std::vector<double> times;
    std::vector<double> x_fr_num;
    std::vector<int> crossings;  // number of level crossings seen at that time (> 1 flags a non-monotone profile)
    double level = 0.2;
    std::vector<double> x_threshold;  // comoving only: crossing of c/4
};

struct Snapshot {
    double t;
    std::vector<double> u;
};

struct SimResult {
    std::vector<double> x;
    std::vector<Snapshot> snapshots;
    FrontTrack track;
    std::vector<std::string> warnings;
    long steps = 0;
};

class SimulationAbort : public std::runtime_error {
public:
    SimulationAbort(const std::string& what, Snapshot last) : std::runtime_error(what), last_(std::move(last)) {}
    const Snapshot& last_healthy() const { return last_; }

private:
    Snapshot last_;
};

/// Semi-implicit: Crank-Nicolson on the linear part (compact fourth-order u_xx + c u_x plus mu u, one
/// tridiagonal solve per step), second-order Adams-Bashforth on -u^3. Neumann ends.
SimResult simulate(const SimConfig& cfg);

/// Rightmost downward crossing of `level` by linear interpolation; nullopt if none. `count` receives the
/// number of crossings.
std::optional<double> level_crossing(std::span<const double> x, std::span<const double> u, double level,
                                     int* count = nullptr);

/// x0 + int_0^t 2 sqrt(mu(s)) ds with mu(s) = tanh(eps s) or clamp(eps s, 0, 1); adaptive Simpson in s = sqrt(sigma).
std::vector<double> predicted_front_path(double epsilon, tw::Ramp ramp, double x0, std::span<const double> t_grid,
                                         double tol = 1e-12);

/// (4/3) sqrt(eps) t^{3/2} + x0.
double linear_ramp_path(double epsilon, double x0, double t);

/// -(nu^2 + mu) / nu.
double envelope_velocity(double nu, double mu);

struct EnvelopeMinimum {
    double nu;
    double speed;
};
/// min over nu < 0 of the envelope velocity: (-sqrt(mu), 2 sqrt(mu)).
EnvelopeMinimum min_envelope_velocity(double mu);

struct QuenchComparison {
    std::vector<double> t;
    std::vector<double> x_num;
    std::vector<double> x_pred;
    std::vector<double> diff;
    double x0 = 0.0;
    double t_transient = 0.0;      // first time the front has moved `move` units (or the override)
    double t_nonnegative = -1.0;   // start of the final stretch with diff >= 0 (-1 if it never settles)
    double second_half_min = 0.0;  // min diff over t >= t_end / 2
    double second_half_slope = 0.0;
    bool after_transient_nonnegative = false;
    bool second_half_nonnegative_growing = false;
};

struct QuenchCompareOptions {
    std::optional<double> x0;            // default: bump support edge center + width
    std::optional<double> t_transient;   // default: first time the front moved `move` units
    double move = 5.0;
};

/// Runs the alpha = 0 quench and compares the level-0.2 front with the characteristic prediction.
QuenchComparison compare_homogeneous_quench(const SimConfig& cfg, const QuenchCompareOptions& opts = {});

/// Same comparison on a supplied track (no simulation).
QuenchComparison compare_track(const FrontTrack& track, double epsilon, tw::Ramp ramp, double t_end,
                               const QuenchCompareOptions& opts, double default_x0);

/// Mean front speed between t1 and t2 from a track (linear interpolation of x_fr).
double track_speed(const FrontTrack& track, double t1, double t2);

}  // namespace quench::pde
