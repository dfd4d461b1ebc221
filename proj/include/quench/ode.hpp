#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace quench {

using OdeField = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;
using EventFn = std::function<double(double t, std::span<const double> y)>;

struct EventSpec {
    EventFn fn;
    bool terminal = true;
    /// 0: any crossing, +1: increasing only, -1: decreasing only.
    int direction = 0;
};

struct EventRecord {
    std::size_t index = 0;
    double t = 0.0;
    std::vector<double> y;
};

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h0 = 0.0;  // 0: automatic
    double h_max = 0.0;  // 0: unlimited
    double h_min = 1e-14;
    long max_steps = 50'000'000;
    bool store_steps = true;
    double event_tol = 1e-12;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<std::vector<double>> y;
    std::vector<EventRecord> events;
    bool terminated_by_event = false;
    long steps = 0;
};

/// Raised on step underflow or non-finite state; carries the last accepted state.
class OdeBlowUp : public std::runtime_error {
public:
    OdeBlowUp(const std::string& what, double t, std::vector<double> y)
        : std::runtime_error(what), t_(t), y_(std::move(y)) {}
    double t() const { return t_; }
    const std::vector<double>& y() const { return y_; }

private:
    double t_;
    std::vector<double> y_;
};

/// Dormand-Prince 5(4) with proportional step control. Integrates from t0 toward t1 (either
/// direction). Event crossings are located by bisection in time.
Trajectory integrate_ode(const OdeField& field, std::vector<double> y0, double t0, double t1,
                         const OdeOptions& opts = {}, const std::vector<EventSpec>& events = {});

}  // namespace quench
