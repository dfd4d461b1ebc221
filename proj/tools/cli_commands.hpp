#pragma once

#include "cli_output.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace quench::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kSolverFailure = 2, kCertificateFailure = 3, kSimulationAbort = 4 };

inline constexpr const char* kToolVersion = "1.0.0";

struct FrontArgs {
    double c = 1.2;
    double eps = 0.0025;
    double eps_start = 0.05;
    double h = 0.1;
    double halflength_factor = 5.0;
    double step = 0.2231435513142097;
};

struct SweepArgs {
    double c = 1.2;
    std::string eps_decade;  // empty: 2.5e-4:2.5e-3 (BVP) or 1e-5:1e-3 (--fold)
    int points = 0;          // 0: 10 (BVP) or 7 (--fold)
    bool fold = false;
    std::string delta = "inf";
    int jobs = 1;
    double eps_start = 0.05;
    double h = 0.1;
    double halflength_factor = 5.0;
};

struct PainleveArgs {
    std::vector<double> window{12.0, 8.0};
    std::size_t n = 8001;
    std::string classify;
};

struct PdeArgs {
    std::string frame = "lab";
    double alpha = 0.0;
    double c = 1.2;
    double eps = 0.005;
    std::string ramp = "tanh";
    std::optional<double> frozen_mu;
    double x_min = 0.0;
    double x_max = 1020.0;
    double h = 0.25;
    double t_end = 400.0;
    double dt = 0.0;
    std::string ic = "bump";
    double ic_center = 0.0;
    double ic_width = 5.0;
    double ic_amplitude = 0.5;
    double snapshot_every = 0.0;
    double track_every = 1.0;
    double level = 0.2;
    std::optional<double> t_transient;
    bool bvp_front = false;
};

/// Each command writes into `out`, logs human-readable lines to `log` and returns an exit code.
/// `meta` goes into every CSV header.
ExitCode cmd_front(const FrontArgs& a, OutputSet& out, const KeyValues& meta, std::ostream& log);
ExitCode cmd_delay_sweep(const SweepArgs& a, OutputSet& out, const KeyValues& meta, std::ostream& log);
ExitCode cmd_painleve(const PainleveArgs& a, OutputSet& out, const KeyValues& meta, std::ostream& log);
ExitCode cmd_pde(const PdeArgs& a, OutputSet& out, const KeyValues& meta, std::ostream& log);

/// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quench::cli
