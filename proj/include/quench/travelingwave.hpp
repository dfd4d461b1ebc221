#pragma once

#include "quench/continuation.hpp"
#include "quench/mesh.hpp"
#include "quench/newton.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace quench::tw {

enum class Ramp { tanh, linear_clipped };

/// Speed c and ramp rate epsilon. In zeta = -xi the ramp reads mu(zeta) = tanh(eps zeta)
/// (or clamp(eps zeta, -1, 1)).
struct QuenchParams {
    double c = 1.2;
    double epsilon = 0.0025;
    Ramp ramp = Ramp::tanh;

    void validate() const;
    double mu(double zeta) const;
    /// Inverse of mu on (-1, 1).
    double zeta_of_mu(double mu) const;
    double mu_c() const { return c * c / 4.0; }
};

/// Independent variable of a stored profile.
enum class FrontVariable { zeta, xi };

/// Discrete heteroclinic profile. For c > 0 the mesh is in zeta = -xi (u increasing);
/// for c = 0 it is in xi (u decreasing). v is du/d(mesh variable).
struct FrontSolution {
    Mesh mesh;
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> mu;
    std::vector<double> log_u;
    QuenchParams params;
    NewtonReport report;
    FrontVariable variable = FrontVariable::zeta;
    double mu_fr = 0.0;
    double zeta_fr = 0.0;
    bool has_interface = false;
};

struct DispersionPoint {
    double lambda_br;
    double nu_br;
    double mu_c;
};

/// Double root of nu^2 + c nu + mu - lambda = 0 in nu.
DispersionPoint dispersion_branch_point(double c, double mu);

struct EndStateEigen {
    double slow;        // +-2 eps, eigenvector (0, 0, 1)
    double nu_plus;     // c/2 + sqrt(...), eigenvector (1, nu, 0)
    double nu_minus;    // c/2 - sqrt(...)
};

struct EquilibriumEigenpairs {
    EndStateEigen left;   // (u, v, mu) = (0, 0, -1)
    EndStateEigen right;  // (1, 0, 1)
};

EquilibriumEigenpairs equilibrium_eigenpairs(double c, double epsilon);

/// Unstable projection slope at the left truncation: positive root of nu^2 - c nu + mu = 0.
double left_projection_slope(double c, double mu_left);
/// Stable projection slope at the right truncation about sqrt(mu): c/2 - sqrt(c^2/4 + 2 mu).
double right_projection_slope(double c, double mu_right);

class FrontSolveError : public std::runtime_error {
public:
    FrontSolveError(const std::string& what, NewtonReport rep) : std::runtime_error(what), report_(std::move(rep)) {}
    const NewtonReport& report() const { return report_; }

private:
    NewtonReport report_;
};

class NoInterface : public std::runtime_error {
public:
    NoInterface() : std::runtime_error("no interface: threshold never crossed") {}
};

struct FrontSolveOptions {
    NewtonOptions newton{};
    /// Floor on mu inside the logarithm of the default tanh seed.
    double seed_mu_floor = 1e-3;
};

/// Solves u'' - c u' + mu u - u^3 = 0 on zeta in [-L, L] with n uniform nodes and projection
/// boundary conditions. Unknown is log u, which keeps the exponentially small plateau well
/// conditioned. Throws FrontSolveError on Newton failure, std::invalid_argument if L < 5/eps
/// or n < 2001.
FrontSolution solve_front(const QuenchParams& params, double domain_halflength, std::size_t n,
                          const FrontSolution* guess = nullptr, const FrontSolveOptions& opts = {});

/// Same on an arbitrary zeta mesh (e.g. graded toward the interface).
FrontSolution solve_front_on_mesh(const QuenchParams& params, Mesh mesh, const FrontSolution* guess = nullptr,
                                  const FrontSolveOptions& opts = {});

/// Initial log-profile on `mesh` (zeta) for `params` built from an earlier front at another epsilon:
/// mu - mu_c is stretched by (eps_old/eps_new)^{2/3} before interpolation.
std::vector<double> predict_log_profile(const QuenchParams& params, const Mesh& mesh, const FrontSolution& prev);

/// Default seed (1 + tanh(zeta - zeta_c))/2 * sqrt(max(mu, floor)) in log form.
std::vector<double> seed_log_profile(const QuenchParams& params, const Mesh& mesh, double mu_floor = 1e-3);

struct FrontLocation {
    double mu_fr;
    double zeta_fr;
};

/// First crossing of u through c/4 (zeta ascending), linear interpolation in mu.
/// Requires c > 0; throws NoInterface if never crossed.
FrontLocation front_location(const FrontSolution& sol);

/// mu_c + Omega0 (1 - c^4/16)^{2/3} eps^{2/3}.
double predicted_delay(double c, double epsilon);

/// u at xi = 0 (c = 0 mode diagnostic).
double amplitude_at_origin(const FrontSolution& sol);

/// min_i (u_{i+1} - u_i) along the zeta orientation.
double min_increment(const FrontSolution& sol);

struct PlateauCheck {
    double max_u_below;      // max u where mu <= mu_c - delta
    double max_dev_above;    // max |u - sqrt(mu)| where mu >= mu_c + delta
};
PlateauCheck plateau_check(const FrontSolution& sol, double delta = 0.1);

struct AmplitudeSample {
    double epsilon;
    double u0;
    bool converged = true;
};

/// Log-log slope of u(xi = 0) versus eps. Needs >= 4 converged samples.
double stationary_amplitude_exponent(std::span<const AmplitudeSample> samples);

/// Resolution used by epsilon continuation: uniform spacing h on [-L_factor/eps, L_factor/eps].
struct FrontDiscretization {
    double h = 0.1;
    double halflength_factor = 5.0;
    std::size_t min_nodes = 2001;
    std::size_t nodes(double epsilon) const;
};

struct FrontBranch {
    std::vector<FrontSolution> fronts;  // the start, each requested stop and the final entry
    ContinuationBranch raw;             // param = ln eps, solution = log u
    bool stalled = false;
};

/// Natural-parameter continuation in ln eps from eps_start to eps_end at fixed c, with monotonicity
/// as an acceptance test. `stops` are epsilon values that must appear as branch entries.
FrontBranch continue_front_in_epsilon(double c, double eps_start, double eps_end, const FrontDiscretization& disc = {},
                                      double step_ln = 0.2231435513142097, std::vector<double> stops = {},
                                      const FrontSolveOptions& opts = {});

/// Rebuilds a FrontSolution from a branch entry.
FrontSolution front_from_entry(double c, const ContinuationEntry& e, const FrontDiscretization& disc);

}  // namespace quench::tw
