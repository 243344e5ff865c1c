#pragma once

#include "macdonald/model.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace macdonald {

/// One angular-momentum channel of the dimensionless radial problem
///   -Phi'' + [(m^2 - 1/4)/s^2 - C K0(s)] Phi = eps Phi   on (0, infinity).
///
/// The grid is uniform in x = ln s with n_steps intervals on [s_min, s_max].
/// find_eigenvalues treats s_max as a starting value and extends it (keeping
/// the step in x fixed) up to s_max_cap.
struct RadialProblem
{
    int m = 0;
    Coupling C{};
    double s_min = 1e-6;
    double s_max = 40.0;
    int n_steps = 20000;
    double eig_tol = 1e-10;
    double s_max_cap = 2000.0;

    void validate() const;
};

/// Radial function sampled on the log grid; nodes counts strict sign changes.
struct RadialSolution
{
    std::vector<double> grid;
    std::vector<double> phi;
    int nodes = 0;
};

struct EigenResult
{
    std::vector<double> eigenvalues; ///< ascending, all < 0
    std::vector<int> node_counts;    ///< 0, 1, 2, ...
    std::vector<RadialSolution> wavefunctions; ///< normalized, int Phi^2 ds = 1
    std::vector<double> kappa;       ///< sqrt(-eps_n)
    double s_max_used = 0.0;
    bool shallow_regime = false;     ///< C < 0.3: eps0 ~ -exp(-2/C)
    bool s_max_capped = false;       ///< the s_max extension stopped at s_max_cap
    bool below_lower_bound = false;  ///< some eps_n < -C^2/8 (1 + 1e-9)
};

class SolverError : public std::runtime_error
{
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class IntegrationOverflow : public SolverError
{
public:
    using SolverError::SolverError;
};

class GridResolutionError : public SolverError
{
public:
    using SolverError::SolverError;
};

class BracketFailure : public SolverError
{
public:
    using SolverError::SolverError;
};

inline constexpr double shallow_coupling = 0.3;

/// Regular solution integrated outward over the whole grid, seeded with
/// Phi ~ s^{m+1/2}.
RadialSolution numerov_outward(const RadialProblem& p, double eps);

/// Decaying solution integrated inward over the whole grid, seeded with
/// Phi ~ exp(-sqrt(-eps) s) at s_max.
RadialSolution numerov_inward(const RadialProblem& p, double eps);

/// Normalized log-derivative mismatch of the outward and inward solutions at
/// match_point(p); continuous in eps and zero exactly at the eigenvalues.
double mismatch(const RadialProblem& p, double eps);

/// Matching radius used by mismatch().
double match_point(const RadialProblem& p);

/// Number of negative eigenvalues from the nodes of the zero-energy regular
/// solution, including the analytic free continuation beyond s_max.
int count_bound_states(const RadialProblem& p);

EigenResult find_eigenvalues(const RadialProblem& p);

/// Negative eigenvalues of a symmetric tridiagonal finite-difference
/// discretization on the same log grid, by Sturm-sequence bisection.
std::vector<double> fd_oracle(const RadialProblem& p);

/// fd_oracle at x-steps h, h/2, h/4 combined by two-stage Richardson
/// extrapolation (h^2 and h^4 terms eliminated).
std::vector<double> fd_oracle_extrapolated(const RadialProblem& p, double h = 2e-3);

/// <Phi, H_m Phi> / <Phi, Phi> by quadrature on a log-uniform grid.
double rayleigh_quotient(const RadialProblem& p, const RadialSolution& trial);

/// Samples phi(s) on the log grid of p.
RadialSolution sample_trial(const RadialProblem& p, const std::function<double(double)>& phi);

/// Strict sign changes, ignoring exact zeros.
int count_sign_changes(const std::vector<double>& values);

} // namespace macdonald
