#pragma once

#include <optional>
#include <string>
#include <vector>

namespace macdonald {

/// Dimensionful inputs of H = -(hbar^2 / 2 mu) Laplacian - alpha K0(beta r).
/// hbar, mu and beta must be strictly positive; alpha >= 0 (alpha = 0 is the
/// free particle).
struct PhysicalParams
{
    double hbar = 1.0;
    double mu = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    /// Throws std::invalid_argument when the invariants do not hold.
    void validate() const;
};

/// Dimensionless coupling C = 2 mu alpha / (hbar beta)^2.
class Coupling
{
public:
    Coupling() = default;
    /// Throws std::invalid_argument for negative or non-finite C.
    explicit Coupling(double c);

    double value() const { return value_; }

    friend bool operator==(Coupling, Coupling) = default;

private:
    double value_ = 0.0;
};

struct KatoReport
{
    double lambda = 0.0;
    double a = 0.0;
    double b = 0.0;
    double A = 0.0;
    /// b / (1 - a); empty when a >= 1 (relative bound not established at lambda).
    std::optional<double> f;

    bool valid() const { return f.has_value(); }
};

struct SpectralConstants
{
    double lower_bound_physical;      ///< -C alpha / 8
    double lower_bound_dimensionless; ///< -C^2 / 8
    double gap_physical;              ///< C alpha / 8
};

Coupling coupling_from_physical(const PhysicalParams& p);

/// hbar^2 beta^2 / (2 mu); a dimensionless energy eps maps to E = eps * energy_scale.
double energy_scale(const PhysicalParams& p);

/// Dimensionless effective potential (m^2 - 1/4)/s^2 - C K0(s).
double v_eff(double s, int m, Coupling c);

/// Relative-bound constants a(lambda), b(lambda) of the K0 potential with
/// respect to the free Hamiltonian, and f = b / (1 - a) when a < 1.
KatoReport kato_constants(const PhysicalParams& p, double lambda);

/// Minimiser of f(lambda) = A lambda^2 / (lambda - A): lambda0 = 2A.
double optimal_lambda(const PhysicalParams& p);

SpectralConstants spectral_constants(const PhysicalParams& p);

/// One (C, m) row of a sweep report. Physical fields are empty in
/// dimensionless mode.
struct SpectralSummary
{
    double C = 0.0;
    int m = 0;
    int count = 0;
    std::optional<double> eps0;
    std::optional<double> E0_physical;
    std::optional<double> lower_bound_physical;
    double lower_bound_dimensionless = 0.0;
    std::optional<double> gap_physical;
    double seto_closed = 0.0;
    double seto_numeric = 0.0;
    std::vector<std::string> flags;
    std::string error; ///< solver error message; empty on success
};

} // namespace macdonald
