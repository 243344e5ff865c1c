#pragma once

#include "macdonald/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace macdonald {

/// Upper bound on the number of bound states in one channel (d = 2).
struct SetoBound
{
    int m = 0;
    int d = 2;
    double closed_form = 0.0;
    /// Quadrature evaluation of the bound's integral expression; NaN when not
    /// computed.
    double numeric = 0.0;
    /// The m >= 1 count bound needs 2m + d - 2 >= 1.
    bool applicable = true;

    /// Larger of closed_form and numeric (numeric ignored when NaN).
    double effective() const;
};

struct InnerSample
{
    double r;
    double with_one;  ///< int s (1 + |ln r/s|) K0(s) ds
    double log_only;  ///< int s |ln r/s| K0(s) ds
};

/// Full quadrature of the s-wave bound, with the inner integrals recorded at
/// a few radii.
struct Seto0Numeric
{
    SetoBound bound;
    /// (1/2) int r K0 (inner) dr / int r K0 dr, i.e. the coefficient of C.
    double bracket_with_one = 0.0;
    double bracket_log_only = 0.0;
    std::vector<InnerSample> inner_samples;
};

struct KatoCheck
{
    double lambda = 0.0;
    double sigma = 0.0;
    double lhs = 0.0; ///< ||V Psi||_2
    double rhs = 0.0; ///< a ||H0 Psi||_2 + b ||Psi||_2
    bool satisfied = false;
    double h0_norm = 0.0;   ///< ||H0 Psi||_2
    double sup_norm = 0.0;  ///< ||Psi||_inf = Psi(0)
    /// mu^{1/2} / (4 pi hbar lambda) (lambda^2 ||Psi|| + ||H0 Psi||), the
    /// sup-norm estimate the constants a, b rest on.
    double sup_bound = 0.0;
};

enum class CheckStatus { pass, fail, expected_discrepancy };

std::string to_string(CheckStatus status);

struct IdentityItem
{
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    CheckStatus status = CheckStatus::pass;
    std::string note;
};

struct IdentityReport
{
    std::vector<IdentityItem> items;
    bool all_passed() const; ///< no item with status fail
};

SetoBound seto_m(Coupling c, int m);
SetoBound seto_0_closed(Coupling c);
Seto0Numeric seto_0_numeric(Coupling c);

/// Coefficient of C in the s-wave bound (C-independent), computed once and cached.
double seto_0_bracket_with_one();

/// Strict integer consequence of N < bound: count <= ceil(bound) - 1, using
/// the bound's effective value. Bounds within 1e-9 of an integer are snapped.
bool check_count(int count, const SetoBound& bound);
bool check_count(int count, double bound);

/// Samples ||V psi|| <= a ||H0 psi|| + b ||psi|| on the normalized 2D Gaussian
/// of width sigma.
KatoCheck kato_inequality_sample(const PhysicalParams& p, double lambda, double sigma);

using K0Function = std::function<double(double)>;

/// Integral identities behind the Seto evaluations, each checked to 1e-10
/// (single integrals) or 1e-9 (inner/outer identities). k0 may be replaced to
/// exercise the failure path.
IdentityReport integral_identity_suite(const K0Function& k0 = {});

} // namespace macdonald
