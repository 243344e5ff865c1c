#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace macdonald {

/// Outcome of one adaptive double-exponential integration.
struct QuadratureResult
{
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;

    QuadratureResult& operator+=(const QuadratureResult& other)
    {
        value += other.value;
        abs_error_estimate += other.abs_error_estimate;
        evaluations += other.evaluations;
        return *this;
    }
};

/// Raised when the refinement budget is exhausted or the integrand returns a
/// non-finite value.
class QuadratureError : public std::runtime_error
{
public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

using Integrand = std::function<double(double)>;

inline constexpr double default_abs_tol = 1e-12;

/// Tanh-sinh rule on the finite interval (a, b). Endpoint singularities of
/// logarithmic or algebraic-integrable type are tolerated; f is never evaluated
/// exactly at a or b.
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    double abs_tol = default_abs_tol);

/// Exp-sinh rule on (a, infinity) for integrands that decay at least
/// exponentially.
QuadratureResult integrate_tail(const Integrand& f, double a, double abs_tol = default_abs_tol);

/// Integral over (0, infinity): tanh-sinh on (0, 1) plus exp-sinh on (1, infinity).
QuadratureResult integrate_semi_infinite(const Integrand& f, double abs_tol = default_abs_tol);

/// Integral over (0, infinity) split at the kink r of an integrand such as
/// s |ln(r/s)| g(s). Panels (0, r) and (r, infinity) are integrated
/// separately; for r > 1 the first is cut at 1 and at powers of two.
QuadratureResult integrate_split_log(const Integrand& f, double r, double abs_tol = default_abs_tol);

} // namespace macdonald
