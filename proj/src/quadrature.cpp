#include "macdonald/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace macdonald {

namespace {

constexpr int min_level = 3;
constexpr int max_level = 12;
constexpr int tail_run = 5;
constexpr double t_limit = 6.5;
constexpr double half_pi = 0.5 * std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();

double checked(const Integrand& f, double x)
{
    const double y = f(x);
    if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg << "integrand returned non-finite value " << y << " at x = " << x;
        throw QuadratureError(msg.str());
    }
    return y;
}

// One node of a double-exponential rule: abscissa, Jacobian, and whether the
// node is still representable (strictly inside the domain).
struct Node
{
    double x;
    double weight;
    bool valid;
};

struct TanhSinhMap
{
    double a;
    double b;

    Node operator()(double t) const
    {
        const double u = half_pi * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(u));
        // distance from the nearer endpoint
        const double near = (b - a) * e / (1.0 + e);
        const double x = u < 0.0 ? a + near : b - near;
        const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
        const double weight = 0.5 * (b - a) * half_pi * std::cosh(t) * sech2;
        const bool valid = near > 1e-300 * std::max(1.0, std::abs(b - a)) && x > a && x < b;
        return {x, weight, valid};
    }
};

struct ExpSinhMap
{
    double a;

    Node operator()(double t) const
    {
        const double u = half_pi * std::sinh(t);
        const double offset = std::exp(u);
        const double x = a + offset;
        const double weight = offset * half_pi * std::cosh(t);
        // beyond 1e150 even x^2 overflows; no integrand we handle lives out there
        const bool valid = offset < 1e150 && offset > 1e-300;
        return {x, weight, valid};
    }
};

// Accumulates sum w(t) f(x(t)) over t = start + k*step, k = 0, 1, ... in one
// direction, stopping once |w f| stays below cutoff for tail_run nodes.
template <typename Map>
void sweep_direction(const Integrand& f, const Map& map, double start, double step, double cutoff,
                     double& sum, double& abs_sum, std::size_t& evaluations)
{
    int small_run = 0;
    for (double t = start; std::abs(t) <= t_limit; t += step) {
        const Node node = map(t);
        if (!node.valid)
            break;
        const double term = node.weight * checked(f, node.x);
        ++evaluations;
        sum += term;
        abs_sum += std::abs(term);
        if (std::abs(term) < cutoff && std::abs(t) > 0.5) {
            if (++small_run >= tail_run)
                break;
        } else {
            small_run = 0;
        }
    }
}

template <typename Map>
QuadratureResult integrate_de(const Integrand& f, const Map& map, double abs_tol, const char* who)
{
    if (!(abs_tol > 0.0))
        throw std::invalid_argument(std::string(who) + ": abs_tol must be > 0");

    const double cutoff = abs_tol / 100.0;
    std::size_t evaluations = 0;
    double sum = 0.0;
    double abs_sum = 0.0;

    // level 0: t = 0, +-1, +-2, ...
    {
        const Node centre = map(0.0);
        const double term = centre.weight * checked(f, centre.x);
        ++evaluations;
        sum += term;
        abs_sum += std::abs(term);
        sweep_direction(f, map, 1.0, 1.0, cutoff, sum, abs_sum, evaluations);
        sweep_direction(f, map, -1.0, -1.0, cutoff, sum, abs_sum, evaluations);
    }
    double h = 1.0;
    double previous = h * sum;

    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        // new nodes are the odd multiples of h
        sweep_direction(f, map, h, 2.0 * h, cutoff, sum, abs_sum, evaluations);
        sweep_direction(f, map, -h, -2.0 * h, cutoff, sum, abs_sum, evaluations);
        const double current = h * sum;
        const double rounding = 10.0 * eps * h * abs_sum;
        const double change = std::abs(current - previous);
        if (level >= min_level && change <= std::max(abs_tol, 5.0 * rounding))
            return {current, change + rounding, evaluations};
        previous = current;
    }

    std::ostringstream msg;
    msg << who << ": no convergence to " << abs_tol << " after " << max_level
        << " refinement levels (" << evaluations << " evaluations)";
    throw QuadratureError(msg.str());
}

} // namespace

QuadratureResult integrate_interval(const Integrand& f, double a, double b, double abs_tol)
{
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate_interval: need finite a < b");
    return integrate_de(f, TanhSinhMap{a, b}, abs_tol, "integrate_interval");
}

QuadratureResult integrate_tail(const Integrand& f, double a, double abs_tol)
{
    if (!std::isfinite(a))
        throw std::invalid_argument("integrate_tail: lower limit must be finite");
    return integrate_de(f, ExpSinhMap{a}, abs_tol, "integrate_tail");
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double abs_tol)
{
    QuadratureResult result = integrate_interval(f, 0.0, 1.0, 0.5 * abs_tol);
    result += integrate_tail(f, 1.0, 0.5 * abs_tol);
    return result;
}

QuadratureResult integrate_split_log(const Integrand& f, double r, double abs_tol)
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("integrate_split_log: kink position must be finite and > 0");

    QuadratureResult result;
    if (r > 1.0) {
        // unit panel for the origin, then octave panels up to the kink
        int panels = 0;
        for (double x = 1.0; x < r; x *= 2.0)
            ++panels;
        const double share = abs_tol / (panels + 2);
        result += integrate_interval(f, 0.0, 1.0, share);
        for (double x = 1.0; x < r; x *= 2.0)
            result += integrate_interval(f, x, std::min(2.0 * x, r), share);
        result += integrate_tail(f, r, share);
    } else {
        result += integrate_interval(f, 0.0, r, 0.5 * abs_tol);
        result += integrate_tail(f, r, 0.5 * abs_tol);
    }
    return result;
}

} // namespace macdonald
