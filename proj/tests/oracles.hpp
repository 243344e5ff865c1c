#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <functional>
#include <algorithm>
#include <numbers>

namespace oracle {

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, trapezoid in t.
// The integrand is analytic in the strip |Im t| < pi/2, so the rule converges
// geometrically; the tail is cut where x cosh t exceeds 750.
inline double bessel_k_integral(int nu, double x)
{
    const long double h = 1.0L / 64.0L;
    const long double t_max = std::acosh(std::max(1.0L, 760.0L / x)) + 1.0L;
    long double sum = 0.5L * std::exp(-static_cast<long double>(x));
    for (long double t = h; t <= t_max; t += h)
        sum += std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
    return static_cast<double>(h * sum);
}

inline double k0(double x) { return bessel_k_integral(0, x); }
inline double k1(double x) { return bessel_k_integral(1, x); }

// Ascending series in long double, valid for small x.
inline double k0_series(double xd)
{
    const long double x = xd;
    const long double gamma = 0.57721566490153286060651209L;
    const long double t = x * x / 4.0L;
    long double term = 1.0L;
    long double harmonic = 0.0L;
    long double i0 = 1.0L;
    long double tail = 0.0L;
    for (int k = 1; k < 60; ++k) {
        term *= t / (static_cast<long double>(k) * k);
        harmonic += 1.0L / k;
        i0 += term;
        tail += term * harmonic;
    }
    return static_cast<double>(-(std::log(x / 2.0L) + gamma) * i0 + tail);
}

// Composite Gauss-Legendre (10 point) on n panels of [a, b]; a plain reference
// rule unrelated to the double-exponential implementation.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels)
{
    static const double nodes[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                    0.8650633666889845, 0.9739065285171717};
    static const double weights[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                      0.1494513491505806, 0.0666713443086881};
    const double width = (b - a) / panels;
    long double sum = 0.0L;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        const double half = 0.5 * width;
        for (int k = 0; k < 5; ++k)
            sum += weights[k] * half * (f(mid - half * nodes[k]) + f(mid + half * nodes[k]));
    }
    return static_cast<double>(sum);
}

// int_0^inf f(s) ds for f with at most a log singularity at 0: substitute
// s = exp(u) and integrate f(e^u) e^u over u in [u_lo, u_hi].
inline double log_substituted(const std::function<double(double)>& f, double u_lo = -40.0, double u_hi = 6.7,
                              int panels = 4000)
{
    return gauss_legendre([&f](double u) { const double s = std::exp(u); return f(s) * s; }, u_lo, u_hi, panels);
}

inline double relative_error(double got, double want) { return std::abs(got - want) / std::abs(want); }

} // namespace oracle
