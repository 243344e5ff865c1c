#include "macdonald/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace macdonald {

namespace {

constexpr double series_limit = 2.0;

void check_argument(double x, const char* who)
{
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error(std::string(who) + ": argument must be finite and > 0, got " +
                                std::to_string(x));
}

// Ascending series, coupled to I0 and I1:
//   K0 = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} t^k/(k!)^2 H_k
//   K1 = 1/x + ln(x/2) I1(x) - (x/4) sum_{k>=0} t^k/(k!(k+1)!) (psi(k+1) + psi(k+2))
// with t = x^2/4, H_k the harmonic numbers and psi(n+1) = -gamma + H_n.
struct SeriesPair
{
    double k0;
    double k1;
};

SeriesPair small_argument_series(double x)
{
    const double t = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);

    double term0 = 1.0; // t^k / (k!)^2
    double term1 = 1.0; // t^k / (k! (k+1)!)
    double harmonic = 0.0;
    double i0 = 1.0;
    double i1_sum = 1.0;
    double k0_sum = 0.0;
    double k1_sum = (-euler_gamma) + (1.0 - euler_gamma);

    constexpr double eps = 1e-17;
    for (int k = 1; k < 60; ++k) {
        const double dk = k;
        term0 *= t / (dk * dk);
        term1 *= t / (dk * (dk + 1.0));
        harmonic += 1.0 / dk;

        i0 += term0;
        i1_sum += term1;
        k0_sum += term0 * harmonic;
        // psi(k+1) + psi(k+2) = -2 gamma + H_k + H_{k+1}
        k1_sum += term1 * (-2.0 * euler_gamma + harmonic + harmonic + 1.0 / (dk + 1.0));

        if (term0 * harmonic < eps * std::abs(k0_sum) && term1 < eps * i1_sum)
            break;
    }

    const double i1 = 0.5 * x * i1_sum;
    SeriesPair out;
    out.k0 = -(log_half + euler_gamma) * i0 + k0_sum;
    out.k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_sum;
    return out;
}

// Steed's algorithm for Temme's second continued fraction (order 0), valid
// for x >= 2. Returns K0 and K1 together.
SeriesPair continued_fraction(double x)
{
    constexpr int max_iter = 10000;
    constexpr double eps = 1e-16;

    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;

    for (int i = 2; i <= max_iter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps)
            break;
    }
    h *= a1;

    const double scale = std::exp(-x);
    SeriesPair out;
    if (scale == 0.0) {
        out.k0 = 0.0;
        out.k1 = 0.0;
        return out;
    }
    out.k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * scale / s;
    out.k1 = out.k0 * (x + 0.5 - h) / x;
    return out;
}

SeriesPair evaluate(double x)
{
    return x <= series_limit ? small_argument_series(x) : continued_fraction(x);
}

} // namespace

double bessel_k0(double x)
{
    check_argument(x, "bessel_k0");
    return evaluate(x).k0;
}

double bessel_k1(double x)
{
    check_argument(x, "bessel_k1");
    return evaluate(x).k1;
}

double k0_leading(double x)
{
    check_argument(x, "k0_leading");
    return -std::log(0.5 * x);
}

} // namespace macdonald
