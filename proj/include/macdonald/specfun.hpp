#pragma once

// Modified Bessel functions of the second kind, orders 0 and 1, for real
// positive arguments in double precision.

namespace macdonald {

struct SpecialConstants
{
    static constexpr double euler_gamma = 0.5772156649015329;
};

inline constexpr double euler_gamma = SpecialConstants::euler_gamma;

/// K0(x) for x > 0. Relative error below 1e-13 on [1e-8, 700]; returns 0 once
/// exp(-x) underflows. Throws std::domain_error for x <= 0, NaN or infinity.
double bessel_k0(double x);

/// K1(x) for x > 0, same accuracy and error contract as bessel_k0.
double bessel_k1(double x);

/// Leading small-argument term of K0, -ln(x/2). No Euler-gamma correction.
double k0_leading(double x);

} // namespace macdonald
