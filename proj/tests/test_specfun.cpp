#include "oracles.hpp"

#include "macdonald/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace macdonald;

TEST_CASE("K0 and K1 at reference points")
{
    CHECK(bessel_k0(1.0) == doctest::Approx(0.42102444).epsilon(1e-8));
    CHECK(bessel_k0(2.0) == doctest::Approx(0.11389387).epsilon(1e-7));
    CHECK(bessel_k1(1.0) == doctest::Approx(0.60190723).epsilon(1e-8));
    CHECK(bessel_k1(2.0) == doctest::Approx(0.13986588).epsilon(1e-7));
}

TEST_CASE("K0 and K1 agree with the integral representation across [1e-6, 100]")
{
    for (int i = 0; i < 50; ++i) {
        const double x = 1e-6 * std::pow(1e8, i / 49.0);
        CAPTURE(x);
        CHECK(oracle::relative_error(bessel_k0(x), oracle::k0(x)) < 1e-12);
        CHECK(oracle::relative_error(bessel_k1(x), oracle::k1(x)) < 1e-12);
    }
}

TEST_CASE("K0 agrees with an extended-precision series on both sides of the switch point")
{
    for (double x : {1e-4, 0.1, 1.0, 1.9, 2.0, 2.1, 3.0}) {
        CAPTURE(x);
        CHECK(oracle::relative_error(bessel_k0(x), oracle::k0_series(x)) < 1e-13);
    }
}

TEST_CASE("small-argument behaviour")
{
    for (double x : {1e-3, 1e-6, 1e-9}) {
        CAPTURE(x);
        CHECK(std::abs(bessel_k0(x) + std::log(x / 2.0) + euler_gamma) < 2.0 * x * x * std::abs(std::log(x)) + 1e-14);
    }
    CHECK(std::abs(1e-6 * bessel_k1(1e-6) - 1.0) < 1e-6);
}

TEST_CASE("K0' = -K1 by central differences")
{
    for (double x : {0.05, 0.5, 1.5, 2.0, 2.5, 8.0, 30.0}) {
        const double h = 1e-3 * std::min(x, 1.0);
        const double slope = (bessel_k0(x - 2.0 * h) - 8.0 * bessel_k0(x - h) + 8.0 * bessel_k0(x + h) -
                              bessel_k0(x + 2.0 * h)) /
                             (12.0 * h);
        CAPTURE(x);
        CHECK(oracle::relative_error(-slope, bessel_k1(x)) < 1e-9);
    }
}

TEST_CASE("monotone, positive and K1 > K0")
{
    double prev0 = bessel_k0(1e-6);
    double prev1 = bessel_k1(1e-6);
    for (int i = 1; i <= 400; ++i) {
        const double x = 1e-6 * std::pow(7e8, i / 400.0);
        const double k0 = bessel_k0(x);
        const double k1 = bessel_k1(x);
        CHECK(k0 > 0.0);
        CHECK(k0 < prev0);
        CHECK(k1 < prev1);
        CHECK(k1 > k0);
        prev0 = k0;
        prev1 = k1;
    }
}

TEST_CASE("recurrence K2 = K0 + 2 K1 / x holds against the oracle")
{
    for (double x : {0.3, 1.0, 4.0, 20.0}) {
        const double k2 = bessel_k0(x) + 2.0 * bessel_k1(x) / x;
        CAPTURE(x);
        CHECK(oracle::relative_error(k2, oracle::bessel_k_integral(2, x)) < 1e-12);
    }
}

TEST_CASE("underflow returns zero")
{
    CHECK(bessel_k0(800.0) == 0.0);
    CHECK(bessel_k1(800.0) == 0.0);
    CHECK(bessel_k0(700.0) > 0.0);
}

TEST_CASE("k0_leading")
{
    CHECK(k0_leading(2.0) == 0.0);
    CHECK(k0_leading(1.0) == doctest::Approx(0.6931472).epsilon(1e-7));
    CHECK(k0_leading(0.01) == doctest::Approx(5.2983174).epsilon(1e-7));
}

TEST_CASE("domain errors")
{
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double x : {0.0, -1.0, nan, inf}) {
        CHECK_THROWS_AS(bessel_k0(x), std::domain_error);
        CHECK_THROWS_AS(bessel_k1(x), std::domain_error);
        CHECK_THROWS_AS(k0_leading(x), std::domain_error);
    }
}
