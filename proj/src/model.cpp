#include "macdonald/model.hpp"

#include "macdonald/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace macdonald {

namespace {

double finite_or_overflow(double value, const char* what)
{
    if (!std::isfinite(value))
        throw std::overflow_error(std::string(what) + ": result is not finite");
    return value;
}

// mu^{1/2} alpha / (4 hbar beta)
double kato_scale(const PhysicalParams& p)
{
    return finite_or_overflow(std::sqrt(p.mu) * p.alpha / (4.0 * p.hbar * p.beta), "kato_constants");
}

} // namespace

void PhysicalParams::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(hbar) || !positive(mu) || !positive(beta))
        throw std::invalid_argument("PhysicalParams: hbar, mu and beta must be finite and > 0");
    if (!std::isfinite(alpha) || alpha < 0.0)
        throw std::invalid_argument("PhysicalParams: alpha must be finite and >= 0");
}

Coupling::Coupling(double c) : value_(c)
{
    if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("Coupling: C must be finite and >= 0, got " + std::to_string(c));
}

Coupling coupling_from_physical(const PhysicalParams& p)
{
    p.validate();
    const double hb = p.hbar * p.beta;
    return Coupling(finite_or_overflow(2.0 * p.mu * p.alpha / (hb * hb), "coupling_from_physical"));
}

double energy_scale(const PhysicalParams& p)
{
    p.validate();
    const double hb = p.hbar * p.beta;
    return finite_or_overflow(hb * hb / (2.0 * p.mu), "energy_scale");
}

double v_eff(double s, int m, Coupling c)
{
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::domain_error("v_eff: s must be finite and > 0");
    if (m < 0)
        throw std::invalid_argument("v_eff: m must be >= 0");
    const double centrifugal = (static_cast<double>(m) * m - 0.25) / (s * s);
    return c.value() == 0.0 ? centrifugal : centrifugal - c.value() * bessel_k0(s);
}

KatoReport kato_constants(const PhysicalParams& p, double lambda)
{
    p.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("kato_constants: lambda must be finite and > 0");

    KatoReport report;
    report.lambda = lambda;
    report.A = kato_scale(p);
    report.a = report.A / lambda;
    report.b = report.A * lambda;
    if (report.a < 1.0)
        report.f = report.b / (1.0 - report.a);
    return report;
}

double optimal_lambda(const PhysicalParams& p)
{
    p.validate();
    return 2.0 * kato_scale(p);
}

SpectralConstants spectral_constants(const PhysicalParams& p)
{
    const double c = coupling_from_physical(p).value();
    const double gap = c * p.alpha / 8.0;
    return {-gap, -gap / energy_scale(p), gap};
}

} // namespace macdonald
