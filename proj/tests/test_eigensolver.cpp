#include "oracles.hpp"

#include "macdonald/bounds.hpp"
#include "macdonald/eigensolver.hpp"
#include "macdonald/specfun.hpp"

#include <doctest.h>

#include <cmath>

using namespace macdonald;

namespace {

RadialProblem channel(int m, double c)
{
    RadialProblem p;
    p.m = m;
    p.C = Coupling(c);
    return p;
}

int sign_changes_in(const RadialSolution& sol, double lo, double hi)
{
    std::vector<double> part;
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
        if (sol.grid[i] > lo && sol.grid[i] < hi)
            part.push_back(sol.phi[i]);
    return count_sign_changes(part);
}

// int s K0(s) exp(-s^2/w^2) ds by an independent rule
double gaussian_overlap(double w)
{
    return oracle::log_substituted([w](double s) { return s * oracle::k0(s) * std::exp(-s * s / (w * w)); },
                                   -40.0, 3.5, 300);
}

} // namespace

TEST_CASE("outward solution without a well has no nodes")
{
    const auto sol = numerov_outward(channel(0, 0.0), -0.01);
    CHECK(sign_changes_in(sol, 1e-6, 20.0) == 0);
}

TEST_CASE("outward solution at C = 1, eps = -1e-3 has one node below s = 40")
{
    const auto p = channel(0, 1.0);
    const auto sol = numerov_outward(p, -1e-3);
    CHECK(sign_changes_in(sol, 0.0, 40.0) == 1);
    // one FD eigenvalue lies below -1e-3, so the oscillation count agrees
    const auto fd = fd_oracle(p);
    CHECK(fd.size() == 1);
    CHECK(fd.front() < -1e-3);
}

TEST_CASE("outward seed follows s^(m + 1/2)")
{
    for (int m : {0, 1, 3}) {
        auto p = channel(m, 1.0);
        const auto sol = numerov_outward(p, -0.1);
        const double ratio = sol.phi[1] / sol.phi[0];
        const double expected = std::pow(sol.grid[1] / sol.grid[0], m + 0.5);
        CAPTURE(m);
        CHECK(ratio == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("inward seed decays like exp(-kappa s)")
{
    const auto p = channel(0, 1.0);
    const auto sol = numerov_inward(p, -0.25);
    const std::size_t n = sol.grid.size() - 1;
    const double slope = std::log(sol.phi[n - 1] / sol.phi[n]) / (sol.grid[n] - sol.grid[n - 1]);
    CHECK(slope == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_THROWS_AS(numerov_inward(p, 0.0), std::invalid_argument);
}

TEST_CASE("inward solution is positive and decreasing in the forbidden region")
{
    const auto p = channel(0, 1.0);
    const auto sol = numerov_inward(p, -0.01);
    // v_eff(s) > -0.01 for s > 6
    CHECK(v_eff(6.0, 0, p.C) > -0.01);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        if (sol.grid[i] < 6.0)
            continue;
        CHECK(sol.phi[i] > 0.0);
        CHECK(sol.phi[i] < prev);
        prev = sol.phi[i];
    }
}

TEST_CASE("mismatch roots")
{
    auto scan = [](const RadialProblem& p, double lo, double hi) {
        int changes = 0;
        double prev = mismatch(p, lo);
        for (int i = 1; i <= 150; ++i) {
            const double eps = lo + (hi - lo) * i / 150.0;
            const double cur = mismatch(p, eps);
            if ((cur > 0.0) != (prev > 0.0))
                ++changes;
            prev = cur;
        }
        return changes;
    };
    CHECK(scan(channel(1, 1.0), -0.125, -1e-4) == 0);
    CHECK(scan(channel(0, 1.0), -0.125, -2e-3) == 1);
    CHECK(scan(channel(0, 1.0), -20.0, -0.125) == 0);
}

TEST_CASE("zero-energy node count")
{
    CHECK(count_bound_states(channel(0, 0.5)) == 1);
    CHECK(count_bound_states(channel(1, 1.0)) == 0);
    CHECK(count_bound_states(channel(0, 0.0)) == 0);

    const auto p = channel(0, 20.0);
    const int n = count_bound_states(p);
    CHECK(n == static_cast<int>(fd_oracle(p).size()));
    CHECK(n >= 2);
    CHECK(n <= static_cast<int>(std::ceil(seto_0_numeric(Coupling(20.0)).bound.effective())) - 1);
}

TEST_CASE("shallow s-wave state needs the analytic tail")
{
    // at C = 0.3 the zero-energy node sits far beyond s = 40
    auto p = channel(0, 0.3);
    const auto sol = numerov_outward(p, 0.0 - 1e-12);
    CHECK(sign_changes_in(sol, 0.0, 40.0) == 0);
    CHECK(count_bound_states(p) == 1);
}

TEST_CASE("ground state at C = 1")
{
    const auto p = channel(0, 1.0);
    const EigenResult r = find_eigenvalues(p);
    REQUIRE(r.eigenvalues.size() == 1);
    const double eps0 = r.eigenvalues.front();
    CHECK(eps0 < 0.0);
    CHECK(eps0 >= -0.125);
    auto fd = p;
    fd.s_max = r.s_max_used;
    const auto ref = fd_oracle_extrapolated(fd);
    REQUIRE(ref.size() == 1);
    CHECK(std::abs(eps0 - ref.front()) < 1e-6);
    CHECK(r.kappa.front() == doctest::Approx(std::sqrt(-eps0)));
    CHECK(r.kappa.front() * r.s_max_used >= 25.0);
    CHECK_FALSE(r.below_lower_bound);
    CHECK_FALSE(r.shallow_regime);
}

TEST_CASE("empty spectra")
{
    CHECK(find_eigenvalues(channel(1, 1.0)).eigenvalues.empty());
    CHECK(find_eigenvalues(channel(0, 0.0)).eigenvalues.empty());
    CHECK(fd_oracle(channel(1, 1.0)).empty());
    CHECK(fd_oracle(channel(0, 0.0)).empty());
}

TEST_CASE("shooting and FD agree on the reference grid")
{
    for (int m : {0, 1}) {
        for (double c : {0.5, 1.0, 5.0}) {
            const auto p = channel(m, c);
            const auto r = find_eigenvalues(p);
            auto fd = p;
            fd.s_max = r.s_max_used;
            const auto ref = fd_oracle_extrapolated(fd);
            CAPTURE(m);
            CAPTURE(c);
            REQUIRE(ref.size() == r.eigenvalues.size());
            for (std::size_t n = 0; n < ref.size(); ++n)
                CHECK(std::abs(ref[n] - r.eigenvalues[n]) <= std::max(1e-6, 10.0 * p.eig_tol));
        }
    }
}

TEST_CASE("eigenfunctions: normalization, node ordering, Rayleigh quotient")
{
    const auto p = channel(0, 20.0);
    const auto r = find_eigenvalues(p);
    REQUIRE(r.eigenvalues.size() == 3);
    for (std::size_t n = 0; n < r.eigenvalues.size(); ++n) {
        const auto& wf = r.wavefunctions[n];
        CHECK(wf.nodes == static_cast<int>(n));
        CHECK(r.node_counts[n] == static_cast<int>(n));
        double norm = 0.0;
        for (std::size_t i = 1; i < wf.grid.size(); ++i)
            norm += 0.5 * (wf.phi[i] * wf.phi[i] + wf.phi[i - 1] * wf.phi[i - 1]) * (wf.grid[i] - wf.grid[i - 1]);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-5));
    }
    auto q = p;
    q.s_max = r.s_max_used;
    // both sides carry O(h^4) discretization error, relative to |eps|
    CHECK(std::abs(rayleigh_quotient(q, r.wavefunctions[0]) / r.eigenvalues[0] - 1.0) < 1e-8);
}

TEST_CASE("Rayleigh quotient of the C = 1 ground state")
{
    const auto p = channel(0, 1.0);
    const auto r = find_eigenvalues(p);
    auto q = p;
    q.s_max = r.s_max_used;
    CHECK(std::abs(rayleigh_quotient(q, r.wavefunctions[0]) - r.eigenvalues[0]) < 10.0 * p.eig_tol);
}

TEST_CASE("Gaussian trials")
{
    const auto p = channel(0, 1.0);
    const double eps0 = find_eigenvalues(p).eigenvalues.front();
    // Phi = s^(1/2) exp(-s^2 / 2w^2): kinetic 1/w^2, potential -(2C/w^2) int s K0 exp(-s^2/w^2)
    for (double w : {std::sqrt(2.0), 3.0}) {
        const auto trial = sample_trial(p, [w](double s) { return std::sqrt(s) * std::exp(-s * s / (2.0 * w * w)); });
        const double expected = (1.0 - 2.0 * gaussian_overlap(w)) / (w * w);
        const double rq = rayleigh_quotient(p, trial);
        CAPTURE(w);
        CHECK(rq == doctest::Approx(expected).epsilon(1e-7));
        CHECK(rq > eps0);
    }
    // the narrow one sits above the continuum edge; the wide one certifies binding
    CHECK(rayleigh_quotient(p, sample_trial(p, [](double s) { return std::sqrt(s) * std::exp(-s * s / 4.0); })) > 0.0);
    CHECK(rayleigh_quotient(p, sample_trial(p, [](double s) { return std::sqrt(s) * std::exp(-s * s / 18.0); })) < 0.0);

    const auto free = channel(1, 0.0);
    CHECK(rayleigh_quotient(free, sample_trial(free, [](double s) { return s * std::sqrt(s) * std::exp(-s); })) > 0.0);
}

TEST_CASE("weak coupling: a bound state survives and deepens with C")
{
    double prev = 0.0;
    for (double c : {0.3, 0.5, 1.0}) {
        const auto r = find_eigenvalues(channel(0, c));
        REQUIRE(r.eigenvalues.size() == 1);
        CAPTURE(c);
        CHECK(r.eigenvalues.front() < prev);
        CHECK(r.kappa.front() * r.s_max_used >= 25.0);
        CHECK_FALSE(r.s_max_capped);
        prev = r.eigenvalues.front();
    }
    CHECK(find_eigenvalues(channel(0, 0.25)).shallow_regime);
}

TEST_CASE("Hellmann-Feynman: d eps0 / dC = -<K0>")
{
    const double c = 2.0;
    const double dc = 1e-3;
    const auto r = find_eigenvalues(channel(0, c));
    const double slope =
        (find_eigenvalues(channel(0, c + dc)).eigenvalues[0] - find_eigenvalues(channel(0, c - dc)).eigenvalues[0]) /
        (2.0 * dc);
    const auto& wf = r.wavefunctions[0];
    double expectation = 0.0;
    for (std::size_t i = 1; i < wf.grid.size(); ++i) {
        const double a = wf.phi[i - 1] * wf.phi[i - 1] * bessel_k0(wf.grid[i - 1]);
        const double b = wf.phi[i] * wf.phi[i] * bessel_k0(wf.grid[i]);
        expectation += 0.5 * (a + b) * (wf.grid[i] - wf.grid[i - 1]);
    }
    CHECK(slope == doctest::Approx(-expectation).epsilon(1e-4));
}

TEST_CASE("results do not depend on the starting s_max")
{
    auto a = channel(0, 5.0);
    auto b = a;
    b.s_max = 70.0;
    const auto ra = find_eigenvalues(a);
    const auto rb = find_eigenvalues(b);
    REQUIRE(ra.eigenvalues.size() == rb.eigenvalues.size());
    for (std::size_t n = 0; n < ra.eigenvalues.size(); ++n)
        CHECK(std::abs(ra.eigenvalues[n] - rb.eigenvalues[n]) < 1e-8);
}

TEST_CASE("eigenvalues never exceed the closed s-wave count bound 1 + C")
{
    for (double c : {0.5, 2.0, 5.0, 10.0, 20.0}) {
        CAPTURE(c);
        CHECK(check_count(count_bound_states(channel(0, c)), 1.0 + c));
    }
}

TEST_CASE("validation and grid errors")
{
    auto p = channel(-1, 1.0);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = channel(0, 1.0);
    p.s_min = 50.0;
    CHECK_THROWS_AS(find_eigenvalues(p), std::invalid_argument);
    p = channel(0, 1.0);
    p.n_steps = 3;
    CHECK_THROWS_AS(find_eigenvalues(p), std::invalid_argument);
    p = channel(0, 1e6);
    p.n_steps = 1000;
    CHECK_THROWS_AS(count_bound_states(p), GridResolutionError);
}
