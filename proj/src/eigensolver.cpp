#include "macdonald/eigensolver.hpp"

#include "macdonald/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

namespace macdonald {

// In x = ln s with Psi = Phi / sqrt(s) the channel equation becomes
//   Psi'' = [m^2 - s^2 (C K0(s) + eps)] Psi,
// regular at the origin (Psi ~ s^m) and free of first-derivative terms, so
// Numerov applies on a uniform x grid.

namespace {

constexpr double rescale_threshold = 1e200;
constexpr double rescale_factor = 1e-200;
constexpr int max_rescales = 64;
constexpr double lower_bound_margin = 1e-9;
constexpr double s_max_growth = 1.5;
constexpr double decay_lengths_initial = 30.0;
constexpr double decay_lengths_required = 25.0;

int sign_of(double v)
{
    return (v > 0.0) - (v < 0.0);
}

class NodeCounter
{
public:
    void push(double v)
    {
        const int s = sign_of(v);
        if (s == 0)
            return;
        if (last_ != 0 && s != last_)
            ++nodes_;
        last_ = s;
    }
    int nodes() const { return nodes_; }

private:
    int last_ = 0;
    int nodes_ = 0;
};

// Potential table for one channel on a uniform grid in x = ln s.
class Channel
{
public:
    Channel(int m, double c, double s_min, double s_max, int n_steps)
        : m_(m), c_(c), n_(n_steps)
    {
        x0_ = std::log(s_min);
        h_ = (std::log(s_max) - x0_) / n_steps;
        s_.resize(n_ + 1);
        s2_.resize(n_ + 1);
        base_.resize(n_ + 1);
        for (int i = 0; i <= n_; ++i) {
            const double s = i == n_ ? s_max : std::exp(x0_ + i * h_);
            s_[i] = s;
            s2_[i] = s * s;
            base_[i] = static_cast<double>(m) * m - (c == 0.0 ? 0.0 : s * s * c * bessel_k0(s));
        }
        match_ = find_match_index();
    }

    int last() const { return n_; }
    double h() const { return h_; }
    double s(int i) const { return s_[i]; }
    const std::vector<double>& grid() const { return s_; }
    int match_index() const { return match_; }

    double g(int i, double eps) const { return base_[i] - s2_[i] * eps; }

    // Regular solution on [0, last]; nodes counted before any rescaling.
    std::vector<double> outward(double eps, int last, int* nodes = nullptr) const
    {
        std::vector<double> y(last + 1);
        const double k = h_ * h_ / 12.0;
        y[0] = 1.0;
        y[1] = std::exp(m_ * h_);
        NodeCounter counter;
        counter.push(y[0]);
        counter.push(y[1]);
        double w_prev = 1.0 - k * g(0, eps);
        double w_cur = 1.0 - k * g(1, eps);
        int rescales = 0;
        for (int i = 1; i < last; ++i) {
            const double w_next = 1.0 - k * g(i + 1, eps);
            if (w_next <= 0.0)
                throw GridResolutionError(resolution_message(i + 1, eps));
            y[i + 1] = ((12.0 - 10.0 * w_cur) * y[i] - w_prev * y[i - 1]) / w_next;
            counter.push(y[i + 1]);
            if (std::abs(y[i + 1]) > rescale_threshold) {
                if (++rescales > max_rescales)
                    throw IntegrationOverflow("numerov_outward: too many rescalings; s_max or eps out of range");
                for (int j = 0; j <= i + 1; ++j)
                    y[j] *= rescale_factor;
            }
            w_prev = w_cur;
            w_cur = w_next;
        }
        if (nodes)
            *nodes = counter.nodes();
        return y;
    }

    // Decaying solution on [first, n]; entries below first are left at zero.
    std::vector<double> inward(double eps, int first, int* nodes = nullptr) const
    {
        std::vector<double> y(n_ + 1, 0.0);
        const double kappa = std::sqrt(-eps);
        const double k = h_ * h_ / 12.0;
        y[n_] = 1.0;
        y[n_ - 1] = std::exp(kappa * (s_[n_] - s_[n_ - 1])) * std::sqrt(s_[n_] / s_[n_ - 1]);
        NodeCounter counter;
        counter.push(y[n_]);
        counter.push(y[n_ - 1]);
        double w_prev = 1.0 - k * g(n_, eps);
        double w_cur = 1.0 - k * g(n_ - 1, eps);
        int rescales = 0;
        for (int i = n_ - 1; i > first; --i) {
            const double w_next = 1.0 - k * g(i - 1, eps);
            if (w_next <= 0.0)
                throw GridResolutionError(resolution_message(i - 1, eps));
            y[i - 1] = ((12.0 - 10.0 * w_cur) * y[i] - w_prev * y[i + 1]) / w_next;
            counter.push(y[i - 1]);
            if (std::abs(y[i - 1]) > rescale_threshold) {
                if (++rescales > max_rescales)
                    throw IntegrationOverflow("numerov_inward: too many rescalings; s_max or eps out of range");
                for (int j = i - 1; j <= n_; ++j)
                    y[j] *= rescale_factor;
            }
            w_prev = w_cur;
            w_cur = w_next;
        }
        if (nodes)
            *nodes = counter.nodes();
        return y;
    }

    // Number of Dirichlet-box eigenvalues on [s_min, s_max] below eps.
    int box_count(double eps) const
    {
        int nodes = 0;
        outward(eps, n_, &nodes);
        return nodes;
    }

    double mismatch(double eps) const
    {
        const int j = match_;
        const auto yo = outward(eps, j + 1);
        const auto yi = inward(eps, j);
        const double no = std::hypot(yo[j], yo[j + 1]);
        const double ni = std::hypot(yi[j], yi[j + 1]);
        return (yo[j + 1] * yi[j] - yo[j] * yi[j + 1]) / (no * ni);
    }

    // Zero-energy node count on the grid plus the crossing, if any, of the
    // free continuation a + b x (m = 0) or a e^{mx} + b e^{-mx} beyond s_max.
    int zero_energy_count() const
    {
        const double limit = std::numbers::pi / 4.0;
        for (int i = 0; i <= n_; ++i) {
            const double gi = g(i, 0.0);
            if (gi < 0.0 && std::sqrt(-gi) * h_ > limit) {
                std::ostringstream msg;
                msg << "count_bound_states: phase advance " << std::sqrt(-gi) * h_
                    << " per step exceeds pi/4 at s = " << s_[i];
                throw GridResolutionError(msg.str());
            }
        }
        int nodes = 0;
        const auto y = outward(0.0, n_, &nodes);
        const double y1 = y[n_];
        const double y0 = y[n_ - 1];
        if (y1 == 0.0)
            return nodes;
        if (m_ == 0) {
            const double slope = (y1 - y0) / h_;
            return nodes + (slope * y1 < 0.0 ? 1 : 0);
        }
        const double up = std::exp(m_ * h_);
        const double down = 1.0 / up;
        const double a = (y1 * up - y0) / (up - down);
        const double b = y1 - a;
        return nodes + (a * b < 0.0 && std::abs(b) > std::abs(a) ? 1 : 0);
    }

private:
    std::string resolution_message(int i, double eps) const
    {
        std::ostringstream msg;
        msg << "Numerov step too coarse at s = " << s_[i] << " for eps = " << eps
            << " (h^2 g / 12 >= 1)";
        return msg.str();
    }

    int find_match_index() const
    {
        // m >= 1: minimum of v_eff, if it is an interior negative minimum.
        // Otherwise (and for m = 0): maximum of s K0(s), near s = 0.595.
        if (m_ >= 1 && c_ > 0.0) {
            int best = -1;
            double best_v = 0.0;
            for (int i = 1; i < n_ - 1; ++i) {
                const double v = base_[i] / s2_[i] - 0.25 / s2_[i];
                if (v < best_v) {
                    best_v = v;
                    best = i;
                }
            }
            if (best > 0)
                return best;
        }
        int best = 1;
        double best_w = -1.0;
        for (int i = 1; i < n_ - 1; ++i) {
            const double w = s_[i] * bessel_k0(s_[i]);
            if (w > best_w) {
                best_w = w;
                best = i;
            }
        }
        return best;
    }

    int m_;
    double c_;
    int n_;
    double x0_ = 0.0;
    double h_ = 0.0;
    int match_ = 1;
    std::vector<double> s_;
    std::vector<double> s2_;
    std::vector<double> base_;
};

Channel make_channel(const RadialProblem& p)
{
    p.validate();
    return Channel(p.m, p.C.value(), p.s_min, p.s_max, p.n_steps);
}

RadialSolution to_solution(const std::vector<double>& s, const std::vector<double>& psi)
{
    RadialSolution out;
    out.grid = s;
    out.phi.resize(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        out.phi[i] = std::sqrt(s[i]) * psi[i];
    out.nodes = count_sign_changes(out.phi);
    return out;
}

double require_negative(double eps, const char* who)
{
    if (!(eps < 0.0) || !std::isfinite(eps))
        throw std::invalid_argument(std::string(who) + ": eps must be finite and < 0");
    return eps;
}

struct Pass
{
    bool complete = false;
    std::vector<double> eigenvalues;
    std::vector<RadialSolution> wavefunctions;
    double s_max = 0.0;
};

RadialSolution eigenfunction(const Channel& ch, double eps)
{
    const int j = ch.match_index();
    const int n = ch.last();
    const auto yo = ch.outward(eps, j + 1);
    const auto yi = ch.inward(eps, j);
    const double join = (yo[j] * yi[j] + yo[j + 1] * yi[j + 1]) / (yi[j] * yi[j] + yi[j + 1] * yi[j + 1]);

    std::vector<double> psi(n + 1);
    for (int i = 0; i <= n; ++i)
        psi[i] = i <= j ? yo[i] : join * yi[i];

    double peak = 0.0;
    for (double v : psi)
        peak = std::max(peak, std::abs(v));
    for (double& v : psi)
        v /= peak;

    // int Phi^2 ds = int s^2 Psi^2 dx
    double norm = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        norm += w * ch.s(i) * ch.s(i) * psi[i] * psi[i];
    }
    norm = std::sqrt(norm * ch.h());
    for (double& v : psi)
        v /= norm;
    return to_solution(ch.grid(), psi);
}

Pass solve_pass(const Channel& ch, int total, double c, double eig_tol)
{
    Pass pass;
    pass.s_max = ch.s(ch.last());

    const int top = ch.box_count(0.0);
    if (top > total) {
        std::ostringstream msg;
        msg << "box node count " << top << " exceeds zero-energy count " << total;
        throw BracketFailure(msg.str());
    }
    if (top < total)
        return pass;

    double eps_low = -c * c / 8.0 * (1.0 + lower_bound_margin);
    for (int guard = 0; ch.box_count(eps_low) > 0; ++guard) {
        if (guard > 60)
            throw BracketFailure("no energy with zero box nodes found below the spectrum");
        eps_low *= 2.0;
    }

    double lo = eps_low;
    int c_lo = 0;
    for (int n = 0; n < total; ++n) {
        double hi = 0.0;
        int c_hi = top;
        int guard = 0;
        while (!(c_lo == n && c_hi == n + 1)) {
            const double mid = 0.5 * (lo + hi);
            const int cm = ch.box_count(mid);
            if (cm <= n) {
                lo = mid;
                c_lo = cm;
            } else {
                hi = mid;
                c_hi = cm;
            }
            if (++guard > 400 || hi - lo <= 1e-15 * std::max(1.0, std::abs(lo)))
                throw BracketFailure("could not isolate eigenvalue " + std::to_string(n));
        }
        const double next_lo = hi;

        double m_lo = ch.mismatch(lo);
        const double m_hi = ch.mismatch(hi);
        if (sign_of(m_lo) == sign_of(m_hi)) {
            std::ostringstream msg;
            msg << "node counting brackets eigenvalue " << n << " in [" << lo << ", " << hi
                << "] but the mismatch does not change sign there";
            throw BracketFailure(msg.str());
        }
        while (hi - lo > eig_tol) {
            const double mid = 0.5 * (lo + hi);
            const double mm = ch.mismatch(mid);
            if (sign_of(mm) == sign_of(m_lo)) {
                lo = mid;
                m_lo = mm;
            } else {
                hi = mid;
            }
        }
        const double eps = 0.5 * (lo + hi);
        RadialSolution wf = eigenfunction(ch, eps);
        if (wf.nodes != n) {
            std::ostringstream msg;
            msg << "eigenfunction " << n << " at eps = " << eps << " has " << wf.nodes << " nodes";
            throw BracketFailure(msg.str());
        }
        pass.eigenvalues.push_back(eps);
        pass.wavefunctions.push_back(std::move(wf));

        lo = next_lo;
        c_lo = n + 1;
    }
    pass.complete = true;
    return pass;
}

int steps_for(double s_min, double s_max, double h)
{
    return static_cast<int>(std::ceil(std::log(s_max / s_min) / h - 1e-9));
}

// Sturm count: number of eigenvalues of the symmetric tridiagonal (d, e) below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e2, double x)
{
    int count = 0;
    double q = d[0] - x;
    if (q < 0.0)
        ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (q == 0.0)
            q = -std::numeric_limits<double>::epsilon() * (std::abs(d[i - 1]) + 1.0);
        q = d[i] - x - e2[i - 1] / q;
        if (q < 0.0)
            ++count;
    }
    return count;
}

std::vector<double> fd_eigenvalues(int m, double c, double s_min, double s_max, int cells)
{
    const double x0 = std::log(s_min);
    const double h = (std::log(s_max) - x0) / cells;
    const double inv_h2 = 1.0 / (h * h);

    std::vector<double> s(cells);
    for (int i = 0; i < cells; ++i)
        s[i] = std::exp(x0 + (i + 0.5) * h);

    std::vector<double> d(cells);
    std::vector<double> e2(cells - 1);
    for (int i = 0; i < cells; ++i) {
        double diag = 2.0 * inv_h2 + static_cast<double>(m) * m;
        if (c != 0.0)
            diag -= s[i] * s[i] * c * bessel_k0(s[i]);
        if (i == 0)
            diag += m == 0 ? -inv_h2 : inv_h2; // Neumann for m = 0, else Dirichlet
        if (i == cells - 1)
            diag += inv_h2;
        d[i] = diag / (s[i] * s[i]);
    }
    for (int i = 0; i + 1 < cells; ++i) {
        const double off = -inv_h2 / (s[i] * s[i + 1]);
        e2[i] = off * off;
    }

    const int negative = sturm_count(d, e2, 0.0);
    std::vector<double> out;
    if (negative == 0)
        return out;

    double lower = -std::max(c * c / 8.0, 1.0);
    for (int guard = 0; sturm_count(d, e2, lower) > 0 && guard < 200; ++guard)
        lower *= 2.0;

    for (int k = 0; k < negative; ++k) {
        double lo = lower;
        double hi = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (hi - lo <= 1e-14 * std::max(1e-3, std::abs(mid)))
                break;
            if (sturm_count(d, e2, mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

} // namespace

void RadialProblem::validate() const
{
    if (m < 0)
        throw std::invalid_argument("RadialProblem: m must be >= 0 (|m| channels are degenerate)");
    if (!(s_min > 0.0) || !(s_min < s_max) || !std::isfinite(s_max))
        throw std::invalid_argument("RadialProblem: need 0 < s_min < s_max");
    if (n_steps < 1000)
        throw std::invalid_argument("RadialProblem: n_steps must be >= 1000");
    if (!(eig_tol > 0.0))
        throw std::invalid_argument("RadialProblem: eig_tol must be > 0");
    if (!(s_max_cap >= s_max))
        throw std::invalid_argument("RadialProblem: s_max_cap must be >= s_max");
}

int count_sign_changes(const std::vector<double>& values)
{
    NodeCounter counter;
    for (double v : values)
        counter.push(v);
    return counter.nodes();
}

RadialSolution numerov_outward(const RadialProblem& p, double eps)
{
    require_negative(eps, "numerov_outward");
    const Channel ch = make_channel(p);
    int nodes = 0;
    const auto y = ch.outward(eps, ch.last(), &nodes);
    RadialSolution out = to_solution(ch.grid(), y);
    out.nodes = nodes;
    return out;
}

RadialSolution numerov_inward(const RadialProblem& p, double eps)
{
    require_negative(eps, "numerov_inward");
    const Channel ch = make_channel(p);
    int nodes = 0;
    const auto y = ch.inward(eps, 0, &nodes);
    RadialSolution out = to_solution(ch.grid(), y);
    out.nodes = nodes;
    return out;
}

double mismatch(const RadialProblem& p, double eps)
{
    require_negative(eps, "mismatch");
    return make_channel(p).mismatch(eps);
}

double match_point(const RadialProblem& p)
{
    const Channel ch = make_channel(p);
    return ch.s(ch.match_index());
}

int count_bound_states(const RadialProblem& p)
{
    if (p.C.value() == 0.0) {
        p.validate();
        return 0;
    }
    return make_channel(p).zero_energy_count();
}

EigenResult find_eigenvalues(const RadialProblem& p)
{
    p.validate();
    const double c = p.C.value();

    EigenResult result;
    result.s_max_used = p.s_max;
    result.shallow_regime = c < shallow_coupling;
    if (c == 0.0)
        return result;

    const int total = count_bound_states(p);
    if (total == 0)
        return result;

    const double h = std::log(p.s_max / p.s_min) / p.n_steps;
    double s_max = p.s_max;
    std::optional<Pass> previous;
    std::optional<Pass> accepted;

    for (int iteration = 0; iteration < 64 && !accepted; ++iteration) {
        const Channel ch(p.m, c, p.s_min, s_max, std::max(p.n_steps, steps_for(p.s_min, s_max, h)));
        Pass pass = solve_pass(ch, total, c, p.eig_tol);
        const bool at_cap = s_max >= p.s_max_cap;

        if (!pass.complete) {
            if (at_cap) {
                std::ostringstream msg;
                msg << "s_max reached its cap " << p.s_max_cap << " before all " << total
                    << " bound states fitted in the box (m = " << p.m << ", C = " << c << ")";
                throw BracketFailure(msg.str());
            }
            s_max = std::min(p.s_max_cap, s_max * s_max_growth);
            continue;
        }

        const double kappa = std::sqrt(-pass.eigenvalues.back());
        const double wanted = decay_lengths_initial / kappa;
        if (at_cap) {
            result.s_max_capped = kappa * s_max < decay_lengths_required ||
                                  (previous && std::abs(pass.eigenvalues.back() -
                                                        previous->eigenvalues.back()) >= p.eig_tol);
            accepted = std::move(pass);
            break;
        }
        if (s_max < wanted) {
            previous = std::move(pass);
            s_max = std::min(p.s_max_cap, std::max(wanted, s_max * s_max_growth));
            continue;
        }
        if (previous && previous->eigenvalues.size() == pass.eigenvalues.size() &&
            std::abs(pass.eigenvalues.back() - previous->eigenvalues.back()) < p.eig_tol) {
            accepted = std::move(pass);
            break;
        }
        previous = std::move(pass);
        s_max = std::min(p.s_max_cap, s_max * s_max_growth);
    }
    if (!accepted)
        throw BracketFailure("s_max extension did not converge");

    result.s_max_used = accepted->s_max;
    result.eigenvalues = std::move(accepted->eigenvalues);
    result.wavefunctions = std::move(accepted->wavefunctions);
    const double floor = -c * c / 8.0 * (1.0 + lower_bound_margin);
    for (std::size_t n = 0; n < result.eigenvalues.size(); ++n) {
        const double eps = result.eigenvalues[n];
        result.node_counts.push_back(static_cast<int>(n));
        result.kappa.push_back(std::sqrt(-eps));
        if (eps < floor)
            result.below_lower_bound = true;
    }
    return result;
}

std::vector<double> fd_oracle(const RadialProblem& p)
{
    p.validate();
    return fd_eigenvalues(p.m, p.C.value(), p.s_min, p.s_max, p.n_steps);
}

std::vector<double> fd_oracle_extrapolated(const RadialProblem& p, double h)
{
    p.validate();
    if (!(h > 0.0))
        throw std::invalid_argument("fd_oracle_extrapolated: h must be > 0");
    const int cells = std::max(16, static_cast<int>(std::lround(std::log(p.s_max / p.s_min) / h)));
    const double c = p.C.value();
    const auto e1 = fd_eigenvalues(p.m, c, p.s_min, p.s_max, cells);
    const auto e2 = fd_eigenvalues(p.m, c, p.s_min, p.s_max, 2 * cells);
    const auto e4 = fd_eigenvalues(p.m, c, p.s_min, p.s_max, 4 * cells);
    const std::size_t n = std::min({e1.size(), e2.size(), e4.size()});
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double r1 = (4.0 * e2[k] - e1[k]) / 3.0;
        const double r2 = (4.0 * e4[k] - e2[k]) / 3.0;
        out[k] = (16.0 * r2 - r1) / 15.0;
    }
    return out;
}

RadialSolution sample_trial(const RadialProblem& p, const std::function<double(double)>& phi)
{
    const Channel ch = make_channel(p);
    RadialSolution out;
    out.grid = ch.grid();
    out.phi.resize(out.grid.size());
    for (std::size_t i = 0; i < out.grid.size(); ++i)
        out.phi[i] = phi(out.grid[i]);
    out.nodes = count_sign_changes(out.phi);
    return out;
}

double rayleigh_quotient(const RadialProblem& p, const RadialSolution& trial)
{
    const auto& s = trial.grid;
    const std::size_t n = s.size();
    if (n < 8 || trial.phi.size() != n)
        throw std::invalid_argument("rayleigh_quotient: trial needs >= 8 samples on its grid");
    const double h = std::log(s[1] / s[0]);
    const double h_last = std::log(s[n - 1] / s[n - 2]);
    if (!(h > 0.0) || std::abs(h_last - h) > 1e-6 * h)
        throw std::invalid_argument("rayleigh_quotient: trial grid must be uniform in ln s");

    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i)
        psi[i] = trial.phi[i] / std::sqrt(s[i]);

    auto derivative = [&](std::size_t i) {
        if (i >= 2 && i + 2 < n)
            return (psi[i - 2] - 8.0 * psi[i - 1] + 8.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h);
        if (i >= 1 && i + 1 < n)
            return (psi[i + 1] - psi[i - 1]) / (2.0 * h);
        return i == 0 ? (psi[1] - psi[0]) / h : (psi[n - 1] - psi[n - 2]) / h;
    };

    const double c = p.C.value();
    const double m2 = static_cast<double>(p.m) * p.m;
    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        const double dpsi = derivative(i);
        const double s2 = s[i] * s[i];
        const double potential = m2 - (c == 0.0 ? 0.0 : s2 * c * bessel_k0(s[i]));
        numerator += w * (dpsi * dpsi + potential * psi[i] * psi[i]);
        denominator += w * s2 * psi[i] * psi[i];
    }
    if (!(denominator > 0.0))
        throw std::invalid_argument("rayleigh_quotient: degenerate trial (zero norm)");
    return numerator / denominator;
}

} // namespace macdonald
