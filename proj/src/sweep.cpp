#include "macdonald/sweep.hpp"

#include "macdonald/eigensolver.hpp"
#include "macdonald/quadrature.hpp"
#include "macdonald/specfun.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace macdonald {

namespace {

std::string trim(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

double parse_double(const std::string& text)
{
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("not a number: '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        parts.push_back(item);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

std::string optional_number(const std::optional<double>& v)
{
    return v ? format_number(*v) : std::string();
}

RadialProblem problem_for(const SweepConfig& cfg, double c, int m)
{
    RadialProblem p;
    p.m = m;
    p.C = Coupling(c);
    if (cfg.s_max) {
        p.s_max = *cfg.s_max;
        p.s_max_cap = std::max(p.s_max_cap, p.s_max);
    }
    if (cfg.eig_tol)
        p.eig_tol = *cfg.eig_tol;
    return p;
}

SpectralSummary solve_row(const SweepConfig& cfg, double c, const PhysicalParams* physical, int m)
{
    SpectralSummary row;
    row.C = c;
    row.m = m;
    row.lower_bound_dimensionless = -c * c / 8.0;
    if (physical) {
        const SpectralConstants k = spectral_constants(*physical);
        row.lower_bound_physical = k.lower_bound_physical;
        row.gap_physical = k.gap_physical;
    }
    if (m == 0) {
        row.seto_closed = 1.0 + c / 2.0;
        row.seto_numeric = 1.0 + c * seto_0_bracket_with_one();
    } else {
        const SetoBound b = seto_m(Coupling(c), m);
        row.seto_closed = b.closed_form;
        row.seto_numeric = b.numeric;
    }
    if (c < shallow_coupling)
        row.flags.emplace_back("shallow");

    try {
        const EigenResult result = find_eigenvalues(problem_for(cfg, c, m));
        row.count = static_cast<int>(result.eigenvalues.size());
        if (row.count > 0) {
            row.eps0 = result.eigenvalues.front();
            if (physical)
                row.E0_physical = *row.eps0 * energy_scale(*physical);
        }
        if (result.s_max_capped)
            row.flags.emplace_back("s_max_cap");
        if (result.below_lower_bound)
            row.flags.emplace_back("below_lower_bound");
        const double effective = std::max(row.seto_closed, row.seto_numeric);
        if (!check_count(row.count, effective))
            row.flags.emplace_back("seto_violation");
        else if (!check_count(row.count, row.seto_closed))
            row.flags.emplace_back("exceeds_closed_seto");
    } catch (const std::exception& e) {
        row.error = e.what();
        row.flags.emplace_back("solver_error");
    }
    return row;
}

std::string slug(const std::string& text)
{
    std::string out;
    bool pending = false;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.') {
            if (pending && !out.empty())
                out.push_back('_');
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
            pending = false;
        } else {
            pending = true;
        }
    }
    return out;
}

struct Tally
{
    int failures = 0;
    int discrepancies = 0;

    void line(std::ostream& out, const std::string& key, CheckStatus status, const std::string& detail)
    {
        if (status == CheckStatus::fail)
            ++failures;
        if (status == CheckStatus::expected_discrepancy)
            ++discrepancies;
        out << key << ": " << to_string(status);
        if (!detail.empty())
            out << ' ' << detail;
        out << '\n';
    }
};

// Golden-section minimum of f(lambda) = A lambda^2 / (lambda - A) on (A, 100 A),
// evaluated in extended precision so the flat minimum resolves below 1e-8.
long double golden_section_lambda(long double a_scale)
{
    auto f = [a_scale](long double l) { return a_scale * l * l / (l - a_scale); };
    const long double ratio = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    long double lo = a_scale * 1.000001L;
    long double hi = 100.0L * a_scale;
    long double x1 = hi - ratio * (hi - lo);
    long double x2 = lo + ratio * (hi - lo);
    long double f1 = f(x1);
    long double f2 = f(x2);
    for (int i = 0; i < 200 && hi - lo > 1e-14L * a_scale; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5L * (lo + hi);
}

} // namespace

std::string format_number(double v)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    if (ec != std::errc())
        return "nan";
    return std::string(buffer, ptr);
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> values;
    for (const auto& part : split(text, ','))
        values.push_back(parse_double(part));
    return values;
}

PhysicalParams parse_params(const std::string& text)
{
    const auto values = parse_list(text);
    if (values.size() != 4)
        throw ConfigError("--params expects hbar,mu,alpha,beta");
    PhysicalParams p{values[0], values[1], values[2], values[3]};
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

PotentialRange parse_range(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw ConfigError("--potential-range expects lo:hi:n");
    PotentialRange range;
    range.lo = parse_double(parts[0]);
    range.hi = parse_double(parts[1]);
    const double n = parse_double(parts[2]);
    if (n != std::floor(n) || n < 2)
        throw ConfigError("--potential-range: n must be an integer >= 2");
    range.samples = static_cast<int>(n);
    if (!(range.lo > 0.0) || !(range.lo < range.hi))
        throw ConfigError("--potential-range: need 0 < lo < hi");
    return range;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(number) + ": expected key = value");
        entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return entries;
}

void apply_config(SweepConfig& cfg, const std::map<std::string, std::string>& entries)
{
    for (const auto& [key, value] : entries) {
        if (key == "coupling") {
            cfg.couplings = parse_list(value);
        } else if (key == "params") {
            cfg.params.clear();
            for (const auto& item : split(value, ';'))
                cfg.params.push_back(parse_params(item));
        } else if (key == "m_max") {
            const double m = parse_double(value);
            if (m != std::floor(m))
                throw ConfigError("m_max must be an integer");
            cfg.m_max = static_cast<int>(m);
        } else if (key == "s_max") {
            cfg.s_max = parse_double(value);
        } else if (key == "tol") {
            cfg.eig_tol = parse_double(value);
        } else if (key == "out") {
            cfg.out_path = value;
        } else if (key == "potential_range") {
            cfg.potential = parse_range(value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

void SweepConfig::validate() const
{
    if (!couplings.empty() && !params.empty())
        throw ConfigError("--coupling and --params cannot be mixed in one run");
    if (couplings.empty() && params.empty())
        throw ConfigError("no couplings given (use --coupling or --params)");
    for (double c : couplings)
        if (!(c > 0.0) || !std::isfinite(c))
            throw ConfigError("couplings must be finite and > 0");
    for (const auto& p : params) {
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (!(p.alpha > 0.0))
            throw ConfigError("--params: alpha must be > 0 for a sweep");
    }
    if (m_max < 0)
        throw ConfigError("m_max must be >= 0");
    if (s_max && !(*s_max > 1e-6))
        throw ConfigError("s_max must be > s_min = 1e-6");
    if (eig_tol && !(*eig_tol > 0.0))
        throw ConfigError("tol must be > 0");
}

std::vector<SpectralSummary> run_sweep(const SweepConfig& cfg)
{
    cfg.validate();

    struct Job
    {
        double c;
        std::optional<PhysicalParams> physical;
        int m;
    };
    std::vector<Job> jobs;
    if (cfg.physical_mode()) {
        for (const auto& p : cfg.params)
            for (int m = 0; m <= cfg.m_max; ++m)
                jobs.push_back({coupling_from_physical(p).value(), p, m});
    } else {
        for (double c : cfg.couplings)
            for (int m = 0; m <= cfg.m_max; ++m)
                jobs.push_back({c, std::nullopt, m});
    }
    std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        return a.c < b.c || (a.c == b.c && a.m < b.m);
    });

    // the cached s-wave bracket is initialised once before workers start
    seto_0_bracket_with_one();

    std::vector<SpectralSummary> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            rows[i] = solve_row(cfg, job.c, job.physical ? &*job.physical : nullptr, job.m);
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return rows;
}

void write_csv(std::ostream& out, const std::vector<SpectralSummary>& rows)
{
    out << csv_header << '\n';
    for (const auto& row : rows) {
        const bool failed = !row.error.empty();
        const double lower = row.lower_bound_physical.value_or(row.lower_bound_dimensionless);
        std::string flags;
        for (const auto& f : row.flags)
            flags += (flags.empty() ? "" : ";") + f;
        out << format_number(row.C) << ',' << row.m << ','
            << (failed ? std::string() : std::to_string(row.count)) << ','
            << format_number(row.seto_closed) << ',' << format_number(row.seto_numeric) << ','
            << optional_number(row.eps0) << ',' << optional_number(row.E0_physical) << ','
            << format_number(lower) << ',' << format_number(-lower) << ',' << flags << '\n';
    }
}

void emit_potential_curves(const SweepConfig& cfg, std::ostream& out)
{
    if (!cfg.couplings.empty() && !cfg.params.empty())
        throw ConfigError("--coupling and --params cannot be mixed in one run");
    std::vector<double> couplings = cfg.couplings;
    for (const auto& p : cfg.params)
        couplings.push_back(coupling_from_physical(p).value());
    if (couplings.empty())
        throw ConfigError("no couplings given (use --coupling or --params)");
    for (double c : couplings)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw ConfigError("couplings must be finite and >= 0");
    if (cfg.m_max < 0)
        throw ConfigError("m_max must be >= 0");
    std::sort(couplings.begin(), couplings.end());

    const PotentialRange& r = cfg.potential;
    if (!(r.lo > 0.0) || !(r.lo < r.hi) || r.samples < 2)
        throw ConfigError("potential range needs 0 < lo < hi and n >= 2");

    out << "# C m s v_eff\n";
    for (double c : couplings) {
        for (int m = 0; m <= cfg.m_max; ++m) {
            for (int i = 0; i < r.samples; ++i) {
                const double s = i + 1 == r.samples ? r.hi : r.lo + (r.hi - r.lo) * i / (r.samples - 1);
                out << format_number(c) << ' ' << m << ' ' << format_number(s) << ' '
                    << format_number(v_eff(s, m, Coupling(c))) << '\n';
            }
            out << '\n';
        }
    }
}

int verify(const VerifyOptions& options, std::ostream& report)
{
    Tally tally;

    // integral identities
    const IdentityReport identities = integral_identity_suite(options.k0_override);
    for (const auto& item : identities.items) {
        std::ostringstream detail;
        detail << "measured=" << format_number(item.measured) << " expected=" << format_number(item.expected)
               << " tol=" << format_number(item.tolerance);
        if (!item.note.empty())
            detail << " note=\"" << item.note << '"';
        tally.line(report, "identity." + slug(item.name), item.status, detail.str());
    }

    // Kato sampling with hbar = mu = alpha = beta = 1
    const PhysicalParams unit{};
    const double a_scale = kato_constants(unit, 1.0).A;
    const double v_norm = std::sqrt(std::numbers::pi) * unit.alpha / unit.beta;
    for (double sigma : {0.1, 1.0, 10.0}) {
        for (double factor : {2.2, 4.0, 20.0}) {
            const double lambda = factor * a_scale;
            const KatoCheck k = kato_inequality_sample(unit, lambda, sigma);
            std::ostringstream key;
            key << "kato.sigma_" << format_number(sigma) << ".lambda_" << format_number(lambda);
            std::ostringstream detail;
            detail << "lhs=" << format_number(k.lhs) << " rhs=" << format_number(k.rhs)
                   << " sup_norm=" << format_number(k.sup_norm) << " sup_bound=" << format_number(k.sup_bound);
            if (!k.satisfied)
                detail << " note=\"quoted a(lambda), b(lambda) too small; sup-norm estimate violated\"";
            tally.line(report, key.str(), k.satisfied ? CheckStatus::pass : CheckStatus::expected_discrepancy,
                       detail.str());
            // Hoelder with the measured ||V||_2 must always hold
            std::ostringstream holder;
            holder << "lhs=" << format_number(k.lhs) << " bound=" << format_number(v_norm * k.sup_norm);
            tally.line(report, key.str() + ".holder",
                       k.lhs <= v_norm * k.sup_norm * (1.0 + 1e-12) ? CheckStatus::pass : CheckStatus::fail,
                       holder.str());
        }
    }

    // lambda minimisation
    {
        const long double found = golden_section_lambda(a_scale);
        const double lambda0 = optimal_lambda(unit);
        const double f0 = *kato_constants(unit, lambda0).f;
        const double c = coupling_from_physical(unit).value();
        const double rel = std::abs(static_cast<double>(found) - lambda0) / lambda0;
        std::ostringstream detail;
        detail << "golden_section=" << format_number(static_cast<double>(found))
               << " lambda0=" << format_number(lambda0) << " rel_error=" << format_number(rel);
        tally.line(report, "kato.lambda0", rel <= 1e-8 ? CheckStatus::pass : CheckStatus::fail, detail.str());
        const double target = c * unit.alpha / 8.0;
        std::ostringstream fdetail;
        fdetail << "f=" << format_number(f0) << " expected=" << format_number(target);
        tally.line(report, "kato.f_min", std::abs(f0 - target) <= 1e-8 ? CheckStatus::pass : CheckStatus::fail,
                   fdetail.str());
    }

    // oracle equivalence and bound consistency
    for (int m : {0, 1}) {
        for (double c : {0.5, 1.0, 1.9, 5.0}) {
            std::ostringstream key;
            key << "spectrum.C_" << format_number(c) << ".m_" << m;
            try {
                RadialProblem p;
                p.m = m;
                p.C = Coupling(c);
                const int nodes = count_bound_states(p);
                const EigenResult res = find_eigenvalues(p);
                RadialProblem fd = p;
                fd.s_max = res.s_max_used;
                fd.s_max_cap = std::max(fd.s_max_cap, fd.s_max);
                const auto oracle = fd_oracle_extrapolated(fd);
                const int count = static_cast<int>(res.eigenvalues.size());

                std::ostringstream detail;
                detail << "node_count=" << nodes << " shooting=" << count << " fd=" << oracle.size();
                const bool counts_agree = nodes == count && count == static_cast<int>(oracle.size());
                double worst = 0.0;
                if (counts_agree)
                    for (int n = 0; n < count; ++n)
                        worst = std::max(worst, std::abs(res.eigenvalues[n] - oracle[n]));
                detail << " max_abs_diff=" << format_number(worst);
                tally.line(report, key.str() + ".oracle",
                           counts_agree && worst <= 1e-6 ? CheckStatus::pass : CheckStatus::fail, detail.str());

                const double closed = m == 0 ? 1.0 + c / 2.0 : c / (2.0 * m);
                const double numeric = m == 0 ? 1.0 + c * seto_0_bracket_with_one() : seto_m(Coupling(c), m).numeric;
                std::ostringstream sdetail;
                sdetail << "count=" << count << " seto_closed=" << format_number(closed)
                        << " seto_numeric=" << format_number(numeric);
                CheckStatus seto = CheckStatus::pass;
                if (!check_count(count, std::max(closed, numeric)))
                    seto = CheckStatus::fail;
                else if (!check_count(count, closed))
                    seto = CheckStatus::expected_discrepancy;
                tally.line(report, key.str() + ".seto", seto, sdetail.str());

                if (count > 0) {
                    const double floor = -c * c / 8.0;
                    std::ostringstream ldetail;
                    ldetail << "eps0=" << format_number(res.eigenvalues.front()) << " lower_bound=" << format_number(floor);
                    const bool ok = res.eigenvalues.front() >= floor * (1.0 + 1e-9);
                    if (!ok)
                        ldetail << " note=\"ground state below -C^2/8\"";
                    tally.line(report, key.str() + ".lower_bound",
                               ok ? CheckStatus::pass : CheckStatus::expected_discrepancy, ldetail.str());
                }
            } catch (const std::exception& e) {
                tally.line(report, key.str(), CheckStatus::fail, std::string("error=\"") + e.what() + '"');
            }
        }
    }

    // closed-form variational trial below -C^2/8 at C = 2.5
    {
        RadialProblem p;
        p.C = Coupling(2.5);
        const double a = 0.71193527;
        const double q = 1.25179557;
        const auto trial = sample_trial(p, [&](double s) { return std::sqrt(s) * std::exp(-a * std::pow(s, q)); });
        const double rq = rayleigh_quotient(p, trial);
        const double floor = -2.5 * 2.5 / 8.0;
        std::ostringstream detail;
        detail << "rayleigh_quotient=" << format_number(rq) << " lower_bound=" << format_number(floor)
               << " trial=\"exp(-0.71193527 s^1.25179557)\"";
        tally.line(report, "variational.C_2.5.m_0",
                   rq < floor ? CheckStatus::expected_discrepancy : CheckStatus::pass, detail.str());
    }

    report << "failures: " << tally.failures << '\n';
    report << "expected_discrepancies: " << tally.discrepancies << '\n';
    report << "result: " << (tally.failures == 0 ? "pass" : "fail") << '\n';
    return tally.failures == 0 ? 0 : 1;
}

} // namespace macdonald
