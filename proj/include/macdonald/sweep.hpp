#pragma once

#include "macdonald/bounds.hpp"
#include "macdonald/model.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace macdonald {

class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct PotentialRange
{
    double lo = 0.05;
    double hi = 10.0;
    int samples = 200;
};

struct SweepConfig
{
    std::vector<double> couplings;      ///< dimensionless mode
    std::vector<PhysicalParams> params; ///< physical mode; never mixed with couplings
    int m_max = 0;
    std::optional<double> s_max;
    std::optional<double> eig_tol;
    std::string out_path;
    PotentialRange potential;
    unsigned threads = 0; ///< 0: hardware concurrency

    bool physical_mode() const { return !params.empty(); }
    /// Throws ConfigError.
    void validate() const;
};

inline constexpr const char* csv_header = "C,m,count,seto_closed,seto_numeric,eps0,E0_physical,lower_bound,gap,flags";

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double v);

/// Parses "a,b,c" into doubles; throws ConfigError.
std::vector<double> parse_list(const std::string& text);
/// Parses "hbar,mu,alpha,beta"; throws ConfigError.
PhysicalParams parse_params(const std::string& text);
/// Parses "lo:hi:n"; throws ConfigError.
PotentialRange parse_range(const std::string& text);

/// Flat "key = value" file; '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Applies recognised keys (coupling, params, m_max, s_max, tol, out,
/// potential_range) to cfg; throws ConfigError on unknown keys.
void apply_config(SweepConfig& cfg, const std::map<std::string, std::string>& entries);

/// Solves every (C, m <= m_max) channel. Rows are ordered by C ascending then
/// m; solver errors are recorded per row.
std::vector<SpectralSummary> run_sweep(const SweepConfig& cfg);

void write_csv(std::ostream& out, const std::vector<SpectralSummary>& rows);

/// Long-format plot data "C m s v_eff" for every coupling and m <= m_max.
void emit_potential_curves(const SweepConfig& cfg, std::ostream& out);

struct VerifyOptions
{
    K0Function k0_override; ///< test hook for the failure path
};

/// Runs the identity suite, Kato sampling, lambda minimisation and the
/// oracle-equivalence grid, writing "key: value" lines. Returns the exit code
/// (0 when every self-consistency check passes, 1 otherwise).
int verify(const VerifyOptions& options, std::ostream& report);

} // namespace macdonald
