#include "macdonald/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>

namespace {

enum ExitCode : int { ok = 0, check_failure = 1, config_error = 2, solver_error = 3 };

struct Flags
{
    std::string config;
    std::string coupling;
    std::vector<std::string> params;
    std::optional<int> m_max;
    std::optional<double> s_max;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::optional<std::string> range;
};

void add_common(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config, "flat key = value config file");
    cmd->add_option("--coupling", f.coupling, "comma separated dimensionless couplings C");
    cmd->add_option("--params", f.params, "hbar,mu,alpha,beta (repeatable)");
    cmd->add_option("--m-max", f.m_max, "largest angular momentum channel");
    cmd->add_option("--s-max", f.s_max, "initial outer radius in units of 1/beta");
    cmd->add_option("--tol", f.tol, "eigenvalue tolerance");
    cmd->add_option("--out", f.out, "output path (default stdout)");
    cmd->add_option("--potential-range", f.range, "lo:hi:n sampling for the potential subcommand");
}

macdonald::SweepConfig build_config(const Flags& f)
{
    macdonald::SweepConfig cfg;
    if (!f.config.empty())
        macdonald::apply_config(cfg, macdonald::read_config_file(f.config));
    if (!f.coupling.empty()) {
        cfg.couplings = macdonald::parse_list(f.coupling);
        cfg.params.clear();
    }
    if (!f.params.empty()) {
        cfg.params.clear();
        for (const auto& p : f.params)
            cfg.params.push_back(macdonald::parse_params(p));
        if (f.coupling.empty())
            cfg.couplings.clear();
    }
    if (f.m_max)
        cfg.m_max = *f.m_max;
    if (f.s_max)
        cfg.s_max = *f.s_max;
    if (f.tol)
        cfg.eig_tol = *f.tol;
    if (f.out)
        cfg.out_path = *f.out;
    if (f.range)
        cfg.potential = macdonald::parse_range(*f.range);
    return cfg;
}

template <class Writer>
void with_output(const std::string& path, Writer&& write)
{
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw macdonald::ConfigError("cannot open output file " + path);
    write(file);
    if (!file)
        throw std::runtime_error("write failed: " + path);
}

int run_sweep_command(const Flags& f)
{
    const auto cfg = build_config(f);
    const auto rows = macdonald::run_sweep(cfg);
    with_output(cfg.out_path, [&](std::ostream& out) { macdonald::write_csv(out, rows); });

    int code = ok;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::cerr << "C=" << macdonald::format_number(row.C) << " m=" << row.m << ": " << row.error << '\n';
            code = solver_error;
        } else if (std::find(row.flags.begin(), row.flags.end(), "seto_violation") != row.flags.end() &&
                   code == ok) {
            code = check_failure;
        }
    }
    return code;
}

int run_potential_command(const Flags& f)
{
    const auto cfg = build_config(f);
    with_output(cfg.out_path, [&](std::ostream& out) { macdonald::emit_potential_curves(cfg, out); });
    return ok;
}

int run_verify_command(const Flags& f)
{
    int code = ok;
    const std::string path = f.out.value_or("");
    with_output(path, [&](std::ostream& out) { code = macdonald::verify({}, out); });
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bound states of the two-dimensional K0 well"};
    app.require_subcommand(1);

    Flags sweep_flags;
    Flags potential_flags;
    Flags verify_flags;
    auto* sweep = app.add_subcommand("sweep", "solve every (C, m) channel and write CSV");
    auto* potential = app.add_subcommand("potential", "emit effective potential curves");
    auto* verify = app.add_subcommand("verify", "run the self-consistency checks");
    add_common(sweep, sweep_flags);
    add_common(potential, potential_flags);
    verify->add_option("--out", verify_flags.out, "report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        if (*sweep)
            return run_sweep_command(sweep_flags);
        if (*potential)
            return run_potential_command(potential_flags);
        return run_verify_command(verify_flags);
    } catch (const macdonald::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return solver_error;
    }
}
