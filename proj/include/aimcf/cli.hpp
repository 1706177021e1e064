// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_CLI_HPP
#define AIMCF_CLI_HPP

#include <aimcf/errors.hpp>
#include <aimcf/experiment_harness.hpp>
#include <aimcf/io.hpp>
#include <aimcf/time_integrator.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace aimcf {

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int verification_failure = 1;
inline constexpr int config_error = 2;
inline constexpr int guard_violation = 3;
} // namespace exit_code

namespace detail {

struct CliOptions {
    std::string config;
    std::string out_dir;
    std::optional<double> alpha;
    std::optional<int> grid_n;
    std::string mode;
};

inline void add_common(CLI::App& sub, CliOptions& opts)
{
    sub.add_option("--config", opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub.add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
    sub.add_option("--alpha", opts.alpha, "override alpha");
    sub.add_option("--grid-n", opts.grid_n, "override grid_n");
    sub.add_option("--mode", opts.mode, "override mode")->check(CLI::IsMember({"physical", "rescaled"}));
}

inline std::string prepare_output(const RunConfig& run, const CliOptions& opts)
{
    const std::string dir = opts.out_dir.empty() ? run.output_dir : opts.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create " + dir + ": " + ec.message());
    return dir;
}

inline int run_single(const RunConfig& run, const std::string& dir, bool verify, std::ostream& log)
{
    const GraphState u0 = make_initial(run.initial, run.flow.c, run.flow.d, run.flow.n, run.flow);
    write_snapshot(u0, dir + "/initial.csv");
    const RunResult result = run_flow(u0, run.flow);
    write_series_csv(result, dir + "/series.csv");
    write_snapshot(result.final_state, dir + "/final.csv");

    log << "termination " << to_string(result.termination) << " after " << result.series.size() << " records\n";
    if (!result.message.empty())
        log << "  " << result.message << '\n';
    if (result.r_infinity)
        log << "r_infinity " << *result.r_infinity << " in [" << result.envelope.r_lo << ", " << result.envelope.r_hi
            << "]\n";
    if (result.termination == Termination::guard_violation || result.termination == Termination::step_underflow)
        return exit_code::guard_violation;
    if (!verify)
        return exit_code::success;
    const auto failed = std::count_if(result.series.begin(), result.series.end(),
                                      [](const DiagnosticsRecord& rec) { return !rec.all_ok; });
    log << "verify: " << result.series.size() - failed << "/" << result.series.size() << " records all_ok\n";
    return failed == 0 ? exit_code::success : exit_code::verification_failure;
}

inline int run_sweep(const RunConfig& run, const std::string& dir, std::ostream& log)
{
    StudySpec spec = run.study;
    spec.kind = StudyKind::alpha_sweep;
    const std::vector<SweepRow> rows = alpha_sweep(spec);
    write_sweep_csv(rows, dir + "/sweep.csv");
    int code = exit_code::success;
    for (const SweepRow& row : rows) {
        log << "alpha " << row.alpha << ": " << to_string(row.termination);
        if (row.r_infinity)
            log << " r_infinity " << *row.r_infinity;
        log << (row.contained ? " contained\n" : " NOT contained\n");
        if (row.termination == Termination::guard_violation || row.termination == Termination::step_underflow)
            code = exit_code::guard_violation;
        else if (!row.contained && code == exit_code::success)
            code = exit_code::verification_failure;
    }
    return code;
}

inline int run_order(const RunConfig& run, const std::string& dir, std::ostream& log)
{
    const std::vector<OrderTable> tables = convergence_order_study(run.study);
    write_order_csv(tables, dir + "/order.csv");
    for (const OrderTable& table : tables) {
        log << table.quantity << '\n';
        for (const OrderRow& row : table.rows) {
            log << "  step " << row.step << " error " << row.error;
            if (row.exact)
                log << " exact";
            else if (row.order)
                log << " order " << *row.order;
            log << '\n';
        }
    }
    return exit_code::success;
}

} // namespace detail

/// Entry point of the command-line tool; returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Anisotropic inverse mean curvature flow of radial graphs in the Lorentz-Minkowski plane"};
    app.require_subcommand(1);
    detail::CliOptions opts;
    CLI::App* simulate = app.add_subcommand("simulate", "run one flow and write its series and snapshots");
    CLI::App* verify = app.add_subcommand("verify", "run one flow; exit 0 iff every record passes all checks");
    CLI::App* sweep = app.add_subcommand("sweep", "rescaled runs over study.alphas");
    CLI::App* order = app.add_subcommand("order", "spatial or temporal convergence study");
    for (CLI::App* sub : {simulate, verify, sweep, order})
        detail::add_common(*sub, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, log, err);
        return code == 0 ? exit_code::success : exit_code::config_error;
    }

    RunConfig run;
    std::string dir;
    try {
        ConfigOverrides overrides;
        overrides.alpha = opts.alpha;
        overrides.grid_n = opts.grid_n;
        if (!opts.mode.empty())
            overrides.mode = parse_mode(opts.mode);
        run = parse_config(opts.config, overrides);
        dir = detail::prepare_output(run, opts);
    } catch (const ParseError& e) {
        err << "config: " << e.what() << '\n';
        return exit_code::config_error;
    } catch (const ValidationError& e) {
        err << "config: " << e.what() << '\n';
        return exit_code::config_error;
    } catch (const IoError& e) {
        err << "config: " << e.what() << '\n';
        return exit_code::config_error;
    }

    try {
        if (simulate->parsed())
            return detail::run_single(run, dir, false, log);
        if (verify->parsed())
            return detail::run_single(run, dir, true, log);
        if (sweep->parsed())
            return detail::run_sweep(run, dir, log);
        return detail::run_order(run, dir, log);
    } catch (const GuardViolation& e) {
        err << "guard: " << e.what() << '\n';
        return exit_code::guard_violation;
    } catch (const StepUnderflow& e) {
        err << "guard: " << e.what() << '\n';
        return exit_code::guard_violation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::verification_failure;
    }
}

} // namespace aimcf

#endif // AIMCF_CLI_HPP
