// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_IO_HPP
#define AIMCF_IO_HPP

#include <aimcf/diagnostics.hpp>
#include <aimcf/errors.hpp>
#include <aimcf/experiment_harness.hpp>
#include <aimcf/flow_kernel.hpp>
#include <aimcf/lorentz_geometry.hpp>
#include <aimcf/theory_oracles.hpp>
#include <aimcf/time_integrator.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace aimcf {

/// Everything a configuration file describes. `study` carries the sweep and
/// order-study fragments; its base_cfg and initial mirror `flow` and `initial`.
struct RunConfig {
    FlowConfig flow;
    InitialFamily initial;
    std::string output_dir = "out";
    bool c_ref_auto = true;
    StudySpec study;
};

/// Command-line values that replace the file's entries before validation.
struct ConfigOverrides {
    std::optional<double> alpha;
    std::optional<int> grid_n;
    std::optional<FlowMode> mode;
};

inline std::optional<FlowMode> parse_mode(std::string_view text)
{
    if (text == "physical")
        return FlowMode::physical;
    if (text == "rescaled")
        return FlowMode::rescaled;
    return std::nullopt;
}

inline const char* to_string(FlowMode mode) noexcept
{
    return mode == FlowMode::physical ? "physical" : "rescaled";
}

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& object, const std::string& where, std::initializer_list<std::string_view> keys)
{
    if (!object.is_object())
        throw ValidationError(where.empty() ? "config" : where, "expected an object");
    for (const auto& item : object.items()) {
        bool known = false;
        for (std::string_view key : keys)
            known = known || item.key() == key;
        if (!known)
            throw ValidationError(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
}

inline double read_real(const json& object, const char* key, const std::string& path, double fallback)
{
    if (!object.contains(key))
        return fallback;
    const json& value = object.at(key);
    if (!value.is_number())
        throw ValidationError(path, "must be a number");
    return value.get<double>();
}

inline double require_real(const json& object, const char* key, const std::string& path)
{
    if (!object.contains(key))
        throw ValidationError(path, "is required");
    return read_real(object, key, path, 0.0);
}

inline long long read_integer(const json& object, const char* key, const std::string& path, long long fallback)
{
    if (!object.contains(key))
        return fallback;
    const json& value = object.at(key);
    if (!value.is_number_integer())
        throw ValidationError(path, "must be an integer");
    return value.get<long long>();
}

inline std::string read_string(const json& object, const char* key, const std::string& path, std::string fallback)
{
    if (!object.contains(key))
        return fallback;
    const json& value = object.at(key);
    if (!value.is_string())
        throw ValidationError(path, "must be a string");
    return value.get<std::string>();
}

inline std::pair<int, int> line_and_column(std::string_view text, std::size_t byte)
{
    int line = 1;
    int column = 1;
    const std::size_t stop = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

inline int checked_int(long long value, const std::string& path)
{
    if (value < 1 || value > (1 << 24))
        throw ValidationError(path, "out of range");
    return static_cast<int>(value);
}

} // namespace detail

/// Parses and fully validates a JSON configuration held in memory. The
/// initial datum is built and run through the guards, so an inadmissible
/// family is reported here as ValidationError on "initial".
inline RunConfig parse_config_text(std::string_view text, const ConfigOverrides& overrides = {})
{
    using detail::json;
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = detail::line_and_column(text, e.byte);
        throw ParseError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column), line,
                         column);
    }

    detail::reject_unknown(root, "",
                           {"alpha", "domain", "grid_n", "mode", "c_ref", "time", "initial", "tolerances", "output",
                            "study"});
    RunConfig out;
    FlowConfig& cfg = out.flow;

    cfg.alpha = detail::require_real(root, "alpha", "alpha");
    if (!root.contains("domain"))
        throw ValidationError("domain", "is required");
    const json& domain = root.at("domain");
    detail::reject_unknown(domain, "domain", {"c", "d"});
    cfg.c = detail::require_real(domain, "c", "domain.c");
    cfg.d = detail::require_real(domain, "d", "domain.d");
    if (!root.contains("grid_n"))
        throw ValidationError("grid_n", "is required");
    cfg.n = detail::checked_int(detail::read_integer(root, "grid_n", "grid_n", 0), "grid_n");
    const std::string mode = detail::read_string(root, "mode", "mode", "physical");
    if (!parse_mode(mode))
        throw ValidationError("mode", "must be \"physical\" or \"rescaled\"");
    cfg.mode = *parse_mode(mode);

    if (root.contains("c_ref")) {
        const json& value = root.at("c_ref");
        if (value.is_string()) {
            if (value.get<std::string>() != "auto")
                throw ValidationError("c_ref", "must be a number or \"auto\"");
        } else if (value.is_number()) {
            cfg.c_ref = value.get<double>();
            out.c_ref_auto = false;
        } else {
            throw ValidationError("c_ref", "must be a number or \"auto\"");
        }
    }

    if (root.contains("time")) {
        const json& time = root.at("time");
        detail::reject_unknown(time, "time", {"t_end", "s_end", "sigma_cfl", "dt_max", "fixed_dt"});
        cfg.t_end = detail::read_real(time, "t_end", "time.t_end", cfg.t_end);
        cfg.s_end = detail::read_real(time, "s_end", "time.s_end", cfg.s_end);
        cfg.sigma_cfl = detail::read_real(time, "sigma_cfl", "time.sigma_cfl", cfg.sigma_cfl);
        cfg.dt_max = detail::read_real(time, "dt_max", "time.dt_max", cfg.dt_max);
        if (time.contains("fixed_dt"))
            cfg.fixed_dt = detail::read_real(time, "fixed_dt", "time.fixed_dt", 0.0);
    }

    if (!root.contains("initial"))
        throw ValidationError("initial", "is required");
    const json& initial = root.at("initial");
    detail::reject_unknown(initial, "initial", {"kind", "r", "amplitude", "mode_m", "seed"});
    const std::string kind = detail::read_string(initial, "kind", "initial.kind", "");
    if (kind == "constant")
        out.initial.kind = InitialKind::constant;
    else if (kind == "cosine")
        out.initial.kind = InitialKind::cosine;
    else if (kind == "random_cosine_mix")
        out.initial.kind = InitialKind::random_cosine_mix;
    else
        throw ValidationError("initial.kind", "must be \"constant\", \"cosine\" or \"random_cosine_mix\"");
    out.initial.r = detail::read_real(initial, "r", "initial.r", out.initial.r);
    out.initial.amplitude = detail::read_real(initial, "amplitude", "initial.amplitude", out.initial.amplitude);
    out.initial.mode_m = detail::checked_int(detail::read_integer(initial, "mode_m", "initial.mode_m", 1),
                                             "initial.mode_m");
    const long long seed = detail::read_integer(initial, "seed", "initial.seed", 0);
    if (seed < 0)
        throw ValidationError("initial.seed", "must be >= 0");
    out.initial.seed = static_cast<std::uint64_t>(seed);
    if (!(out.initial.r > 0.0))
        throw ValidationError("initial.r", "must be > 0");
    if (!(out.initial.amplitude >= 0.0 && out.initial.amplitude < 1.0))
        throw ValidationError("initial.amplitude", "must lie in [0, 1)");

    if (root.contains("tolerances")) {
        const json& tol = root.at("tolerances");
        detail::reject_unknown(tol, "tolerances", {"convergence", "env", "grad"});
        cfg.convergence_tol = detail::read_real(tol, "convergence", "tolerances.convergence", cfg.convergence_tol);
        cfg.tol_env = detail::read_real(tol, "env", "tolerances.env", cfg.tol_env);
        cfg.tol_grad = detail::read_real(tol, "grad", "tolerances.grad", cfg.tol_grad);
    }

    if (root.contains("output")) {
        const json& output = root.at("output");
        detail::reject_unknown(output, "output", {"dir", "snapshot_stride"});
        out.output_dir = detail::read_string(output, "dir", "output.dir", out.output_dir);
        cfg.snapshot_stride = detail::checked_int(
            detail::read_integer(output, "snapshot_stride", "output.snapshot_stride", cfg.snapshot_stride),
            "output.snapshot_stride");
    }

    if (root.contains("study")) {
        const json& study = root.at("study");
        detail::reject_unknown(study, "study", {"alphas", "refinements", "order", "flow_tables"});
        if (study.contains("alphas")) {
            const json& alphas = study.at("alphas");
            if (!alphas.is_array() || alphas.empty())
                throw ValidationError("study.alphas", "must be a non-empty array of numbers");
            out.study.alphas.clear();
            for (const json& value : alphas) {
                if (!value.is_number() || !(value.get<double>() <= 0.0))
                    throw ValidationError("study.alphas", "entries must be numbers <= 0");
                out.study.alphas.push_back(value.get<double>());
            }
        }
        out.study.refinements
            = detail::checked_int(detail::read_integer(study, "refinements", "study.refinements", 3), "study.refinements");
        const std::string order = detail::read_string(study, "order", "study.order", "spatial");
        if (order != "spatial" && order != "temporal")
            throw ValidationError("study.order", "must be \"spatial\" or \"temporal\"");
        out.study.kind = order == "spatial" ? StudyKind::order_spatial : StudyKind::order_temporal;
        if (study.contains("flow_tables")) {
            if (!study.at("flow_tables").is_boolean())
                throw ValidationError("study.flow_tables", "must be a boolean");
            out.study.spatial_flow_tables = study.at("flow_tables").get<bool>();
        }
    } else {
        out.study.kind = StudyKind::order_spatial;
    }

    if (overrides.alpha)
        cfg.alpha = *overrides.alpha;
    if (overrides.grid_n)
        cfg.n = *overrides.grid_n;
    if (overrides.mode)
        cfg.mode = *overrides.mode;

    if (!(cfg.alpha <= 0.0))
        throw ValidationError("alpha", "alpha must be <= 0");
    validate_config(cfg);

    GraphState u0 = make_initial(out.initial, cfg.c, cfg.d, cfg.n, cfg);
    if (!std::all_of(u0.u.begin(), u0.u.end(), [](double x) { return x > 0.0; }))
        throw ValidationError("initial", "initial profile must be positive");
    if (out.c_ref_auto)
        cfg.c_ref = default_c_ref(u0);
    try {
        check_admissible(u0, cfg);
    } catch (const NotSpacelike& e) {
        throw ValidationError("initial", std::string("initial data violates the spacelike guard: ") + e.what());
    } catch (const DegenerateConvexity& e) {
        throw ValidationError("initial", std::string("initial data violates the convexity guard: ") + e.what());
    }

    out.study.base_cfg = cfg;
    out.study.initial = out.initial;
    return out;
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline RunConfig parse_config(const std::string& path, const ConfigOverrides& overrides = {})
{
    return parse_config_text(read_text_file(path), overrides);
}

inline constexpr std::string_view series_csv_header
    = "step,t,s,u_min,u_max,grad_phi_max,k_min,k_max,k_theta_min,k_theta_max,length,length_ode_residual,"
      "osc_rescaled,env_violation,phidot_violation,psi_identity_gap,all_ok";

namespace detail {

inline void put_real(std::string& line, double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    line.append(buf, res.ptr);
}

inline double take_real(std::string_view field, const std::string& where)
{
    if (field == "nan" || field == "-nan")
        return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw IoError("malformed number '" + std::string(field) + "' in " + where);
    return value;
}

inline std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path);
    return out;
}

inline void close_output(std::ofstream& out, const std::string& path)
{
    out.close();
    if (!out)
        throw IoError("write failed for " + path);
}

} // namespace detail

inline std::string format_series_row(const DiagnosticsRecord& rec)
{
    std::string line = std::to_string(rec.step);
    for (double value : {rec.t, rec.s, rec.u_min, rec.u_max, rec.grad_phi_max, rec.k_min, rec.k_max, rec.k_theta_min,
                         rec.k_theta_max, rec.length, rec.length_ode_residual, rec.osc_rescaled, rec.env_violation,
                         rec.phidot_violation, rec.psi_identity_gap}) {
        line += ',';
        detail::put_real(line, value);
    }
    line += rec.all_ok ? ",1" : ",0";
    return line;
}

inline void write_series_csv(const std::vector<DiagnosticsRecord>& series, const std::string& path)
{
    std::ofstream out = detail::open_output(path);
    out << series_csv_header << '\n';
    for (const DiagnosticsRecord& rec : series)
        out << format_series_row(rec) << '\n';
    detail::close_output(out, path);
}

inline void write_series_csv(const RunResult& result, const std::string& path)
{
    write_series_csv(result.series, path);
}

inline std::vector<DiagnosticsRecord> read_series_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != series_csv_header)
        throw IoError("unexpected header in " + path);
    std::vector<DiagnosticsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            const std::size_t comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 17)
            throw IoError("expected 17 fields in " + path);
        DiagnosticsRecord rec;
        const auto step = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), rec.step);
        if (step.ec != std::errc())
            throw IoError("malformed step in " + path);
        double* targets[] = {&rec.t, &rec.s, &rec.u_min, &rec.u_max, &rec.grad_phi_max, &rec.k_min, &rec.k_max,
                             &rec.k_theta_min, &rec.k_theta_max, &rec.length, &rec.length_ode_residual,
                             &rec.osc_rescaled, &rec.env_violation, &rec.phidot_violation, &rec.psi_identity_gap};
        for (std::size_t j = 0; j < 15; ++j)
            *targets[j] = detail::take_real(fields[j + 1], path);
        rec.all_ok = fields[16] == "1";
        out.push_back(rec);
    }
    return out;
}

/// Columns xi,u,x1,x2 with (x1, x2) the embedded curve. Expects n >= 1.
inline void write_snapshot(const GraphState& state, const std::string& path)
{
    check_layout(state);
    const std::vector<Point2L> points = embed_graph(state);
    std::ofstream out = detail::open_output(path);
    out << "xi,u,x1,x2\n";
    for (std::size_t i = 0; i < state.nodes(); ++i) {
        std::string line;
        detail::put_real(line, state.xi(i));
        for (double value : {state.u[i], points[i].x1, points[i].x2}) {
            line += ',';
            detail::put_real(line, value);
        }
        out << line << '\n';
    }
    detail::close_output(out, path);
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path)
{
    std::ofstream out = detail::open_output(path);
    out << "alpha,r_infinity,r_lo,r_hi,contained,termination,steps\n";
    for (const SweepRow& row : rows) {
        std::string line;
        detail::put_real(line, row.alpha);
        line += ',';
        if (row.r_infinity)
            detail::put_real(line, *row.r_infinity);
        line += ',';
        detail::put_real(line, row.r_lo);
        line += ',';
        detail::put_real(line, row.r_hi);
        line += row.contained ? ",1," : ",0,";
        line += to_string(row.termination);
        line += ',' + std::to_string(row.steps);
        out << line << '\n';
    }
    detail::close_output(out, path);
}

inline void write_order_csv(const std::vector<OrderTable>& tables, const std::string& path)
{
    std::ofstream out = detail::open_output(path);
    out << "quantity,step,error,order\n";
    for (const OrderTable& table : tables) {
        for (const OrderRow& row : table.rows) {
            std::string line = table.quantity + ',';
            detail::put_real(line, row.step);
            line += ',';
            detail::put_real(line, row.error);
            line += ',';
            if (row.exact)
                line += "exact";
            else if (row.order)
                detail::put_real(line, *row.order);
            out << line << '\n';
        }
    }
    detail::close_output(out, path);
}

} // namespace aimcf

#endif // AIMCF_IO_HPP
