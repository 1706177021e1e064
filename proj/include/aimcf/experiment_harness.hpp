// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_EXPERIMENT_HARNESS_HPP
#define AIMCF_EXPERIMENT_HARNESS_HPP

#include <aimcf/diagnostics.hpp>
#include <aimcf/errors.hpp>
#include <aimcf/flow_kernel.hpp>
#include <aimcf/lorentz_geometry.hpp>
#include <aimcf/theory_oracles.hpp>
#include <aimcf/time_integrator.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace aimcf {

enum class StudyKind { order_spatial, order_temporal, alpha_sweep, covariance };
enum class InitialKind { constant, cosine, random_cosine_mix };

/// Initial-data family. Cosine data r (1 + A cos(m pi (xi - c)/(d - c)))
/// satisfies the Neumann condition for every integer m >= 1.
struct InitialFamily {
    InitialKind kind = InitialKind::cosine;
    double r = 2.0;
    double amplitude = 0.05;
    int mode_m = 1;
    std::uint64_t seed = 0;
};

struct StudySpec {
    StudyKind kind = StudyKind::order_spatial;
    FlowConfig base_cfg;
    int refinements = 3;
    std::vector<double> alphas{-2.0, -1.0, -0.5, 0.0};
    InitialFamily initial;
    double containment_tol = 1e-3;
    bool spatial_flow_tables = false; ///< also refine envelope and length residual of full runs
};

/// Raises NotSpacelike / DegenerateConvexity when `u0` is not admissible.
inline void check_admissible(const GraphState& u0, const FlowConfig& cfg)
{
    build_envelope(u0, cfg);
}

namespace detail {

inline std::array<double, 4> mix_coefficients(const InitialFamily& family)
{
    std::mt19937_64 rng(family.seed);
    std::uniform_real_distribution<double> coefficient(-family.amplitude, family.amplitude);
    std::array<double, 4> out{};
    for (double& value : out)
        value = coefficient(rng);
    return out;
}

inline GraphState cosine_sum(const InitialFamily& family, double c, double d, int n, const std::array<double, 4>& coef)
{
    return sample_state(c, d, n, [&](double xi) {
        const double arg = std::numbers::pi * (xi - c) / (d - c);
        double sum = 1.0;
        for (std::size_t m = 0; m < coef.size(); ++m)
            sum += coef[m] * std::cos(static_cast<double>(m + 1) * arg);
        return family.r * sum;
    });
}

} // namespace detail

/// Samples the family on [c, d] with n intervals. Random mixtures are halved
/// until they pass the guards; the other families are returned as sampled.
inline GraphState make_initial(const InitialFamily& family, double c, double d, int n, const FlowConfig& cfg = {})
{
    if (!(family.r > 0.0))
        throw std::invalid_argument("initial radius r must be > 0");
    switch (family.kind) {
    case InitialKind::constant:
        return constant_state(c, d, n, family.r);
    case InitialKind::cosine: {
        if (family.mode_m < 1)
            throw std::invalid_argument("cosine mode_m must be >= 1");
        const double m = family.mode_m;
        return sample_state(c, d, n, [&](double xi) {
            return family.r * (1.0 + family.amplitude * std::cos(m * std::numbers::pi * (xi - c) / (d - c)));
        });
    }
    case InitialKind::random_cosine_mix: {
        std::array<double, 4> coef = detail::mix_coefficients(family);
        FlowConfig probe = cfg;
        probe.c_ref.reset();
        for (int attempt = 0; attempt < 60; ++attempt) {
            GraphState state = detail::cosine_sum(family, c, d, n, coef);
            const bool positive = std::all_of(state.u.begin(), state.u.end(), [](double x) { return x > 0.0; });
            if (positive) {
                try {
                    check_admissible(state, probe);
                    return state;
                } catch (const GuardViolation&) {
                }
            }
            for (double& value : coef)
                value *= 0.5;
        }
        return constant_state(c, d, n, family.r);
    }
    }
    throw std::invalid_argument("unknown initial family");
}

struct OrderRow {
    double step = 0.0; ///< h or dt
    double error = 0.0;
    std::optional<double> order; ///< log2 error ratio against the previous row
    bool exact = false;          ///< error at round-off level
};

struct OrderTable {
    std::string quantity;
    std::vector<OrderRow> rows;
};

inline constexpr double roundoff_error_level = 1e-12;

namespace detail {

inline OrderRow measured(double step, double error)
{
    OrderRow row;
    row.step = step;
    row.error = error;
    return row;
}

inline void fill_orders(OrderTable& table)
{
    for (std::size_t j = 0; j < table.rows.size(); ++j) {
        OrderRow& row = table.rows[j];
        row.exact = row.error <= roundoff_error_level;
        if (j > 0 && !row.exact && !table.rows[j - 1].exact)
            row.order = std::log2(table.rows[j - 1].error / row.error);
    }
}

inline double curvature_gap(const GraphState& state, double alpha, const GuardMargins& margins)
{
    const GeometryFields geo = geometry_fields(state, alpha, margins);
    const std::vector<double> frenet = curvature_frenet_oracle(state);
    double gap = 0.0;
    for (std::size_t j = 0; j < frenet.size(); ++j)
        gap = std::max(gap, std::abs(geo.k[j + 1] - frenet[j]));
    return gap;
}

template <class Field>
double series_max(const RunResult& run, Field field)
{
    double out = 0.0;
    for (const DiagnosticsRecord& rec : run.series)
        out = std::max(out, field(rec));
    return out;
}

inline void require_completed(const RunResult& run, const std::string& where)
{
    if (run.termination == Termination::guard_violation || run.termination == Termination::step_underflow)
        throw std::runtime_error(where + ": run ended with " + to_string(run.termination) + ": " + run.message);
}

} // namespace detail

/// Spatial studies double n starting from base_cfg.n; temporal studies halve
/// the fixed step starting from base_cfg.fixed_dt (or dt_max) on constant
/// data with radius initial.r, measuring max |u - Theta(t, ln r)| over all
/// records.
inline std::vector<OrderTable> convergence_order_study(const StudySpec& spec)
{
    if (spec.kind != StudyKind::order_spatial && spec.kind != StudyKind::order_temporal)
        throw std::invalid_argument("convergence_order_study: kind must be order_spatial or order_temporal");
    if (spec.refinements < 2)
        throw std::invalid_argument("convergence_order_study: needs at least 2 refinement levels");
    const FlowConfig& base = spec.base_cfg;
    std::vector<OrderTable> tables;

    if (spec.kind == StudyKind::order_spatial) {
        OrderTable curvature{"curvature_gap", {}};
        OrderTable envelope{"env_violation", {}};
        OrderTable residual{"length_ode_residual", {}};
        for (int level = 0; level < spec.refinements; ++level) {
            FlowConfig cfg = base;
            cfg.n = base.n << level;
            cfg.mode = FlowMode::physical;
            const GraphState u0 = make_initial(spec.initial, cfg.c, cfg.d, cfg.n, cfg);
            const double h = u0.h();
            try {
                curvature.rows.push_back(detail::measured(h, detail::curvature_gap(u0, cfg.alpha, cfg.margins())));
                if (spec.spatial_flow_tables) {
                    const RunResult run = run_flow(u0, cfg);
                    detail::require_completed(run, "level n=" + std::to_string(cfg.n));
                    envelope.rows.push_back(detail::measured(
                        h, detail::series_max(run, [](const DiagnosticsRecord& r) { return r.env_violation; })));
                    residual.rows.push_back(detail::measured(
                        h, detail::series_max(run, [](const DiagnosticsRecord& r) { return r.length_ode_residual; })));
                }
            } catch (const GuardViolation& e) {
                throw std::runtime_error("refinement level n=" + std::to_string(cfg.n) + ": " + e.what());
            }
        }
        tables.push_back(std::move(curvature));
        if (spec.spatial_flow_tables) {
            tables.push_back(std::move(envelope));
            tables.push_back(std::move(residual));
        }
    } else {
        OrderTable radial{"radial_error", {}};
        const double r = spec.initial.r;
        const double dt0 = base.fixed_dt.value_or(base.dt_max);
        for (int level = 0; level < spec.refinements; ++level) {
            FlowConfig cfg = base;
            cfg.mode = FlowMode::physical;
            cfg.fixed_dt = dt0 / static_cast<double>(1 << level);
            cfg.snapshot_stride = 1;
            const RunResult run = run_flow(constant_state(cfg.c, cfg.d, cfg.n, r), cfg);
            detail::require_completed(run, "level dt=" + std::to_string(*cfg.fixed_dt));
            double error = 0.0;
            for (const DiagnosticsRecord& rec : run.series) {
                const double exact = theta(rec.t, std::log(r), cfg.alpha);
                error = std::max({error, std::abs(rec.u_min - exact), std::abs(rec.u_max - exact)});
            }
            radial.rows.push_back(detail::measured(*cfg.fixed_dt, error));
        }
        tables.push_back(std::move(radial));
    }
    for (OrderTable& table : tables)
        detail::fill_orders(table);
    return tables;
}

struct SweepRow {
    double alpha = 0.0;
    std::optional<double> r_infinity;
    double r_lo = 0.0;
    double r_hi = 0.0;
    bool contained = false;
    Termination termination = Termination::reached_t_end;
    long steps = 0;
    std::string message;
};

/// One rescaled run per alpha; rows come back in the order of spec.alphas.
/// Inadmissible data yields a guard_violation row rather than an exception.
inline std::vector<SweepRow> alpha_sweep(const StudySpec& spec)
{
    if (spec.kind != StudyKind::alpha_sweep)
        throw std::invalid_argument("alpha_sweep: kind must be alpha_sweep");

    auto run_row = [&spec](double alpha) {
        SweepRow row;
        row.alpha = alpha;
        FlowConfig cfg = spec.base_cfg;
        cfg.alpha = alpha;
        cfg.mode = FlowMode::rescaled;
        const GraphState u0 = make_initial(spec.initial, cfg.c, cfg.d, cfg.n, cfg);
        const RunResult run = run_flow(u0, cfg);
        row.termination = run.termination;
        row.message = run.message;
        row.steps = run.series.empty() ? 0 : run.series.back().step;
        row.r_infinity = run.r_infinity;
        try {
            std::tie(row.r_lo, row.r_hi) = radius_interval(u0, cfg.margins());
        } catch (const GuardViolation&) {
            row.r_lo = row.r_hi = std::numeric_limits<double>::quiet_NaN();
        }
        row.contained = run.r_infinity && *run.r_infinity >= row.r_lo - spec.containment_tol
            && *run.r_infinity <= row.r_hi + spec.containment_tol;
        return row;
    };

    std::vector<std::future<SweepRow>> pending;
    pending.reserve(spec.alphas.size());
    for (double alpha : spec.alphas)
        pending.push_back(std::async(std::launch::async, run_row, alpha));
    std::vector<SweepRow> rows;
    rows.reserve(pending.size());
    for (auto& job : pending)
        rows.push_back(job.get());
    return rows;
}

/// max_i |lambda u^{(a)}_i(lambda^{-alpha} t_probe) - u^{(b)}_i(t_probe)| where
/// u^{(a)} starts from the family datum and u^{(b)} from lambda times it.
inline double scaling_covariance_check(const InitialFamily& family, double lambda, double alpha, double t_probe,
                                       FlowConfig base = {})
{
    if (!(lambda > 0.0) || !(t_probe > 0.0))
        throw std::invalid_argument("scaling_covariance_check: lambda and t_probe must be > 0");
    base.alpha = alpha;
    base.mode = FlowMode::physical;
    base.c_ref.reset();

    const GraphState u0 = make_initial(family, base.c, base.d, base.n, base);
    GraphState scaled = u0;
    for (double& value : scaled.u)
        value *= lambda;

    FlowConfig slow = base;
    slow.t_end = std::pow(lambda, -alpha) * t_probe;
    FlowConfig fast = base;
    fast.t_end = t_probe;

    const RunResult a = run_flow(u0, slow);
    const RunResult b = run_flow(scaled, fast);
    detail::require_completed(a, "covariance run (unscaled)");
    detail::require_completed(b, "covariance run (scaled)");

    double gap = 0.0;
    for (std::size_t i = 0; i < u0.nodes(); ++i)
        gap = std::max(gap, std::abs(lambda * a.final_state.u[i] - b.final_state.u[i]));
    return gap;
}

/// Constant-data form: u^{(r)} against u^{(lambda r)}.
inline double scaling_covariance_check(double r, double lambda, double alpha, double t_probe, FlowConfig base = {})
{
    InitialFamily family;
    family.kind = InitialKind::constant;
    family.r = r;
    return scaling_covariance_check(family, lambda, alpha, t_probe, std::move(base));
}

} // namespace aimcf

#endif // AIMCF_EXPERIMENT_HARNESS_HPP
