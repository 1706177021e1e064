// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_TIME_INTEGRATOR_HPP
#define AIMCF_TIME_INTEGRATOR_HPP

#include <aimcf/diagnostics.hpp>
#include <aimcf/errors.hpp>
#include <aimcf/flow_kernel.hpp>
#include <aimcf/lorentz_geometry.hpp>
#include <aimcf/theory_oracles.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aimcf {

enum class Termination { reached_t_end, converged, guard_violation, step_underflow };

inline const char* to_string(Termination termination) noexcept
{
    switch (termination) {
    case Termination::reached_t_end: return "reached_t_end";
    case Termination::converged: return "converged";
    case Termination::guard_violation: return "guard_violation";
    case Termination::step_underflow: return "step_underflow";
    }
    return "unknown";
}

/// Outcome of run_flow. `r_infinity` is set only when a rescaled run converged.
struct RunResult {
    GraphState final_state;
    std::vector<DiagnosticsRecord> series;
    std::optional<double> r_infinity;
    Termination termination = Termination::reached_t_end;
    TheoryEnvelope envelope;
    std::string message;
};

inline constexpr double min_time_step = 1e-14;

/// min(dt_max, sigma_cfl h^2 / diffusion_coefficient).
inline double stable_dt(const GraphState& state, const FlowConfig& cfg)
{
    const double h = state.h();
    const double dt = std::min(cfg.dt_max, cfg.sigma_cfl * h * h / diffusion_coefficient(state, cfg));
    if (!(dt >= min_time_step))
        throw StepUnderflow("stable time step " + std::to_string(dt) + " below " + std::to_string(min_time_step));
    return dt;
}

namespace detail {

template <class Guard>
[[noreturn]] void rethrow_with_stage(const Guard& error, int stage)
{
    throw Guard(std::string(error.what()) + " (RK stage " + std::to_string(stage) + ")", error.node(), stage);
}

/// Classical RK4 on phi with reusable work buffers.
class Rk4Stepper {
public:
    Rk4Stepper(KernelParams params, std::size_t count)
        : params_(params), k2_(count), k3_(count), k4_(count), stage_(count) {}

    /// Right-hand side; returns the largest diffusivity.
    double rhs(std::span<const double> phi, std::span<double> out, int stage = 1) const
    {
        try {
            return phi_rhs(phi, params_, out);
        } catch (const NotSpacelike& e) {
            rethrow_with_stage(e, stage);
        } catch (const DegenerateConvexity& e) {
            rethrow_with_stage(e, stage);
        }
    }

    /// Advances `phi` by `dt` given its stage-one slope `k1`; writes `out`.
    void advance(std::span<const double> phi, std::span<const double> k1, double dt, std::span<double> out)
    {
        const std::size_t count = phi.size();
        for (std::size_t i = 0; i < count; ++i)
            stage_[i] = phi[i] + 0.5 * dt * k1[i];
        rhs(stage_, k2_, 2);
        for (std::size_t i = 0; i < count; ++i)
            stage_[i] = phi[i] + 0.5 * dt * k2_[i];
        rhs(stage_, k3_, 3);
        for (std::size_t i = 0; i < count; ++i)
            stage_[i] = phi[i] + dt * k3_[i];
        rhs(stage_, k4_, 4);
        for (std::size_t i = 0; i < count; ++i)
            out[i] = phi[i] + dt / 6.0 * (k1[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

private:
    KernelParams params_;
    std::vector<double> k2_, k3_, k4_, stage_;
};

inline std::vector<double> exponentiate(std::span<const double> phi)
{
    std::vector<double> u(phi.size());
    std::transform(phi.begin(), phi.end(), u.begin(), [](double x) { return std::exp(x); });
    return u;
}

} // namespace detail

/// One classical four-stage step of the flow selected by cfg.mode, taken in
/// phi = ln u. Advances only the clock of that mode (t or s).
inline GraphState rk4_step(const GraphState& state, const FlowConfig& cfg, double dt)
{
    check_layout(state);
    const std::vector<double> phi = log_profile(state.u);
    detail::Rk4Stepper stepper(detail::kernel_params(state, cfg, cfg.mode), phi.size());
    std::vector<double> k1(phi.size()), next(phi.size());
    stepper.rhs(phi, k1, 1);
    stepper.advance(phi, k1, dt, next);

    GraphState out = state;
    out.u = detail::exponentiate(next);
    if (cfg.mode == FlowMode::physical)
        out.t += dt;
    else
        out.s += dt;
    return out;
}

/// Integrates from `initial` (physical data u0 at t = 0) until the end time
/// of cfg.mode, or, in rescaled mode, until oscillation and velocity of
/// phi~ both drop below cfg.convergence_tol. Rescaled runs evolve
/// u~ = u / Theta(t, c_ref), starting from u0 e^{-c_ref}.
///
/// A record is taken every snapshot_stride steps and at the last step. Each
/// record's length residual is measured by one forward and one backward probe
/// step around the recorded state. Guard violations end the run with the
/// last valid state instead of throwing.
inline RunResult run_flow(const GraphState& initial, const FlowConfig& cfg)
{
    validate_config(cfg);
    check_layout(initial);

    RunResult result;
    result.final_state = initial;
    result.final_state.t = 0.0;
    result.final_state.s = 0.0;
    try {
        result.envelope = build_envelope(initial, cfg);
    } catch (const GuardViolation& e) {
        result.termination = Termination::guard_violation;
        result.message = e.what();
        return result;
    }
    const TheoryEnvelope& env = result.envelope;
    const bool rescaled = cfg.mode == FlowMode::rescaled;
    const double c_ref = env.c_ref;
    const double h = initial.h();
    const double end = cfg.end_time();

    std::vector<double> phi = log_profile(initial.u);
    if (rescaled)
        for (double& value : phi)
            value -= c_ref;

    detail::Rk4Stepper stepper(detail::kernel_params(initial, cfg, cfg.mode), phi.size());

    auto materialize = [&](std::span<const double> values, double clock) {
        GraphState state = initial;
        state.u = detail::exponentiate(values);
        state.t = rescaled ? inverse_time_map(clock, c_ref, cfg.alpha) : clock;
        state.s = rescaled ? clock : time_map(clock, c_ref, cfg.alpha);
        return state;
    };

    auto step_size = [&](double diffusivity) {
        if (cfg.fixed_dt)
            return *cfg.fixed_dt;
        return std::min(cfg.dt_max, cfg.sigma_cfl * h * h / diffusivity);
    };

    std::vector<double> probe(phi.size());
    auto probe_residual = [&](std::span<const double> values, std::span<const double> slope, double clock,
                              double dt, const GraphState& mid) {
        try {
            DiagnosticsRecord prev, next;
            stepper.advance(values, slope, -dt, probe);
            prev.length = curve_length(materialize(probe, clock - dt), cfg.margins());
            stepper.advance(values, slope, dt, probe);
            next.length = curve_length(materialize(probe, clock + dt), cfg.margins());
            (rescaled ? prev.s : prev.t) = clock - dt;
            (rescaled ? next.s : next.t) = clock + dt;
            return length_ode_residual(prev, next, mid, cfg);
        } catch (const GuardViolation&) {
            return std::numeric_limits<double>::quiet_NaN();
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    long last_recorded = -1;
    auto record = [&](std::span<const double> values, std::span<const double> slope, double clock, double dt,
                      long step) {
        if (last_recorded == step)
            return;
        const GraphState state = materialize(values, clock);
        DiagnosticsRecord rec = evaluate_invariants(state, env, cfg);
        rec.step = step;
        rec.length_ode_residual = probe_residual(values, slope, clock, dt, state);
        result.series.push_back(rec);
        last_recorded = step;
    };

    std::vector<double> k1(phi.size()), next(phi.size());
    std::vector<double> previous = phi, previous_k1(phi.size());
    double clock = 0.0;
    double previous_clock = 0.0;
    double previous_dt = 0.0;
    long step = 0;

    auto finish = [&](std::span<const double> values, std::span<const double> slope, double at, double dt,
                      long at_step, Termination termination) {
        record(values, slope, at, dt, at_step);
        result.final_state = materialize(values, at);
        result.termination = termination;
    };

    while (true) {
        double diffusivity = 0.0;
        try {
            diffusivity = stepper.rhs(phi, k1, 1);
        } catch (const GuardViolation& e) {
            // The freshly computed state is inadmissible: report the previous one.
            finish(previous, previous_k1, previous_clock, previous_dt, step - 1, Termination::guard_violation);
            result.message = e.what();
            break;
        }
        const double dt = step_size(diffusivity);

        if (step % cfg.snapshot_stride == 0)
            record(phi, k1, clock, dt, step);

        if (rescaled) {
            const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
            double velocity = 0.0;
            for (double value : k1)
                velocity = std::max(velocity, std::abs(value));
            const double osc = std::exp(*hi) - std::exp(*lo);
            if (osc < cfg.convergence_tol && velocity < cfg.convergence_tol) {
                finish(phi, k1, clock, dt, step, Termination::converged);
                const double mean = std::accumulate(phi.begin(), phi.end(), 0.0) / static_cast<double>(phi.size());
                result.r_infinity = std::exp(mean);
                break;
            }
        }

        if (clock >= end) {
            finish(phi, k1, clock, dt, step, Termination::reached_t_end);
            break;
        }
        if (!cfg.fixed_dt && !(dt >= min_time_step)) {
            finish(phi, k1, clock, dt, step, Termination::step_underflow);
            result.message = "stable time step " + std::to_string(dt) + " below " + std::to_string(min_time_step);
            break;
        }

        const bool last = clock + dt >= end;
        const double taken = last ? end - clock : dt;
        try {
            stepper.advance(phi, k1, taken, next);
        } catch (const GuardViolation& e) {
            finish(phi, k1, clock, dt, step, Termination::guard_violation);
            result.message = e.what();
            break;
        }
        previous.swap(phi);
        previous_k1.swap(k1);
        phi.swap(next);
        previous_clock = clock;
        previous_dt = dt;
        clock = last ? end : clock + taken;
        ++step;
    }
    return result;
}

} // namespace aimcf

#endif // AIMCF_TIME_INTEGRATOR_HPP
