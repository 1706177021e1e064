// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_DIAGNOSTICS_HPP
#define AIMCF_DIAGNOSTICS_HPP

#include <aimcf/errors.hpp>
#include <aimcf/flow_kernel.hpp>
#include <aimcf/lorentz_geometry.hpp>
#include <aimcf/theory_oracles.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace aimcf {

/// Invariant verdicts and scalar summaries for one recorded state.
///
/// Curvature and length refer to the curve being integrated: the physical
/// curve in physical mode, the rescaled one in rescaled mode. `k_theta_*`,
/// `osc_rescaled` and the phi_t Theta^alpha bounds are the same quantity in
/// both modes. Violations are magnitudes (0 when the bound holds).
struct DiagnosticsRecord {
    long step = 0;
    double t = 0.0;
    double s = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double grad_phi_max = 0.0;
    double k_min = 0.0;
    double k_max = 0.0;
    double k_theta_min = 0.0;
    double k_theta_max = 0.0;
    double length = 0.0;
    double length_ode_residual = std::numeric_limits<double>::quiet_NaN();
    double osc_rescaled = 0.0;
    double env_violation = 0.0;
    double phidot_violation = 0.0;
    double psi_identity_gap = 0.0;
    bool all_ok = false;
};

inline bool operator==(const DiagnosticsRecord& a, const DiagnosticsRecord& b)
{
    auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return a.step == b.step && same(a.t, b.t) && same(a.s, b.s) && same(a.u_min, b.u_min) && same(a.u_max, b.u_max)
        && same(a.grad_phi_max, b.grad_phi_max) && same(a.k_min, b.k_min) && same(a.k_max, b.k_max)
        && same(a.k_theta_min, b.k_theta_min) && same(a.k_theta_max, b.k_theta_max) && same(a.length, b.length)
        && same(a.length_ode_residual, b.length_ode_residual) && same(a.osc_rescaled, b.osc_rescaled)
        && same(a.env_violation, b.env_violation) && same(a.phidot_violation, b.phidot_violation)
        && same(a.psi_identity_gap, b.psi_identity_gap) && a.all_ok == b.all_ok;
}

namespace detail {

inline double excursion(double value, double lo, double hi) noexcept
{
    return std::max({lo - value, value - hi, 0.0});
}

// Theta(t, c)^alpha = -alpha t + e^{alpha c}.
inline double theta_pow_alpha(double t, double c, double alpha)
{
    return alpha == 0.0 ? 1.0 : std::exp(barrier_log_base(t, c, alpha));
}

} // namespace detail

/// Evaluates every monitored bound on `state`, which holds u in physical mode
/// and u~ = u / Theta(t, c_ref) in rescaled mode. `state.t` must carry the
/// physical time in both modes. The length residual is left NaN; the runner
/// fills it.
inline DiagnosticsRecord evaluate_invariants(const GraphState& state, const TheoryEnvelope& env, const FlowConfig& cfg)
{
    const double alpha = cfg.alpha;
    const bool physical = cfg.mode == FlowMode::physical;
    const GeometryFields geo = geometry_fields(state, alpha, cfg.margins());

    // phi_t Theta^alpha is the bare (unshifted) kernel evaluated on u~, or the
    // physical kernel times Theta^alpha.
    std::vector<double> core(state.nodes());
    detail::phi_rhs(geo.phi, detail::kernel_params(state, cfg, FlowMode::physical), core);

    const double theta_c = physical ? theta(state.t, env.c_ref, alpha) : 1.0;
    const double phidot_scale = physical ? detail::theta_pow_alpha(state.t, env.c_ref, alpha) : 1.0;
    const double env_lo = physical ? theta(state.t, env.phi1, alpha) : envelope_ratio(state.t, env.phi1, env.c_ref, alpha);
    const double env_hi = physical ? theta(state.t, env.phi2, alpha) : envelope_ratio(state.t, env.phi2, env.c_ref, alpha);

    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.s = state.s;
    const auto [u_lo, u_hi] = std::minmax_element(state.u.begin(), state.u.end());
    rec.u_min = *u_lo;
    rec.u_max = *u_hi;
    rec.osc_rescaled = (rec.u_max - rec.u_min) / theta_c;
    const auto [k_lo, k_hi] = std::minmax_element(geo.k.begin(), geo.k.end());
    rec.k_min = *k_lo;
    rec.k_max = *k_hi;
    rec.k_theta_min = rec.k_min * theta_c;
    rec.k_theta_max = rec.k_max * theta_c;
    rec.length = curve_length(state, cfg.margins());

    for (std::size_t i = 0; i < state.nodes(); ++i) {
        rec.grad_phi_max = std::max(rec.grad_phi_max, std::abs(geo.u_xi[i] / state.u[i]));
        rec.env_violation = std::max(rec.env_violation, detail::excursion(state.u[i], env_lo, env_hi));
        rec.phidot_violation
            = std::max(rec.phidot_violation, detail::excursion(core[i] * phidot_scale, env.phidot_lo, env.phidot_hi));
        const double psi = geo.speed[i] / geo.w_support[i];
        rec.psi_identity_gap = std::max(rec.psi_identity_gap, std::abs(psi + core[i]));
    }

    rec.all_ok = rec.env_violation <= cfg.tol_env && rec.phidot_violation <= cfg.tol_env
        && rec.grad_phi_max <= env.grad0 + cfg.tol_grad && rec.k_theta_min >= env.k_theta_lo - cfg.tol_env
        && rec.k_theta_max <= env.k_theta_hi + cfg.tol_env;
    return rec;
}

/// Trapezoid value of the integral of u^{-alpha} dH^1 over the curve.
inline double weighted_length(const GraphState& state, double alpha, const GuardMargins& margins = {})
{
    check_layout(state);
    const std::vector<double> phi = log_profile(state.u);
    const double h = state.h();
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double p = stencil::first(phi, i, h);
        detail::check_spacelike(p, i, margins);
        const double density = std::pow(state.u[i], -alpha) * state.u[i] * std::sqrt(1.0 - p * p);
        sum += (i == 0 || i + 1 == phi.size()) ? 0.5 * density : density;
    }
    return sum * h;
}

/// Residual of the length evolution law f'(t) = -integral of u^{-alpha} dH^1
/// between two records, with the integral taken on the midpoint state. In
/// rescaled mode the law reads dL~/ds = -integral of u~^{-alpha} dH^1 + L~.
inline double length_ode_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& next,
                                  const GraphState& state_mid, const FlowConfig& cfg)
{
    const bool physical = cfg.mode == FlowMode::physical;
    const double span = physical ? next.t - prev.t : next.s - prev.s;
    if (!(span > 0.0))
        throw DomainError("length_ode_residual: records must be in increasing time order");
    const double rate = (next.length - prev.length) / span;
    double law = -weighted_length(state_mid, cfg.alpha, cfg.margins());
    if (!physical)
        law += curve_length(state_mid, cfg.margins());
    return std::abs(rate - law);
}

struct ConvergenceCheck {
    double osc = 0.0;
    double velocity = 0.0;
    bool converged = false;
};

/// Oscillation max u~ - min u~ and the largest |d phi~ / ds| of a rescaled state.
inline ConvergenceCheck oscillation_and_convergence(const GraphState& state, const FlowConfig& cfg)
{
    ConvergenceCheck out;
    const auto [lo, hi] = std::minmax_element(state.u.begin(), state.u.end());
    out.osc = *hi - *lo;
    for (double value : rhs_rescaled(state, cfg))
        out.velocity = std::max(out.velocity, std::abs(value));
    out.converged = out.osc < cfg.convergence_tol && out.velocity < cfg.convergence_tol;
    return out;
}

} // namespace aimcf

#endif // AIMCF_DIAGNOSTICS_HPP
