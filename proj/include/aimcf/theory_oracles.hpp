// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_THEORY_ORACLES_HPP
#define AIMCF_THEORY_ORACLES_HPP

#include <aimcf/errors.hpp>
#include <aimcf/flow_kernel.hpp>
#include <aimcf/lorentz_geometry.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

/// Closed-form barriers, a priori bounds and limit predictions for the flow.
namespace aimcf {

namespace detail {

inline void check_alpha(double alpha)
{
    if (!(alpha <= 0.0))
        throw DomainError("alpha must be <= 0, got " + std::to_string(alpha));
}

// ln(1 - alpha t e^{-alpha c}) = alpha (ln Theta(t, c) - c), accurate for small |alpha| and t.
inline double barrier_log_ratio(double t, double c, double alpha)
{
    const double shifted = -alpha * t * std::exp(-alpha * c);
    if (!(shifted > -1.0))
        throw DomainError("radial barrier undefined: -alpha t + e^{alpha c} <= 0");
    return std::log1p(shifted);
}

// ln(-alpha t + e^{alpha c}).
inline double barrier_log_base(double t, double c, double alpha)
{
    return alpha * c + barrier_log_ratio(t, c, alpha);
}

} // namespace detail

/// Radial barrier Theta(t, c) = (-alpha t + e^{alpha c})^{1/alpha}; the
/// alpha = 0 branch is e^{c - t}. ln Theta solves d(phi)/dt = -e^{-alpha phi}
/// with phi(0) = c.
inline double theta(double t, double c, double alpha)
{
    detail::check_alpha(alpha);
    if (alpha == 0.0)
        return std::exp(c - t);
    return std::exp(c + detail::barrier_log_ratio(t, c, alpha) / alpha);
}

/// Rescaled time s(t) = c - ln Theta(t, c), the integral of Theta^{-alpha} dt.
inline double time_map(double t, double c, double alpha)
{
    detail::check_alpha(alpha);
    if (alpha == 0.0)
        return t;
    return -detail::barrier_log_ratio(t, c, alpha) / alpha;
}

/// Closed-form inverse of time_map.
inline double inverse_time_map(double s, double c, double alpha)
{
    detail::check_alpha(alpha);
    if (alpha == 0.0)
        return s;
    return std::exp(alpha * c) * std::expm1(-alpha * s) / -alpha;
}

/// Theta(t, phi) / Theta(t, c): the C0 envelope expressed in rescaled units.
inline double envelope_ratio(double t, double phi, double c, double alpha)
{
    detail::check_alpha(alpha);
    if (alpha == 0.0)
        return std::exp(phi - c);
    return std::exp(phi - c
                    + (detail::barrier_log_ratio(t, phi, alpha) - detail::barrier_log_ratio(t, c, alpha)) / alpha);
}

/// All closed-form bounds evaluated for one initial datum.
struct TheoryEnvelope {
    double alpha = 0.0;
    double phi1 = 0.0;       ///< inf ln u0
    double phi2 = 0.0;       ///< sup ln u0
    double c_ref = 0.0;
    double grad0 = 0.0;      ///< sup |D phi0|
    double phidot_lo = -1.0; ///< bounds on phi_t Theta^alpha
    double phidot_hi = -1.0;
    double k_theta_lo = 0.0; ///< c3
    double k_theta_hi = 0.0; ///< c4
    double r_lo = 0.0;
    double r_hi = 0.0;
    double length0 = 0.0;    ///< length of the initial curve

    double rescaled_length_lo() const noexcept { return length0 * std::exp(-phi2); }
    double rescaled_length_hi() const noexcept { return length0 * std::exp(-phi1); }
};

/// Limit radius interval: L(M0)/(sup u0 L(M)) <= r_inf <= L(M0)/(inf u0 L(M)),
/// with L(M) = d - c.
inline std::pair<double, double> radius_interval(const GraphState& u0, const GuardMargins& margins = {})
{
    const double length0 = curve_length(u0, margins);
    const auto [lo, hi] = std::minmax_element(u0.u.begin(), u0.u.end());
    const double base = u0.d - u0.c;
    return {length0 / (*hi * base), length0 / (*lo * base)};
}

/// The c_ref used when the configuration leaves it unset.
inline double default_c_ref(const GraphState& u0)
{
    const auto [lo, hi] = std::minmax_element(u0.u.begin(), u0.u.end());
    return 0.5 * (std::log(*lo) + std::log(*hi));
}

/// Populates every bound for the initial datum `u0` (physical units).
///
/// The pinching constants come from k Theta = v (u/Theta)^{-(1+alpha)} / (-phi_t Theta^alpha):
/// v lies in [sqrt(1 - grad0^2), 1]; u/Theta(t, c_ref) lies between the
/// extremes over t >= 0 of Theta(t, phi1)/Theta(t, c_ref) and
/// Theta(t, phi2)/Theta(t, c_ref), which are monotone in t and so attained at
/// t = 0 or t = infinity; phi_t Theta^alpha lies in [phidot_lo, phidot_hi].
inline TheoryEnvelope build_envelope(const GraphState& u0, const FlowConfig& cfg)
{
    detail::check_alpha(cfg.alpha);
    check_layout(u0);

    TheoryEnvelope env;
    env.alpha = cfg.alpha;
    const std::vector<double> phi = log_profile(u0.u);
    const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
    env.phi1 = *lo;
    env.phi2 = *hi;
    env.c_ref = cfg.c_ref.value_or(0.5 * (env.phi1 + env.phi2));
    if (!(env.c_ref >= env.phi1 && env.c_ref <= env.phi2))
        throw ValidationError("c_ref", "c_ref must lie in [inf ln u0, sup ln u0]");

    const double h = u0.h();
    for (std::size_t i = 0; i < phi.size(); ++i)
        env.grad0 = std::max(env.grad0, std::abs(stencil::first(phi, i, h)));

    // phi_t at t = 0; raises NotSpacelike / DegenerateConvexity for inadmissible data.
    std::vector<double> phidot(phi.size());
    detail::phi_rhs(phi, detail::kernel_params(u0, cfg, FlowMode::physical), phidot);
    const double theta0_pow = std::exp(cfg.alpha * env.c_ref);
    env.phidot_lo = -1.0;
    env.phidot_hi = -1.0;
    for (double value : phidot) {
        env.phidot_lo = std::min(env.phidot_lo, value * theta0_pow);
        env.phidot_hi = std::max(env.phidot_hi, value * theta0_pow);
    }
    if (!(env.phidot_hi < 0.0))
        throw DegenerateConvexity("initial phi_t must be negative everywhere", -1);

    const bool collapses = cfg.alpha < 0.0;
    const double ratio_lo = std::min(std::exp(env.phi1 - env.c_ref), collapses ? 1.0 : std::exp(env.phi1 - env.c_ref));
    const double ratio_hi = std::max(std::exp(env.phi2 - env.c_ref), collapses ? 1.0 : std::exp(env.phi2 - env.c_ref));
    const double exponent = -(1.0 + cfg.alpha);
    const double pow_a = std::pow(ratio_lo, exponent);
    const double pow_b = std::pow(ratio_hi, exponent);
    const double v_lo = std::sqrt(1.0 - env.grad0 * env.grad0);
    env.k_theta_lo = v_lo * std::min(pow_a, pow_b) / -env.phidot_lo;
    env.k_theta_hi = std::max(pow_a, pow_b) / -env.phidot_hi;

    env.length0 = curve_length(u0, cfg.margins());
    std::tie(env.r_lo, env.r_hi) = radius_interval(u0, cfg.margins());
    return env;
}

} // namespace aimcf

#endif // AIMCF_THEORY_ORACLES_HPP
