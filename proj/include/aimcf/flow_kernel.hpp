// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_FLOW_KERNEL_HPP
#define AIMCF_FLOW_KERNEL_HPP

#include <aimcf/errors.hpp>
#include <aimcf/lorentz_geometry.hpp>
#include <aimcf/stencils.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace aimcf {

enum class FlowMode { physical, rescaled };

/// Run parameters. `t_end` bounds physical-mode runs, `s_end` rescaled ones.
/// `c_ref` is the reference constant of the radial barrier; unset means the
/// midpoint of [inf ln u0, sup ln u0]. `fixed_dt`, when set, replaces the
/// stability-limited step (used by temporal order studies).
struct FlowConfig {
    double alpha = -1.0;
    double c = 0.0;
    double d = 1.0;
    int n = 256;
    FlowMode mode = FlowMode::physical;
    std::optional<double> c_ref;
    double sigma_cfl = 0.4;
    double dt_max = 1e-2;
    double t_end = 1.0;
    double s_end = 20.0;
    double eps_space = 1e-6;
    double eps_conv = 1e-10;
    double convergence_tol = 1e-8;
    int snapshot_stride = 100;
    double tol_env = 1e-4;
    double tol_grad = 1e-8;
    std::optional<double> fixed_dt;

    GuardMargins margins() const noexcept { return {eps_space, eps_conv}; }
    double end_time() const noexcept { return mode == FlowMode::physical ? t_end : s_end; }
};

/// Range checks that do not need initial data. Throws ValidationError naming
/// the offending field.
inline void validate_config(const FlowConfig& cfg)
{
    if (!(cfg.alpha <= 0.0))
        throw ValidationError("alpha", "alpha must be <= 0");
    if (!(cfg.d > cfg.c))
        throw ValidationError("domain", "d must be greater than c");
    if (cfg.n < 8)
        throw ValidationError("grid_n", "grid_n must be >= 8");
    if (!(cfg.sigma_cfl > 0.0 && cfg.sigma_cfl < 1.0))
        throw ValidationError("sigma_cfl", "sigma_cfl must lie in (0, 1)");
    if (!(cfg.dt_max > 0.0))
        throw ValidationError("dt_max", "dt_max must be > 0");
    if (!(cfg.end_time() > 0.0))
        throw ValidationError(cfg.mode == FlowMode::physical ? "t_end" : "s_end", "end time must be > 0");
    if (!(cfg.eps_space > 0.0 && cfg.eps_space < 1.0))
        throw ValidationError("eps_space", "eps_space must lie in (0, 1)");
    if (!(cfg.eps_conv >= 0.0))
        throw ValidationError("eps_conv", "eps_conv must be >= 0");
    if (!(cfg.convergence_tol > 0.0))
        throw ValidationError("convergence", "convergence tolerance must be > 0");
    if (cfg.snapshot_stride < 1)
        throw ValidationError("snapshot_stride", "snapshot_stride must be >= 1");
    if (!(cfg.tol_env >= 0.0))
        throw ValidationError("env", "env tolerance must be >= 0");
    if (!(cfg.tol_grad >= 0.0))
        throw ValidationError("grad", "grad tolerance must be >= 0");
    if (cfg.fixed_dt && !(*cfg.fixed_dt > 0.0))
        throw ValidationError("fixed_dt", "fixed_dt must be > 0");
}

/// First and second xi-derivatives of u with ghost reflection at both ends.
inline std::pair<std::vector<double>, std::vector<double>> spatial_derivatives(const GraphState& state)
{
    if (state.n < 8 || state.u.size() != static_cast<std::size_t>(state.n) + 1)
        throw std::invalid_argument("spatial_derivatives: needs n >= 8 and n+1 samples");
    Derivatives der = neumann_derivatives(state.u, state.h());
    return {std::move(der.first), std::move(der.second)};
}

namespace detail {

struct KernelParams {
    double alpha = -1.0;
    double h = 0.0;
    FlowMode mode = FlowMode::physical;
    GuardMargins margins;
};

/// Evaluates d(phi)/dt = -e^{-alpha phi} v^4 / (v^2 + phi_xixi), v^2 = 1 - phi_xi^2,
/// plus one in rescaled mode, into `out`. Returns the largest
/// dQ/dphi_xixi = e^{-alpha phi} v^4 / (v^2 + phi_xixi)^2 over the nodes.
inline double phi_rhs(std::span<const double> phi, const KernelParams& params, std::span<double> out)
{
    const std::size_t count = phi.size();
    const double shift = params.mode == FlowMode::rescaled ? 1.0 : 0.0;
    double diffusivity = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double p = stencil::first(phi, i, params.h);
        const double q = stencil::second(phi, i, params.h);
        detail::check_spacelike(p, i, params.margins);
        const double v2 = 1.0 - p * p;
        const double denom = v2 + q;
        detail::check_convex(denom, i, params.margins);
        const double weight = params.alpha == 0.0 ? 1.0 : std::exp(-params.alpha * phi[i]);
        const double ratio = v2 * v2 / denom;
        out[i] = -weight * ratio + shift;
        diffusivity = std::max(diffusivity, weight * ratio / denom);
    }
    return diffusivity;
}

inline KernelParams kernel_params(const GraphState& state, const FlowConfig& cfg, FlowMode mode)
{
    return {cfg.alpha, state.h(), mode, cfg.margins()};
}

inline std::vector<double> evaluate(const GraphState& state, const FlowConfig& cfg, FlowMode mode, double* diffusivity)
{
    check_layout(state);
    const std::vector<double> phi = log_profile(state.u);
    std::vector<double> out(phi.size());
    const double dmax = phi_rhs(phi, kernel_params(state, cfg, mode), out);
    if (diffusivity)
        *diffusivity = dmax;
    return out;
}

} // namespace detail

/// d(phi)/dt per node for the physical flow, phi = ln u.
inline std::vector<double> rhs_physical(const GraphState& state, const FlowConfig& cfg)
{
    return detail::evaluate(state, cfg, FlowMode::physical, nullptr);
}

/// d(phi~)/ds per node for the rescaled flow: the physical form plus one.
inline std::vector<double> rhs_rescaled(const GraphState& state, const FlowConfig& cfg)
{
    return detail::evaluate(state, cfg, FlowMode::rescaled, nullptr);
}

/// Largest parabolicity coefficient dQ/dphi_xixi over the nodes.
inline double diffusion_coefficient(const GraphState& state, const FlowConfig& cfg)
{
    double dmax = 0.0;
    detail::evaluate(state, cfg, FlowMode::physical, &dmax);
    return dmax;
}

} // namespace aimcf

#endif // AIMCF_FLOW_KERNEL_HPP
