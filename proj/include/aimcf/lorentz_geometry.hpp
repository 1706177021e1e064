// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_LORENTZ_GEOMETRY_HPP
#define AIMCF_LORENTZ_GEOMETRY_HPP

#include <aimcf/errors.hpp>
#include <aimcf/stencils.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/// Geometry of spacelike radial graphs X = u(xi) (sinh xi, cosh xi) over an
/// arc [c, d] of the unit hyperbola in the Lorentz-Minkowski plane with
/// metric dx1^2 - dx2^2.
namespace aimcf {

struct Point2L {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline double minkowski_inner(const Point2L& a, const Point2L& b) noexcept
{
    return a.x1 * b.x1 - a.x2 * b.x2;
}

/// Unit-speed parametrization of the upper branch of x1^2 - x2^2 = -1.
inline Point2L hyperbola_point(double xi) noexcept
{
    return {std::sinh(xi), std::cosh(xi)};
}

/// Grid sample of the radial graph function over xi in [c, d]: nodes
/// xi_i = c + i h, h = (d - c) / n, i = 0..n. `t` is physical time, `s`
/// rescaled time.
struct GraphState {
    double c = 0.0;
    double d = 1.0;
    int n = 0;
    std::vector<double> u;
    double t = 0.0;
    double s = 0.0;

    double h() const noexcept { return (d - c) / n; }
    double xi(int i) const noexcept { return c + i * h(); }
    std::size_t nodes() const noexcept { return u.size(); }
};

/// Samples `profile` on the uniform grid.
inline GraphState sample_state(double c, double d, int n, const std::function<double(double)>& profile)
{
    if (!(d > c))
        throw std::invalid_argument("sample_state: domain requires d > c");
    if (n < 2)
        throw std::invalid_argument("sample_state: need at least 2 intervals");
    GraphState state{c, d, n, std::vector<double>(static_cast<std::size_t>(n) + 1)};
    for (int i = 0; i <= n; ++i)
        state.u[static_cast<std::size_t>(i)] = profile(state.xi(i));
    return state;
}

inline GraphState constant_state(double c, double d, int n, double r)
{
    return sample_state(c, d, n, [r](double) { return r; });
}

/// Layout checks shared by every operation on a state: d > c, n >= 2, n+1
/// positive finite samples.
inline void check_layout(const GraphState& state)
{
    if (!(state.d > state.c))
        throw std::invalid_argument("GraphState: d must exceed c");
    if (state.n < 2 || state.u.size() != static_cast<std::size_t>(state.n) + 1)
        throw std::invalid_argument("GraphState: u must hold n+1 samples with n >= 2");
    for (double value : state.u)
        if (!(value > 0.0) || !std::isfinite(value))
            throw std::invalid_argument("GraphState: u must be positive and finite");
}

/// Relative guard margins for the admissibility checks.
struct GuardMargins {
    double eps_space = 1e-6;
    double eps_conv = 1e-10;
};

/// Per-node derived geometry.
struct GeometryFields {
    std::vector<double> u_xi;
    std::vector<double> u_xixi;
    std::vector<double> phi;
    std::vector<double> v;
    std::vector<double> g_metric;
    std::vector<double> k;
    std::vector<double> w_support;
    std::vector<double> speed;
};

/// Tilt factor sqrt(1 - u^-2 u_xi^2).
inline double tilt(double u, double u_xi) noexcept
{
    const double ratio = u_xi / u;
    return std::sqrt(1.0 - ratio * ratio);
}

inline double curvature_closed_form(double u, double u_xi, double u_xixi) noexcept
{
    const double v = tilt(u, u_xi);
    return (u_xixi * u + u * u - 2.0 * u_xi * u_xi) / (v * v * v * u * u * u);
}

inline std::vector<double> log_profile(std::span<const double> u)
{
    std::vector<double> phi(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        phi[i] = std::log(u[i]);
    return phi;
}

namespace detail {

inline void check_spacelike(double phi_xi, std::size_t i, const GuardMargins& margins)
{
    if (!(std::abs(phi_xi) < 1.0 - margins.eps_space))
        throw NotSpacelike("not spacelike at node " + std::to_string(i) + ": |u_xi|/u = "
                               + std::to_string(std::abs(phi_xi)),
                           static_cast<int>(i));
}

// v^2 + phi_xixi = (u u_xixi + u^2 - 2 u_xi^2) / u^2.
inline void check_convex(double convexity, std::size_t i, const GuardMargins& margins)
{
    if (!(convexity > margins.eps_conv))
        throw DegenerateConvexity("degenerate convexity at node " + std::to_string(i)
                                      + ": (u u_xixi + u^2 - 2 u_xi^2)/u^2 = " + std::to_string(convexity),
                                  static_cast<int>(i));
}

} // namespace detail

/// Node i maps to u_i * hyperbola_point(xi_i).
inline std::vector<Point2L> embed_graph(const GraphState& state)
{
    check_layout(state);
    std::vector<Point2L> points(state.nodes());
    for (int i = 0; i <= state.n; ++i) {
        const Point2L x = hyperbola_point(state.xi(i));
        const double r = state.u[static_cast<std::size_t>(i)];
        points[static_cast<std::size_t>(i)] = {r * x.x1, r * x.x2};
    }
    return points;
}

/// Derivatives of u are taken through phi = ln u: u_xi = u phi_xi and
/// u_xixi = u (phi_xixi + phi_xi^2), with the reflected stencils applied to
/// phi. The curvature, the flow speed and the support function then agree
/// with the phi-form right-hand side to round-off.
inline GeometryFields geometry_fields(const GraphState& state, double alpha, const GuardMargins& margins = {})
{
    check_layout(state);
    const std::size_t count = state.nodes();
    const double h = state.h();

    GeometryFields out;
    out.phi = log_profile(state.u);
    out.u_xi.resize(count);
    out.u_xixi.resize(count);
    out.v.resize(count);
    out.g_metric.resize(count);
    out.k.resize(count);
    out.w_support.resize(count);
    out.speed.resize(count);

    for (std::size_t i = 0; i < count; ++i) {
        const double u = state.u[i];
        const double p = stencil::first(out.phi, i, h);
        const double q = stencil::second(out.phi, i, h);
        detail::check_spacelike(p, i, margins);
        const double v2 = 1.0 - p * p;
        detail::check_convex(v2 + q, i, margins);

        out.u_xi[i] = u * p;
        out.u_xixi[i] = u * (q + p * p);
        out.v[i] = std::sqrt(v2);
        out.g_metric[i] = u * u - out.u_xi[i] * out.u_xi[i];
        out.k[i] = curvature_closed_form(u, out.u_xi[i], out.u_xixi[i]);
        out.w_support[i] = u / out.v[i];
        out.speed[i] = std::pow(u, -alpha) / out.k[i];
    }
    return out;
}

/// Curvature from the Frenet construction, independent of the closed formula.
/// Unit tangents are taken along the chords of the embedded polyline (second
/// order at chord midpoints) and differenced over the Minkowski arc length
/// between neighbouring chord midpoints. Returns the n-1 interior values,
/// entry j belonging to node j+1.
inline std::vector<double> curvature_frenet_oracle(const GraphState& state)
{
    check_layout(state);
    if (state.n < 32)
        throw std::invalid_argument("curvature_frenet_oracle: needs n >= 32");

    const std::size_t segments = state.nodes() - 1;
    std::vector<Point2L> tangent(segments);
    std::vector<double> chord(segments);
    for (std::size_t j = 0; j < segments; ++j) {
        // u1 X1 - u0 X0 = (u1 - u0) X1 + u0 (X1 - X0), with X1 - X0 from the
        // sinh/cosh difference identities to avoid cancellation.
        const double a = state.xi(static_cast<int>(j));
        const double b = state.xi(static_cast<int>(j) + 1);
        const double half = 2.0 * std::sinh(0.5 * (b - a));
        const double mid = 0.5 * (a + b);
        const double u0 = state.u[j];
        const double du = state.u[j + 1] - u0;
        const Point2L x1 = hyperbola_point(b);
        const Point2L delta{du * x1.x1 + u0 * half * std::cosh(mid), du * x1.x2 + u0 * half * std::sinh(mid)};
        const double norm2 = minkowski_inner(delta, delta);
        if (!(norm2 > 0.0))
            throw NotSpacelike("curvature_frenet_oracle: chord " + std::to_string(j) + " is not spacelike",
                               static_cast<int>(j));
        chord[j] = std::sqrt(norm2);
        tangent[j] = {delta.x1 / chord[j], delta.x2 / chord[j]};
    }

    std::vector<double> k(segments - 1);
    for (std::size_t j = 0; j + 1 < segments; ++j) {
        const double ds = 0.5 * (chord[j] + chord[j + 1]);
        const Point2L dT{(tangent[j + 1].x1 - tangent[j].x1) / ds, (tangent[j + 1].x2 - tangent[j].x2) / ds};
        k[j] = std::sqrt(std::abs(minkowski_inner(dT, dT)));
    }
    return k;
}

/// Composite trapezoid value of the integral of sqrt(u^2 - u_xi^2) over [c, d].
inline double curve_length(const GraphState& state, const GuardMargins& margins = {})
{
    check_layout(state);
    const std::vector<double> phi = log_profile(state.u);
    const double h = state.h();
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double p = stencil::first(phi, i, h);
        detail::check_spacelike(p, i, margins);
        const double u_xi = state.u[i] * p;
        const double density = std::sqrt(state.u[i] * state.u[i] - u_xi * u_xi);
        sum += (i == 0 || i + 1 == phi.size()) ? 0.5 * density : density;
    }
    return sum * h;
}

} // namespace aimcf

#endif // AIMCF_LORENTZ_GEOMETRY_HPP
