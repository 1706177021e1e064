// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_STENCILS_HPP
#define AIMCF_STENCILS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace aimcf {

/// Second-order central differences on a uniform grid of n+1 nodes with
/// ghost reflection f[-1] = f[1], f[n+1] = f[n-1] at both ends. The reflected
/// first derivative is exactly zero at the boundary nodes.
namespace stencil {

inline double first(std::span<const double> f, std::size_t i, double h) noexcept
{
    const std::size_t last = f.size() - 1;
    if (i == 0 || i == last)
        return 0.0;
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

// (left + right) - 2 centre keeps the stencil exactly mirror-symmetric.
inline double second(std::span<const double> f, std::size_t i, double h) noexcept
{
    const std::size_t last = f.size() - 1;
    const double left = i == 0 ? f[1] : f[i - 1];
    const double right = i == last ? f[last - 1] : f[i + 1];
    return ((left + right) - 2.0 * f[i]) / (h * h);
}

} // namespace stencil

struct Derivatives {
    std::vector<double> first;
    std::vector<double> second;
};

inline Derivatives neumann_derivatives(std::span<const double> f, double h)
{
    Derivatives out{std::vector<double>(f.size()), std::vector<double>(f.size())};
    for (std::size_t i = 0; i < f.size(); ++i) {
        out.first[i] = stencil::first(f, i, h);
        out.second[i] = stencil::second(f, i, h);
    }
    return out;
}

} // namespace aimcf

#endif // AIMCF_STENCILS_HPP
