// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_AIMCF_HPP
#define AIMCF_AIMCF_HPP

#include <aimcf/errors.hpp>
#include <aimcf/stencils.hpp>
#include <aimcf/lorentz_geometry.hpp>
#include <aimcf/flow_kernel.hpp>
#include <aimcf/theory_oracles.hpp>
#include <aimcf/diagnostics.hpp>
#include <aimcf/time_integrator.hpp>
#include <aimcf/experiment_harness.hpp>
#include <aimcf/io.hpp>

#endif // AIMCF_AIMCF_HPP
