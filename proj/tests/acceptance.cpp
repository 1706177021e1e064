// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

// End-to-end acceptance checks. One PASS/FAIL line per criterion; exit status
// is nonzero when any criterion fails.

#include <aimcf/aimcf.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace aimcf;

namespace {

const std::vector<double> alpha_suite{-2.0, -1.0, -0.5, 0.0};

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& check)
{
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%2d] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass)
        ++failures;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

InitialFamily cosine_family()
{
    return {InitialKind::cosine, 2.0, 0.05, 1, 0};
}

// Runs shared by several criteria.
struct SuiteRun {
    std::string label;
    FlowConfig cfg;
    RunResult result;
};

std::vector<SuiteRun> build_suite()
{
    std::vector<SuiteRun> suite;
    for (double alpha : alpha_suite) {
        for (FlowMode mode : {FlowMode::physical, FlowMode::rescaled}) {
            for (InitialKind kind : {InitialKind::cosine, InitialKind::random_cosine_mix}) {
                FlowConfig cfg;
                cfg.alpha = alpha;
                cfg.n = 64;
                cfg.mode = mode;
                cfg.t_end = 1.0;
                cfg.s_end = 20.0;
                cfg.snapshot_stride = 1;
                InitialFamily fam = cosine_family();
                fam.kind = kind;
                fam.seed = 1;
                const GraphState u0 = make_initial(fam, cfg.c, cfg.d, cfg.n, cfg);
                std::string label = fmt("alpha=%g", alpha) + (mode == FlowMode::physical ? " physical" : " rescaled")
                    + (kind == InitialKind::cosine ? " cosine" : " mix");
                suite.push_back({label, cfg, run_flow(u0, cfg)});
            }
        }
    }
    return suite;
}

bool completed(const RunResult& run)
{
    return run.termination == Termination::reached_t_end || run.termination == Termination::converged;
}

double max_residual(const RunResult& run, int* nan_count)
{
    double out = 0.0;
    for (const DiagnosticsRecord& rec : run.series) {
        if (std::isnan(rec.length_ode_residual))
            ++*nan_count;
        else
            out = std::max(out, rec.length_ode_residual);
    }
    return out;
}

double max_env(const RunResult& run)
{
    double out = 0.0;
    for (const DiagnosticsRecord& rec : run.series)
        out = std::max(out, rec.env_violation);
    return out;
}

RunResult cosine_physical(int n, double t_end)
{
    FlowConfig cfg;
    cfg.alpha = -1.0;
    cfg.n = n;
    cfg.t_end = t_end;
    cfg.snapshot_stride = 50;
    return run_flow(make_initial(cosine_family(), cfg.c, cfg.d, n, cfg), cfg);
}

} // namespace

int main()
{
    std::vector<RunResult> radial_runs;

    report(1, "radial exactness", [&] {
        double worst = 0.0;
        bool ok = true;
        for (double alpha : alpha_suite)
            for (double r : {0.5, 2.0}) {
                FlowConfig cfg;
                cfg.alpha = alpha;
                cfg.n = 64;
                cfg.dt_max = 1e-4;
                cfg.t_end = 1.0;
                cfg.snapshot_stride = 1;
                RunResult run = run_flow(constant_state(0.0, 1.0, 64, r), cfg);
                ok = ok && run.termination == Termination::reached_t_end && run.series.back().t == 1.0;
                for (const DiagnosticsRecord& rec : run.series) {
                    const double exact = theta(rec.t, std::log(r), alpha);
                    worst = std::max({worst, std::abs(rec.u_min - exact), std::abs(rec.u_max - exact)});
                }
                radial_runs.push_back(std::move(run));
            }
        return Verdict{ok && worst <= 1e-8, fmt("max |u - Theta| = %.3e over 8 runs (tol 1e-8)", worst)};
    });

    report(2, "temporal order", [] {
        StudySpec spec;
        spec.kind = StudyKind::order_temporal;
        spec.base_cfg.alpha = -1.0;
        spec.base_cfg.n = 16;
        spec.base_cfg.t_end = 1.0;
        spec.base_cfg.fixed_dt = 0.1;
        spec.refinements = 4;
        spec.initial = {InitialKind::constant, 2.0, 0.0, 1, 0};
        const OrderTable table = convergence_order_study(spec).at(0);
        bool ok = true;
        std::string detail = "orders";
        for (std::size_t j = 1; j < table.rows.size(); ++j) {
            const auto& row = table.rows[j];
            ok = ok && row.order && std::abs(*row.order - 4.0) <= 0.4;
            detail += row.order ? fmt(" %.3f", *row.order) : std::string(" n/a");
        }
        detail += fmt(" for dt = 0.1 .. %.4g (target 4.0 +- 0.4)", table.rows.back().step);
        return Verdict{ok, detail};
    });

    report(3, "curvature oracle", [] {
        StudySpec spec;
        spec.kind = StudyKind::order_spatial;
        spec.base_cfg.n = 64;
        spec.refinements = 3;
        spec.initial = cosine_family();
        const OrderTable table = convergence_order_study(spec).at(0);
        const double o1 = table.rows[1].order.value_or(0.0);
        const double o2 = table.rows[2].order.value_or(0.0);
        const double gap = table.rows[2].error;
        const bool ok = std::abs(o1 - 2.0) <= 0.3 && std::abs(o2 - 2.0) <= 0.3 && gap <= 1e-3;
        return Verdict{ok, fmt("orders %.3f %.3f, gap at n=256 %.3e", o1, o2, gap)};
    });

    RunResult coarse, fine;
    report(4, "C0 envelope", [&] {
        coarse = cosine_physical(128, 5.0);
        fine = cosine_physical(256, 5.0);
        if (!completed(coarse) || !completed(fine))
            return Verdict{false, "run did not reach t = 5: " + fine.message + coarse.message};
        const double vc = max_env(coarse);
        const double vf = max_env(fine);
        const bool ok = vf <= 1e-4 && 3.0 * vf <= vc;
        return Verdict{ok, fmt("max violation n=128 %.3e, n=256 %.3e (shrink test 3 v256 <= v128)", vc, vf)};
    });

    const std::vector<SuiteRun> suite = build_suite();
    auto suite_completed = [&] {
        std::string bad;
        for (const SuiteRun& s : suite)
            if (!completed(s.result))
                bad += " " + s.label + " (" + to_string(s.result.termination) + ")";
        return bad;
    };

    report(5, "gradient maximum principle", [&] {
        double worst_increase = 0.0;
        double largest = 0.0;
        for (const SuiteRun& s : suite) {
            const auto& series = s.result.series;
            for (std::size_t j = 1; j < series.size(); ++j)
                worst_increase = std::max(worst_increase, series[j].grad_phi_max - series[j - 1].grad_phi_max);
            for (const DiagnosticsRecord& rec : series)
                largest = std::max(largest, rec.grad_phi_max);
        }
        const std::string bad = suite_completed();
        const bool ok = bad.empty() && worst_increase <= 1e-8 && largest < 1.0;
        return Verdict{ok, fmt("largest step increase %.3e, max |D phi| %.6f", worst_increase, largest) + bad};
    });

    report(6, "phi_t Theta^alpha bounds", [&] {
        double suite_worst = 0.0;
        for (const SuiteRun& s : suite)
            for (const DiagnosticsRecord& rec : s.result.series)
                suite_worst = std::max(suite_worst, rec.phidot_violation);
        double radial_worst = 0.0;
        for (const RunResult& run : radial_runs)
            for (const DiagnosticsRecord& rec : run.series)
                radial_worst = std::max(radial_worst, rec.phidot_violation);
        const bool ok = suite_worst <= 1e-4 && radial_worst <= 1e-8 && !radial_runs.empty();
        return Verdict{ok, fmt("suite excursion %.3e (tol 1e-4), radial |value + 1| %.3e (tol 1e-8)", suite_worst,
                               radial_worst)};
    });

    report(7, "k Theta pinching", [&] {
        double worst = 0.0;
        double lo = 1e300, hi = -1e300;
        for (const SuiteRun& s : suite) {
            const TheoryEnvelope& env = s.result.envelope;
            for (const DiagnosticsRecord& rec : s.result.series) {
                worst = std::max({worst, env.k_theta_lo - rec.k_theta_min, rec.k_theta_max - env.k_theta_hi});
                lo = std::min(lo, rec.k_theta_min);
                hi = std::max(hi, rec.k_theta_max);
            }
        }
        return Verdict{worst <= 1e-4, fmt("largest excursion beyond [c3, c4] %.3e; observed k Theta in [%.5f, %.5f]",
                                          std::max(worst, 0.0), lo, hi)};
    });

    report(8, "length ODE", [&] {
        int nans = 0;
        const double r_fine = max_residual(fine, &nans);
        const double r_coarse = max_residual(coarse, &nans);
        double radial = 0.0;
        for (const RunResult& run : radial_runs)
            radial = std::max(radial, max_residual(run, &nans));
        const double ratio = r_coarse / r_fine;
        const bool ok = nans == 0 && r_fine <= 1e-3 && radial <= 1e-6 && ratio >= 3.2 && ratio <= 4.8;
        return Verdict{ok, fmt("cosine n=256 %.3e, radial %.3e, n-doubling ratio %.3f", r_fine, radial, ratio)
                               + (nans ? " (missing residuals)" : "")};
    });

    report(9, "rescaled fixed point", [] {
        double worst = 0.0;
        for (double alpha : alpha_suite) {
            FlowConfig cfg;
            cfg.alpha = alpha;
            cfg.mode = FlowMode::rescaled;
            GraphState s = constant_state(0.0, 1.0, 64, 1.0);
            const double dt = stable_dt(s, cfg);
            for (int k = 0; k < 10000; ++k)
                s = rk4_step(s, cfg, dt);
            for (double u : s.u)
                worst = std::max(worst, std::abs(u - 1.0));
        }
        return Verdict{worst <= 1e-12, fmt("max |u~ - 1| after 1e4 steps = %.3e", worst)};
    });

    report(10, "rescaled convergence and radius", [] {
        bool ok = true;
        std::string detail;
        for (double alpha : alpha_suite) {
            FlowConfig cfg;
            cfg.alpha = alpha;
            cfg.n = 128;
            cfg.mode = FlowMode::rescaled;
            cfg.s_end = 40.0;
            cfg.snapshot_stride = 10;
            const GraphState u0 = make_initial(cosine_family(), cfg.c, cfg.d, cfg.n, cfg);
            const RunResult run = run_flow(u0, cfg);
            double s_flat = -1.0;
            for (const DiagnosticsRecord& rec : run.series)
                if (rec.osc_rescaled < 1e-6) {
                    s_flat = rec.s;
                    break;
                }
            const auto [lo, hi] = radius_interval(u0);
            const bool contained = run.r_infinity && *run.r_infinity >= lo - 1e-3 && *run.r_infinity <= hi + 1e-3;
            ok = ok && s_flat >= 0.0 && s_flat <= 20.0 && contained;
            detail += fmt(" a=%g: osc<1e-6 at s=%.2f r=%.6f", alpha, s_flat, run.r_infinity.value_or(-1.0));

            FlowConfig flat = cfg;
            flat.n = 32;
            const RunResult constant = run_flow(constant_state(0.0, 1.0, 32, 3.0), flat);
            ok = ok && constant.r_infinity && std::abs(*constant.r_infinity - 1.0) <= 1e-6;
        }
        return Verdict{ok, "interval [L0/sup u0, L0/inf u0] +- 1e-3;" + detail};
    });

    report(11, "rescaled length bounds", [&] {
        double worst = 0.0;
        int checked = 0;
        for (const SuiteRun& s : suite) {
            if (s.cfg.mode != FlowMode::rescaled)
                continue;
            const TheoryEnvelope& env = s.result.envelope;
            for (const DiagnosticsRecord& rec : s.result.series) {
                worst = std::max({worst, env.rescaled_length_lo() - rec.length, rec.length - env.rescaled_length_hi()});
                ++checked;
            }
        }
        return Verdict{checked > 0 && worst <= 1e-4,
                       fmt("largest excursion %.3e over %g records (tol 1e-4)", std::max(worst, 0.0), checked)};
    });

    report(12, "scaling covariance", [] {
        FlowConfig base;
        base.n = 64;
        const double constant = scaling_covariance_check(1.0, 2.0, -1.0, 0.25, base);
        const double cosine = scaling_covariance_check(cosine_family(), 2.0, -1.0, 0.25, base);
        return Verdict{constant <= 1e-6 && cosine <= 1e-5,
                       fmt("constant %.3e (tol 1e-6), cosine %.3e (tol 1e-5)", constant, cosine)};
    });

    report(13, "Psi identity", [&] {
        double worst = 0.0;
        for (const SuiteRun& s : suite)
            for (const DiagnosticsRecord& rec : s.result.series)
                worst = std::max(worst, rec.psi_identity_gap);
        for (const RunResult* run : {&coarse, &fine})
            for (const DiagnosticsRecord& rec : run->series)
                worst = std::max(worst, rec.psi_identity_gap);
        return Verdict{worst <= 1e-12, fmt("max gap %.3e", worst)};
    });

    report(14, "alpha -> 0 continuity", [] {
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i)
            for (int j = 0; j <= 40; ++j) {
                const double t = 0.05 * i;
                const double c = -1.0 + 0.05 * j;
                worst = std::max(worst, std::abs(theta(t, c, -1e-6) - std::exp(c - t)));
            }
        return Verdict{worst <= 1e-4, fmt("max deviation %.3e on [0,5]x[-1,1]", worst)};
    });

    std::printf("%d of 14 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
