// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#include <aimcf/io.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace aimcf;

namespace {

std::filesystem::path scratch(const std::string& name)
{
    const char* root = std::getenv("AIMCF_TEST_TMP");
    std::filesystem::path dir = root ? root : std::filesystem::temp_directory_path() / "aimcf_tests";
    dir /= "io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string validation_key(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const ValidationError& e) {
        return e.key();
    }
    return "";
}

const char* minimal = R"({"alpha": -1, "domain": {"c": 0, "d": 1}, "grid_n": 256, "mode": "rescaled",
                          "initial": {"kind": "constant", "r": 2}})";

} // namespace

TEST(Config, MinimalFileGetsDefaults)
{
    const RunConfig run = parse_config_text(minimal);
    EXPECT_EQ(run.flow.alpha, -1.0);
    EXPECT_EQ(run.flow.n, 256);
    EXPECT_EQ(run.flow.mode, FlowMode::rescaled);
    EXPECT_EQ(run.initial.kind, InitialKind::constant);
    EXPECT_EQ(run.initial.r, 2.0);
    EXPECT_EQ(run.flow.sigma_cfl, FlowConfig{}.sigma_cfl);
    EXPECT_EQ(run.flow.snapshot_stride, FlowConfig{}.snapshot_stride);
    EXPECT_TRUE(run.c_ref_auto);
    ASSERT_TRUE(run.flow.c_ref.has_value());
    EXPECT_NEAR(*run.flow.c_ref, std::log(2.0), 1e-15);
    EXPECT_EQ(run.output_dir, "out");
}

TEST(Config, FullFile)
{
    const RunConfig run = parse_config_text(R"({
      "alpha": -0.5, "domain": {"c": -0.5, "d": 0.5}, "grid_n": 64, "mode": "physical", "c_ref": "auto",
      "time": {"t_end": 2, "sigma_cfl": 0.3, "dt_max": 0.001},
      "initial": {"kind": "cosine", "r": 2, "amplitude": 0.02, "mode_m": 2, "seed": 4},
      "tolerances": {"convergence": 1e-9, "env": 1e-5, "grad": 1e-9},
      "output": {"dir": "runs/a", "snapshot_stride": 5},
      "study": {"alphas": [-1, 0], "refinements": 4, "order": "temporal"}})");
    EXPECT_EQ(run.flow.c, -0.5);
    EXPECT_EQ(run.flow.t_end, 2.0);
    EXPECT_EQ(run.flow.sigma_cfl, 0.3);
    EXPECT_EQ(run.flow.dt_max, 0.001);
    EXPECT_EQ(run.initial.mode_m, 2);
    EXPECT_EQ(run.initial.seed, 4u);
    EXPECT_EQ(run.flow.convergence_tol, 1e-9);
    EXPECT_EQ(run.flow.tol_env, 1e-5);
    EXPECT_EQ(run.output_dir, "runs/a");
    EXPECT_EQ(run.flow.snapshot_stride, 5);
    EXPECT_EQ(run.study.alphas, (std::vector<double>{-1.0, 0.0}));
    EXPECT_EQ(run.study.refinements, 4);
    EXPECT_EQ(run.study.kind, StudyKind::order_temporal);
    EXPECT_EQ(run.study.base_cfg.n, 64);
}

TEST(Config, ValidationNamesKey)
{
    EXPECT_EQ(validation_key(R"({"alpha": 0.5, "domain": {"c": 0, "d": 1}, "grid_n": 64, "mode": "physical",
                                 "initial": {"kind": "constant", "r": 2}})"),
              "alpha");
    EXPECT_EQ(validation_key(R"({"alpha": -1, "domain": {"c": 0, "d": 1}, "grid_n": 64, "mode": "physical",
                                 "initial": {"kind": "constant", "r": 2}, "colour": 1})"),
              "colour");
    EXPECT_EQ(validation_key(R"({"alpha": -1, "domain": {"c": 0, "d": 1, "e": 2}, "grid_n": 64,
                                 "initial": {"kind": "constant", "r": 2}})"),
              "domain.e");
    EXPECT_EQ(validation_key(R"({"alpha": -1, "domain": {"c": 1, "d": 0}, "grid_n": 64,
                                 "initial": {"kind": "constant", "r": 2}})"),
              "domain");
    EXPECT_EQ(validation_key(R"({"alpha": -1, "domain": {"c": 0, "d": 1}, "grid_n": 64.5,
                                 "initial": {"kind": "constant", "r": 2}})"),
              "grid_n");
    EXPECT_EQ(validation_key(R"({"alpha": -1, "domain": {"c": 0, "d": 1}, "grid_n": 64, "mode": "fast",
                                 "initial": {"kind": "constant", "r": 2}})"),
              "mode");
    EXPECT_EQ(validation_key(R"({"alpha": -1, "domain": {"c": 0, "d": 1}, "grid_n": 64,
                                 "initial": {"kind": "cosine", "r": 2}, "c_ref": 3})"),
              "c_ref");
    EXPECT_EQ(validation_key(R"({"alpha": -1, "domain": {"c": 0, "d": 1}, "grid_n": 64})"), "initial");
}

TEST(Config, InadmissibleInitialDataCitesGuard)
{
    try {
        parse_config_text(R"({"alpha": -1, "domain": {"c": 0, "d": 1}, "grid_n": 128, "mode": "physical",
                              "initial": {"kind": "cosine", "r": 2, "amplitude": 0.8, "mode_m": 1}})");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.key(), "initial");
        EXPECT_NE(std::string(e.what()).find("convexity guard"), std::string::npos);
    }
}

TEST(Config, SyntaxErrorCarriesPosition)
{
    try {
        parse_config_text("{\n  \"alpha\": -1,\n  \"grid_n\": ,\n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
        EXPECT_EQ(e.column(), 13);
    }
}

TEST(Config, OverridesApplyBeforeValidation)
{
    ConfigOverrides o;
    o.alpha = -2.0;
    o.grid_n = 32;
    o.mode = FlowMode::physical;
    const RunConfig run = parse_config_text(minimal, o);
    EXPECT_EQ(run.flow.alpha, -2.0);
    EXPECT_EQ(run.flow.n, 32);
    EXPECT_EQ(run.flow.mode, FlowMode::physical);
    o.alpha = 1.0;
    EXPECT_THROW(parse_config_text(minimal, o), ValidationError);
}

TEST(Config, MissingFile)
{
    EXPECT_THROW(parse_config("/nonexistent/aimcf.json"), IoError);
}

TEST(SeriesCsv, EmptySeriesIsHeaderOnly)
{
    const auto path = scratch("empty.csv");
    write_series_csv(std::vector<DiagnosticsRecord>{}, path.string());
    EXPECT_EQ(slurp(path),
              "step,t,s,u_min,u_max,grad_phi_max,k_min,k_max,k_theta_min,k_theta_max,length,length_ode_residual,"
              "osc_rescaled,env_violation,phidot_violation,psi_identity_gap,all_ok\n");
    EXPECT_TRUE(read_series_csv(path.string()).empty());
}

TEST(SeriesCsv, RadialRunEnvelopeColumnIsZero)
{
    FlowConfig cfg;
    cfg.n = 32;
    cfg.snapshot_stride = 5;
    const RunResult run = run_flow(constant_state(0.0, 1.0, 32, 2.0), cfg);
    const auto path = scratch("radial.csv");
    write_series_csv(run, path.string());
    const std::vector<DiagnosticsRecord> back = read_series_csv(path.string());
    ASSERT_EQ(back.size(), run.series.size());
    for (const DiagnosticsRecord& rec : back)
        EXPECT_LE(rec.env_violation, 1e-13);
}

TEST(SeriesCsv, RoundTripIsBitExact)
{
    FlowConfig cfg;
    cfg.n = 48;
    cfg.t_end = 0.3;
    cfg.snapshot_stride = 3;
    const GraphState u0 = make_initial({InitialKind::cosine, 2.0, 0.05, 1, 0}, 0.0, 1.0, 48);
    RunResult run = run_flow(u0, cfg);
    run.series.front().length_ode_residual = std::numeric_limits<double>::quiet_NaN();
    run.series.back().u_min = 1e-300;
    run.series.back().u_max = 0.1 + 0.2;
    const auto path = scratch("roundtrip.csv");
    write_series_csv(run, path.string());
    const std::vector<DiagnosticsRecord> back = read_series_csv(path.string());
    ASSERT_EQ(back.size(), run.series.size());
    for (std::size_t j = 0; j < back.size(); ++j)
        EXPECT_TRUE(back[j] == run.series[j]) << "row " << j;
}

TEST(SeriesCsv, UnwritablePath)
{
    EXPECT_THROW(write_series_csv(std::vector<DiagnosticsRecord>{}, "/nonexistent/dir/x.csv"), IoError);
}

TEST(Snapshot, UnitHyperbola)
{
    const auto path = scratch("snap.csv");
    write_snapshot(constant_state(0.0, 1.0, 4, 1.0), path.string());
    std::istringstream lines(slurp(path));
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "xi,u,x1,x2");
    int rows = 0;
    while (std::getline(lines, line)) {
        double xi, u, x1, x2;
        char comma;
        std::istringstream fields(line);
        fields >> xi >> comma >> u >> comma >> x1 >> comma >> x2;
        EXPECT_NEAR(x1 * x1 - x2 * x2, -1.0, 1e-12);
        ++rows;
    }
    EXPECT_EQ(rows, 5);
}

TEST(Snapshot, ConvergedRescaledStateIsFlat)
{
    FlowConfig cfg;
    cfg.n = 32;
    cfg.mode = FlowMode::rescaled;
    cfg.s_end = 40.0;
    const RunResult run = run_flow(make_initial({InitialKind::cosine, 2.0, 0.05, 1, 0}, 0.0, 1.0, 32), cfg);
    ASSERT_EQ(run.termination, Termination::converged);
    const auto path = scratch("flat.csv");
    write_snapshot(run.final_state, path.string());
    std::istringstream lines(slurp(path));
    std::string line;
    std::getline(lines, line);
    double lo = 1e300, hi = -1e300;
    while (std::getline(lines, line)) {
        const double u = std::stod(line.substr(line.find(',') + 1));
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    EXPECT_LE(hi - lo, 1e-6);
}

TEST(Output, IdenticalRunsGiveIdenticalBytes)
{
    FlowConfig cfg;
    cfg.n = 32;
    cfg.t_end = 0.2;
    cfg.snapshot_stride = 4;
    const GraphState u0 = make_initial({InitialKind::random_cosine_mix, 2.0, 0.05, 1, 9}, 0.0, 1.0, 32);
    write_series_csv(run_flow(u0, cfg), scratch("a.csv").string());
    write_series_csv(run_flow(u0, cfg), scratch("b.csv").string());
    EXPECT_EQ(slurp(scratch("a.csv")), slurp(scratch("b.csv")));
}
