// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/driver.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vasotherm;

namespace {

RunConfig small_config()
{
    RunConfig cfg;
    cfg.resolution = {4, 2, 1, 2};
    cfg.dt = 0.05;
    cfg.model.t_final = 0.2;
    cfg.model.window = 0.1;
    cfg.ode_nodes = 17;
    cfg.write_vtk = false;
    return cfg;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("staggered run keeps its invariants")
{
    auto cfg = small_config();
    cfg.n_subiter = 3;
    Driver d(cfg);
    d.initialize();
    d.run_staggered();
    CHECK(d.times().size() == 5);
    for (const auto& rec : d.records()) {
        CHECK(rec.j_min > 0.0);
        CHECK(rec.stokes_residual <= 1e-10);
        CHECK(rec.transport_residual <= 1e-10);
        CHECK(std::isfinite(rec.energy));
    }
    // Sub-iterations tighten the update on the default scenario.
    for (const auto& rec : d.records()) {
        if (rec.subiter_residuals.size() >= 2)
            CHECK(rec.subiter_residuals[1] <= rec.subiter_residuals[0] + 1e-14);
    }
}

TEST_CASE("constant radius map reduces to the fixed-domain solver")
{
    auto cfg_a = small_config();
    cfg_a.model.radius_map.mode = RadiusMapSpec::Mode::Constant;
    cfg_a.model.radius_map.const_value = cfg_a.model.r_ref;
    Driver a(cfg_a);
    a.initialize();
    a.run_staggered();

    auto cfg_b = small_config();
    cfg_b.fixed_domain = true;
    Driver b(cfg_b);
    b.initialize();
    b.run_staggered();

    REQUIRE(a.times().size() == b.times().size());
    double worst = 0.0;
    for (std::size_t n = 0; n < a.times().size(); ++n) {
        worst = std::max(worst, (a.theta()[n] - b.theta()[n]).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, (a.velocity()[n] - b.velocity()[n]).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, (a.pressure()[n] - b.pressure()[n]).lpNorm<Eigen::Infinity>());
    }
    MESSAGE("constant-map vs fixed-domain deviation: ", worst);
    CHECK(worst <= 1e-8);
}

TEST_CASE("restart from a checkpoint reproduces the uninterrupted run")
{
    auto cfg = small_config();
    Driver full(cfg);
    full.initialize();
    full.run_staggered();

    Driver half(cfg);
    half.initialize();
    half.advance_step();
    half.advance_step();
    const Checkpoint ck = half.make_checkpoint();

    // Serialize through bytes to exercise the on-disk path as well.
    const Checkpoint restored = deserialize_checkpoint(serialize_checkpoint(ck));
    Driver resumed(cfg);
    resumed.restore(restored);
    resumed.run_staggered();

    const auto& final_full = full.theta().back();
    const auto& final_res = resumed.theta().back();
    CHECK((final_full - final_res).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(full.times().back() == doctest::Approx(resumed.times().back()).epsilon(1e-14));
}

TEST_CASE("one fixed-point sweep confirms the staggered trajectory")
{
    auto cfg = small_config();
    cfg.n_subiter = 2;
    Driver d(cfg);
    d.initialize();
    d.run_staggered();
    double max_subiter = 0.0;
    for (const auto& rec : d.records())
        for (double r : rec.subiter_residuals)
            max_subiter = std::max(max_subiter, r);

    std::vector<Eigen::VectorXd> staggered_solid;
    for (const auto& th : d.theta())
        staggered_solid.push_back(d.solid_part(th));

    Driver sweep(cfg);
    const auto mapped = sweep.apply_solution_operator(staggered_solid);
    const double change = sweep.trajectory_distance(mapped, staggered_solid);
    MESSAGE("fixed-point sweep change ", change, " vs max sub-iteration residual ", max_subiter);
    CHECK(change <= std::max(10.0 * max_subiter, 1e-10));
}

TEST_CASE("decoupled production converges in exactly two sweeps")
{
    auto cfg = small_config();
    cfg.model.production.mode = ProductionSpec::Mode::Constant;
    cfg.model.production.const_value = 0.4;
    Driver d(cfg);
    const auto res = d.run_picard(0.0);
    CHECK(res.converged);
    CHECK(res.iterations == 2);
    CHECK(res.residuals.back() == 0.0); // the confirming sweep is bit-identical
}

TEST_CASE("global fixed point converges on the weak default coupling")
{
    auto cfg = small_config();
    cfg.picard_tol = 1e-6;
    Driver d(cfg);
    const auto res = d.run_picard(0.0);
    CHECK(res.converged);
    CHECK(res.iterations < cfg.picard_max_iter);
    // The residual sequence is eventually monotone.
    for (std::size_t k = 1; k + 1 < res.residuals.size(); ++k)
        CHECK(res.residuals[k + 1] <= res.residuals[k] * 1.001);
}

TEST_CASE("simulation runs write deterministic outputs")
{
    namespace fs = std::filesystem;
    auto cfg = small_config();
    cfg.write_vtk = true;
    cfg.vtk_stride = 2;
    const std::string dir_a = fs::temp_directory_path() / "vth_run_a";
    const std::string dir_b = fs::temp_directory_path() / "vth_run_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    std::string report_a, report_b;
    CHECK(run_simulation(cfg, dir_a, &report_a) == 0);
    CHECK(run_simulation(cfg, dir_b, &report_b) == 0);

    CHECK(fs::exists(dir_a + "/series.csv"));
    CHECK(fs::exists(dir_a + "/report.json"));
    CHECK(fs::exists(dir_a + "/final.ckpt"));
    CHECK(fs::exists(dir_a + "/fluid_0000.vtk"));
    CHECK(fs::exists(dir_a + "/solid_0000.vtk"));

    CHECK(slurp(dir_a + "/series.csv") == slurp(dir_b + "/series.csv"));
    CHECK(slurp(dir_a + "/final.ckpt") == slurp(dir_b + "/final.ckpt"));

    // The report carries the per-step invariant data.
    CHECK(report_a.find("j_min_overall") != std::string::npos);
    CHECK(report_a.find("\"exit_code\": 0") != std::string::npos);

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("picard mode through the run entry point")
{
    namespace fs = std::filesystem;
    auto cfg = small_config();
    cfg.mode = CouplingMode::Picard;
    cfg.write_vtk = false;
    const std::string dir = fs::temp_directory_path() / "vth_run_picard";
    fs::remove_all(dir);
    std::string report;
    CHECK(run_simulation(cfg, dir, &report) == 0);
    CHECK(report.find("picard") != std::string::npos);
    CHECK(report.find("\"converged\": true") != std::string::npos);
    fs::remove_all(dir);
}
