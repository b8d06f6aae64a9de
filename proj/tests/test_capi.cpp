// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/capi.h"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

TEST_CASE("c api configuration lifecycle")
{
    char err[512] = {0};
    vth_config* cfg = vth_config_create();
    REQUIRE(cfg != nullptr);

    CHECK(vth_config_set(cfg, "n_axial", "4", err, sizeof err) == VTH_OK);
    CHECK(vth_config_set(cfg, "R2", "0.6", err, sizeof err) == VTH_ERROR);
    CHECK(std::strlen(err) > 0); // names the violated constraint
    CHECK(std::string(err).find("R2") != std::string::npos);
    // The failed override must not stick.
    CHECK(vth_config_set(cfg, "dt", "0.05", err, sizeof err) == VTH_OK);
    vth_config_free(cfg);

    CHECK(vth_config_load("/nonexistent/file.cfg", err, sizeof err) == nullptr);
    CHECK(std::string(vth_config_reference()).find("R1") != std::string::npos);
    CHECK(std::string(vth_version()).find("vasotherm") != std::string::npos);
}

TEST_CASE("c api run round trip")
{
    namespace fs = std::filesystem;
    const std::string dir = fs::temp_directory_path() / "vth_capi_cfg";
    fs::create_directories(dir);
    const std::string cfg_path = dir + "/run.cfg";
    {
        std::ofstream out(cfg_path);
        out << "n_axial = 4\nn_angular = 2\nn_radial = 1\nn_outer = 2\n";
        out << "dt = 0.02\nT_final = 0.1\ngamma = 0.04\nwrite_vtk = false\node_nodes = 9\n";
    }
    char err[512] = {0};
    vth_config* cfg = vth_config_load(cfg_path.c_str(), err, sizeof err);
    REQUIRE(cfg != nullptr);

    const std::string out_dir = dir + "/out";
    vth_report* report = nullptr;
    const int code = vth_run(cfg, out_dir.c_str(), nullptr, &report, err, sizeof err);
    CHECK(code == VTH_OK);
    REQUIRE(report != nullptr);
    CHECK(vth_report_status(report) == VTH_OK);
    CHECK(std::string(vth_report_json(report)).find("j_min_overall") != std::string::npos);
    vth_report_free(report);
    vth_config_free(cfg);
    CHECK(fs::exists(out_dir + "/series.csv"));
    fs::remove_all(dir);
}

TEST_CASE("c api verify battery")
{
    char err[512] = {0};
    vth_config* cfg = vth_config_create();
    vth_report* report = nullptr;
    const int code = vth_verify(cfg, 7, &report, err, sizeof err);
    CHECK(code == VTH_OK);
    REQUIRE(report != nullptr);
    CHECK(std::string(vth_report_text(report)).find("[PASS]") != std::string::npos);
    CHECK(std::string(vth_report_json(report)).find("\"pass\": true") != std::string::npos);
    vth_report_free(report);
    vth_config_free(cfg);
}
