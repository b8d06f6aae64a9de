// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/checkpoint.hpp"
#include "vasotherm/common.hpp"
#include "vasotherm/config.hpp"
#include "vasotherm/output.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vasotherm;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("minimal config fills defaults and validates")
{
    const auto cfg = parse_config_text("R1 = 0.16\nR2 = 0.34\n# comment\n\nn_axial = 4\n");
    CHECK(cfg.model.r_min == 0.16);
    CHECK(cfg.model.r_max == 0.34);
    CHECK(cfg.model.r_ref == 0.25);
    CHECK(cfg.resolution.n_axial == 4);
    CHECK(cfg.dt == 0.025);
    CHECK(cfg.mode == CouplingMode::Staggered);
}

TEST_CASE("config rejects structural violations with the constraint name")
{
    try {
        parse_config_text("R2 = 0.6\n");
        FAIL("expected a constraint error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("R2") != std::string::npos);
        CHECK(msg.find("1/2") != std::string::npos);
    }
}

TEST_CASE("config grammar errors carry line numbers")
{
    try {
        parse_config_text("R1 = 0.15\nR1 = 0.16\n", "test.cfg");
        FAIL("expected duplicate-key error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("test.cfg:2") != std::string::npos);
        CHECK(msg.find("duplicate") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(parse_config_text("unknown_thing = 1\n", "t.cfg"),
                         doctest::Contains("unknown key"), Error);
    CHECK_THROWS_WITH_AS(parse_config_text("dt = banana\n", "t.cfg"),
                         doctest::Contains("expected a number"), Error);
    CHECK_THROWS_WITH_AS(parse_config_text("dt = 0.2\ngamma = 0.1\n", "t.cfg"),
                         doctest::Contains("gamma"), Error);
}

TEST_CASE("conductivity matrix forms")
{
    auto cfg = parse_config_text("Kf = 2\n");
    CHECK(cfg.model.k_fluid(0, 0) == 2.0);
    CHECK(cfg.model.k_fluid(1, 1) == 2.0);
    cfg = parse_config_text("Ks = 1 2 3\n");
    CHECK(cfg.model.k_solid(2, 2) == 3.0);
    cfg = parse_config_text("Ks = 2 2 2 0.1 0 0\n");
    CHECK(cfg.model.k_solid(0, 1) == 0.1);
    CHECK(cfg.model.k_solid(1, 0) == 0.1);
    CHECK_THROWS(parse_config_text("Kf = 1 2\n"));
    CHECK_THROWS(parse_config_text("Kf = 1 1 -5\n")); // indefinite
}

TEST_CASE("csv writer produces the documented schema atomically")
{
    const std::string dir = std::filesystem::temp_directory_path() / "vth_csv_test";
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/series.csv";
    CsvWriter csv(path, {"t", "T1", "T", "R_min", "R_mean", "R_max", "Q_in", "Q_out",
                         "interface_flux", "energy"});
    csv.append({0.0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    csv.flush();
    csv.append({0.1, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    csv.flush();
    const std::string body = slurp(path);
    CHECK(body.find("t,T1,T,R_min,R_mean,R_max,Q_in,Q_out,interface_flux,energy\n") == 0);
    CHECK(body == csv.text());
    CHECK_THROWS(csv.append({1.0})); // column count mismatch
    std::filesystem::remove_all(dir);
}

TEST_CASE("checkpoint serialization round-trips bit-exactly")
{
    Checkpoint ck;
    ck.t = 0.375;
    ck.step_index = 15;
    ck.c = {0.1, 0.2, 0.3};
    ck.c_x = {-0.01, 0.0, 0.02};
    ck.history_plateau = 0.7;
    ck.history_window = 0.1;
    ck.history_times = {0.0, 0.025, 0.05};
    ck.history_values = {0.7, 0.71, 0.72};
    ck.theta = Eigen::VectorXd::Random(37);
    ck.w = Eigen::VectorXd::Random(90);
    ck.q = Eigen::VectorXd::Random(12);

    const std::string bytes = serialize_checkpoint(ck);
    const Checkpoint back = deserialize_checkpoint(bytes);
    CHECK(back.t == ck.t);
    CHECK(back.step_index == ck.step_index);
    CHECK(back.c == ck.c);
    CHECK(back.history_values == ck.history_values);
    CHECK((back.theta - ck.theta).norm() == 0.0);
    CHECK((back.w - ck.w).norm() == 0.0);
    CHECK(serialize_checkpoint(back) == bytes);

    // Corruption is detected.
    std::string bad = bytes;
    bad[bytes.size() - 3] ^= 0x40;
    CHECK_THROWS_WITH_AS(deserialize_checkpoint(bad), doctest::Contains("checksum"), Error);

    // Version mismatches are rejected.
    std::string wrong_version = bytes;
    wrong_version[8] = 9;
    CHECK_THROWS_WITH_AS(deserialize_checkpoint(wrong_version),
                         doctest::Contains("version"), Error);

    // Truncation is rejected.
    CHECK_THROWS(deserialize_checkpoint(bytes.substr(0, bytes.size() / 2)));
}

TEST_CASE("vtk snapshot keeps reference coordinates for the identity deformation")
{
    ModelParams params;
    const auto mesh = build_reference_mesh(params, {2, 2, 1, 1});
    ScalarSpace solid(mesh, Subdomain::Solid);
    DeformationField identity(params);
    Eigen::VectorXd field = Eigen::VectorXd::LinSpaced(solid.n_dofs(), 0.0, 1.0);

    const std::string dir = std::filesystem::temp_directory_path() / "vth_vtk_test";
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/solid.vtk";
    write_vtk_snapshot(path, mesh, solid, 0.3, identity, {{"temperature", &field}}, {});

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# vtk DataFile Version 4.2");
    while (std::getline(in, line) && line.rfind("POINTS", 0) != 0)
        ;
    // First point equals the first unknown's reference vertex.
    double x, y, z;
    in >> x >> y >> z;
    const Eigen::Vector3d v0 = mesh.vertices[solid.dof_vertex(0)];
    CHECK(x == v0[0]);
    CHECK(y == v0[1]);
    CHECK(z == v0[2]);

    // Rewriting produces identical bytes.
    const std::string first = slurp(path);
    write_vtk_snapshot(path, mesh, solid, 0.3, identity, {{"temperature", &field}}, {});
    CHECK(slurp(path) == first);
    std::filesystem::remove_all(dir);
}
