// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/mesh.hpp"
#include "vasotherm/params.hpp"

#include <string>

namespace vasotherm {

enum class CouplingMode { Staggered, Picard };

// Full run description: model data plus discretization and output switches.
struct RunConfig {
    ModelParams model;
    MeshResolution resolution;
    double dt = 0.025;
    CouplingMode mode = CouplingMode::Staggered;
    bool fixed_domain = false; // identity deformation, no chemistry feedback
    int n_subiter = 2;
    double picard_tol = 1e-6;
    int picard_max_iter = 25;
    int quad_degree = 5;
    int facet_quad_degree = 4;
    double solver_tol = 1e-10;
    std::string rho_mode = "table"; // "table" or "direct"
    int rho_table_n_radius = 33;
    int rho_table_n_r = 801;
    int ode_nodes = 65;
    bool write_vtk = true;
    int vtk_stride = 4;
    bool write_csv = true;
    bool write_checkpoint = true;
    bool deterministic = true;
    unsigned seed = 12345;
};

// Parse the key = value configuration grammar. Unknown keys, duplicates and
// type mismatches are errors with line numbers; structural violations are
// reported with the name of the violated constraint. Validation is eager:
// a config that parses but fails validation throws.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<memory>");

// The documented key table (name, default, description) for --help output
// and the README.
std::string config_reference();

} // namespace vasotherm
