// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/params.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace vasotherm {

enum class Subdomain : std::uint8_t { Fluid = 0, Solid = 1 };
enum class BoundaryTag : std::uint8_t { InOut = 0, Dirichlet = 1, Neumann = 2 };

struct MeshResolution {
    int n_axial = 8;   // cells along the axis
    int n_angular = 4; // angular cells per quadrant (4 n_angular around)
    int n_radial = 2;  // radial cells between core square and interface
    int n_outer = 3;   // radial cells between interface and box
};

// Fixed tetrahedral mesh of the reference box (0,L) x (-1/2,1/2)^2,
// conforming to the cylindrical interface r = R0. The fluid region is a
// structured butterfly layout (square core plus annular shell) extruded
// along the axis; the solid region fills the box around it, matching the
// interface facet by facet. Temperature carries duplicated unknowns across
// the interface, so fluid and solid cells index the shared vertex list but
// are assembled on separate scalar spaces.
struct ReferenceMesh {
    MeshResolution resolution;
    double r0 = 0.25;
    double length = 1.0;

    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 4>> cells; // positive-volume tetrahedra
    std::vector<Subdomain> cell_domain;

    struct BoundaryFacet {
        std::array<int, 3> v;
        int cell = -1;
        BoundaryTag tag = BoundaryTag::Neumann;
        Eigen::Vector3d normal; // outward unit normal
        double area = 0.0;
    };
    std::vector<BoundaryFacet> boundary_facets;

    struct InterfaceFacet {
        std::array<int, 3> v;
        int fluid_cell = -1;
        int solid_cell = -1;
        Eigen::Vector3d normal_fluid; // outward from the fluid side
        double area = 0.0;
    };
    std::vector<InterfaceFacet> interface_facets;

    std::vector<bool> vertex_on_interface;

    int n_vertices() const { return int(vertices.size()); }
    int n_cells() const { return int(cells.size()); }

    double cell_volume(int c) const;
    double total_volume() const;
    double volume(Subdomain d) const;
    double interface_area() const;
    double boundary_area(BoundaryTag tag) const;

    // Positive for every cell; the smallest normalized tet quality
    // (shortest-to-longest edge measure combined with volume).
    double min_cell_quality() const;
};

ReferenceMesh build_reference_mesh(const ModelParams& params, const MeshResolution& res);

struct InterfacePair {
    int fluid_dof = -1;
    int solid_dof = -1;
    Eigen::Vector3d x;
};

// Declared here, defined with the scalar spaces in fem.hpp/cpp.
class ScalarSpace;
std::vector<InterfacePair> interface_pairs(const ReferenceMesh& mesh, const ScalarSpace& fluid,
                                           const ScalarSpace& solid);

} // namespace vasotherm
