// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/fem.hpp"
#include "vasotherm/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace vasotherm;

namespace {

ModelParams default_params()
{
    return ModelParams{};
}

// Area of the inscribed polygon relative to the circle, for m segments.
double polygon_area_ratio(int m)
{
    return m * std::sin(2.0 * M_PI / m) / (2.0 * M_PI);
}

} // namespace

TEST_CASE("coarse mesh volumes and tags")
{
    const auto p = default_params();
    MeshResolution res{4, 2, 1, 2};
    const auto mesh = build_reference_mesh(p, res);

    CHECK(mesh.total_volume() == doctest::Approx(1.0).epsilon(1e-12));

    const int m = 4 * res.n_angular;
    const double ratio = polygon_area_ratio(m);
    const double fluid_exact = M_PI * p.r_ref * p.r_ref * p.length;
    CHECK(mesh.volume(Subdomain::Fluid) == doctest::Approx(fluid_exact * ratio).epsilon(1e-12));
    CHECK(mesh.volume(Subdomain::Solid) ==
          doctest::Approx(1.0 - fluid_exact * ratio).epsilon(1e-12));

    // Interface area: lateral area of the inscribed prism.
    const double sigma_exact = 2.0 * M_PI * p.r_ref * p.length;
    const double sigma_poly = m * 2.0 * p.r_ref * std::sin(M_PI / m) * p.length;
    CHECK(mesh.interface_area() == doctest::Approx(sigma_poly).epsilon(1e-12));
    CHECK(std::abs(mesh.interface_area() - sigma_exact) / sigma_exact < 3.0 / (m * m));

    // Boundary tags partition the box boundary; the in/out faces carry the
    // polygonal disk area.
    const double disk = M_PI * p.r_ref * p.r_ref * ratio;
    CHECK(mesh.boundary_area(BoundaryTag::InOut) == doctest::Approx(2.0 * disk).epsilon(1e-12));
    CHECK(mesh.boundary_area(BoundaryTag::Dirichlet) == doctest::Approx(1.0).epsilon(1e-12));
    const double total = mesh.boundary_area(BoundaryTag::InOut) +
                         mesh.boundary_area(BoundaryTag::Dirichlet) +
                         mesh.boundary_area(BoundaryTag::Neumann);
    CHECK(total == doctest::Approx(6.0).epsilon(1e-12));

    CHECK(mesh.min_cell_quality() > 0.05);
}

TEST_CASE("cell centroids are classified by the interface radius")
{
    const auto p = default_params();
    const auto mesh = build_reference_mesh(p, {4, 3, 2, 2});
    for (int c = 0; c < mesh.n_cells(); ++c) {
        Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
        for (int v : mesh.cells[c])
            centroid += mesh.vertices[v];
        centroid /= 4.0;
        const double r = std::hypot(centroid[1], centroid[2]);
        if (mesh.cell_domain[c] == Subdomain::Fluid)
            CHECK(r < p.r_ref);
        else
            CHECK(r > p.r_ref * std::cos(M_PI / (4.0 * 3)) - 1e-12);
    }
}

TEST_CASE("interface area defect decays quadratically with angular refinement")
{
    const auto p = default_params();
    const double exact = 2.0 * M_PI * p.r_ref * p.length;
    const double d1 =
        std::abs(build_reference_mesh(p, {2, 2, 1, 1}).interface_area() - exact);
    const double d2 =
        std::abs(build_reference_mesh(p, {2, 4, 1, 1}).interface_area() - exact);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("interface pairing duplicates temperature unknowns")
{
    const auto p = default_params();
    MeshResolution res{4, 2, 1, 2};
    const auto mesh = build_reference_mesh(p, res);
    ScalarSpace fluid(mesh, Subdomain::Fluid);
    ScalarSpace solid(mesh, Subdomain::Solid);
    const auto pairs = interface_pairs(mesh, fluid, solid);

    // 8 angular vertices times 5 axial stations.
    CHECK(int(pairs.size()) == 4 * res.n_angular * (res.n_axial + 1));

    std::set<std::pair<int, int>> seen;
    for (const auto& pr : pairs) {
        CHECK(pr.fluid_dof >= 0);
        CHECK(pr.solid_dof >= 0);
        CHECK(fluid.dof_vertex(pr.fluid_dof) == solid.dof_vertex(pr.solid_dof));
        const double r = std::hypot(pr.x[1], pr.x[2]);
        CHECK(r == doctest::Approx(p.r_ref).epsilon(1e-13));
        CHECK(seen.insert({pr.fluid_dof, pr.solid_dof}).second); // no duplicates
    }
}

TEST_CASE("interface facets pair one fluid and one solid cell")
{
    const auto p = default_params();
    const auto mesh = build_reference_mesh(p, {3, 2, 2, 2});
    CHECK(!mesh.interface_facets.empty());
    for (const auto& f : mesh.interface_facets) {
        CHECK(mesh.cell_domain[f.fluid_cell] == Subdomain::Fluid);
        CHECK(mesh.cell_domain[f.solid_cell] == Subdomain::Solid);
        for (int v : f.v)
            CHECK(std::hypot(mesh.vertices[v][1], mesh.vertices[v][2]) ==
                  doctest::Approx(p.r_ref).epsilon(1e-13));
        // Normal points radially outward from the fluid.
        Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
        for (int v : f.v)
            centroid += mesh.vertices[v];
        centroid /= 3.0;
        const Eigen::Vector3d radial(0.0, centroid[1], centroid[2]);
        CHECK(f.normal_fluid.dot(radial.normalized()) > 0.5);
    }
}

TEST_CASE("velocity space constrains every interface unknown")
{
    const auto p = default_params();
    const auto mesh = build_reference_mesh(p, {3, 2, 1, 1});
    VelocitySpace vel(mesh);
    CHECK(vel.n_scalar() > 0);
    for (int dof : vel.interface_scalar_dofs()) {
        const auto x = vel.dof_position(dof);
        CHECK(std::hypot(x[1], x[2]) <= p.r_ref + 1e-12);
    }
    // Interface vertices and edge midpoints per layer: midpoints sit inside
    // the polygon, so only the count is meaningful here.
    CHECK(int(vel.interface_scalar_dofs().size()) > 0);
}

TEST_CASE("degenerate resolutions are rejected")
{
    const auto p = default_params();
    CHECK_THROWS(build_reference_mesh(p, {1, 2, 1, 1}));
    CHECK_THROWS(build_reference_mesh(p, {4, 1, 1, 1}));
    CHECK_THROWS(build_reference_mesh(p, {4, 2, 0, 1}));
}
