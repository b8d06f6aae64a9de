// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/mesh.hpp"

#include "vasotherm/common.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace vasotherm {

namespace {

struct CrossSection {
    int n_a, n_r, n_o;
    int core_count;
    int m_count; // angular node count around the circle
    std::vector<Eigen::Vector2d> nodes;

    int core_id(int i, int j) const { return i * (n_a + 1) + j; }

    // Walk of the core-square boundary matching the angular index.
    int core_walk(int m) const
    {
        m = ((m % m_count) + m_count) % m_count;
        if (m <= n_a)
            return core_id(n_a, m);
        if (m <= 2 * n_a)
            return core_id(2 * n_a - m, n_a);
        if (m <= 3 * n_a)
            return core_id(0, 3 * n_a - m);
        return core_id(m - 3 * n_a, 0);
    }

    int fluid_ring(int level, int m) const // level 1..n_r
    {
        m = ((m % m_count) + m_count) % m_count;
        return core_count + (level - 1) * m_count + m;
    }

    int solid_ring(int level, int m) const // level 1..n_o
    {
        m = ((m % m_count) + m_count) % m_count;
        return core_count + (n_r + level - 1) * m_count + m;
    }

    int fluid_node(int level, int m) const { return level == 0 ? core_walk(m) : fluid_ring(level, m); }
    int solid_node(int level, int m) const { return level == 0 ? fluid_ring(n_r, m) : solid_ring(level, m); }
};

CrossSection build_cross_section(double r0, const MeshResolution& res)
{
    CrossSection cs;
    cs.n_a = res.n_angular;
    cs.n_r = res.n_radial;
    cs.n_o = res.n_outer;
    cs.m_count = 4 * cs.n_a;
    cs.core_count = (cs.n_a + 1) * (cs.n_a + 1);
    cs.nodes.resize(cs.core_count + (cs.n_r + cs.n_o) * cs.m_count);

    const double a = 0.5 * r0; // core half-width
    auto tan_coord = [&](int i) { return a * std::tan(-M_PI / 4.0 + (M_PI / 2.0) * i / cs.n_a); };
    for (int i = 0; i <= cs.n_a; ++i)
        for (int j = 0; j <= cs.n_a; ++j)
            cs.nodes[cs.core_id(i, j)] = {tan_coord(i), tan_coord(j)};

    auto angle = [&](int m) { return -M_PI / 4.0 + (M_PI / 2.0) * m / cs.n_a; };
    for (int m = 0; m < cs.m_count; ++m) {
        const double phi = angle(m);
        const Eigen::Vector2d dir(std::cos(phi), std::sin(phi));
        const Eigen::Vector2d circle = r0 * dir;
        const Eigen::Vector2d inner = cs.nodes[cs.core_walk(m)];
        for (int level = 1; level <= cs.n_r; ++level)
            cs.nodes[cs.fluid_ring(level, m)] =
                inner + (circle - inner) * double(level) / cs.n_r;
        const Eigen::Vector2d box = 0.5 * dir / std::max(std::abs(dir[0]), std::abs(dir[1]));
        for (int level = 1; level <= cs.n_o; ++level)
            cs.nodes[cs.solid_ring(level, m)] =
                circle + (box - circle) * double(level) / cs.n_o;
    }
    return cs;
}

struct Tri2d {
    std::array<int, 3> v;
    Subdomain domain;
};

void split_quad(std::vector<Tri2d>& out, int v0, int v1, int v2, int v3, Subdomain dom)
{
    const int m02 = std::min(v0, v2), m13 = std::min(v1, v3);
    if (m02 <= m13) {
        out.push_back({{v0, v1, v2}, dom});
        out.push_back({{v0, v2, v3}, dom});
    } else {
        out.push_back({{v1, v2, v3}, dom});
        out.push_back({{v1, v3, v0}, dom});
    }
}

std::uint64_t face_key(int a, int b, int c)
{
    std::array<int, 3> s{a, b, c};
    std::sort(s.begin(), s.end());
    return (std::uint64_t(s[0]) << 42) | (std::uint64_t(s[1]) << 21) | std::uint64_t(s[2]);
}

} // namespace

double ReferenceMesh::cell_volume(int c) const
{
    const auto& t = cells[c];
    const Eigen::Vector3d e1 = vertices[t[1]] - vertices[t[0]];
    const Eigen::Vector3d e2 = vertices[t[2]] - vertices[t[0]];
    const Eigen::Vector3d e3 = vertices[t[3]] - vertices[t[0]];
    return e1.cross(e2).dot(e3) / 6.0;
}

double ReferenceMesh::total_volume() const
{
    double v = 0.0;
    for (int c = 0; c < n_cells(); ++c)
        v += cell_volume(c);
    return v;
}

double ReferenceMesh::volume(Subdomain d) const
{
    double v = 0.0;
    for (int c = 0; c < n_cells(); ++c)
        if (cell_domain[c] == d)
            v += cell_volume(c);
    return v;
}

double ReferenceMesh::interface_area() const
{
    double a = 0.0;
    for (const auto& f : interface_facets)
        a += f.area;
    return a;
}

double ReferenceMesh::boundary_area(BoundaryTag tag) const
{
    double a = 0.0;
    for (const auto& f : boundary_facets)
        if (f.tag == tag)
            a += f.area;
    return a;
}

double ReferenceMesh::min_cell_quality() const
{
    double q_min = 1e300;
    for (int c = 0; c < n_cells(); ++c) {
        const auto& t = cells[c];
        double l_max = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                l_max = std::max(l_max, (vertices[t[i]] - vertices[t[j]]).norm());
        const double q = 6.0 * std::sqrt(2.0) * cell_volume(c) / (l_max * l_max * l_max);
        q_min = std::min(q_min, q);
    }
    return q_min;
}

ReferenceMesh build_reference_mesh(const ModelParams& params, const MeshResolution& res)
{
    require(res.n_axial >= 2, "mesh: need at least 2 axial cells");
    require(res.n_angular >= 2, "mesh: need at least 2 angular cells per quadrant");
    require(res.n_radial >= 1 && res.n_outer >= 1, "mesh: degenerate radial resolution");

    ReferenceMesh mesh;
    mesh.resolution = res;
    mesh.r0 = params.r_ref;
    mesh.length = params.length;

    const CrossSection cs = build_cross_section(params.r_ref, res);
    const int n2 = int(cs.nodes.size());

    // Cross-section triangulation.
    std::vector<Tri2d> tris;
    for (int i = 0; i < cs.n_a; ++i)
        for (int j = 0; j < cs.n_a; ++j)
            split_quad(tris, cs.core_id(i, j), cs.core_id(i + 1, j), cs.core_id(i + 1, j + 1),
                       cs.core_id(i, j + 1), Subdomain::Fluid);
    for (int m = 0; m < cs.m_count; ++m) {
        for (int level = 0; level < cs.n_r; ++level)
            split_quad(tris, cs.fluid_node(level, m), cs.fluid_node(level + 1, m),
                       cs.fluid_node(level + 1, m + 1), cs.fluid_node(level, m + 1),
                       Subdomain::Fluid);
        for (int level = 0; level < cs.n_o; ++level)
            split_quad(tris, cs.solid_node(level, m), cs.solid_node(level + 1, m),
                       cs.solid_node(level + 1, m + 1), cs.solid_node(level, m + 1),
                       Subdomain::Solid);
    }

    // Extrude vertices layer by layer (layer-major ids keep the prism split
    // conforming across neighbors).
    const int n_layers = res.n_axial + 1;
    mesh.vertices.resize(std::size_t(n_layers) * n2);
    for (int k = 0; k < n_layers; ++k) {
        const double x1 = params.length * k / res.n_axial;
        for (int i = 0; i < n2; ++i)
            mesh.vertices[std::size_t(k) * n2 + i] = {x1, cs.nodes[i][0], cs.nodes[i][1]};
    }

    // Each prism splits into three tetrahedra along face diagonals that run
    // from the lowest-numbered bottom vertex to the upper copy of the higher
    // one; sorting the triangle makes adjacent prisms agree.
    mesh.cells.reserve(std::size_t(tris.size()) * 3 * res.n_axial);
    mesh.cell_domain.reserve(mesh.cells.capacity());
    for (int k = 0; k < res.n_axial; ++k) {
        const int base = k * n2;
        for (const auto& tri : tris) {
            std::array<int, 3> s = tri.v;
            std::sort(s.begin(), s.end());
            const int a = base + s[0], b = base + s[1], c = base + s[2];
            const int a1 = a + n2, b1 = b + n2, c1 = c + n2;
            const std::array<std::array<int, 4>, 3> tets = {{
                {a, b, c, c1},
                {a, b, c1, b1},
                {a, b1, c1, a1},
            }};
            for (auto t : tets) {
                mesh.cells.push_back(t);
                mesh.cell_domain.push_back(tri.domain);
                if (mesh.cell_volume(int(mesh.cells.size()) - 1) < 0.0) {
                    std::swap(mesh.cells.back()[2], mesh.cells.back()[3]);
                    require(mesh.cell_volume(int(mesh.cells.size()) - 1) > 0.0,
                            "mesh: degenerate cell");
                }
            }
        }
    }

    // Face incidence: interface facets are interior faces with mixed owners,
    // boundary facets have a single owner.
    std::unordered_map<std::uint64_t, std::pair<int, int>> faces;
    faces.reserve(mesh.cells.size() * 4);
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const auto& t = mesh.cells[c];
        const std::array<std::array<int, 3>, 4> fs = {{
            {t[1], t[2], t[3]},
            {t[0], t[2], t[3]},
            {t[0], t[1], t[3]},
            {t[0], t[1], t[2]},
        }};
        for (const auto& f : fs) {
            auto [it, fresh] = faces.try_emplace(face_key(f[0], f[1], f[2]), std::pair{c, -1});
            if (!fresh) {
                require(it->second.second == -1, "mesh: face with more than two owners");
                it->second.second = c;
            }
        }
    }

    auto face_vertices = [](std::uint64_t key) {
        return std::array<int, 3>{int(key >> 42), int((key >> 21) & 0x1FFFFF),
                                  int(key & 0x1FFFFF)};
    };

    mesh.vertex_on_interface.assign(mesh.vertices.size(), false);
    const double tol = 1e-9;
    for (const auto& [key, owners] : faces) {
        const auto fv = face_vertices(key);
        const Eigen::Vector3d p0 = mesh.vertices[fv[0]];
        const Eigen::Vector3d p1 = mesh.vertices[fv[1]];
        const Eigen::Vector3d p2 = mesh.vertices[fv[2]];
        Eigen::Vector3d nrm = (p1 - p0).cross(p2 - p0);
        const double area = 0.5 * nrm.norm();
        nrm.normalize();

        if (owners.second >= 0) {
            if (mesh.cell_domain[owners.first] == mesh.cell_domain[owners.second])
                continue;
            ReferenceMesh::InterfaceFacet f;
            f.v = fv;
            f.area = area;
            if (mesh.cell_domain[owners.first] == Subdomain::Fluid) {
                f.fluid_cell = owners.first;
                f.solid_cell = owners.second;
            } else {
                f.fluid_cell = owners.second;
                f.solid_cell = owners.first;
            }
            // Orient away from the fluid cell.
            Eigen::Vector3d centroid = (p0 + p1 + p2) / 3.0;
            Eigen::Vector3d cell_centroid = Eigen::Vector3d::Zero();
            for (int i = 0; i < 4; ++i)
                cell_centroid += mesh.vertices[mesh.cells[f.fluid_cell][i]];
            cell_centroid /= 4.0;
            f.normal_fluid = (centroid - cell_centroid).dot(nrm) > 0.0 ? nrm : Eigen::Vector3d(-nrm);
            mesh.interface_facets.push_back(f);
            for (int v : fv)
                mesh.vertex_on_interface[v] = true;
            continue;
        }

        ReferenceMesh::BoundaryFacet f;
        f.v = fv;
        f.cell = owners.first;
        f.area = area;
        Eigen::Vector3d centroid = (p0 + p1 + p2) / 3.0;
        Eigen::Vector3d cell_centroid = Eigen::Vector3d::Zero();
        for (int i = 0; i < 4; ++i)
            cell_centroid += mesh.vertices[mesh.cells[f.cell][i]];
        cell_centroid /= 4.0;
        f.normal = (centroid - cell_centroid).dot(nrm) > 0.0 ? nrm : Eigen::Vector3d(-nrm);

        const bool at_x0 = std::abs(p0[0]) < tol && std::abs(p1[0]) < tol && std::abs(p2[0]) < tol;
        const bool at_xL = std::abs(p0[0] - params.length) < tol &&
                           std::abs(p1[0] - params.length) < tol &&
                           std::abs(p2[0] - params.length) < tol;
        const bool at_top = std::abs(p0[2] - 0.5) < tol && std::abs(p1[2] - 0.5) < tol &&
                            std::abs(p2[2] - 0.5) < tol;
        if ((at_x0 || at_xL) && mesh.cell_domain[f.cell] == Subdomain::Fluid)
            f.tag = BoundaryTag::InOut;
        else if (at_top)
            f.tag = BoundaryTag::Dirichlet;
        else
            f.tag = BoundaryTag::Neumann;
        mesh.boundary_facets.push_back(f);
    }

    // Deterministic facet ordering (hash-map iteration order is not).
    auto facet_less = [](const auto& a, const auto& b) { return a.v < b.v; };
    std::sort(mesh.boundary_facets.begin(), mesh.boundary_facets.end(), facet_less);
    std::sort(mesh.interface_facets.begin(), mesh.interface_facets.end(), facet_less);

    require(mesh.min_cell_quality() > 0.01, "mesh: cell quality below floor");
    return mesh;
}

} // namespace vasotherm
