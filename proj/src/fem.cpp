// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/fem.hpp"

#include "vasotherm/common.hpp"

#include <algorithm>

namespace vasotherm {

ScalarSpace::ScalarSpace(const ReferenceMesh& mesh, Subdomain domain) : domain_(domain)
{
    vertex_dof_.assign(mesh.vertices.size(), -1);
    for (int c = 0; c < mesh.n_cells(); ++c) {
        if (mesh.cell_domain[c] != domain)
            continue;
        cells_.push_back(c);
        for (int v : mesh.cells[c])
            if (vertex_dof_[v] < 0) {
                vertex_dof_[v] = n_dofs_++;
                dof_vertex_.push_back(v);
            }
    }
}

namespace {

std::uint64_t edge_key(int a, int b)
{
    if (a > b)
        std::swap(a, b);
    return (std::uint64_t(a) << 32) | std::uint64_t(b);
}

constexpr std::array<std::array<int, 2>, 6> kEdges = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

} // namespace

VelocitySpace::VelocitySpace(const ReferenceMesh& mesh)
{
    vertex_dof_.assign(mesh.vertices.size(), -1);
    cell_index_.assign(mesh.cells.size(), -1);
    for (int c = 0; c < mesh.n_cells(); ++c) {
        if (mesh.cell_domain[c] != Subdomain::Fluid)
            continue;
        cell_index_[c] = int(cells_.size());
        cells_.push_back(c);
        std::array<int, 10> dofs{};
        const auto& t = mesh.cells[c];
        for (int i = 0; i < 4; ++i) {
            if (vertex_dof_[t[i]] < 0) {
                vertex_dof_[t[i]] = n_scalar_++;
                positions_.push_back(mesh.vertices[t[i]]);
            }
            dofs[i] = vertex_dof_[t[i]];
        }
        for (int e = 0; e < 6; ++e) {
            const int a = t[kEdges[e][0]], b = t[kEdges[e][1]];
            auto [it, fresh] = edge_dof_.try_emplace(edge_key(a, b), n_scalar_);
            if (fresh) {
                ++n_scalar_;
                positions_.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
            }
            dofs[4 + e] = it->second;
        }
        cell_dofs_.push_back(dofs);
    }

    // Everything living on an interface facet is constrained (no-slip for
    // the relative velocity).
    std::vector<char> flagged(std::size_t(n_scalar_), 0);
    for (const auto& f : mesh.interface_facets) {
        for (int v : f.v)
            flagged[vertex_dof_[v]] = 1;
        flagged[edge_dof_.at(edge_key(f.v[0], f.v[1]))] = 1;
        flagged[edge_dof_.at(edge_key(f.v[0], f.v[2]))] = 1;
        flagged[edge_dof_.at(edge_key(f.v[1], f.v[2]))] = 1;
    }
    for (int i = 0; i < n_scalar_; ++i)
        if (flagged[i])
            interface_dofs_.push_back(i);
}

int VelocitySpace::edge_index(int a, int b) const
{
    auto it = edge_dof_.find(edge_key(a, b));
    return it == edge_dof_.end() ? -1 : it->second;
}

CellGeometry CellGeometry::make(const ReferenceMesh& mesh, int cell)
{
    CellGeometry g;
    const auto& t = mesh.cells[cell];
    for (int i = 0; i < 4; ++i)
        g.x[i] = mesh.vertices[t[i]];
    Eigen::Matrix3d jac;
    jac.col(0) = g.x[1] - g.x[0];
    jac.col(1) = g.x[2] - g.x[0];
    jac.col(2) = g.x[3] - g.x[0];
    const double det = jac.determinant();
    g.volume = det / 6.0;
    const Eigen::Matrix3d inv_t = jac.inverse().transpose();
    g.grad_lambda.col(1) = inv_t.col(0);
    g.grad_lambda.col(2) = inv_t.col(1);
    g.grad_lambda.col(3) = inv_t.col(2);
    g.grad_lambda.col(0) = -(inv_t.col(0) + inv_t.col(1) + inv_t.col(2));
    return g;
}

void p2_shape(const std::array<double, 4>& L, const CellGeometry& geo, double N[10],
              Eigen::Vector3d grad[10])
{
    for (int i = 0; i < 4; ++i) {
        N[i] = L[i] * (2.0 * L[i] - 1.0);
        grad[i] = (4.0 * L[i] - 1.0) * geo.grad_lambda.col(i);
    }
    for (int e = 0; e < 6; ++e) {
        const int a = kEdges[e][0], b = kEdges[e][1];
        N[4 + e] = 4.0 * L[a] * L[b];
        grad[4 + e] = 4.0 * (L[a] * geo.grad_lambda.col(b) + L[b] * geo.grad_lambda.col(a));
    }
}

std::array<double, 4> facet_bary_in_cell(const ReferenceMesh& mesh, int cell,
                                         const std::array<int, 3>& fv,
                                         const std::array<double, 3>& fb)
{
    std::array<double, 4> bary{0.0, 0.0, 0.0, 0.0};
    const auto& t = mesh.cells[cell];
    for (int i = 0; i < 3; ++i) {
        int local = -1;
        for (int j = 0; j < 4; ++j)
            if (t[j] == fv[i])
                local = j;
        require(local >= 0, "facet vertex not found in owner cell");
        bary[local] = fb[i];
    }
    return bary;
}

DofCondenser::DofCondenser(int n_full, const std::vector<int>& constrained) : n_full_(n_full)
{
    map_.assign(n_full, 0);
    for (int d : constrained)
        map_[d] = -1;
    for (int i = 0; i < n_full; ++i)
        if (map_[i] == 0)
            map_[i] = n_reduced_++;
        else
            map_[i] = -1;
}

Eigen::VectorXd DofCondenser::expand(const Eigen::VectorXd& reduced) const
{
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n_full_);
    for (int i = 0; i < n_full_; ++i)
        if (map_[i] >= 0)
            full[i] = reduced[map_[i]];
    return full;
}

Eigen::VectorXd DofCondenser::restrict_vec(const Eigen::VectorXd& full) const
{
    Eigen::VectorXd red(n_reduced_);
    for (int i = 0; i < n_full_; ++i)
        if (map_[i] >= 0)
            red[map_[i]] = full[i];
    return red;
}

std::vector<InterfacePair> interface_pairs(const ReferenceMesh& mesh, const ScalarSpace& fluid,
                                           const ScalarSpace& solid)
{
    std::vector<InterfacePair> pairs;
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (!mesh.vertex_on_interface[v])
            continue;
        const int fd = fluid.vertex_dof(v);
        const int sd = solid.vertex_dof(v);
        require(fd >= 0 && sd >= 0, "interface vertex missing a temperature unknown");
        pairs.push_back({fd, sd, mesh.vertices[v]});
    }
    return pairs;
}

} // namespace vasotherm
