// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <unordered_map>
#include <vector>

namespace vasotherm {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Continuous piecewise-linear space on one subdomain. Vertices on the
// interface carry one unknown per side, so fluid and solid spaces number
// their own copies.
class ScalarSpace {
public:
    ScalarSpace(const ReferenceMesh& mesh, Subdomain domain);

    int n_dofs() const { return n_dofs_; }
    Subdomain domain() const { return domain_; }
    int vertex_dof(int vertex) const { return vertex_dof_[vertex]; }
    int dof_vertex(int dof) const { return dof_vertex_[dof]; }
    const std::vector<int>& cells() const { return cells_; }

private:
    Subdomain domain_;
    int n_dofs_ = 0;
    std::vector<int> vertex_dof_;
    std::vector<int> dof_vertex_;
    std::vector<int> cells_; // global cell ids of this subdomain
};

// Continuous piecewise-quadratic vector space on the fluid cells. Scalar
// unknowns sit on fluid vertices and fluid edge midpoints; a vector unknown
// is 3*scalar + component.
class VelocitySpace {
public:
    explicit VelocitySpace(const ReferenceMesh& mesh);

    int n_scalar() const { return n_scalar_; }
    int n_dofs() const { return 3 * n_scalar_; }
    const std::vector<int>& cells() const { return cells_; }
    int cell_index(int global_cell) const { return cell_index_[global_cell]; }
    // 10 scalar unknowns per cell: 4 vertices then the edges
    // (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
    const std::array<int, 10>& cell_dofs(int k) const { return cell_dofs_[k]; }
    // Scalar unknowns lying on interface facets (vertices and facet edges).
    const std::vector<int>& interface_scalar_dofs() const { return interface_dofs_; }
    Eigen::Vector3d dof_position(int scalar_dof) const { return positions_[scalar_dof]; }
    int vertex_scalar_dof(int vertex) const { return vertex_dof_[vertex]; }

private:
    int n_scalar_ = 0;
    std::vector<int> cells_;
    std::vector<int> cell_index_;
    std::vector<std::array<int, 10>> cell_dofs_;
    std::vector<int> interface_dofs_;
    std::vector<Eigen::Vector3d> positions_;
    std::vector<int> vertex_dof_;
    std::unordered_map<std::uint64_t, int> edge_dof_;

    friend struct FacetContext;
    int edge_index(int a, int b) const;
};

// Affine geometry of one tetrahedron.
struct CellGeometry {
    Eigen::Matrix<double, 3, 4> grad_lambda; // column i = grad of barycentric i
    double volume = 0.0;
    std::array<Eigen::Vector3d, 4> x;

    static CellGeometry make(const ReferenceMesh& mesh, int cell);
    Eigen::Vector3d point(const std::array<double, 4>& bary) const
    {
        return bary[0] * x[0] + bary[1] * x[1] + bary[2] * x[2] + bary[3] * x[3];
    }
};

// Quadratic shape values/gradients from barycentric coordinates.
void p2_shape(const std::array<double, 4>& bary, const CellGeometry& geo, double N[10],
              Eigen::Vector3d grad[10]);

// Barycentric coordinates of a facet quadrature point inside the owner cell.
std::array<double, 4> facet_bary_in_cell(const ReferenceMesh& mesh, int cell,
                                         const std::array<int, 3>& facet_vertices,
                                         const std::array<double, 3>& facet_bary);

// Reduction of a linear system to the unconstrained unknowns (homogeneous
// constraints).
class DofCondenser {
public:
    DofCondenser(int n_full, const std::vector<int>& constrained);

    int n_full() const { return n_full_; }
    int n_reduced() const { return n_reduced_; }
    int reduced(int full) const { return map_[full]; }
    bool constrained(int full) const { return map_[full] < 0; }

    Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
    Eigen::VectorXd restrict_vec(const Eigen::VectorXd& full) const;

private:
    int n_full_ = 0, n_reduced_ = 0;
    std::vector<int> map_;
};

std::vector<InterfacePair> interface_pairs(const ReferenceMesh& mesh, const ScalarSpace& fluid,
                                           const ScalarSpace& solid);

} // namespace vasotherm
