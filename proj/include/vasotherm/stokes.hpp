// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/deformation.hpp"
#include "vasotherm/fem.hpp"

#include <functional>
#include <memory>

namespace vasotherm {

struct StokesOptions {
    int quad_degree = 5;
    int facet_degree = 4;
    double residual_tol = 1e-10;
};

// Replacement right-hand side for manufactured problems: volume force,
// traction on the in/out faces, and a mass source for the divergence row.
struct StokesManufacturedRhs {
    std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> volume_force;
    std::function<Eigen::Vector3d(double, const Eigen::Vector3d&, const Eigen::Vector3d&)>
        traction; // (t, x, n)
    std::function<double(double, const Eigen::Vector3d&)> mass_source;
};

// Quasi-stationary saddle-point solve for the relative velocity and reduced
// pressure on the reference fluid domain. The velocity space is quadratic
// with the interface unknowns pinned, the pressure linear; the normal-stress
// data on the end faces removes the constant-pressure mode.
class StokesSolver {
public:
    StokesSolver(const ReferenceMesh& mesh, const VelocitySpace& velocity,
                 const ScalarSpace& pressure, StokesOptions options = {});

    struct System {
        SparseMat matrix; // condensed [K B^T; B 0]
        Eigen::VectorXd rhs;
        int n_velocity = 0; // condensed velocity unknowns
        int n_pressure = 0;
        double block_asymmetry = 0.0; // max |K - K^T| entry
    };

    struct Solution {
        Eigen::VectorXd w; // full velocity coefficients (zeros on the interface)
        Eigen::VectorXd q; // pressure coefficients
        double residual = 0.0;
    };

    System assemble(double t, const DeformationField& def,
                    const StokesManufacturedRhs* mms = nullptr) const;
    Solution solve(const System& system) const;
    Solution solve_at(double t, const DeformationField& def) const;

    // Signed flux through one end face: integral of J w.n over x1 = 0 or L.
    double flow_rate(double t, const DeformationField& def, const Eigen::VectorXd& w,
                     bool outlet) const;

    // Smallest generalized singular value of the divergence block against the
    // velocity-energy and pressure-mass inner products. Dense; coarse meshes.
    double infsup_estimate(double t, const DeformationField& def) const;

    // Pointwise physical reconstruction v = w + vb, p = q + fb at a
    // reference point inside the given fluid cell.
    Eigen::Vector3d velocity_at(int velocity_cell_index, const std::array<double, 4>& bary,
                                const Eigen::VectorXd& w) const;

    const DofCondenser& condenser() const { return *condenser_; }
    const VelocitySpace& velocity_space() const { return *velocity_; }
    const ScalarSpace& pressure_space() const { return *pressure_; }
    const ReferenceMesh& mesh() const { return *mesh_; }

private:
    const ReferenceMesh* mesh_;
    const VelocitySpace* velocity_;
    const ScalarSpace* pressure_;
    StokesOptions options_;
    std::unique_ptr<DofCondenser> condenser_;
};

} // namespace vasotherm
