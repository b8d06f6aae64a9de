// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/deformation.hpp"
#include "vasotherm/fem.hpp"
#include "vasotherm/stokes.hpp"

#include <functional>
#include <memory>

namespace vasotherm {

struct TransportOptions {
    int quad_degree = 5;
    int facet_degree = 4;
    double residual_tol = 1e-10;
};

// Transport velocity: either a discrete quadratic field or an analytic
// closure (manufactured cases). The analytic field must vanish on the
// interface to be admissible.
class TransportVelocity {
public:
    TransportVelocity() = default; // zero velocity
    TransportVelocity(const StokesSolver* stokes, const Eigen::VectorXd* coefficients)
        : stokes_(stokes), coefficients_(coefficients)
    {
    }
    explicit TransportVelocity(
        std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> analytic)
        : analytic_(std::move(analytic))
    {
    }

    Eigen::Vector3d at(double t, int velocity_cell_index, const std::array<double, 4>& bary,
                       const Eigen::Vector3d& x) const
    {
        if (coefficients_)
            return stokes_->velocity_at(velocity_cell_index, bary, *coefficients_);
        if (analytic_)
            return analytic_(t, x);
        return Eigen::Vector3d::Zero();
    }

private:
    const StokesSolver* stokes_ = nullptr;
    const Eigen::VectorXd* coefficients_ = nullptr;
    std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> analytic_;
};

// Manufactured corrections for the transport step, integrated against the
// test functions without additional weights.
struct TransportManufacturedRhs {
    std::function<double(double, const Eigen::Vector3d&, Side)> volume;
    std::function<double(double, const Eigen::Vector3d&, const Eigen::Vector3d&)> inout;
    std::function<double(double, const Eigen::Vector3d&, const Eigen::Vector3d&)> neumann;
    // (t, x, facet normal outward from the fluid, side)
    std::function<double(double, const Eigen::Vector3d&, const Eigen::Vector3d&, Side)>
        interface_flux;
};

// One implicit step of the coupled fluid/solid temperature system: the
// Jacobian-weighted time term is differenced between the two levels, all
// spatial operators are taken at the new level, and the advective boundary
// terms split by the sign of the normal velocity.
class TransportSolver {
public:
    TransportSolver(const ReferenceMesh& mesh, const ScalarSpace& fluid, const ScalarSpace& solid,
                    const VelocitySpace& velocity, TransportOptions options = {});

    int n_total() const { return fluid_->n_dofs() + solid_->n_dofs(); }
    int solid_offset() const { return fluid_->n_dofs(); }

    Eigen::VectorXd constant_state(double fluid_value, double solid_value) const;
    Eigen::VectorXd interpolate(
        const std::function<double(const Eigen::Vector3d&, Side)>& f) const;

    struct StepResult {
        Eigen::VectorXd theta;
        double residual = 0.0;
        double max_cell_peclet = 0.0;
    };

    StepResult step(double t_old, double t_new, const Eigen::VectorXd& theta_old,
                    const DeformationField& def_old, const DeformationField& def_new,
                    const TransportVelocity& velocity,
                    const std::function<double(double, const Eigen::Vector3d&)>* inflow_override =
                        nullptr,
                    const TransportManufacturedRhs* mms = nullptr) const;

    // Weighted squared norm  int J |theta_f|^2 + int J |theta_s|^2.
    double energy_norm(double t, const Eigen::VectorXd& theta,
                       const DeformationField& def) const;

    // Interface heat exchange  int alpha (theta_f - theta_s) * factor.
    double interface_heat_flux(double t, const Eigen::VectorXd& theta,
                               const DeformationField& def) const;

    // Mean fluid temperature over one end face.
    double face_mean_temperature(const Eigen::VectorXd& theta, bool outlet) const;

    // Advective heat flux through one end face: int theta_f (w.n) J.
    double face_advective_flux(double t, const Eigen::VectorXd& theta,
                               const DeformationField& def, const TransportVelocity& velocity,
                               bool outlet) const;

    // L2(solid) distance between combined states.
    double solid_l2_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

    const ScalarSpace& fluid_space() const { return *fluid_; }
    const ScalarSpace& solid_space() const { return *solid_; }
    const ReferenceMesh& mesh() const { return *mesh_; }
    const std::vector<int>& dirichlet_dofs() const { return dirichlet_; }

private:
    const ReferenceMesh* mesh_;
    const ScalarSpace* fluid_;
    const ScalarSpace* solid_;
    const VelocitySpace* velocity_space_;
    TransportOptions options_;
    std::vector<int> dirichlet_; // combined-numbering unknowns pinned to zero
    std::unique_ptr<DofCondenser> condenser_;
};

} // namespace vasotherm
