// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/params.hpp"
#include "vasotherm/radius_field.hpp"
#include "vasotherm/rho_profile.hpp"

#include <Eigen/Dense>

namespace vasotherm {

enum class Side { Fluid, Solid };

// Pointwise bundle of the domain-deformation coefficients at a reference
// point. F is the Jacobian of the deformation (F_ij = dS_i/dx_j), A the
// cofactor matrix J F^{-1}, k_pull the pulled-back conductivity for the
// requested side, vb the domain velocity and grad_vb its reference gradient
// with (grad_vb)_ij = d vb_j / d x_i.
struct DeformationEval {
    Eigen::Vector3d S;
    Eigen::Matrix3d F;
    double J = 1.0;
    Eigen::Matrix3d F_inv;
    Eigen::Matrix3d A;
    Eigen::Matrix3d k_pull;
    Eigen::Vector3d vb;
    Eigen::Matrix3d grad_vb;
    double dJ_dt = 0.0;
};

// Evaluates the deformation induced by a radius field through the radial
// profile. Pure and immutable: safe for concurrent quadrature loops.
class DeformationField {
public:
    // Regular mode: radial profile bound to a radius field.
    DeformationField(const ModelParams& params, const RhoField& rho,
                     const RadiusField& radius);

    // Identity mode: S = x for all times (fixed-domain solver).
    explicit DeformationField(const ModelParams& params);

    bool is_identity() const { return identity_; }

    Eigen::Vector3d map_point(double t, const Eigen::Vector3d& x) const;
    DeformationEval evaluate(double t, const Eigen::Vector3d& x, Side side) const;

    // Surface-measure factor of the interface integrals,
    // (R/R0) * sqrt((dR/dx1)^2 + 1), bounded below by R1/R0.
    double interface_factor(double t, double x1) const;

    // The same quantity assembled from the generic coefficients J |F^{-T} n|;
    // kept as a cross-check of the closed form.
    double interface_factor_generic(double t, const Eigen::Vector3d& x_on_interface) const;

    // Lower bound for J implied by the construction: slope_min * (R1 - 3d)/(R2 + 3d).
    double jacobian_floor() const { return jacobian_floor_; }

    const ModelParams& params() const { return *params_; }
    const RadiusField& radius() const { return *radius_; }

private:
    const ModelParams* params_;
    RhoField rho_;
    const RadiusField* radius_ = nullptr;
    bool identity_ = false;
    double jacobian_floor_ = 0.0;
};

} // namespace vasotherm
