// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/deformation.hpp"

#include "vasotherm/common.hpp"

#include <cmath>

namespace vasotherm {

DeformationField::DeformationField(const ModelParams& params, const RhoField& rho,
                                   const RadiusField& radius)
    : params_(&params), rho_(rho), radius_(&radius)
{
    require(rho_.valid(), "deformation: radial profile not set");
    // Monotonicity constant of the mollified base slopes: the minimum of the
    // two interior branch slopes over the admissible target radii.
    const double c_lo = params.delta / (params.r_ref - params.r_min + params.delta);
    const double c_hi = params.delta / (params.r_max - params.r_ref + params.delta);
    const double slope_floor = std::min({1.0, c_lo, c_hi});
    jacobian_floor_ = slope_floor * (params.r_min - 3.0 * params.delta) /
                      (params.r_max + 3.0 * params.delta);
}

DeformationField::DeformationField(const ModelParams& params)
    : params_(&params), identity_(true), jacobian_floor_(1.0)
{
}

namespace {

DeformationEval identity_eval(const Eigen::Vector3d& x, const Eigen::Matrix3d& conductivity)
{
    DeformationEval e;
    e.S = x;
    e.F = Eigen::Matrix3d::Identity();
    e.F_inv = Eigen::Matrix3d::Identity();
    e.A = Eigen::Matrix3d::Identity();
    e.J = 1.0;
    e.k_pull = conductivity;
    e.vb = Eigen::Vector3d::Zero();
    e.grad_vb = Eigen::Matrix3d::Zero();
    e.dJ_dt = 0.0;
    return e;
}

} // namespace

Eigen::Vector3d DeformationField::map_point(double t, const Eigen::Vector3d& x) const
{
    if (identity_)
        return x;
    const double r = std::hypot(x[1], x[2]);
    if (r < 1e-12)
        return x;
    const RadiusSample R = radius_->at(t, x[0]);
    const RhoEval e = rho_.evaluate(R.value, r);
    return {x[0], e.rho * x[1] / r, e.rho * x[2] / r};
}

DeformationEval DeformationField::evaluate(double t, const Eigen::Vector3d& x, Side side) const
{
    const Eigen::Matrix3d& k = side == Side::Fluid ? params_->k_fluid : params_->k_solid;
    if (identity_)
        return identity_eval(x, k);

    const double r = std::hypot(x[1], x[2]);
    const RhoProfile& prof = rho_.profile();
    if (r <= prof.zone_lo() || r >= prof.zone_hi())
        return identity_eval(x, k);

    const RadiusSample R = radius_->at(t, x[0]);
    const RhoEval e = rho_.evaluate(R.value, r);

    DeformationEval out;
    Eigen::Vector2d er;
    double rho_over_r;
    if (r < 1e-12) {
        // Smooth axial limit: the transverse block degenerates to d_r * I.
        er = Eigen::Vector2d(1.0, 0.0);
        rho_over_r = e.d_r;
    } else {
        er = Eigen::Vector2d(x[1], x[2]) / r;
        rho_over_r = e.rho / r;
    }

    out.S = {x[0], (r < 1e-12 ? x[1] : e.rho * er[0]), (r < 1e-12 ? x[2] : e.rho * er[1])};

    const Eigen::Matrix2d P = er * er.transpose();
    const Eigen::Matrix2d Q = Eigen::Matrix2d::Identity() - P;
    const Eigen::Matrix2d B = e.d_r * P + rho_over_r * Q;
    const Eigen::Vector2d axial_col = e.d_R * R.d_x * er;

    out.F.setZero();
    out.F(0, 0) = 1.0;
    out.F.block<2, 1>(1, 0) = axial_col;
    out.F.block<2, 2>(1, 1) = B;

    out.J = e.d_r * rho_over_r;
    require_invariant(out.J > 0.5 * jacobian_floor_,
                      "deformation: Jacobian fell below its guaranteed floor");

    const Eigen::Matrix2d B_inv = (1.0 / e.d_r) * P + (1.0 / rho_over_r) * Q;
    out.F_inv.setZero();
    out.F_inv(0, 0) = 1.0;
    out.F_inv.block<2, 1>(1, 0) = -B_inv * axial_col;
    out.F_inv.block<2, 2>(1, 1) = B_inv;

    out.A = out.J * out.F_inv;
    out.k_pull = out.J * out.F_inv * k * out.F_inv.transpose();

    out.vb = {0.0, e.d_R * R.d_t * er[0], e.d_R * R.d_t * er[1]};

    // grad_vb with (grad v)_ij = d_i v_j. The transverse field is g(r) e_r
    // with g = d_R rho * dR/dt.
    out.grad_vb.setZero();
    const Eigen::Vector2d d_axial = (e.d_RR * R.d_x * R.d_t + e.d_R * R.d_tx) * er;
    out.grad_vb(0, 1) = d_axial[0];
    out.grad_vb(0, 2) = d_axial[1];
    const double g_r = e.d_Rr * R.d_t;
    const double g_over_r = (r < 1e-12 ? g_r : e.d_R * R.d_t / r);
    const Eigen::Matrix2d trans = g_r * P + g_over_r * Q;
    out.grad_vb.block<2, 2>(1, 1) = trans;

    out.dJ_dt = (r < 1e-12 ? 2.0 * e.d_r * e.d_Rr * R.d_t
                           : (e.d_R * R.d_t * e.d_r + e.rho * e.d_Rr * R.d_t) / r);
    return out;
}

double DeformationField::interface_factor(double t, double x1) const
{
    if (identity_)
        return 1.0;
    const RadiusSample R = radius_->at(t, x1);
    return R.value / params_->r_ref * std::sqrt(R.d_x * R.d_x + 1.0);
}

double DeformationField::interface_factor_generic(double t, const Eigen::Vector3d& x) const
{
    if (identity_)
        return 1.0;
    const double r = std::hypot(x[1], x[2]);
    require(r > 1e-12, "interface factor: point on the axis");
    const DeformationEval e = evaluate(t, x, Side::Fluid);
    const Eigen::Vector3d n(0.0, x[1] / r, x[2] / r);
    return e.J * (e.F_inv.transpose() * n).norm();
}

} // namespace vasotherm
