// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/chemistry.hpp"
#include "vasotherm/deformation.hpp"
#include "vasotherm/stokes.hpp"
#include "vasotherm/transport.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vasotherm {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    std::string detail;
};

struct CheckList {
    std::vector<CheckResult> checks;
    bool passed() const;
    void add(const std::string& name, bool pass, double measured, const std::string& detail = {});
    void merge(const CheckList& other);
    std::string table() const;
};

// Log-log least-squares slope of errors against scales.
double fit_order(const std::vector<double>& errors, const std::vector<double>& scales);

// Fourth-order central differences.
double fd_partial(const std::function<double(const Eigen::Vector3d&)>& f,
                  const Eigen::Vector3d& x, int dir, double h);
double fd_time(const std::function<double(double)>& f, double t, double h);
// Divergence of a matrix field, (div M)_i = sum_j d_j M_ji.
Eigen::Vector3d fd_div_matrix(const std::function<Eigen::Matrix3d(const Eigen::Vector3d&)>& field,
                              const Eigen::Vector3d& x, double h);
double fd_div_vector(const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& field,
                     const Eigen::Vector3d& x, double h);

// ---------------------------------------------------------------------------
// Manufactured problems
// ---------------------------------------------------------------------------

struct StokesMmsTargets {
    std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> velocity;
    std::function<Eigen::Matrix3d(double, const Eigen::Vector3d&)> velocity_grad; // (i,j)=d_i w_j
    std::function<double(double, const Eigen::Vector3d&)> pressure;
};

// Canned target with the velocity cut off smoothly around the interface so
// the discrete no-slip constraint is met exactly on every refinement level.
StokesMmsTargets canned_stokes_targets(const ModelParams& params);

// Source functions for the transformed saddle-point operator applied to the
// targets; divergences through fourth-order differences of the flux.
StokesManufacturedRhs stokes_mms_rhs(const StokesMmsTargets& targets,
                                     const DeformationField& def, double fd_step = 2e-4);

struct TransportMmsTargets {
    std::function<double(double, const Eigen::Vector3d&, Side)> theta;
    std::function<Eigen::Vector3d(double, const Eigen::Vector3d&, Side)> theta_grad;
    std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> velocity; // zero on interface
};

TransportMmsTargets canned_transport_targets(const ModelParams& params, bool linear_in_space);

TransportManufacturedRhs transport_mms_rhs(const TransportMmsTargets& targets,
                                           const DeformationField& def, double fd_step = 5e-4);

// Analytic radius fields for the manufactured studies.
std::unique_ptr<RadiusField> mms_radius_static(const ModelParams& params);
std::unique_ptr<RadiusField> mms_radius_moving(const ModelParams& params);

struct ConvergenceStudy {
    std::string name;
    std::vector<double> scales; // h or dt
    std::vector<double> errors_primary;
    std::vector<double> errors_secondary;
    double order_primary = 0.0;
    double order_secondary = 0.0;
};

// H1 velocity and L2 pressure errors over a refinement ladder.
ConvergenceStudy stokes_mms_study(const ModelParams& params, bool deformed_coefficients,
                                  const std::vector<MeshResolution>& levels, int quad_degree = 5);

// L2 temperature error at the final time; space ladder shrinks dt with h^2.
ConvergenceStudy transport_mms_space_study(const ModelParams& params,
                                           const std::vector<MeshResolution>& levels,
                                           double t_end, double dt_coarse, int quad_degree = 5);
ConvergenceStudy transport_mms_time_study(const ModelParams& params, const MeshResolution& res,
                                          double t_end, const std::vector<double>& steps,
                                          int quad_degree = 5);

// Residual of the discrete weak form at the interpolated target (sanity of
// the manufactured corrections).
double transport_mms_insertion_residual(const ModelParams& params, const MeshResolution& res,
                                        double t0, double dt);

// ---------------------------------------------------------------------------
// Verification sweeps
// ---------------------------------------------------------------------------

CheckList verify_params(unsigned seed);
CheckList verify_rho(const ModelParams& params, int n_radius, int n_r);
CheckList verify_coefficients(const ModelParams& params, int n_samples, unsigned seed);
CheckList verify_ode(const ModelParams& params);
CheckList verify_geometry(const ModelParams& params);
CheckList verify_fit_order();

// Full battery used by the CLI.
CheckList run_verification(const ModelParams& params, unsigned seed);

} // namespace vasotherm
