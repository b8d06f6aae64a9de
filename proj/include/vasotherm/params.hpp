// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace vasotherm {

// Production rate of the wall chemical as a function of axial position and
// averaged tissue temperature. Default family saturates smoothly in the
// temperature, optionally modulated along the axis.
struct ProductionSpec {
    enum class Mode { Saturating, Constant };
    Mode mode = Mode::Saturating;
    double g0 = 0.5;        // production scale
    double y_star = 0.5;    // half-activation temperature
    double width = 0.25;    // activation width
    double axial_mod = 0.0; // amplitude of the axial modulation
    double const_value = 0.5;

    double value(double x1, double y, double length) const;
    double d_x1(double x1, double y, double length) const;
    double d_y(double x1, double y, double length) const;
    double bound() const; // sup |G|
};

// Map from chemical concentration to vessel radius, confined to
// [r_min, r_max]. Default is a logistic profile.
struct RadiusMapSpec {
    enum class Mode { Logistic, Constant };
    Mode mode = Mode::Logistic;
    double c_star = 0.5;  // midpoint concentration
    double width = 0.2;   // transition width
    double const_value = 0.25;

    double value(double y, double r_min, double r_max) const;
    double deriv(double y, double r_min, double r_max) const;
    double deriv2(double y, double r_min, double r_max) const;
};

// Causal averaging kernel supported on [0, window). Default is the
// polynomial bump  30/w^5 * t^2 (w-t)^2,  normalized to unit mass.
struct KernelSpec {
    double value(double tau, double window) const;
};

// Normal-stress boundary data on the end faces, extended to the whole fluid
// domain as an affine pressure profile.
struct BoundaryStressSpec {
    double p_in = 10.0;
    double p_out = 0.0;

    double value(double x1, double length) const
    {
        return p_in + (p_out - p_in) * x1 / length;
    }
    Eigen::Vector3d gradient(double length) const
    {
        return {(p_out - p_in) / length, 0.0, 0.0};
    }
};

// All model constants and user supplied function families. Immutable after
// validation; safe to share across threads.
struct ModelParams {
    // Geometry of the reference configuration.
    double r_min = 0.15;  // minimal vessel radius
    double r_max = 0.35;  // maximal vessel radius
    double r_ref = 0.25;  // radius of the reference interface
    double delta = 0.04;  // mollification half-width of the radial profile
    double length = 1.0;  // axial extent

    // Time horizon and physical constants (nondimensional).
    double t_final = 0.5;
    double viscosity = 1.0;      // dynamic viscosity of the fluid
    double decay_rate = 1.0;     // degradation rate of the wall chemical
    double heat_transfer = 1.0;  // interface heat-transfer coefficient
    double window = 0.1;         // length of the temporal averaging window

    Eigen::Matrix3d k_fluid = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d k_solid = Eigen::Matrix3d::Identity();

    KernelSpec kernel;
    ProductionSpec production;
    RadiusMapSpec radius_map;
    BoundaryStressSpec boundary_stress;
    double inflow_temperature = 1.0;

    // Spatially constant initial data. The default concentration sits at the
    // logistic midpoint, so the initial radius equals the reference radius.
    double c0 = 0.5;
    double theta_f0 = 0.0;
    double theta_s0 = 0.0;

    // Convenience evaluators for the families above.
    double eval_G(double x1, double y) const;
    double eval_G_dx1(double x1, double y) const;
    double eval_H(double y) const;
    double eval_H_deriv(double y) const;
    double eval_H_deriv2(double y) const;
    double eval_kernel(double tau) const;
};

struct ValidationCheck {
    std::string name;     // the violated/verified constraint, as a formula
    bool pass = false;
    double measured = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed() const;
    std::string summary() const;
    std::vector<std::string> failures() const;
};

// Checks every structural constraint on the data: radius ordering and
// clearance from the outer box, positive rates, SPD conductivities, unit
// kernel mass with causal support, radius map confinement, bounded
// production. Callers must refuse to simulate on failure.
ValidationReport validate(const ModelParams& p);

} // namespace vasotherm
