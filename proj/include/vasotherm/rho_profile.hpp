// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/params.hpp"

#include <vector>

namespace vasotherm {

// Pointwise values of the radial profile and its derivatives with respect to
// the target radius R and the reference radius r.
struct RhoEval {
    double rho = 0.0;
    double d_R = 0.0;
    double d_r = 0.0;
    double d_RR = 0.0;
    double d_Rr = 0.0;
    double d_rr = 0.0;
};

// The radial profile rho(R, r): a mollified piecewise-linear reshaping of the
// radial coordinate that moves the reference interface r = r_ref to the target
// radius R while leaving r outside (r_min - 3 delta, r_max + 3 delta)
// untouched. The mollifier is the standard bump of half-width delta, so the
// profile is smooth, strictly increasing in r, and equals the identity
// outside the transition zone exactly.
class RhoProfile {
public:
    RhoProfile(double r_min, double r_max, double r_ref, double delta);

    // Direct evaluation through adaptive piecewise Gauss quadrature of the
    // mollification integral. Exact identity short-circuit outside the zone.
    RhoEval evaluate(double target_radius, double r) const;

    // The piecewise-linear profile being mollified, and its slopes.
    double base_profile(double target_radius, double r) const;
    double base_slope_r(double target_radius, double r) const;
    double base_slope_R(double r) const; // d/dR, independent of R
    double base_slope_Rr(double r) const;

    // Normalized bump kernel of half-width delta and its derivative.
    double mollifier(double u) const;
    double mollifier_deriv(double u) const;

    double zone_lo() const { return r_min_ - 3.0 * delta_; }
    double zone_hi() const { return r_max_ + 3.0 * delta_; }
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    double r_ref() const { return r_ref_; }
    double delta() const { return delta_; }

private:
    double r_min_, r_max_, r_ref_, delta_;
    double bump_norm_; // 1 / integral of the unscaled bump
};

struct RhoGridSpec {
    int n_radius = 33;  // nodes in the target-radius direction
    int n_r = 801;      // nodes in the reference-radius direction
    double r_lo = -1.0; // default: transition zone
    double r_hi = -1.0;
};

// Tabulated profile with cubic interpolation, for the assembly hot path.
// Node values come from the quadrature of the mollification integral; the
// identity region is never interpolated (exact short-circuit).
class RhoTable {
public:
    RhoTable(const RhoProfile& profile, const RhoGridSpec& spec);

    RhoEval evaluate(double target_radius, double r) const;

    // Measured minimum of d_r rho over the grid (the profile's monotonicity
    // constant). Positive for every valid parameter set.
    double slope_min() const { return slope_min_; }

    const std::vector<double>& radius_nodes() const { return radius_nodes_; }
    const std::vector<double>& r_nodes() const { return r_nodes_; }
    RhoEval node_value(int i_radius, int i_r) const;

    double zone_lo() const { return zone_lo_; }
    double zone_hi() const { return zone_hi_; }

private:
    std::vector<double> radius_nodes_;
    std::vector<double> r_nodes_;
    // Row-major tables [i_radius * n_r + i_r] for each derivative order.
    std::vector<double> v_, vR_, vr_, vRR_, vRr_, vrr_;
    double zone_lo_ = 0.0, zone_hi_ = 0.0;
    double slope_min_ = 0.0;

    double interp(const std::vector<double>& tab, double radius, double r) const;
};

// Evaluation strategy shared by the deformation module: either through the
// table (fast) or through direct quadrature (reference path for oracles).
class RhoField {
public:
    RhoField() = default;
    RhoField(const RhoProfile& profile, const RhoTable* table)
        : profile_(&profile), table_(table)
    {
    }

    RhoEval evaluate(double target_radius, double r) const
    {
        if (table_)
            return table_->evaluate(target_radius, r);
        return profile_->evaluate(target_radius, r);
    }

    bool valid() const { return profile_ != nullptr; }
    const RhoProfile& profile() const { return *profile_; }

private:
    const RhoProfile* profile_ = nullptr;
    const RhoTable* table_ = nullptr; // null selects the direct quadrature path
};

} // namespace vasotherm
