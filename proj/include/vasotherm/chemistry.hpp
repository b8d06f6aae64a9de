// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/fem.hpp"
#include "vasotherm/params.hpp"
#include "vasotherm/radius_field.hpp"

#include <vector>

namespace vasotherm {

// Mean of a piecewise-linear field over its subdomain in the reference
// configuration (the pulled-back average carries no Jacobian weight).
double spatial_average(const ReferenceMesh& mesh, const ScalarSpace& space,
                       const Eigen::VectorXd& values);

double p1_integral(const ReferenceMesh& mesh, const ScalarSpace& space,
                   const Eigen::VectorXd& values);
double p1_l2_norm_sq(const ReferenceMesh& mesh, const ScalarSpace& space,
                     const Eigen::VectorXd& values);

// Time series of the spatially averaged tissue temperature, extended by a
// constant plateau for nonpositive times (the average of the initial data).
// The temporal convolution against the causal kernel only ever looks
// backward, so appending new samples never changes past values.
class AveragedHistory {
public:
    AveragedHistory() = default;
    AveragedHistory(double plateau_value, double window);

    void append(double t, double value);
    // Drop every node with t > t_keep (restart support).
    void truncate(double t_keep);

    double plateau() const { return plateau_; }
    double window() const { return window_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

    // Piecewise-linear evaluation; plateau for s <= 0.
    double value_at(double s) const;

    // (K * T1)(t): kernel-weighted average over (t - window, t].
    double convolve(const ModelParams& params, double t) const;

private:
    double plateau_ = 0.0;
    double window_ = 0.0;
    std::vector<double> times_;
    std::vector<double> values_;
};

// Closed-form integration of the wall-chemical concentration along the axis.
// Each node carries the concentration and its axial derivative; increments
// use the variation-of-constants formula with exponentially exact weights
// for data that is linear in time between samples.
class ChemistryEngine {
public:
    struct State {
        double t = 0.0;
        std::vector<double> c;
        std::vector<double> c_x;
    };

    ChemistryEngine(const ModelParams& params, int n_axial_nodes);

    State initial_state() const;

    // Advance to t_next; the history must cover (t_next - window, t_next].
    State advance(const State& from, double t_next, const AveragedHistory& history) const;

    // Radius profile and rates at the state's time level.
    SampledRadiusSlice radius_slice(const State& state, const AveragedHistory& history) const;

    const std::vector<double>& nodes() const { return nodes_; }
    const ModelParams& params() const { return *params_; }

private:
    const ModelParams* params_;
    std::vector<double> nodes_;
};

} // namespace vasotherm
