// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace vasotherm {

// Target interface radius along the vessel axis, with the derivatives the
// deformation needs.
struct RadiusSample {
    double value = 0.0; // R(t, x1)
    double d_t = 0.0;
    double d_x = 0.0;
    double d_tx = 0.0;
};

class RadiusField {
public:
    virtual ~RadiusField() = default;
    virtual RadiusSample at(double t, double x1) const = 0;
};

class ConstantRadiusField : public RadiusField {
public:
    explicit ConstantRadiusField(double radius) : radius_(radius) {}
    RadiusSample at(double, double) const override { return {radius_, 0.0, 0.0, 0.0}; }

private:
    double radius_;
};

// Analytic field from user closures (verification and manufactured cases).
class AnalyticRadiusField : public RadiusField {
public:
    using Fn = std::function<double(double, double)>;
    AnalyticRadiusField(Fn value, Fn d_t, Fn d_x, Fn d_tx)
        : value_(std::move(value)), d_t_(std::move(d_t)), d_x_(std::move(d_x)),
          d_tx_(std::move(d_tx))
    {
    }
    RadiusSample at(double t, double x1) const override
    {
        return {value_(t, x1), d_t_(t, x1), d_x_(t, x1), d_tx_(t, x1)};
    }

private:
    Fn value_, d_t_, d_x_, d_tx_;
};

// Cubic Hermite interpolation of nodal values and slopes on a 1-d grid.
class AxialHermite {
public:
    AxialHermite() = default;
    AxialHermite(std::vector<double> nodes, std::vector<double> values,
                 std::vector<double> slopes);

    void eval(double x, double& value, double& slope) const;
    double value(double x) const;

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& slopes() const { return slopes_; }

private:
    std::vector<double> nodes_, values_, slopes_;
};

// Radius profile at a single committed time level, interpolated along the
// axis from the chemistry grid. Queries must use the bound time.
class SampledRadiusSlice : public RadiusField {
public:
    SampledRadiusSlice(double t, AxialHermite radius, AxialHermite rate);

    RadiusSample at(double t, double x1) const override;
    double time() const { return t_; }

private:
    double t_;
    AxialHermite radius_; // R and dR/dx1
    AxialHermite rate_;   // dR/dt and d2R/dtdx1
};

} // namespace vasotherm
