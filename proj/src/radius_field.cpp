// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/radius_field.hpp"

#include "vasotherm/common.hpp"

#include <algorithm>
#include <cmath>

namespace vasotherm {

AxialHermite::AxialHermite(std::vector<double> nodes, std::vector<double> values,
                           std::vector<double> slopes)
    : nodes_(std::move(nodes)), values_(std::move(values)), slopes_(std::move(slopes))
{
    require(nodes_.size() >= 2 && nodes_.size() == values_.size() &&
                nodes_.size() == slopes_.size(),
            "axial interpolant: inconsistent sizes");
}

void AxialHermite::eval(double x, double& value, double& slope) const
{
    const int n = int(nodes_.size());
    int hi = int(std::upper_bound(nodes_.begin(), nodes_.end(), x) - nodes_.begin());
    const int i = std::clamp(hi - 1, 0, n - 2);
    const double h = nodes_[i + 1] - nodes_[i];
    const double s = (x - nodes_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    value = h00 * values_[i] + h * h10 * slopes_[i] + h01 * values_[i + 1] +
            h * h11 * slopes_[i + 1];
    const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
    slope = d00 * values_[i] + d10 * slopes_[i] + d01 * values_[i + 1] + d11 * slopes_[i + 1];
}

double AxialHermite::value(double x) const
{
    double v, s;
    eval(x, v, s);
    return v;
}

SampledRadiusSlice::SampledRadiusSlice(double t, AxialHermite radius, AxialHermite rate)
    : t_(t), radius_(std::move(radius)), rate_(std::move(rate))
{
}

RadiusSample SampledRadiusSlice::at(double t, double x1) const
{
    require(std::abs(t - t_) < 1e-9 * (1.0 + std::abs(t_)),
            "radius slice queried away from its time level");
    RadiusSample s;
    radius_.eval(x1, s.value, s.d_x);
    rate_.eval(x1, s.d_t, s.d_tx);
    return s;
}

} // namespace vasotherm
