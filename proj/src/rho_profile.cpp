// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/rho_profile.hpp"

#include "vasotherm/common.hpp"
#include "vasotherm/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace vasotherm {

RhoProfile::RhoProfile(double r_min, double r_max, double r_ref, double delta)
    : r_min_(r_min), r_max_(r_max), r_ref_(r_ref), delta_(delta)
{
    require(0.0 < r_min && r_min < r_max && r_max < 0.5, "radial profile: invalid radius bounds");
    require(r_ref >= r_min && r_ref <= r_max, "radial profile: reference radius out of range");
    require(delta > 0.0 && r_min - 3.0 * delta > 0.0 && r_max + 3.0 * delta < 0.5,
            "radial profile: mollification width too large");
    const auto g = gauss_legendre(64);
    const double mass = gauss_integrate(g, -1.0, 1.0, [](double x) {
        const double s = 1.0 - x * x;
        return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
    });
    bump_norm_ = 1.0 / mass;
}

double RhoProfile::base_profile(double R, double r) const
{
    const double b1 = r_min_ - 2.0 * delta_;
    const double b2 = r_ref_ - delta_;
    const double b3 = r_ref_ + delta_;
    const double b4 = r_max_ + 2.0 * delta_;
    if (r <= b1)
        return r;
    if (r <= b2)
        return (R - r_min_ + delta_) / (r_ref_ - r_min_ + delta_) * (r - b1) + b1;
    if (r <= b3)
        return (r - r_ref_) + R;
    if (r <= b4)
        return (r_max_ - R + delta_) / (r_max_ - r_ref_ + delta_) * (r - b4) + b4;
    return r;
}

double RhoProfile::base_slope_r(double R, double r) const
{
    const double b1 = r_min_ - 2.0 * delta_;
    const double b2 = r_ref_ - delta_;
    const double b3 = r_ref_ + delta_;
    const double b4 = r_max_ + 2.0 * delta_;
    if (r <= b1)
        return 1.0;
    if (r <= b2)
        return (R - r_min_ + delta_) / (r_ref_ - r_min_ + delta_);
    if (r <= b3)
        return 1.0;
    if (r <= b4)
        return (r_max_ - R + delta_) / (r_max_ - r_ref_ + delta_);
    return 1.0;
}

double RhoProfile::base_slope_R(double r) const
{
    const double b1 = r_min_ - 2.0 * delta_;
    const double b2 = r_ref_ - delta_;
    const double b3 = r_ref_ + delta_;
    const double b4 = r_max_ + 2.0 * delta_;
    if (r <= b1)
        return 0.0;
    if (r <= b2)
        return (r - b1) / (r_ref_ - r_min_ + delta_);
    if (r <= b3)
        return 1.0;
    if (r <= b4)
        return -(r - b4) / (r_max_ - r_ref_ + delta_);
    return 0.0;
}

double RhoProfile::base_slope_Rr(double r) const
{
    const double b1 = r_min_ - 2.0 * delta_;
    const double b2 = r_ref_ - delta_;
    const double b3 = r_ref_ + delta_;
    const double b4 = r_max_ + 2.0 * delta_;
    if (r <= b1)
        return 0.0;
    if (r <= b2)
        return 1.0 / (r_ref_ - r_min_ + delta_);
    if (r <= b3)
        return 0.0;
    if (r <= b4)
        return -1.0 / (r_max_ - r_ref_ + delta_);
    return 0.0;
}

double RhoProfile::mollifier(double u) const
{
    const double xi = u / delta_;
    const double s = 1.0 - xi * xi;
    if (s <= 0.0)
        return 0.0;
    return bump_norm_ / delta_ * std::exp(-1.0 / s);
}

double RhoProfile::mollifier_deriv(double u) const
{
    const double xi = u / delta_;
    const double s = 1.0 - xi * xi;
    if (s <= 0.0)
        return 0.0;
    // d/du of exp(-1/(1-(u/d)^2)) = value * (-2 u / d^2) / s^2
    return mollifier(u) * (-2.0 * u / (delta_ * delta_)) / (s * s);
}

RhoEval RhoProfile::evaluate(double R, double r) const
{
    RhoEval out;
    if (r <= zone_lo() || r >= zone_hi()) {
        out.rho = r;
        out.d_r = 1.0;
        return out;
    }

    // Integrate f(r-u) * {mollifier, mollifier'}(u) over the kernel support,
    // splitting at the images of the base-profile breakpoints so each piece
    // has a polynomial integrand times the smooth kernel.
    std::vector<double> cuts = {-delta_, delta_};
    const double bps[4] = {r_min_ - 2.0 * delta_, r_ref_ - delta_, r_ref_ + delta_,
                           r_max_ + 2.0 * delta_};
    for (double bp : bps) {
        const double u = r - bp;
        if (u > -delta_ && u < delta_)
            cuts.push_back(u);
    }
    std::sort(cuts.begin(), cuts.end());

    static const GaussRule g = gauss_legendre(24);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        if (b - a < 1e-15)
            continue;
        // Panel width at most delta/3 keeps the flat kernel tails resolved.
        const int n_panels = std::max(2, int(std::ceil((b - a) / (delta_ / 3.0))));
        for (int half = 0; half < n_panels; ++half) {
            const double pa = a + (b - a) * half / n_panels;
            const double pb = a + (b - a) * (half + 1) / n_panels;
            const double mid = 0.5 * (pa + pb), hw = 0.5 * (pb - pa);
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                const double u = mid + hw * g.nodes[i];
                const double w = hw * g.weights[i];
                const double s = r - u;
                const double ker = mollifier(u);
                const double kerd = mollifier_deriv(u);
                const double f = base_profile(R, s);
                const double fr = base_slope_r(R, s);
                const double fR = base_slope_R(s);
                const double fRr = base_slope_Rr(s);
                out.rho += w * f * ker;
                out.d_r += w * fr * ker;
                out.d_R += w * fR * ker;
                out.d_Rr += w * fRr * ker;
                out.d_rr += w * fr * kerd;
            }
        }
    }
    out.d_RR = 0.0; // base profile is affine in the target radius
    return out;
}

RhoTable::RhoTable(const RhoProfile& profile, const RhoGridSpec& spec)
{
    require(spec.n_radius >= 4 && spec.n_r >= 4, "rho table: need at least 4 nodes per direction");
    zone_lo_ = profile.zone_lo();
    zone_hi_ = profile.zone_hi();

    const double r_lo = spec.r_lo >= 0.0 ? spec.r_lo : zone_lo_;
    const double r_hi = spec.r_hi >= 0.0 ? spec.r_hi : zone_hi_;
    require(r_hi > r_lo, "rho table: empty radial range");

    radius_nodes_.resize(spec.n_radius);
    for (int i = 0; i < spec.n_radius; ++i)
        radius_nodes_[i] = profile.r_min() +
                           (profile.r_max() - profile.r_min()) * i / double(spec.n_radius - 1);

    r_nodes_.resize(spec.n_r);
    for (int j = 0; j < spec.n_r; ++j)
        r_nodes_[j] = r_lo + (r_hi - r_lo) * j / double(spec.n_r - 1);
    // Snap the nearest interior node onto the reference radius so that the
    // interface values are node-exact.
    if (profile.r_ref() > r_lo && profile.r_ref() < r_hi) {
        std::size_t best = 1;
        double dist = 1e300;
        for (std::size_t j = 1; j + 1 < r_nodes_.size(); ++j) {
            const double d = std::abs(r_nodes_[j] - profile.r_ref());
            if (d < dist) {
                dist = d;
                best = j;
            }
        }
        r_nodes_[best] = profile.r_ref();
    }

    const std::size_t n = radius_nodes_.size() * r_nodes_.size();
    v_.resize(n);
    vR_.resize(n);
    vr_.resize(n);
    vRR_.resize(n);
    vRr_.resize(n);
    vrr_.resize(n);
    slope_min_ = 1e300;
    for (std::size_t i = 0; i < radius_nodes_.size(); ++i)
        for (std::size_t j = 0; j < r_nodes_.size(); ++j) {
            const RhoEval e = profile.evaluate(radius_nodes_[i], r_nodes_[j]);
            const std::size_t k = i * r_nodes_.size() + j;
            v_[k] = e.rho;
            vR_[k] = e.d_R;
            vr_[k] = e.d_r;
            vRR_[k] = e.d_RR;
            vRr_[k] = e.d_Rr;
            vrr_[k] = e.d_rr;
            slope_min_ = std::min(slope_min_, e.d_r);
        }
}

RhoEval RhoTable::node_value(int i_radius, int i_r) const
{
    const std::size_t k = std::size_t(i_radius) * r_nodes_.size() + std::size_t(i_r);
    return {v_[k], vR_[k], vr_[k], vRR_[k], vRr_[k], vrr_[k]};
}

namespace {

// Cubic Lagrange stencil start and weights for a query on a sorted grid.
void cubic_weights(const std::vector<double>& nodes, double x, int& start, double w[4])
{
    const int n = int(nodes.size());
    int hi = int(std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
    int cell = std::clamp(hi - 1, 0, n - 2);
    start = std::clamp(cell - 1, 0, n - 4);
    for (int a = 0; a < 4; ++a) {
        double num = 1.0, den = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b)
                continue;
            num *= x - nodes[start + b];
            den *= nodes[start + a] - nodes[start + b];
        }
        w[a] = num / den;
    }
}

} // namespace

double RhoTable::interp(const std::vector<double>& tab, double radius, double r) const
{
    int i0, j0;
    double wi[4], wj[4];
    cubic_weights(radius_nodes_, radius, i0, wi);
    cubic_weights(r_nodes_, r, j0, wj);
    const std::size_t nr = r_nodes_.size();
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        const double* row = tab.data() + std::size_t(i0 + a) * nr + j0;
        acc += wi[a] * (wj[0] * row[0] + wj[1] * row[1] + wj[2] * row[2] + wj[3] * row[3]);
    }
    return acc;
}

RhoEval RhoTable::evaluate(double radius, double r) const
{
    RhoEval out;
    if (r <= zone_lo_ || r >= zone_hi_) {
        out.rho = r;
        out.d_r = 1.0;
        return out;
    }
    out.rho = interp(v_, radius, r);
    out.d_R = interp(vR_, radius, r);
    out.d_r = interp(vr_, radius, r);
    out.d_RR = interp(vRR_, radius, r);
    out.d_Rr = interp(vRr_, radius, r);
    out.d_rr = interp(vrr_, radius, r);
    return out;
}

} // namespace vasotherm
