// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/params.hpp"

#include "vasotherm/common.hpp"
#include "vasotherm/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace vasotherm {

double ProductionSpec::value(double x1, double y, double length) const
{
    if (mode == Mode::Constant)
        return const_value;
    const double axial = 1.0 + axial_mod * std::cos(M_PI * x1 / length);
    return g0 * axial * 0.5 * (1.0 + std::tanh((y - y_star) / width));
}

double ProductionSpec::d_x1(double x1, double y, double length) const
{
    if (mode == Mode::Constant)
        return 0.0;
    const double axial = -axial_mod * M_PI / length * std::sin(M_PI * x1 / length);
    return g0 * axial * 0.5 * (1.0 + std::tanh((y - y_star) / width));
}

double ProductionSpec::d_y(double x1, double y, double length) const
{
    if (mode == Mode::Constant)
        return 0.0;
    const double axial = 1.0 + axial_mod * std::cos(M_PI * x1 / length);
    const double th = std::tanh((y - y_star) / width);
    return g0 * axial * 0.5 * (1.0 - th * th) / width;
}

double ProductionSpec::bound() const
{
    if (mode == Mode::Constant)
        return std::abs(const_value);
    return std::abs(g0) * (1.0 + std::abs(axial_mod));
}

double RadiusMapSpec::value(double y, double r_min, double r_max) const
{
    if (mode == Mode::Constant)
        return const_value;
    return r_min + (r_max - r_min) / (1.0 + std::exp(-(y - c_star) / width));
}

double RadiusMapSpec::deriv(double y, double r_min, double r_max) const
{
    if (mode == Mode::Constant)
        return 0.0;
    const double e = std::exp(-(y - c_star) / width);
    const double d = 1.0 + e;
    return (r_max - r_min) * e / (width * d * d);
}

double RadiusMapSpec::deriv2(double y, double r_min, double r_max) const
{
    if (mode == Mode::Constant)
        return 0.0;
    const double e = std::exp(-(y - c_star) / width);
    const double d = 1.0 + e;
    return (r_max - r_min) * e * (e - 1.0) / (width * width * d * d * d);
}

double KernelSpec::value(double tau, double window) const
{
    if (tau <= 0.0 || tau >= window)
        return 0.0;
    const double w5 = std::pow(window, 5);
    const double s = window - tau;
    return 30.0 / w5 * tau * tau * s * s;
}

double ModelParams::eval_G(double x1, double y) const
{
    require(x1 >= -1e-12 && x1 <= length + 1e-12, "eval_G: axial position out of [0, L]");
    return production.value(x1, y, length);
}

double ModelParams::eval_G_dx1(double x1, double y) const
{
    require(x1 >= -1e-12 && x1 <= length + 1e-12, "eval_G_dx1: axial position out of [0, L]");
    return production.d_x1(x1, y, length);
}

double ModelParams::eval_H(double y) const { return radius_map.value(y, r_min, r_max); }
double ModelParams::eval_H_deriv(double y) const { return radius_map.deriv(y, r_min, r_max); }
double ModelParams::eval_H_deriv2(double y) const { return radius_map.deriv2(y, r_min, r_max); }
double ModelParams::eval_kernel(double tau) const { return kernel.value(tau, window); }

bool ValidationReport::passed() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

std::string ValidationReport::summary() const
{
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "[ ok ] " : "[FAIL] ") << c.name;
        if (!c.detail.empty())
            os << "  (" << c.detail << ")";
        os << "\n";
    }
    return os.str();
}

std::vector<std::string> ValidationReport::failures() const
{
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.pass)
            out.push_back(c.name);
    return out;
}

namespace {

ValidationCheck check(const std::string& name, bool pass, double measured,
                      const std::string& detail = {})
{
    return {name, pass, measured, detail};
}

double min_eigenvalue(const Eigen::Matrix3d& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (m + m.transpose()));
    return es.eigenvalues().minCoeff();
}

} // namespace

ValidationReport validate(const ModelParams& p)
{
    ValidationReport rep;
    auto& cs = rep.checks;

    cs.push_back(check("0 < R1 < R2 < 1/2", p.r_min > 0.0 && p.r_min < p.r_max && p.r_max < 0.5,
                       p.r_max));
    cs.push_back(check("R0 in [R1, R2]", p.r_ref >= p.r_min && p.r_ref <= p.r_max, p.r_ref));
    cs.push_back(check("delta > 0", p.delta > 0.0, p.delta));
    cs.push_back(check("R2 + 3*delta < 1/2", p.r_max + 3.0 * p.delta < 0.5,
                       p.r_max + 3.0 * p.delta));
    cs.push_back(check("R1 - 3*delta > 0", p.r_min - 3.0 * p.delta > 0.0,
                       p.r_min - 3.0 * p.delta));
    cs.push_back(check("L > 0", p.length > 0.0, p.length));
    cs.push_back(check("T_final > 0", p.t_final > 0.0, p.t_final));
    cs.push_back(check("mu > 0", p.viscosity > 0.0, p.viscosity));
    cs.push_back(check("k > 0", p.decay_rate > 0.0, p.decay_rate));
    cs.push_back(check("alpha > 0", p.heat_transfer > 0.0, p.heat_transfer));
    cs.push_back(check("0 < gamma < T_final", p.window > 0.0 && p.window < p.t_final, p.window));

    const bool kf_sym = (p.k_fluid - p.k_fluid.transpose()).norm() < 1e-12 * (1.0 + p.k_fluid.norm());
    const bool ks_sym = (p.k_solid - p.k_solid.transpose()).norm() < 1e-12 * (1.0 + p.k_solid.norm());
    const double kf_min = min_eigenvalue(p.k_fluid);
    const double ks_min = min_eigenvalue(p.k_solid);
    cs.push_back(check("Kf symmetric positive definite", kf_sym && kf_min > 0.0, kf_min,
                       "min eigenvalue"));
    cs.push_back(check("Ks symmetric positive definite", ks_sym && ks_min > 0.0, ks_min,
                       "min eigenvalue"));

    // Kernel: nonnegative, causal support inside [0, gamma), unit mass.
    {
        bool nonneg = true, causal = true;
        const auto g = gauss_legendre(48);
        double mass = 0.0;
        if (p.window > 0.0) {
            mass = gauss_integrate(g, 0.0, p.window,
                                   [&](double t) { return p.eval_kernel(t); });
            for (int i = 0; i <= 200; ++i) {
                const double t = p.window * i / 200.0;
                if (p.eval_kernel(t) < -1e-14)
                    nonneg = false;
            }
            for (double t : {-0.5 * p.window, -1e-6, p.window, 1.5 * p.window})
                if (std::abs(p.eval_kernel(t)) > 1e-14)
                    causal = false;
        }
        cs.push_back(check("kernel nonnegative with support in [0, gamma)", nonneg && causal,
                           0.0));
        cs.push_back(check("kernel has unit mass", std::abs(mass - 1.0) < 1e-10, mass,
                           "integral over the support"));
    }

    // Radius map confined to [R1, R2] with bounded slope.
    {
        bool in_range = true;
        double max_slope = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double y = -20.0 + 40.0 * i / 400.0;
            const double h = p.eval_H(y);
            if (h < p.r_min - 1e-12 || h > p.r_max + 1e-12)
                in_range = false;
            max_slope = std::max(max_slope, std::abs(p.eval_H_deriv(y)));
        }
        cs.push_back(check("R1 <= H(y) <= R2", in_range, max_slope, "max |H'|"));
    }

    // Production bounded.
    {
        const double bound = p.production.bound();
        double max_abs = 0.0;
        bool ok = true;
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= 40; ++j) {
                const double x1 = p.length * i / 40.0;
                const double y = -20.0 + 40.0 * j / 40.0;
                const double v = p.production.value(x1, y, p.length);
                max_abs = std::max(max_abs, std::abs(v));
                if (std::abs(v) > bound + 1e-12)
                    ok = false;
            }
        cs.push_back(check("G bounded", ok, max_abs, "sup |G| on samples"));
    }

    return rep;
}

} // namespace vasotherm
