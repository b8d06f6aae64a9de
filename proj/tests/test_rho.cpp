// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/rho_profile.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace vasotherm;

namespace {

// Independent quadrature oracle: adaptive Simpson on the mollification
// integral, sharing nothing with the library path but the profile formulas.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol)
{
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), tol, 48);
}

double oracle_rho(const RhoProfile& p, double R, double r)
{
    // Integrate in 8 panels so the breakpoints of the base profile never
    // straddle a panel poorly.
    double acc = 0.0;
    const double d = p.delta();
    for (int k = 0; k < 8; ++k) {
        const double a = -d + 2.0 * d * k / 8.0;
        const double b = -d + 2.0 * d * (k + 1) / 8.0;
        acc += adaptive([&](double u) { return p.base_profile(R, r - u) * p.mollifier(u); }, a, b,
                        1e-13);
    }
    return acc;
}

double oracle_rho_r(const RhoProfile& p, double R, double r)
{
    double acc = 0.0;
    const double d = p.delta();
    for (int k = 0; k < 8; ++k) {
        const double a = -d + 2.0 * d * k / 8.0;
        const double b = -d + 2.0 * d * (k + 1) / 8.0;
        acc += adaptive([&](double u) { return p.base_slope_r(R, r - u) * p.mollifier(u); }, a, b,
                        1e-13);
    }
    return acc;
}

} // namespace

TEST_CASE("profile equals the identity at the reference radius slice")
{
    RhoProfile p(0.15, 0.35, 0.25, 0.04);
    // rho(R0, r) = r: every branch slope is one when the target equals the
    // reference radius, and the even unit-mass kernel preserves affine data.
    for (double r : {0.05, 0.12, 0.2, 0.25, 0.3, 0.42, 0.49}) {
        const auto e = p.evaluate(0.25, r);
        CHECK(e.rho == doctest::Approx(r).epsilon(1e-11));
        CHECK(e.d_r == doctest::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("profile maps the reference interface onto the target radius")
{
    RhoProfile p(0.15, 0.35, 0.25, 0.04);
    for (double R : {0.15, 0.2, 0.27, 0.35}) {
        const auto e = p.evaluate(R, 0.25);
        CHECK(std::abs(e.rho - R) < 1e-11);
        CHECK(std::abs(e.d_R - 1.0) < 1e-11);
    }
}

TEST_CASE("identity outside the transition zone")
{
    RhoProfile p(0.15, 0.35, 0.25, 0.04);
    for (double R : {0.18, 0.3}) {
        for (double r : {0.0, 0.01, 0.03, 0.47, 0.499}) {
            const auto e = p.evaluate(R, r);
            CHECK(e.rho == r);
            CHECK(e.d_r == 1.0);
            CHECK(e.d_R == 0.0);
        }
    }
}

TEST_CASE("interior branch slope matches the closed form")
{
    // With the kernel support inside one linear branch, the slope integral
    // reduces to the branch slope times the kernel mass.
    const double r1 = 0.15, r2 = 0.35, r0 = 0.25, d = 0.04;
    RhoProfile p(r1, r2, r0, d);
    const double R = 0.31;
    const double r = 0.14; // support [0.10, 0.18] inside [r1-2d, r0-d] = [0.07, 0.21]
    const double expected = (R - r1 + d) / (r0 - r1 + d);
    const auto e = p.evaluate(R, r);
    CHECK(std::abs(e.d_r - expected) < 1e-10);
    CHECK(std::abs(oracle_rho_r(p, R, r) - expected) < 1e-10);
}

TEST_CASE("direct evaluation agrees with the adaptive oracle")
{
    RhoProfile p(0.15, 0.35, 0.25, 0.04);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> UR(0.15, 0.35), Ur(0.031, 0.469);
    for (int i = 0; i < 60; ++i) {
        const double R = UR(rng), r = Ur(rng);
        const auto e = p.evaluate(R, r);
        CHECK(std::abs(e.rho - oracle_rho(p, R, r)) < 1e-10);
        CHECK(std::abs(e.d_r - oracle_rho_r(p, R, r)) < 1e-10);
    }
}

TEST_CASE("derivatives of the direct evaluation match finite differences")
{
    RhoProfile p(0.15, 0.35, 0.25, 0.04);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> UR(0.16, 0.34), Ur(0.05, 0.45);
    const double h = 1e-5;
    for (int i = 0; i < 25; ++i) {
        const double R = UR(rng), r = Ur(rng);
        const auto e = p.evaluate(R, r);
        const double fd_r = (p.evaluate(R, r + h).rho - p.evaluate(R, r - h).rho) / (2 * h);
        const double fd_R = (p.evaluate(R + h, r).rho - p.evaluate(R - h, r).rho) / (2 * h);
        const double fd_rr = (p.evaluate(R, r + h).d_r - p.evaluate(R, r - h).d_r) / (2 * h);
        const double fd_Rr = (p.evaluate(R + h, r).d_r - p.evaluate(R - h, r).d_r) / (2 * h);
        CHECK(std::abs(fd_r - e.d_r) < 2e-6 * std::max(1.0, std::abs(e.d_r)));
        CHECK(std::abs(fd_R - e.d_R) < 2e-6 * std::max(1.0, std::abs(e.d_R)));
        CHECK(std::abs(fd_rr - e.d_rr) < 2e-5 * std::max(1.0, std::abs(e.d_rr)));
        CHECK(std::abs(fd_Rr - e.d_Rr) < 2e-5 * std::max(1.0, std::abs(e.d_Rr)));
    }
}

TEST_CASE("table reproduces node values and interpolates smoothly")
{
    RhoProfile p(0.15, 0.35, 0.25, 0.04);
    RhoGridSpec spec;
    spec.n_radius = 17;
    spec.n_r = 201;
    RhoTable tab(p, spec);

    CHECK(tab.slope_min() > 0.0);
    CHECK(tab.slope_min() == doctest::Approx(2.0 / 7.0).epsilon(1e-6));

    // Node-exactness.
    const auto& Rn = tab.radius_nodes();
    const auto& rn = tab.r_nodes();
    for (std::size_t i = 0; i < Rn.size(); i += 5)
        for (std::size_t j = 0; j < rn.size(); j += 37) {
            const auto node = tab.node_value(int(i), int(j));
            const auto direct = p.evaluate(Rn[i], rn[j]);
            CHECK(std::abs(node.rho - direct.rho) < 1e-14);
        }

    // Off-node interpolation error stays well below the deformation scale.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> UR(0.15, 0.35), Ur(0.04, 0.46);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double R = UR(rng), r = Ur(rng);
        worst = std::max(worst, std::abs(tab.evaluate(R, r).rho - p.evaluate(R, r).rho));
    }
    CHECK(worst < 1e-6);

    // Interface slice through the table stays exact in the R direction
    // (the profile is affine in the target radius).
    for (double R : {0.152, 0.2489, 0.3333}) {
        const auto e = tab.evaluate(R, 0.25);
        CHECK(std::abs(e.rho - R) < 1e-10);
        CHECK(std::abs(e.d_R - 1.0) < 1e-10);
    }
}
