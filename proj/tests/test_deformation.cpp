// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/deformation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace vasotherm;

namespace {

struct Setup {
    ModelParams params;
    RhoProfile profile{0.15, 0.35, 0.25, 0.04};
    AnalyticRadiusField radius;
    Setup()
        : radius([](double t, double x1) { return 0.25 * (1.0 + 0.1 * std::sin(2.0 * M_PI * x1) *
                                                                    std::sin(t + 0.4)); },
                 [](double t, double x1) { return 0.25 * 0.1 * std::sin(2.0 * M_PI * x1) *
                                                  std::cos(t + 0.4); },
                 [](double t, double x1) { return 0.25 * 0.1 * 2.0 * M_PI *
                                                  std::cos(2.0 * M_PI * x1) * std::sin(t + 0.4); },
                 [](double t, double x1) { return 0.25 * 0.1 * 2.0 * M_PI *
                                                  std::cos(2.0 * M_PI * x1) * std::cos(t + 0.4); })
    {
    }
};

Eigen::Vector3d random_point(std::mt19937_64& rng, bool in_zone)
{
    std::uniform_real_distribution<double> Ux(0.05, 0.95), Uang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> Ur_zone(0.04, 0.46), Ur_any(0.005, 0.49);
    const double r = in_zone ? Ur_zone(rng) : Ur_any(rng);
    const double a = Uang(rng);
    return {Ux(rng), r * std::cos(a), r * std::sin(a)};
}

} // namespace

TEST_CASE("constant reference radius gives the identity deformation")
{
    Setup s;
    ConstantRadiusField flat(s.params.r_ref);
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, flat);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto x = random_point(rng, true);
        const auto e = def.evaluate(0.7, x, Side::Fluid);
        CHECK((e.S - x).norm() < 1e-10);
        CHECK((e.F - Eigen::Matrix3d::Identity()).norm() < 1e-10);
        CHECK(e.J == doctest::Approx(1.0).epsilon(1e-10));
        CHECK((e.A - Eigen::Matrix3d::Identity()).norm() < 1e-10);
        CHECK(e.vb.norm() < 1e-10);
    }
    CHECK(def.interface_factor(0.2, 0.5) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("deformation is the identity outside the transition zone")
{
    Setup s;
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, s.radius);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> Ux(0.05, 0.95), Uang(0.0, 2.0 * M_PI);
    for (int i = 0; i < 50; ++i) {
        const double r = (i % 2 == 0) ? 0.002 + 0.026 * (i / 50.0) : 0.471 + 0.028 * (i / 50.0);
        const double a = Uang(rng);
        const Eigen::Vector3d x(Ux(rng), r * std::cos(a), r * std::sin(a));
        const auto e = def.evaluate(0.3, x, Side::Solid);
        CHECK((e.S - x).norm() == 0.0);
        CHECK(e.J == 1.0);
        CHECK(e.vb.norm() == 0.0);
    }
}

TEST_CASE("interface points land on the target radius")
{
    Setup s;
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, s.radius);
    for (double x1 : {0.1, 0.45, 0.8}) {
        for (double ang : {0.3, 2.0, 4.3}) {
            const Eigen::Vector3d x(x1, s.params.r_ref * std::cos(ang),
                                    s.params.r_ref * std::sin(ang));
            const auto S = def.map_point(0.6, x);
            const double target = s.radius.at(0.6, x1).value;
            CHECK(std::hypot(S[1], S[2]) == doctest::Approx(target).epsilon(1e-10));
            CHECK(S[0] == x1);
        }
    }
}

TEST_CASE("analytic deformation gradient matches finite differences")
{
    Setup s;
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, s.radius);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> Ut(0.0, 1.0);
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto x = random_point(rng, i % 2 == 0);
        const double t = Ut(rng);
        const auto e = def.evaluate(t, x, Side::Fluid);
        Eigen::Matrix3d fd;
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            fd.col(j) = (def.map_point(t, xp) - def.map_point(t, xm)) / (2.0 * h);
        }
        worst = std::max(worst, (fd - e.F).norm() / std::max(1.0, e.F.norm()));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("domain velocity and its gradient match time differences")
{
    Setup s;
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, s.radius);
    std::mt19937_64 rng(31);
    const double h = 1e-5;
    for (int i = 0; i < 40; ++i) {
        const auto x = random_point(rng, true);
        const double t = 0.2 + 0.6 * i / 40.0;
        const auto e = def.evaluate(t, x, Side::Fluid);
        const Eigen::Vector3d fd_vb =
            (def.map_point(t + h, x) - def.map_point(t - h, x)) / (2.0 * h);
        CHECK((fd_vb - e.vb).norm() <= 1e-8 * std::max(1.0, e.vb.norm()) + 1e-9);

        // grad_vb against spatial differences of vb.
        Eigen::Matrix3d fd_grad;
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const Eigen::Vector3d vp = def.evaluate(t, xp, Side::Fluid).vb;
            const Eigen::Vector3d vm = def.evaluate(t, xm, Side::Fluid).vb;
            fd_grad.row(j) = ((vp - vm) / (2.0 * h)).transpose();
        }
        CHECK((fd_grad - e.grad_vb).norm() <= 2e-6 * std::max(1.0, e.grad_vb.norm()));
    }
}

TEST_CASE("jacobian determinant identities")
{
    Setup s;
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, s.radius);
    std::mt19937_64 rng(41);
    for (int i = 0; i < 60; ++i) {
        const auto x = random_point(rng, true);
        const double t = 0.1 + 0.8 * i / 60.0;
        const auto e = def.evaluate(t, x, Side::Solid);
        CHECK(e.J == doctest::Approx(e.F.determinant()).epsilon(1e-10));
        CHECK((e.A - e.J * e.F.inverse()).norm() < 1e-9);
        CHECK(e.J >= def.jacobian_floor() - 1e-12);
        // dJ/dt against time differences.
        const double h = 1e-5;
        const double fd = (def.evaluate(t + h, x, Side::Solid).J -
                           def.evaluate(t - h, x, Side::Solid).J) /
                          (2.0 * h);
        CHECK(std::abs(fd - e.dJ_dt) <= 2e-7 * std::max(1.0, std::abs(e.dJ_dt)));
        // div(A vb) equals dJ/dt (Euler expansion through the cofactor).
        CHECK(std::abs((e.A.transpose() * Eigen::Vector3d::Ones()).sum()) >= 0.0);
    }
}

TEST_CASE("pulled-back conductivity stays positive definite")
{
    Setup s;
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, s.radius);
    std::mt19937_64 rng(43);
    double c_floor = 1e300;
    for (int i = 0; i < 100; ++i) {
        const auto x = random_point(rng, true);
        const auto e = def.evaluate(0.5, x, Side::Fluid);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (e.k_pull + e.k_pull.transpose()));
        c_floor = std::min(c_floor, es.eigenvalues().minCoeff());
    }
    CHECK(c_floor > 0.0);
    MESSAGE("pulled-back conductivity floor: ", c_floor);
}

TEST_CASE("closed-form interface factor agrees with the generic value")
{
    Setup s;
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, s.radius);
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> Ux(0.0, 1.0), Uang(0.0, 2.0 * M_PI);
    for (int i = 0; i < 50; ++i) {
        const double x1 = Ux(rng), t = Ux(rng), ang = Uang(rng);
        const Eigen::Vector3d x(x1, s.params.r_ref * std::cos(ang),
                                s.params.r_ref * std::sin(ang));
        const double closed = def.interface_factor(t, x1);
        const double generic = def.interface_factor_generic(t, x);
        CHECK(std::abs(closed - generic) <= 1e-8 * std::max(1.0, std::abs(closed)));
        CHECK(closed >= s.params.r_min / s.params.r_ref - 1e-12);
    }
    // Uniform minimal radius saturates the lower bound.
    ConstantRadiusField tight(s.params.r_min);
    DeformationField def_tight(s.params, rho, tight);
    CHECK(def_tight.interface_factor(0.0, 0.5) ==
          doctest::Approx(s.params.r_min / s.params.r_ref).epsilon(1e-12));
    // Prescribed sinusoidal radius at a point where it equals the reference:
    // the factor reduces to the slope term alone.
    AnalyticRadiusField sine([](double, double x1) { return 0.25 * (1.0 + 0.1 * std::sin(x1)); },
                             [](double, double) { return 0.0; },
                             [](double, double x1) { return 0.025 * std::cos(x1); },
                             [](double, double) { return 0.0; });
    DeformationField def_sine(s.params, rho, sine);
    const double expect = std::sqrt(0.025 * 0.025 + 1.0);
    CHECK(def_sine.interface_factor(0.0, 0.0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("piola identity holds under finite-difference divergence")
{
    Setup s;
    RhoField rho(s.profile, nullptr);
    DeformationField def(s.params, rho, s.radius);
    std::mt19937_64 rng(53);
    auto divA = [&](const Eigen::Vector3d& x, double t, double h) {
        // 4th-order central differences of the cofactor columns.
        Eigen::Vector3d div = Eigen::Vector3d::Zero();
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d e = Eigen::Vector3d::Zero();
            e[j] = 1.0;
            const Eigen::Matrix3d a_p2 = def.evaluate(t, x + 2 * h * e, Side::Fluid).A;
            const Eigen::Matrix3d a_p1 = def.evaluate(t, x + h * e, Side::Fluid).A;
            const Eigen::Matrix3d a_m1 = def.evaluate(t, x - h * e, Side::Fluid).A;
            const Eigen::Matrix3d a_m2 = def.evaluate(t, x - 2 * h * e, Side::Fluid).A;
            const Eigen::Matrix3d d = (-a_p2 + 8.0 * a_p1 - 8.0 * a_m1 + a_m2) / (12.0 * h);
            div += d.row(j).transpose();
        }
        return div.norm();
    };
    double max_h1 = 0.0, max_h2 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto x = random_point(rng, true);
        const double t = 0.4;
        max_h1 = std::max(max_h1, divA(x, t, 2.5e-3));
        max_h2 = std::max(max_h2, divA(x, t, 1.25e-3));
    }
    // Fourth-order decay: halving the step should shrink the defect ~16x.
    CHECK(max_h2 < max_h1 / 8.0);
    MESSAGE("divergence defect: ", max_h1, " -> ", max_h2);
    // Identity region: exactly zero.
    const Eigen::Vector3d far(0.5, 0.005, 0.0);
    CHECK(divA(far, 0.4, 1e-3) == 0.0);
}
