// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/chemistry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace vasotherm;

namespace {

double kernel_moment_oracle(const ModelParams& p, int order)
{
    // Plain composite Simpson, independent of the library quadrature.
    const int n = 4000;
    const double h = p.window / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * std::pow(t, order) * p.eval_kernel(t);
    }
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("spatial average of simple fields")
{
    ModelParams p;
    const auto mesh = build_reference_mesh(p, {4, 2, 1, 2});
    ScalarSpace solid(mesh, Subdomain::Solid);

    Eigen::VectorXd constant = Eigen::VectorXd::Constant(solid.n_dofs(), 3.0);
    CHECK(spatial_average(mesh, solid, constant) == doctest::Approx(3.0).epsilon(1e-13));

    Eigen::VectorXd axial(solid.n_dofs());
    for (int d = 0; d < solid.n_dofs(); ++d)
        axial[d] = mesh.vertices[solid.dof_vertex(d)][0];
    CHECK(spatial_average(mesh, solid, axial) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("temporal convolution basics")
{
    ModelParams p;
    p.window = 0.1;
    CHECK(std::abs(kernel_moment_oracle(p, 0) - 1.0) < 1e-10);

    AveragedHistory hist(2.5, p.window);
    for (int i = 1; i <= 20; ++i)
        hist.append(0.05 * i, 2.5);
    // Constant history: unit kernel mass returns the constant.
    CHECK(hist.convolve(p, 0.37) == doctest::Approx(2.5).epsilon(1e-12));
    // At time zero the plateau feeds the whole support.
    CHECK(hist.convolve(p, 0.0) == doctest::Approx(2.5).epsilon(1e-12));

    // Linear history: the result lags by the kernel's first moment.
    AveragedHistory ramp(0.0, p.window);
    for (int i = 1; i <= 40; ++i)
        ramp.append(0.025 * i, 0.025 * i);
    const double m1 = kernel_moment_oracle(p, 1);
    CHECK(m1 == doctest::Approx(0.5 * p.window).epsilon(1e-10));
    for (double t : {0.15, 0.5, 0.9})
        CHECK(ramp.convolve(p, t) == doctest::Approx(t - m1).epsilon(1e-10));

    CHECK_THROWS(ramp.convolve(p, 1.5)); // gap beyond the stored history
}

TEST_CASE("zero production decays the initial concentration exactly")
{
    ModelParams p;
    p.production.mode = ProductionSpec::Mode::Constant;
    p.production.const_value = 0.0;
    p.c0 = 0.8;
    p.decay_rate = 1.3;
    ChemistryEngine eng(p, 9);
    AveragedHistory hist(0.0, p.window);
    auto s = eng.initial_state();
    const double dt = 0.02;
    for (int n = 1; n <= 100; ++n) {
        hist.append(n * dt, 0.0);
        s = eng.advance(s, n * dt, hist);
        const double exact = 0.8 * std::exp(-p.decay_rate * s.t);
        for (double c : s.c)
            CHECK(std::abs(c - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("constant production reaches its equilibrium exactly")
{
    ModelParams p;
    p.production.mode = ProductionSpec::Mode::Constant;
    p.production.const_value = 0.7;
    p.c0 = 0.0;
    p.decay_rate = 1.0;
    p.t_final = 40.0;
    ChemistryEngine eng(p, 5);
    AveragedHistory hist(0.0, p.window);
    auto s = eng.initial_state();
    const double dt = 0.05;
    const double target = 0.7 / 1.0;
    for (int n = 1; n <= 600; ++n) {
        hist.append(n * dt, 0.0);
        s = eng.advance(s, n * dt, hist);
        const double exact = target * (1.0 - std::exp(-s.t));
        CHECK(std::abs(s.c[2] - exact) <= 1e-11);
    }
    CHECK(std::abs(s.c[2] - target) <= 1e-10);
}

TEST_CASE("concentration rate matches finite differences of the trajectory")
{
    ModelParams p; // saturating production driven by a moving average
    p.theta_s0 = 0.2;
    ChemistryEngine eng(p, 7);
    AveragedHistory hist(0.2, p.window);
    const double dt = 5e-4;
    auto s = eng.initial_state();
    std::vector<ChemistryEngine::State> states = {s};
    for (int n = 1; n <= 400; ++n) {
        hist.append(n * dt, 0.2 + 0.5 * std::sin(3.0 * n * dt));
        s = eng.advance(s, n * dt, hist);
        states.push_back(s);
    }
    // Midpoint check at several interior nodes.
    for (int n : {100, 200, 300}) {
        const auto slice = eng.radius_slice(states[n], hist);
        for (std::size_t i = 1; i + 1 < eng.nodes().size(); ++i) {
            const double fd_c =
                (states[n + 1].c[i] - states[n - 1].c[i]) / (2.0 * dt);
            const double temp = hist.convolve(p, states[n].t);
            const double ct = -p.decay_rate * states[n].c[i] +
                              p.eval_G(eng.nodes()[i], temp);
            CHECK(std::abs(fd_c - ct) <= 1e-6 * std::max(1.0, std::abs(ct)));
            // Radius rate by the chain rule at the same node.
            const auto smp = slice.at(states[n].t, eng.nodes()[i]);
            CHECK(smp.d_t == doctest::Approx(p.eval_H_deriv(states[n].c[i]) * ct)
                                 .epsilon(1e-10));
        }
    }
}

TEST_CASE("future history perturbations never change the past")
{
    ModelParams p;
    ChemistryEngine eng(p, 6);
    const double dt = 0.025;
    auto run = [&](bool perturb_tail) {
        AveragedHistory hist(0.3, p.window);
        auto s = eng.initial_state();
        std::vector<std::vector<double>> all;
        for (int n = 1; n <= 20; ++n) {
            double v = 0.3 + 0.1 * n * dt;
            if (perturb_tail && n * dt > 0.25)
                v += 5.0;
            hist.append(n * dt, v);
            s = eng.advance(s, n * dt, hist);
            all.push_back(s.c);
        }
        return all;
    };
    const auto base = run(false);
    const auto bumped = run(true);
    for (int n = 0; n < 20; ++n) {
        const double t = (n + 1) * 0.025;
        if (t <= 0.25) {
            for (std::size_t i = 0; i < base[n].size(); ++i)
                CHECK(base[n][i] == bumped[n][i]); // bit-exact
        }
    }
    CHECK(base[19] != bumped[19]);
}

TEST_CASE("concentration stays within the production bound")
{
    ModelParams p;
    p.c0 = -0.4;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    ChemistryEngine eng(p, 5);
    AveragedHistory hist(U(rng), p.window);
    auto s = eng.initial_state();
    const double cap = std::abs(p.c0) + p.production.bound() / p.decay_rate;
    for (int n = 1; n <= 200; ++n) {
        hist.append(0.01 * n, U(rng));
        s = eng.advance(s, 0.01 * n, hist);
        for (double c : s.c)
            CHECK(std::abs(c) <= cap + 1e-12);
    }
}

TEST_CASE("radius slice stays inside the admissible band and matches the map")
{
    ModelParams p;
    ChemistryEngine eng(p, 11);
    AveragedHistory hist(1.0, p.window);
    auto s = eng.initial_state();
    for (int n = 1; n <= 40; ++n) {
        hist.append(0.02 * n, 1.0 + std::sin(n * 0.3));
        s = eng.advance(s, 0.02 * n, hist);
    }
    const auto slice = eng.radius_slice(s, hist);
    for (double x1 : {0.0, 0.21, 0.5, 0.77, 1.0}) {
        const auto smp = slice.at(s.t, x1);
        CHECK(smp.value >= p.r_min - 1e-12);
        CHECK(smp.value <= p.r_max + 1e-12);
    }
    // Nodal radius equals the map of the nodal concentration.
    for (std::size_t i = 0; i < eng.nodes().size(); ++i) {
        const auto smp = slice.at(s.t, eng.nodes()[i]);
        CHECK(smp.value == doctest::Approx(p.eval_H(s.c[i])).epsilon(1e-13));
    }
}

TEST_CASE("averaging is Lipschitz in the underlying history")
{
    ModelParams p;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int n_nodes = 30;
    const double dt = 0.02;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        AveragedHistory h1(0.0, p.window), h2(0.0, p.window);
        double l2 = 0.0;
        for (int n = 1; n <= n_nodes; ++n) {
            const double a = U(rng), b = U(rng);
            h1.append(n * dt, a);
            h2.append(n * dt, b);
            l2 += dt * (a - b) * (a - b);
        }
        l2 = std::sqrt(l2);
        double sup = 0.0;
        for (int n = 0; n <= 60; ++n)
            sup = std::max(sup, std::abs(h1.convolve(p, 0.01 * n) - h2.convolve(p, 0.01 * n)));
        if (l2 > 1e-12)
            worst_ratio = std::max(worst_ratio, sup / l2);
    }
    // Kernel sup-norm bound: |K|_inf * sqrt(window) covers the window mass.
    double k_inf = 0.0;
    for (int i = 0; i <= 500; ++i)
        k_inf = std::max(k_inf, p.eval_kernel(p.window * i / 500.0));
    CHECK(worst_ratio > 0.0);
    CHECK(worst_ratio <= k_inf * std::sqrt(p.window) + 1e-9);
}
