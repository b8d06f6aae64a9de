// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace vasotherm;

TEST_CASE("gauss rules integrate polynomials and smooth functions")
{
    const auto g8 = gauss_legendre(8);
    // exactness up to degree 15
    for (int p = 0; p <= 15; ++p) {
        const double val = gauss_integrate(g8, -1.0, 1.0, [&](double x) { return std::pow(x, p); });
        const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
        CHECK(std::abs(val - exact) < 1e-13);
    }
    const auto g24 = gauss_legendre(24);
    const double si = gauss_integrate(g24, 0.0, M_PI, [](double x) { return std::sin(x); });
    CHECK(std::abs(si - 2.0) < 1e-13);
}

namespace {

double bary_monomial_tet(const TetRule& r, int a, int b, int c, int d)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < r.bary.size(); ++i)
        acc += r.weights[i] * std::pow(r.bary[i][0], a) * std::pow(r.bary[i][1], b) *
               std::pow(r.bary[i][2], c) * std::pow(r.bary[i][3], d);
    return acc;
}

// Exact integral of lambda^a mu^b nu^c kappa^d over the reference tet,
// normalized by the tet volume: a! b! c! d! 3! / (a+b+c+d+3)!.
double exact_monomial_tet(int a, int b, int c, int d)
{
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i)
            f *= i;
        return f;
    };
    return fact(a) * fact(b) * fact(c) * fact(d) * fact(3) / fact(a + b + c + d + 3);
}

} // namespace

TEST_CASE("tet rules are exact to their stated degree")
{
    for (int degree : {1, 2, 5}) {
        const auto r = tet_rule(degree);
        REQUIRE(r.degree >= degree);
        for (int a = 0; a <= r.degree; ++a)
            for (int b = 0; a + b <= r.degree; ++b)
                for (int c = 0; a + b + c <= r.degree; ++c) {
                    const int d = 0;
                    const double got = bary_monomial_tet(r, a, b, c, d);
                    const double want = exact_monomial_tet(a, b, c, d);
                    CHECK(std::abs(got - want) < 1e-14);
                }
    }
}

TEST_CASE("tri rules are exact to their stated degree")
{
    auto exact = [](int a, int b) {
        auto fact = [](int n) {
            double f = 1.0;
            for (int i = 2; i <= n; ++i)
                f *= i;
            return f;
        };
        return fact(a) * fact(b) * fact(2) / fact(a + b + 2);
    };
    for (int degree : {1, 2, 4, 5}) {
        const auto r = tri_rule(degree);
        REQUIRE(r.degree >= degree);
        for (int a = 0; a <= r.degree; ++a)
            for (int b = 0; a + b <= r.degree; ++b) {
                double acc = 0.0;
                for (std::size_t i = 0; i < r.bary.size(); ++i)
                    acc += r.weights[i] * std::pow(r.bary[i][0], a) * std::pow(r.bary[i][1], b);
                CHECK(std::abs(acc - exact(a, b)) < 1e-14);
            }
    }
}
