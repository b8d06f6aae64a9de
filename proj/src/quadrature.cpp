// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/quadrature.hpp"

#include "vasotherm/common.hpp"

#include <cmath>

namespace vasotherm {

GaussRule gauss_legendre(int n)
{
    require(n >= 1 && n <= 128, "gauss_legendre: order out of range");
    GaussRule g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            const double dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        p0 = 1.0;
        p1 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
        }
        const double dp = n * (x * p0 - p1) / (x * x - 1.0);
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        g.weights[i] = g.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    if (n % 2 == 1)
        g.nodes[n / 2] = 0.0;
    return g;
}

namespace {

void push4(TetRule& r, double a, double b, double c, double d, double w)
{
    r.bary.push_back({a, b, c, d});
    r.weights.push_back(w);
}

// Orbit of (a,b,b,b): the distinguished coordinate cycles through all slots.
void orbit31(TetRule& r, double a, double w)
{
    const double b = (1.0 - a) / 3.0;
    push4(r, a, b, b, b, w);
    push4(r, b, a, b, b, w);
    push4(r, b, b, a, b, w);
    push4(r, b, b, b, a, w);
}

// Orbit of (a,a,b,b): all six placements.
void orbit22(TetRule& r, double a, double w)
{
    const double b = 0.5 - a;
    push4(r, a, a, b, b, w);
    push4(r, a, b, a, b, w);
    push4(r, a, b, b, a, w);
    push4(r, b, a, a, b, w);
    push4(r, b, a, b, a, w);
    push4(r, b, b, a, a, w);
}

} // namespace

TetRule tet_rule(int degree)
{
    TetRule r;
    if (degree <= 1) {
        r.degree = 1;
        push4(r, 0.25, 0.25, 0.25, 0.25, 1.0);
        return r;
    }
    if (degree <= 2) {
        r.degree = 2;
        const double a = 0.5854101966249684544614;
        const double b = 0.1381966011250105151795;
        push4(r, a, b, b, b, 0.25);
        push4(r, b, a, b, b, 0.25);
        push4(r, b, b, a, b, 0.25);
        push4(r, b, b, b, a, 0.25);
        return r;
    }
    // 14-point rule, degree 5, all weights positive.
    r.degree = 5;
    orbit31(r, 1.0 - 3.0 * 0.3108859192633006097973457337635, 0.1126879257180158507991856523333);
    orbit31(r, 1.0 - 3.0 * 0.0927352503108912264023239137370, 0.0734930431163619495437102054863);
    orbit22(r, 0.0455037041256496494918805262793, 0.0425460207770814664380694281203);
    return r;
}

namespace {

void push3(TriRule& r, double a, double b, double c, double w)
{
    r.bary.push_back({a, b, c});
    r.weights.push_back(w);
}

void orbit21(TriRule& r, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    push3(r, b, a, a, w);
    push3(r, a, b, a, w);
    push3(r, a, a, b, w);
}

} // namespace

TriRule tri_rule(int degree)
{
    TriRule r;
    if (degree <= 1) {
        r.degree = 1;
        push3(r, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0);
        return r;
    }
    if (degree <= 2) {
        r.degree = 2;
        orbit21(r, 1.0 / 6.0, 1.0 / 3.0);
        return r;
    }
    if (degree <= 4) {
        r.degree = 4;
        orbit21(r, 0.4459484909159648863227925, 0.2233815896780114656950071);
        orbit21(r, 0.0915762135097707434595714, 0.1099517436553218676383264);
        return r;
    }
    // Degree 5, 7 points.
    r.degree = 5;
    push3(r, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225);
    orbit21(r, 0.4701420641051150897704412, 0.1323941527885061807376493);
    orbit21(r, 0.1012865073234563388009874, 0.1259391805448271525956839);
    return r;
}

} // namespace vasotherm
