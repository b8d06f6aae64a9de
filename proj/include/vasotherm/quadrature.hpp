// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

namespace vasotherm {

// Gauss-Legendre nodes/weights on [-1,1]. Deterministic, computed by Newton
// iteration on the Legendre recurrence.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

// Integrate f over [a,b] with an n-point Gauss rule.
template <class F>
double gauss_integrate(const GaussRule& g, double a, double b, F&& f)
{
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        acc += g.weights[i] * f(mid + half * g.nodes[i]);
    return half * acc;
}

// Quadrature on the reference simplex, expressed in barycentric coordinates.
// Weights sum to one; multiply by the cell measure.
struct TetRule {
    std::vector<std::array<double, 4>> bary;
    std::vector<double> weights;
    int degree = 0;
};

struct TriRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;
    int degree = 0;
};

// Smallest shipped rule with at least the requested polynomial degree.
TetRule tet_rule(int degree);
TriRule tri_rule(int degree);

} // namespace vasotherm
