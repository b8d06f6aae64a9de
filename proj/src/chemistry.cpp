// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/chemistry.hpp"

#include "vasotherm/common.hpp"
#include "vasotherm/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace vasotherm {

double p1_integral(const ReferenceMesh& mesh, const ScalarSpace& space,
                   const Eigen::VectorXd& values)
{
    double acc = 0.0;
    for (int c : space.cells()) {
        const double vol = mesh.cell_volume(c);
        double s = 0.0;
        for (int v : mesh.cells[c])
            s += values[space.vertex_dof(v)];
        acc += vol * s / 4.0;
    }
    return acc;
}

double p1_l2_norm_sq(const ReferenceMesh& mesh, const ScalarSpace& space,
                     const Eigen::VectorXd& values)
{
    double acc = 0.0;
    for (int c : space.cells()) {
        const double vol = mesh.cell_volume(c);
        double s = 0.0, s2 = 0.0;
        for (int v : mesh.cells[c]) {
            const double val = values[space.vertex_dof(v)];
            s += val;
            s2 += val * val;
        }
        acc += vol / 20.0 * (s * s + s2);
    }
    return acc;
}

double spatial_average(const ReferenceMesh& mesh, const ScalarSpace& space,
                       const Eigen::VectorXd& values)
{
    return p1_integral(mesh, space, values) / mesh.volume(space.domain());
}

AveragedHistory::AveragedHistory(double plateau_value, double window)
    : plateau_(plateau_value), window_(window)
{
    require(window > 0.0, "averaging history: window must be positive");
}

void AveragedHistory::append(double t, double value)
{
    require(times_.empty() || t > times_.back(), "averaging history: times must increase");
    require(t >= 0.0, "averaging history: nonnegative times only");
    times_.push_back(t);
    values_.push_back(value);
}

void AveragedHistory::truncate(double t_keep)
{
    while (!times_.empty() && times_.back() > t_keep + 1e-12) {
        times_.pop_back();
        values_.pop_back();
    }
}

double AveragedHistory::value_at(double s) const
{
    if (s <= 0.0)
        return plateau_;
    require(!times_.empty() && s <= times_.back() + 1e-9,
            "averaging history: gap inside the convolution window");
    const auto hi = std::upper_bound(times_.begin(), times_.end(), s);
    const std::size_t i = std::min(std::size_t(hi - times_.begin()), times_.size() - 1);
    if (i == 0) {
        const double t1 = times_[0];
        if (t1 <= 0.0)
            return values_[0];
        const double w = s / t1;
        return (1.0 - w) * plateau_ + w * values_[0];
    }
    const double t0 = times_[i - 1], t1 = times_[i];
    const double w = (s - t0) / (t1 - t0);
    return (1.0 - w) * values_[i - 1] + w * values_[i];
}

double AveragedHistory::convolve(const ModelParams& params, double t) const
{
    // Split at the window ends, time zero, and every stored sample inside
    // the support; each piece is a smooth kernel times linear data.
    std::vector<double> cuts = {t - window_, t};
    if (t - window_ < 0.0 && t > 0.0)
        cuts.push_back(0.0);
    for (double s : times_)
        if (s > t - window_ && s < t)
            cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());

    static const GaussRule g = gauss_legendre(6);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-15)
            continue;
        acc += gauss_integrate(g, cuts[i], cuts[i + 1], [&](double s) {
            return params.eval_kernel(t - s) * value_at(s);
        });
    }
    return acc;
}

ChemistryEngine::ChemistryEngine(const ModelParams& params, int n_axial_nodes)
    : params_(&params)
{
    require(n_axial_nodes >= 2, "chemistry: need at least 2 axial nodes");
    nodes_.resize(n_axial_nodes);
    for (int i = 0; i < n_axial_nodes; ++i)
        nodes_[i] = params.length * i / double(n_axial_nodes - 1);
}

ChemistryEngine::State ChemistryEngine::initial_state() const
{
    State s;
    s.t = 0.0;
    s.c.assign(nodes_.size(), params_->c0);
    s.c_x.assign(nodes_.size(), 0.0);
    return s;
}

ChemistryEngine::State ChemistryEngine::advance(const State& from, double t_next,
                                                const AveragedHistory& history) const
{
    require(t_next > from.t, "chemistry: advance requires a forward step");
    const double dt = t_next - from.t;
    const double k = params_->decay_rate;
    const double decay = std::exp(-k * dt);

    // Exact weights for a production term that is linear in time across the
    // step; a constant production then reaches its equilibrium exactly.
    const double w_new = 1.0 / k - (1.0 - decay) / (k * k * dt);
    const double w_old = (1.0 - decay) / k - w_new;

    const double temp_old = history.convolve(*params_, from.t);
    const double temp_new = history.convolve(*params_, t_next);

    State out;
    out.t = t_next;
    out.c.resize(nodes_.size());
    out.c_x.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double x1 = nodes_[i];
        out.c[i] = decay * from.c[i] + w_old * params_->eval_G(x1, temp_old) +
                   w_new * params_->eval_G(x1, temp_new);
        out.c_x[i] = decay * from.c_x[i] + w_old * params_->eval_G_dx1(x1, temp_old) +
                     w_new * params_->eval_G_dx1(x1, temp_new);
    }
    return out;
}

SampledRadiusSlice ChemistryEngine::radius_slice(const State& state,
                                                 const AveragedHistory& history) const
{
    const double temp = history.convolve(*params_, state.t);
    const double k = params_->decay_rate;
    const std::size_t n = nodes_.size();
    std::vector<double> radius(n), radius_x(n), rate(n), rate_x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = nodes_[i];
        const double c = state.c[i], cx = state.c_x[i];
        const double ct = -k * c + params_->eval_G(x1, temp);
        const double ctx = -k * cx + params_->eval_G_dx1(x1, temp);
        const double h1 = params_->eval_H_deriv(c);
        radius[i] = params_->eval_H(c);
        radius_x[i] = h1 * cx;
        rate[i] = h1 * ct;
        rate_x[i] = params_->eval_H_deriv2(c) * cx * ct + h1 * ctx;
    }
    return SampledRadiusSlice(state.t, AxialHermite(nodes_, radius, radius_x),
                              AxialHermite(nodes_, rate, rate_x));
}

} // namespace vasotherm
