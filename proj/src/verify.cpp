// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/verify.hpp"

#include "vasotherm/common.hpp"
#include "vasotherm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace vasotherm {

bool CheckList::passed() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

void CheckList::add(const std::string& name, bool pass, double measured,
                    const std::string& detail)
{
    checks.push_back({name, pass, measured, detail});
}

void CheckList::merge(const CheckList& other)
{
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::string CheckList::table() const
{
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  measured=" << c.measured;
        if (!c.detail.empty())
            os << "  " << c.detail;
        os << "\n";
    }
    return os.str();
}

double fit_order(const std::vector<double>& errors, const std::vector<double>& scales)
{
    require(errors.size() == scales.size() && errors.size() >= 2,
            "fit_order: need matching error/scale sequences");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = double(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
        require(errors[i] > 0.0 && scales[i] > 0.0, "fit_order: nonpositive data");
        const double x = std::log(scales[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

inline double fd4(double fp2, double fp1, double fm1, double fm2, double h)
{
    return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
}

} // namespace

double fd_partial(const std::function<double(const Eigen::Vector3d&)>& f,
                  const Eigen::Vector3d& x, int dir, double h)
{
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[dir] = 1.0;
    return fd4(f(x + 2 * h * e), f(x + h * e), f(x - h * e), f(x - 2 * h * e), h);
}

double fd_time(const std::function<double(double)>& f, double t, double h)
{
    return fd4(f(t + 2 * h), f(t + h), f(t - h), f(t - 2 * h), h);
}

Eigen::Vector3d fd_div_matrix(const std::function<Eigen::Matrix3d(const Eigen::Vector3d&)>& field,
                              const Eigen::Vector3d& x, double h)
{
    Eigen::Vector3d div = Eigen::Vector3d::Zero();
    for (int j = 0; j < 3; ++j) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e[j] = 1.0;
        const Eigen::Matrix3d d = (-field(x + 2 * h * e) + 8.0 * field(x + h * e) -
                                   8.0 * field(x - h * e) + field(x - 2 * h * e)) /
                                  (12.0 * h);
        div += d.row(j).transpose();
    }
    return div;
}

double fd_div_vector(const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& field,
                     const Eigen::Vector3d& x, double h)
{
    double div = 0.0;
    for (int j = 0; j < 3; ++j) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e[j] = 1.0;
        div += fd4(field(x + 2 * h * e)[j], field(x + h * e)[j], field(x - h * e)[j],
                   field(x - 2 * h * e)[j], h);
    }
    return div;
}

// ---------------------------------------------------------------------------
// Manufactured targets
// ---------------------------------------------------------------------------

namespace {

// Radial envelope vanishing to second order at the reference interface:
// smooth everywhere, no internal layer, and the residual trace on the
// polygonal interface shrinks like h^4.
struct WallEnvelope {
    double r0;
    double value(const Eigen::Vector3d& x) const
    {
        const double s = (r0 * r0 - x[1] * x[1] - x[2] * x[2]) / (r0 * r0);
        return s * s;
    }
    Eigen::Vector3d gradient(const Eigen::Vector3d& x) const
    {
        const double s = (r0 * r0 - x[1] * x[1] - x[2] * x[2]) / (r0 * r0);
        const double c = -4.0 * s / (r0 * r0);
        return {0.0, c * x[1], c * x[2]};
    }
};

} // namespace

StokesMmsTargets canned_stokes_targets(const ModelParams& params)
{
    const double L = params.length;
    const WallEnvelope cut{params.r_ref};

    auto base = [L](const Eigen::Vector3d& x) {
        return Eigen::Vector3d(1.0 + 0.5 * std::sin(2.0 * M_PI * x[0] / L) + 0.3 * x[1] -
                                   0.2 * x[2],
                               0.3 * std::sin(M_PI * x[0] / L) + 0.25 * x[2],
                               -0.2 * std::cos(M_PI * x[0] / L) + 0.15 * x[1]);
    };
    auto base_grad = [L](const Eigen::Vector3d& x) {
        Eigen::Matrix3d g; // (i,j) = d_i W_j
        g(0, 0) = 0.5 * 2.0 * M_PI / L * std::cos(2.0 * M_PI * x[0] / L);
        g(1, 0) = 0.3;
        g(2, 0) = -0.2;
        g(0, 1) = 0.3 * M_PI / L * std::cos(M_PI * x[0] / L);
        g(1, 1) = 0.0;
        g(2, 1) = 0.25;
        g(0, 2) = 0.2 * M_PI / L * std::sin(M_PI * x[0] / L);
        g(1, 2) = 0.15;
        g(2, 2) = 0.0;
        return g;
    };

    StokesMmsTargets t;
    t.velocity = [cut, base](double, const Eigen::Vector3d& x) {
        return Eigen::Vector3d(cut.value(x) * base(x));
    };
    t.velocity_grad = [cut, base, base_grad](double, const Eigen::Vector3d& x) {
        Eigen::Matrix3d g = cut.value(x) * base_grad(x);
        g += cut.gradient(x) * base(x).transpose();
        return g;
    };
    t.pressure = [L](double, const Eigen::Vector3d& x) {
        return 10.0 * std::cos(2.0 * M_PI * x[0] / L) + 5.0 * x[1] * x[2] + 0.2 * x[0];
    };
    return t;
}

StokesManufacturedRhs stokes_mms_rhs(const StokesMmsTargets& targets,
                                     const DeformationField& def, double fd_step)
{
    const double mu = def.params().viscosity;
    auto stress = [&def, &targets, mu](double t, const Eigen::Vector3d& x) {
        const DeformationEval de = def.evaluate(t, x, Side::Fluid);
        const Eigen::Matrix3d tw = de.F_inv.transpose() * targets.velocity_grad(t, x);
        const Eigen::Matrix3d e = 0.5 * (tw + tw.transpose());
        return Eigen::Matrix3d(2.0 * mu * de.J * de.F_inv * e - targets.pressure(t, x) * de.A);
    };

    StokesManufacturedRhs rhs;
    rhs.volume_force = [stress, fd_step](double t, const Eigen::Vector3d& x) {
        return Eigen::Vector3d(-fd_div_matrix(
            [&](const Eigen::Vector3d& y) { return stress(t, y); }, x, fd_step));
    };
    rhs.traction = [stress](double t, const Eigen::Vector3d& x, const Eigen::Vector3d& n) {
        return Eigen::Vector3d(stress(t, x).transpose() * n);
    };
    rhs.mass_source = [&targets, &def](double t, const Eigen::Vector3d& x) {
        const DeformationEval de = def.evaluate(t, x, Side::Fluid);
        return -de.A.cwiseProduct(targets.velocity_grad(t, x)).sum();
    };
    return rhs;
}

TransportMmsTargets canned_transport_targets(const ModelParams& params, bool linear_in_space)
{
    const double L = params.length;
    TransportMmsTargets t;
    if (linear_in_space) {
        // In the discrete space for every time: the fully discrete error is
        // then governed by the time discretization alone.
        t.theta = [](double tt, const Eigen::Vector3d& x, Side side) {
            if (side == Side::Fluid)
                return 0.4 + 0.3 * std::sin(2.0 * tt) + (0.2 + 0.1 * std::cos(tt)) * x[0] +
                       0.15 * x[1] - (0.1 + 0.05 * std::sin(3.0 * tt)) * x[2];
            return (0.8 + 0.4 * std::cos(1.7 * tt)) * (0.5 - x[2]);
        };
        t.theta_grad = [](double tt, const Eigen::Vector3d&, Side side) {
            if (side == Side::Fluid)
                return Eigen::Vector3d(0.2 + 0.1 * std::cos(tt), 0.15,
                                       -(0.1 + 0.05 * std::sin(3.0 * tt)));
            return Eigen::Vector3d(0.0, 0.0, -(0.8 + 0.4 * std::cos(1.7 * tt)));
        };
        t.velocity = [](double, const Eigen::Vector3d&) { return Eigen::Vector3d::Zero(); };
        return t;
    }

    t.theta = [L](double tt, const Eigen::Vector3d& x, Side side) {
        const double ft = 1.0 + 0.1 * std::sin(tt);
        if (side == Side::Fluid)
            return ft * (0.5 + 0.4 * std::sin(M_PI * x[0] / L) + 0.3 * std::cos(2.0 * x[1]) +
                         0.2 * x[2] * x[2]);
        return ft * (0.5 - x[2]) * (0.6 + 0.3 * std::cos(M_PI * x[0] / L) + 0.25 * x[1]);
    };
    t.theta_grad = [L](double tt, const Eigen::Vector3d& x, Side side) {
        const double ft = 1.0 + 0.1 * std::sin(tt);
        if (side == Side::Fluid)
            return Eigen::Vector3d(ft * 0.4 * M_PI / L * std::cos(M_PI * x[0] / L),
                                   -ft * 0.6 * std::sin(2.0 * x[1]), ft * 0.4 * x[2]);
        return Eigen::Vector3d(-ft * (0.5 - x[2]) * 0.3 * M_PI / L * std::sin(M_PI * x[0] / L),
                               ft * (0.5 - x[2]) * 0.25,
                               -ft * (0.6 + 0.3 * std::cos(M_PI * x[0] / L) + 0.25 * x[1]));
    };
    const WallEnvelope cut{params.r_ref};
    t.velocity = [cut, L](double, const Eigen::Vector3d& x) {
        const double z = 0.8 * cut.value(x);
        return Eigen::Vector3d(z * (1.0 + 0.3 * std::sin(2.0 * M_PI * x[0] / L)), z * 0.1 * x[2],
                               -z * 0.1 * x[1]);
    };
    return t;
}

TransportManufacturedRhs transport_mms_rhs(const TransportMmsTargets& targets,
                                           const DeformationField& def, double fd_step)
{
    const double alpha = def.params().heat_transfer;

    auto flux = [&targets, &def](double t, const Eigen::Vector3d& x, Side side) {
        const DeformationEval de = def.evaluate(t, x, side);
        Eigen::Vector3d f = de.k_pull * targets.theta_grad(t, x, side);
        if (side == Side::Fluid)
            f -= targets.theta(t, x, side) * (de.A * targets.velocity(t, x));
        return f;
    };

    TransportManufacturedRhs rhs;
    rhs.volume = [&targets, &def, flux, fd_step](double t, const Eigen::Vector3d& x, Side side) {
        const double djt = fd_time(
            [&](double tau) {
                return def.evaluate(tau, x, side).J * targets.theta(tau, x, side);
            },
            t, fd_step);
        const double divf = fd_div_vector(
            [&](const Eigen::Vector3d& y) { return flux(t, y, side); }, x, fd_step);
        return djt - divf;
    };
    rhs.inout = [&targets, &def](double t, const Eigen::Vector3d& x, const Eigen::Vector3d& n) {
        const DeformationEval de = def.evaluate(t, x, Side::Fluid);
        const Eigen::Vector3d w = targets.velocity(t, x);
        const double th = targets.theta(t, x, Side::Fluid);
        return (de.k_pull * targets.theta_grad(t, x, Side::Fluid)).dot(n) -
               th * (de.A * w).dot(n) + th * w.dot(n) * de.J;
    };
    rhs.neumann = [&targets, &def](double t, const Eigen::Vector3d& x, const Eigen::Vector3d& n) {
        const DeformationEval de = def.evaluate(t, x, Side::Solid);
        return (de.k_pull * targets.theta_grad(t, x, Side::Solid)).dot(n);
    };
    rhs.interface_flux = [&targets, &def, alpha](double t, const Eigen::Vector3d& x,
                                                 const Eigen::Vector3d& n_fluid, Side side) {
        const double jump = targets.theta(t, x, Side::Fluid) - targets.theta(t, x, Side::Solid);
        const double exchange = alpha * jump * def.interface_factor(t, x[0]);
        if (side == Side::Fluid) {
            const DeformationEval de = def.evaluate(t, x, Side::Fluid);
            const Eigen::Vector3d conv =
                targets.theta(t, x, Side::Fluid) * (de.A * targets.velocity(t, x));
            return (de.k_pull * targets.theta_grad(t, x, Side::Fluid) - conv).dot(n_fluid) +
                   exchange;
        }
        const DeformationEval de = def.evaluate(t, x, Side::Solid);
        return (de.k_pull * targets.theta_grad(t, x, Side::Solid)).dot(-n_fluid) - exchange;
    };
    return rhs;
}

std::unique_ptr<RadiusField> mms_radius_static(const ModelParams& params)
{
    return std::make_unique<ConstantRadiusField>(params.r_ref);
}

std::unique_ptr<RadiusField> mms_radius_moving(const ModelParams& params)
{
    const double r0 = params.r_ref, L = params.length;
    return std::make_unique<AnalyticRadiusField>(
        [r0, L](double t, double x1) {
            return r0 * (1.0 + 0.08 * std::sin(2.0 * M_PI * x1 / L + 0.4) * std::sin(1.3 * t));
        },
        [r0, L](double t, double x1) {
            return r0 * 0.08 * 1.3 * std::sin(2.0 * M_PI * x1 / L + 0.4) * std::cos(1.3 * t);
        },
        [r0, L](double t, double x1) {
            return r0 * 0.08 * 2.0 * M_PI / L * std::cos(2.0 * M_PI * x1 / L + 0.4) *
                   std::sin(1.3 * t);
        },
        [r0, L](double t, double x1) {
            return r0 * 0.08 * 1.3 * 2.0 * M_PI / L * std::cos(2.0 * M_PI * x1 / L + 0.4) *
                   std::cos(1.3 * t);
        });
}

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

namespace {

struct MmsSetup {
    ReferenceMesh mesh;
    std::unique_ptr<ScalarSpace> fluid, solid, pressure;
    std::unique_ptr<VelocitySpace> velocity;
};

MmsSetup make_setup(const ModelParams& params, const MeshResolution& res)
{
    MmsSetup s;
    s.mesh = build_reference_mesh(params, res);
    s.fluid = std::make_unique<ScalarSpace>(s.mesh, Subdomain::Fluid);
    s.solid = std::make_unique<ScalarSpace>(s.mesh, Subdomain::Solid);
    s.pressure = std::make_unique<ScalarSpace>(s.mesh, Subdomain::Fluid);
    s.velocity = std::make_unique<VelocitySpace>(s.mesh);
    return s;
}

} // namespace

ConvergenceStudy stokes_mms_study(const ModelParams& params, bool deformed_coefficients,
                                  const std::vector<MeshResolution>& levels, int quad_degree)
{
    ConvergenceStudy study;
    study.name = deformed_coefficients ? "stokes-mms-deformed" : "stokes-mms-static";
    const auto targets = canned_stokes_targets(params);
    const double t = 0.3;

    RhoProfile profile(params.r_min, params.r_max, params.r_ref, params.delta);
    RhoGridSpec grid;
    RhoTable table(profile, grid);
    RhoField rho(profile, &table);
    std::unique_ptr<RadiusField> radius = mms_radius_moving(params);

    for (const auto& res : levels) {
        const MmsSetup s = make_setup(params, res);
        StokesOptions opt;
        opt.quad_degree = quad_degree;
        StokesSolver solver(s.mesh, *s.velocity, *s.pressure, opt);

        std::unique_ptr<DeformationField> def;
        if (deformed_coefficients)
            def = std::make_unique<DeformationField>(params, rho, *radius);
        else
            def = std::make_unique<DeformationField>(params);

        const auto rhs = stokes_mms_rhs(targets, *def);
        const auto sys = solver.assemble(t, *def, &rhs);
        const auto sol = solver.solve(sys);

        // Errors by quadrature against the analytic targets.
        const TetRule rule = tet_rule(quad_degree);
        double err_h1 = 0.0, err_p = 0.0;
        double Np[10];
        Eigen::Vector3d gradp[10];
        for (std::size_t k = 0; k < s.velocity->cells().size(); ++k) {
            const int cell = s.velocity->cells()[k];
            const CellGeometry geo = CellGeometry::make(s.mesh, cell);
            const auto& dofs = s.velocity->cell_dofs(int(k));
            const auto& tet = s.mesh.cells[cell];
            for (std::size_t qp = 0; qp < rule.bary.size(); ++qp) {
                const auto& L = rule.bary[qp];
                const double wq = rule.weights[qp] * geo.volume;
                const Eigen::Vector3d x = geo.point(L);
                p2_shape(L, geo, Np, gradp);
                Eigen::Vector3d wh = Eigen::Vector3d::Zero();
                Eigen::Matrix3d gh = Eigen::Matrix3d::Zero();
                for (int a = 0; a < 10; ++a)
                    for (int c = 0; c < 3; ++c) {
                        const double coef = sol.w[3 * dofs[a] + c];
                        wh[c] += Np[a] * coef;
                        gh.col(c) += gradp[a] * coef;
                    }
                double qh = 0.0;
                for (int p = 0; p < 4; ++p)
                    qh += L[p] * sol.q[s.pressure->vertex_dof(tet[p])];
                const Eigen::Vector3d dv = wh - targets.velocity(t, x);
                const Eigen::Matrix3d dg = gh - targets.velocity_grad(t, x);
                err_h1 += wq * (dv.squaredNorm() + dg.squaredNorm());
                const double dq = qh - targets.pressure(t, x);
                err_p += wq * dq * dq;
            }
        }
        study.scales.push_back(1.0 / res.n_angular);
        study.errors_primary.push_back(std::sqrt(err_h1));
        study.errors_secondary.push_back(std::sqrt(err_p));
    }
    study.order_primary = fit_order(study.errors_primary, study.scales);
    study.order_secondary = fit_order(study.errors_secondary, study.scales);
    return study;
}

namespace {

double transport_l2_error(const MmsSetup& s, const TransportMmsTargets& targets, double t,
                          const Eigen::VectorXd& theta, int quad_degree)
{
    const TetRule rule = tet_rule(quad_degree);
    double acc = 0.0;
    const int offset = s.fluid->n_dofs();
    for (int cell = 0; cell < s.mesh.n_cells(); ++cell) {
        const Side side =
            s.mesh.cell_domain[cell] == Subdomain::Fluid ? Side::Fluid : Side::Solid;
        const ScalarSpace& space = side == Side::Fluid ? *s.fluid : *s.solid;
        const int off = side == Side::Fluid ? 0 : offset;
        const CellGeometry geo = CellGeometry::make(s.mesh, cell);
        const auto& tet = s.mesh.cells[cell];
        for (std::size_t qp = 0; qp < rule.bary.size(); ++qp) {
            const auto& L = rule.bary[qp];
            const Eigen::Vector3d x = geo.point(L);
            double th = 0.0;
            for (int i = 0; i < 4; ++i)
                th += L[i] * theta[off + space.vertex_dof(tet[i])];
            const double d = th - targets.theta(t, x, side);
            acc += rule.weights[qp] * geo.volume * d * d;
        }
    }
    return std::sqrt(acc);
}

double run_transport_mms(const ModelParams& params, const MeshResolution& res, double t_end,
                         double dt, bool linear_targets, int quad_degree)
{
    const auto targets = canned_transport_targets(params, linear_targets);
    RhoProfile profile(params.r_min, params.r_max, params.r_ref, params.delta);
    RhoGridSpec grid;
    RhoTable table(profile, grid);
    RhoField rho(profile, &table);
    const auto radius = mms_radius_moving(params);
    DeformationField def(params, rho, *radius);

    const MmsSetup s = make_setup(params, res);
    TransportOptions opt;
    opt.quad_degree = quad_degree;
    TransportSolver solver(s.mesh, *s.fluid, *s.solid, *s.velocity, opt);

    const auto rhs = transport_mms_rhs(targets, def);
    TransportVelocity vel(targets.velocity);
    const std::function<double(double, const Eigen::Vector3d&)> inflow =
        [&targets](double t, const Eigen::Vector3d& x) {
            return targets.theta(t, x, Side::Fluid);
        };

    Eigen::VectorXd theta = solver.interpolate([&](const Eigen::Vector3d& x, Side side) {
        return targets.theta(0.0, x, side);
    });
    const int n_steps = std::max(1, int(std::round(t_end / dt)));
    const double step = t_end / n_steps;
    for (int n = 0; n < n_steps; ++n) {
        const auto r =
            solver.step(n * step, (n + 1) * step, theta, def, def, vel, &inflow, &rhs);
        theta = r.theta;
    }
    return transport_l2_error(s, targets, t_end, theta, quad_degree);
}

} // namespace

ConvergenceStudy transport_mms_space_study(const ModelParams& params,
                                           const std::vector<MeshResolution>& levels,
                                           double t_end, double dt_coarse, int quad_degree)
{
    ConvergenceStudy study;
    study.name = "transport-mms-space";
    const int base = levels.front().n_angular;
    for (const auto& res : levels) {
        const double scale = double(base) / res.n_angular;
        const double dt = dt_coarse * scale * scale; // keep dt ~ h^2
        study.scales.push_back(1.0 / res.n_angular);
        study.errors_primary.push_back(
            run_transport_mms(params, res, t_end, dt, false, quad_degree));
    }
    study.order_primary = fit_order(study.errors_primary, study.scales);
    return study;
}

ConvergenceStudy transport_mms_time_study(const ModelParams& params, const MeshResolution& res,
                                          double t_end, const std::vector<double>& steps,
                                          int quad_degree)
{
    ConvergenceStudy study;
    study.name = "transport-mms-time";
    for (double dt : steps) {
        study.scales.push_back(dt);
        study.errors_primary.push_back(
            run_transport_mms(params, res, t_end, dt, true, quad_degree));
    }
    study.order_primary = fit_order(study.errors_primary, study.scales);
    return study;
}

double transport_mms_insertion_residual(const ModelParams& params, const MeshResolution& res,
                                        double t0, double dt)
{
    const auto targets = canned_transport_targets(params, false);
    RhoProfile profile(params.r_min, params.r_max, params.r_ref, params.delta);
    RhoGridSpec grid;
    RhoTable table(profile, grid);
    RhoField rho(profile, &table);
    const auto radius = mms_radius_moving(params);
    DeformationField def(params, rho, *radius);

    const MmsSetup s = make_setup(params, res);
    TransportSolver solver(s.mesh, *s.fluid, *s.solid, *s.velocity);
    const auto rhs = transport_mms_rhs(targets, def);
    TransportVelocity vel(targets.velocity);
    const std::function<double(double, const Eigen::Vector3d&)> inflow =
        [&targets](double t, const Eigen::Vector3d& x) {
            return targets.theta(t, x, Side::Fluid);
        };

    const Eigen::VectorXd theta0 = solver.interpolate(
        [&](const Eigen::Vector3d& x, Side side) { return targets.theta(t0, x, side); });
    const Eigen::VectorXd theta1 = solver.interpolate([&](const Eigen::Vector3d& x, Side side) {
        return targets.theta(t0 + dt, x, side);
    });
    const auto sysstep = solver.step(t0, t0 + dt, theta0, def, def, vel, &inflow, &rhs);
    // The solved step and the interpolated target differ by consistency
    // error only; normalize by the target scale.
    return (sysstep.theta - theta1).norm() / std::max(1.0, theta1.norm());
}

// ---------------------------------------------------------------------------
// Verification sweeps
// ---------------------------------------------------------------------------

CheckList verify_params(unsigned seed)
{
    CheckList out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int misclassified = 0;
    for (int trial = 0; trial < 50; ++trial) {
        ModelParams p;
        p.r_min = 0.10 + 0.08 * U(rng);
        p.r_max = p.r_min + 0.1 + 0.1 * U(rng);
        p.r_ref = 0.5 * (p.r_min + p.r_max);
        const double slack = std::min(p.r_min, 0.5 - p.r_max) / 3.0;
        p.delta = (0.3 + 0.5 * U(rng)) * slack;
        p.window = 0.05 + 0.1 * U(rng);
        bool expect_valid = true;
        if (trial % 2 == 1) {
            expect_valid = false;
            switch (trial % 10) {
            case 1: p.r_max = 0.55; break;
            case 3: p.delta = p.r_min; break;
            case 5: p.k_solid = Eigen::Vector3d(1, -1, 1).asDiagonal(); break;
            case 7: p.decay_rate = -1.0; break;
            default: p.r_ref = p.r_max + 0.01; break;
            }
        }
        if (validate(p).passed() != expect_valid)
            ++misclassified;
    }
    out.add("parameter draws classified against the structural constraints", misclassified == 0,
            double(misclassified), "misclassified of 50");

    ModelParams good;
    out.add("default parameters valid", validate(good).passed(), 1.0);
    ModelParams bad = good;
    bad.r_min = 0.10;
    bad.r_max = 0.45;
    out.add("oversized radius band rejected", !validate(bad).passed(), 0.0);
    return out;
}

CheckList verify_rho(const ModelParams& params, int n_radius, int n_r)
{
    CheckList out;
    RhoProfile profile(params.r_min, params.r_max, params.r_ref, params.delta);
    RhoGridSpec spec;
    spec.n_radius = n_radius;
    spec.n_r = n_r;
    spec.r_lo = 0.0;
    spec.r_hi = 0.5;
    RhoTable table(profile, spec);

    const auto& Rn = table.radius_nodes();
    const auto& rn = table.r_nodes();

    // Interface slice: the profile must map the reference radius onto the
    // target radius for every tabulated target.
    double worst_interface = 0.0;
    for (std::size_t i = 0; i < Rn.size(); ++i)
        worst_interface =
            std::max(worst_interface, std::abs(table.evaluate(Rn[i], params.r_ref).rho - Rn[i]));
    out.add("interface slice maps onto the target radius", worst_interface <= 1e-8,
            worst_interface, "max |rho(R, r_ref) - R|");

    // Identity outside the transition zone.
    double worst_outside = 0.0;
    for (std::size_t i = 0; i < Rn.size(); ++i)
        for (std::size_t j = 0; j < rn.size(); ++j) {
            if (rn[j] > profile.zone_lo() && rn[j] < profile.zone_hi())
                continue;
            const auto e = table.evaluate(Rn[i], rn[j]);
            worst_outside = std::max({worst_outside, std::abs(e.rho - rn[j]),
                                      std::abs(e.d_r - 1.0), std::abs(e.d_R)});
        }
    out.add("identity outside the transition zone", worst_outside <= 1e-10, worst_outside);

    out.add("radial slope bounded below", table.slope_min() > 0.0, table.slope_min(),
            "measured monotonicity constant");

    // Independent quadrature oracle: adaptive Simpson on the mollification
    // integral, evaluated at every table node.
    std::function<double(const std::function<double(double)>&, double, double, double, double,
                         double, double, int)>
        simpson = [&](const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double tol, int depth) {
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
        };
    auto oracle = [&](double R, double r, bool slope) {
        double acc = 0.0;
        const double d = profile.delta();
        for (int kk = 0; kk < 8; ++kk) {
            const double a = -d + 2.0 * d * kk / 8.0;
            const double b = -d + 2.0 * d * (kk + 1) / 8.0;
            auto f = [&](double u) {
                return (slope ? profile.base_slope_r(R, r - u) : profile.base_profile(R, r - u)) *
                       profile.mollifier(u);
            };
            acc += simpson(f, a, b, f(a), f(0.5 * (a + b)), f(b), 1e-12, 40);
        }
        return acc;
    };
    double worst_oracle = 0.0;
    for (std::size_t i = 0; i < Rn.size(); ++i)
        for (std::size_t j = 0; j < rn.size(); ++j) {
            if (rn[j] <= profile.zone_lo() || rn[j] >= profile.zone_hi())
                continue;
            const auto node = table.node_value(int(i), int(j));
            worst_oracle = std::max(worst_oracle,
                                    std::abs(node.rho - oracle(Rn[i], rn[j], false)));
            if ((i + j) % 7 == 0)
                worst_oracle = std::max(worst_oracle,
                                        std::abs(node.d_r - oracle(Rn[i], rn[j], true)));
        }
    out.add("quadrature-oracle agreement at table nodes", worst_oracle <= 1e-8, worst_oracle);
    return out;
}

CheckList verify_coefficients(const ModelParams& params, int n_samples, unsigned seed)
{
    CheckList out;
    RhoProfile profile(params.r_min, params.r_max, params.r_ref, params.delta);
    RhoField rho_direct(profile, nullptr);
    const auto radius = mms_radius_moving(params);
    DeformationField def(params, rho_direct, *radius);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> Ux(0.05, 0.95 * params.length), Ut(0.1, 0.9);
    std::uniform_real_distribution<double> Ur(profile.zone_lo() + 0.01, profile.zone_hi() - 0.01);
    std::uniform_real_distribution<double> Uany(0.005, 0.49), Uang(0.0, 2.0 * M_PI);

    auto sample_point = [&](bool in_zone) {
        const double r = in_zone ? Ur(rng) : Uany(rng);
        const double a = Uang(rng);
        return Eigen::Vector3d(Ux(rng), r * std::cos(a), r * std::sin(a));
    };

    // Deformation gradient against finite differences of the map.
    double worst_f = 0.0;
    const double h = 1e-5;
    for (int i = 0; i < n_samples; ++i) {
        const Eigen::Vector3d x = sample_point(i % 2 == 0);
        const double t = Ut(rng);
        const auto e = def.evaluate(t, x, Side::Fluid);
        Eigen::Matrix3d fd;
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            fd.col(j) = (def.map_point(t, xp) - def.map_point(t, xm)) / (2.0 * h);
        }
        worst_f = std::max(worst_f, (fd - e.F).norm() / std::max(1.0, e.F.norm()));
    }
    out.add("deformation gradient matches finite differences", worst_f <= 1e-6, worst_f,
            "relative, 2nd-order differences");

    // Cofactor divergence sweeps to zero at fourth order.
    auto div_defect = [&](double step) {
        double worst = 0.0;
        std::mt19937_64 rng2(seed + 1);
        std::uniform_real_distribution<double> Ux2(0.05, 0.95 * params.length);
        std::uniform_real_distribution<double> Ur2(profile.zone_lo() + 0.02,
                                                   profile.zone_hi() - 0.02);
        std::uniform_real_distribution<double> Uang2(0.0, 2.0 * M_PI);
        for (int i = 0; i < 20; ++i) {
            const double r = Ur2(rng2), a = Uang2(rng2);
            const Eigen::Vector3d x(Ux2(rng2), r * std::cos(a), r * std::sin(a));
            const Eigen::Vector3d d = fd_div_matrix(
                [&](const Eigen::Vector3d& y) { return def.evaluate(0.5, y, Side::Fluid).A; }, x,
                step);
            worst = std::max(worst, d.norm());
        }
        return worst;
    };
    const std::vector<double> steps = {4e-3, 2e-3, 1e-3};
    std::vector<double> defects;
    for (double s : steps)
        defects.push_back(div_defect(s));
    const double piola_order = fit_order(defects, steps);
    out.add("cofactor divergence vanishes at fourth order", piola_order >= 3.3, piola_order,
            "fitted order over steps 4e-3..1e-3");
    out.add("cofactor divergence small at the finest step", defects.back() <= 1e-3,
            defects.back());

    // Jacobian floor from the measured monotonicity constant.
    RhoGridSpec grid;
    RhoTable table(profile, grid);
    const double eta = table.slope_min() * (params.r_min - 3.0 * params.delta) /
                       (params.r_max + 3.0 * params.delta);
    double j_min = 1e300;
    for (int i = 0; i < n_samples; ++i) {
        const Eigen::Vector3d x = sample_point(true);
        j_min = std::min(j_min, def.evaluate(Ut(rng), x, Side::Solid).J);
    }
    out.add("jacobian bounded below by the measured floor", j_min >= eta - 1e-12, j_min,
            "floor " + std::to_string(eta));

    // Closed-form interface factor against the generic coefficient value.
    double worst_if = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double x1 = Ux(rng), t = Ut(rng), a = Uang(rng);
        const Eigen::Vector3d x(x1, params.r_ref * std::cos(a), params.r_ref * std::sin(a));
        const double closed = def.interface_factor(t, x1);
        worst_if = std::max(worst_if, std::abs(closed - def.interface_factor_generic(t, x)) /
                                          std::max(1.0, closed));
    }
    out.add("interface factor closed form matches generic coefficients", worst_if <= 1e-8,
            worst_if);

    // Euler expansion: div(A vb) equals the Jacobian rate.
    double worst_euler = 0.0;
    for (int i = 0; i < 30; ++i) {
        const Eigen::Vector3d x = sample_point(true);
        const double t = Ut(rng);
        const double dj = def.evaluate(t, x, Side::Fluid).dJ_dt;
        const double div_avb = fd_div_vector(
            [&](const Eigen::Vector3d& y) {
                const auto e = def.evaluate(t, y, Side::Fluid);
                return Eigen::Vector3d(e.A * e.vb);
            },
            x, 1e-3);
        worst_euler = std::max(worst_euler, std::abs(dj - div_avb));
    }
    out.add("domain-velocity divergence equals the jacobian rate", worst_euler <= 1e-5,
            worst_euler, "4th-order differences, step 1e-3");
    return out;
}

CheckList verify_ode(const ModelParams& base)
{
    CheckList out;

    { // pure decay
        ModelParams p = base;
        p.production.mode = ProductionSpec::Mode::Constant;
        p.production.const_value = 0.0;
        p.c0 = 0.8;
        ChemistryEngine eng(p, 7);
        AveragedHistory hist(0.0, p.window);
        auto s = eng.initial_state();
        double worst = 0.0;
        for (int n = 1; n <= 80; ++n) {
            hist.append(0.02 * n, 0.0);
            s = eng.advance(s, 0.02 * n, hist);
            worst = std::max(worst,
                             std::abs(s.c[3] - 0.8 * std::exp(-p.decay_rate * s.t)));
        }
        out.add("zero production decays exactly", worst <= 1e-12, worst);
    }

    { // constant production equilibrium
        ModelParams p = base;
        p.production.mode = ProductionSpec::Mode::Constant;
        p.production.const_value = 0.7;
        p.c0 = 0.0;
        p.decay_rate = 1.0;
        ChemistryEngine eng(p, 5);
        AveragedHistory hist(0.0, p.window);
        auto s = eng.initial_state();
        for (int n = 1; n <= 600; ++n) {
            hist.append(0.05 * n, 0.0);
            s = eng.advance(s, 0.05 * n, hist);
        }
        const double defect = std::abs(s.c[2] - 0.7);
        out.add("constant production reaches its equilibrium", defect <= 1e-10, defect);
    }

    { // causality
        ModelParams p = base;
        ChemistryEngine eng(p, 6);
        auto run = [&](bool bump) {
            AveragedHistory hist(0.3, p.window);
            auto s = eng.initial_state();
            std::vector<double> c_mid;
            for (int n = 1; n <= 20; ++n) {
                double v = 0.3 + 0.1 * n;
                if (bump && 0.025 * n > 0.25)
                    v += 7.0;
                hist.append(0.025 * n, v);
                s = eng.advance(s, 0.025 * n, hist);
                c_mid.push_back(s.c[2]);
            }
            return c_mid;
        };
        const auto a = run(false), b = run(true);
        bool exact = true;
        for (int n = 0; n < 20; ++n)
            if (0.025 * (n + 1) <= 0.25 && a[n] != b[n])
                exact = false;
        out.add("future perturbations never reach the past", exact && a[19] != b[19], 0.0,
                "bit-exact prefix");
    }
    return out;
}

CheckList verify_geometry(const ModelParams& params)
{
    CheckList out;
    const MeshResolution res{4, 3, 2, 2};
    const auto mesh = build_reference_mesh(params, res);
    out.add("box volume reproduced", std::abs(mesh.total_volume() - params.length) <= 1e-12,
            mesh.total_volume());
    const int m = 4 * res.n_angular;
    const double sigma = 2.0 * M_PI * params.r_ref * params.length;
    const double defect = std::abs(mesh.interface_area() - sigma) / sigma;
    out.add("interface area within the polygonal defect", defect <= 3.0 / (m * m), defect);
    const double tagged = mesh.boundary_area(BoundaryTag::InOut) +
                          mesh.boundary_area(BoundaryTag::Dirichlet) +
                          mesh.boundary_area(BoundaryTag::Neumann);
    const double box_boundary = 2.0 + 4.0 * params.length;
    out.add("boundary tags partition the box boundary", std::abs(tagged - box_boundary) < 1e-9,
            tagged);
    out.add("cell quality above floor", mesh.min_cell_quality() > 0.01, mesh.min_cell_quality());

    ScalarSpace fluid(mesh, Subdomain::Fluid), solid(mesh, Subdomain::Solid);
    const auto pairs = interface_pairs(mesh, fluid, solid);
    out.add("interface pairing count", int(pairs.size()) == m * (res.n_axial + 1),
            double(pairs.size()));
    return out;
}

CheckList verify_fit_order()
{
    CheckList out;
    const double o2 = fit_order({1.0, 0.25, 0.0625}, {1.0, 0.5, 0.25});
    out.add("exact quadratic sequence fits order two", std::abs(o2 - 2.0) < 1e-12, o2);
    const double o1 = fit_order({1.0, 0.5, 0.25}, {1.0, 0.5, 0.25});
    out.add("exact linear sequence fits order one", std::abs(o1 - 1.0) < 1e-12, o1);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> noise(-0.15, 0.15);
    std::vector<double> errs, hs;
    for (int i = 0; i < 5; ++i) {
        const double h = std::pow(0.5, i);
        hs.push_back(h);
        errs.push_back(h * h * (1.0 + noise(rng)));
    }
    const double o_noisy = fit_order(errs, hs);
    out.add("noisy quadratic data fits within the band", o_noisy > 1.7 && o_noisy < 2.3, o_noisy);
    return out;
}

CheckList run_verification(const ModelParams& params, unsigned seed)
{
    CheckList out;
    out.merge(verify_params(seed));
    out.merge(verify_rho(params, 25, 120));
    out.merge(verify_coefficients(params, 60, seed + 1));
    out.merge(verify_ode(params));
    out.merge(verify_geometry(params));
    out.merge(verify_fit_order());
    return out;
}

} // namespace vasotherm
