// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/driver.hpp"

#include "vasotherm/common.hpp"
#include "vasotherm/output.hpp"
#include "vasotherm/quadrature.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

namespace vasotherm {

Driver::Driver(const RunConfig& config) : config_(config)
{
    const ValidationReport rep = validate(config_.model);
    if (!rep.passed()) {
        std::string msg = "driver: invalid model parameters:";
        for (const auto& f : rep.failures())
            msg += " [" + f + "]";
        throw InvariantViolation(msg);
    }

    mesh_ = build_reference_mesh(config_.model, config_.resolution);
    fluid_space_ = std::make_unique<ScalarSpace>(mesh_, Subdomain::Fluid);
    solid_space_ = std::make_unique<ScalarSpace>(mesh_, Subdomain::Solid);
    pressure_space_ = std::make_unique<ScalarSpace>(mesh_, Subdomain::Fluid);
    velocity_space_ = std::make_unique<VelocitySpace>(mesh_);

    StokesOptions sopt;
    sopt.quad_degree = config_.quad_degree;
    sopt.facet_degree = config_.facet_quad_degree;
    sopt.residual_tol = config_.solver_tol;
    stokes_ = std::make_unique<StokesSolver>(mesh_, *velocity_space_, *pressure_space_, sopt);

    TransportOptions topt;
    topt.quad_degree = config_.quad_degree;
    topt.facet_degree = config_.facet_quad_degree;
    topt.residual_tol = config_.solver_tol;
    transport_ =
        std::make_unique<TransportSolver>(mesh_, *fluid_space_, *solid_space_, *velocity_space_,
                                          topt);

    rho_profile_ = std::make_unique<RhoProfile>(config_.model.r_min, config_.model.r_max,
                                                config_.model.r_ref, config_.model.delta);
    if (config_.rho_mode == "table") {
        RhoGridSpec spec;
        spec.n_radius = config_.rho_table_n_radius;
        spec.n_r = config_.rho_table_n_r;
        rho_table_ = std::make_unique<RhoTable>(*rho_profile_, spec);
        rho_field_ = RhoField(*rho_profile_, rho_table_.get());
    } else {
        rho_field_ = RhoField(*rho_profile_, nullptr);
    }
    chemistry_ = std::make_unique<ChemistryEngine>(config_.model, config_.ode_nodes);
    identity_def_ = std::make_unique<DeformationField>(config_.model);

    n_steps_ = std::max(1, int(std::ceil(config_.model.t_final / config_.dt - 1e-12)));
    dt_ = config_.model.t_final / n_steps_;
}

Eigen::VectorXd Driver::solid_part(const Eigen::VectorXd& combined) const
{
    return combined.tail(solid_space_->n_dofs());
}

const DeformationField& Driver::deformation_at(int node) const
{
    if (config_.fixed_domain || !defs_[node])
        return *identity_def_;
    return *defs_[node];
}

void Driver::seed_initial_state()
{
    times_.clear();
    chem_.clear();
    slices_.clear();
    defs_.clear();
    theta_.clear();
    w_.clear();
    q_.clear();
    records_.clear();
    cached_fixed_flow_.reset();

    times_.push_back(0.0);
    theta_.push_back(transport_->constant_state(config_.model.theta_f0, config_.model.theta_s0));
    const double t1_init = spatial_average(mesh_, *solid_space_, solid_part(theta_.back()));
    history_ = AveragedHistory(t1_init, config_.model.window);
    history_.append(0.0, t1_init);

    chem_.push_back(chemistry_->initial_state());
    if (config_.fixed_domain) {
        slices_.push_back(nullptr);
        defs_.push_back(nullptr);
    } else {
        slices_.push_back(std::make_unique<SampledRadiusSlice>(
            chemistry_->radius_slice(chem_.back(), history_)));
        defs_.push_back(
            std::make_unique<DeformationField>(config_.model, rho_field_, *slices_.back()));
    }
}

void Driver::initialize()
{
    seed_initial_state();
    // Flow at the initial configuration, for the output series.
    const auto sol = stokes_->solve_at(0.0, deformation_at(0));
    w_.push_back(sol.w);
    q_.push_back(sol.q);
    if (config_.fixed_domain)
        cached_fixed_flow_ = sol;
    records_.push_back(diagnose(0));
}

Driver::LevelSolution Driver::solve_level(int node, double t_new, double t1_guess,
                                          const AveragedHistory& base_history)
{
    LevelSolution out;
    if (config_.fixed_domain) {
        out.chem = chem_[node];
        if (!cached_fixed_flow_)
            cached_fixed_flow_ = stokes_->solve_at(t_new, *identity_def_);
        out.flow = *cached_fixed_flow_;
    } else {
        AveragedHistory hist = base_history;
        hist.append(t_new, t1_guess);
        out.chem = chemistry_->advance(chem_[node], t_new, hist);
        out.slice =
            std::make_unique<SampledRadiusSlice>(chemistry_->radius_slice(out.chem, hist));
        out.def = std::make_unique<DeformationField>(config_.model, rho_field_, *out.slice);
        out.flow = stokes_->solve_at(t_new, *out.def);
    }
    out.stokes_residual = out.flow.residual;

    const DeformationField& def_new = config_.fixed_domain ? *identity_def_ : *out.def;
    TransportVelocity vel(stokes_.get(), &out.flow.w);
    auto step = transport_->step(times_[node], t_new, theta_[node], deformation_at(node),
                                 def_new, vel);
    out.theta = std::move(step.theta);
    out.transport_residual = step.residual;
    out.max_peclet = step.max_cell_peclet;
    return out;
}

void Driver::commit(int node, double t_new, LevelSolution&& level, double t1_value)
{
    times_.push_back(t_new);
    chem_.push_back(std::move(level.chem));
    slices_.push_back(std::move(level.slice));
    defs_.push_back(std::move(level.def));
    theta_.push_back(std::move(level.theta));
    w_.push_back(std::move(level.flow.w));
    q_.push_back(std::move(level.flow.q));
    history_.append(t_new, t1_value);
    require(int(times_.size()) == node + 2, "driver: trajectory bookkeeping broke");
}

double Driver::min_jacobian(const DeformationField& def, double t) const
{
    const TetRule rule = tet_rule(2);
    double j_min = 1e300;
    for (int c = 0; c < mesh_.n_cells(); ++c) {
        const Side side = mesh_.cell_domain[c] == Subdomain::Fluid ? Side::Fluid : Side::Solid;
        const CellGeometry geo = CellGeometry::make(mesh_, c);
        for (const auto& bary : rule.bary)
            j_min = std::min(j_min, def.evaluate(t, geo.point(bary), side).J);
    }
    return j_min;
}

StepRecord Driver::diagnose(int node)
{
    StepRecord rec;
    const double t = times_[node];
    const DeformationField& def = deformation_at(node);
    rec.t = t;
    rec.t1 = history_.values().back();
    rec.t_avg = history_.convolve(config_.model, t);

    // Radius statistics along the axis.
    if (config_.fixed_domain) {
        rec.r_min = rec.r_mean = rec.r_max = config_.model.r_ref;
    } else {
        const auto& slice = *slices_[node];
        double rmin = 1e300, rmax = -1e300, rsum = 0.0;
        const int n = 200;
        for (int i = 0; i <= n; ++i) {
            const double x1 = config_.model.length * i / n;
            const double r = slice.at(t, x1).value;
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
            rsum += r;
        }
        rec.r_min = rmin;
        rec.r_max = rmax;
        rec.r_mean = rsum / (n + 1);
    }

    rec.q_in = stokes_->flow_rate(t, def, w_[node], false);
    rec.q_out = stokes_->flow_rate(t, def, w_[node], true);
    rec.interface_flux = transport_->interface_heat_flux(t, theta_[node], def);
    rec.energy = transport_->energy_norm(t, theta_[node], def);
    rec.j_min = min_jacobian(def, t);

    // Volume bookkeeping: the deformed fluid volume measured two ways. The
    // mesh carries the inscribed polygon, so the two integrals agree only up
    // to the polygonal area defect of the cross-section.
    const TetRule rule = tet_rule(config_.quad_degree);
    double vol_fluid = 0.0;
    for (int c = 0; c < mesh_.n_cells(); ++c) {
        if (mesh_.cell_domain[c] != Subdomain::Fluid)
            continue;
        const CellGeometry geo = CellGeometry::make(mesh_, c);
        for (std::size_t qp = 0; qp < rule.bary.size(); ++qp)
            vol_fluid += rule.weights[qp] * geo.volume *
                         def.evaluate(t, geo.point(rule.bary[qp]), Side::Fluid).J;
    }
    const int m = 4 * config_.resolution.n_angular;
    const double poly_ratio = m * std::sin(2.0 * M_PI / m) / (2.0 * M_PI);
    static const GaussRule g_ax = gauss_legendre(48);
    static const GaussRule g_ang = gauss_legendre(10);
    double vol_radius = 0.0; // int pi R^2 dx1 (true cylinder volume)
    double vol_image = 0.0;  // exact image volume of the meshed polygon
    if (config_.fixed_domain) {
        vol_radius = M_PI * config_.model.r_ref * config_.model.r_ref * config_.model.length;
        vol_image = poly_ratio * vol_radius;
    } else {
        const double r0 = config_.model.r_ref;
        const double half = M_PI / m;
        vol_radius = gauss_integrate(g_ax, 0.0, config_.model.length, [&](double x1) {
            const double r = slices_[node]->at(t, x1).value;
            return M_PI * r * r;
        });
        // The mesh fills the inscribed polygon exactly; its image under the
        // radial map has the cross-section area (m/2) int rho(R, r_edge)^2.
        vol_image = gauss_integrate(g_ax, 0.0, config_.model.length, [&](double x1) {
            const double radius = slices_[node]->at(t, x1).value;
            return 0.5 * m *
                   gauss_integrate(g_ang, -half, half, [&](double psi) {
                       const double r_edge = r0 * std::cos(half) / std::cos(psi);
                       const double rho = rho_field_.evaluate(radius, r_edge).rho;
                       return rho * rho;
                   });
        });
    }
    rec.volume_defect_rel = std::abs(vol_fluid - vol_radius) / vol_radius;
    rec.volume_quadrature_rel = std::abs(vol_fluid - vol_image) / vol_image;
    require_invariant(rec.volume_quadrature_rel <= 5e-3,
                      "driver: deformed volume disagrees with the polygon image volume");
    const double poly_defect = 1.0 - poly_ratio;
    require_invariant(rec.volume_defect_rel <=
                          3.0 * poly_defect * config_.model.r_ref / config_.model.r_min + 1e-8,
                      "driver: deformed volume strays beyond the polygonal defect band");

    const double floor = config_.fixed_domain ? 1.0 : defs_[node]->jacobian_floor();
    require_invariant(rec.j_min >= floor - 1e-12,
                      "driver: Jacobian fell below the guaranteed floor");
    require_invariant(std::isfinite(rec.energy) && std::isfinite(rec.q_out),
                      "driver: non-finite diagnostics");
    return rec;
}

StepRecord Driver::advance_step()
{
    const int node = int(times_.size()) - 1;
    const double t_new = times_.back() + dt_;
    double t1_guess = spatial_average(mesh_, *solid_space_, solid_part(theta_[node]));

    StepRecord rec;
    LevelSolution level;
    Eigen::VectorXd prev;
    const int iters = config_.fixed_domain ? 1 : config_.n_subiter;
    for (int j = 0; j < iters; ++j) {
        level = solve_level(node, t_new, t1_guess, history_);
        if (j > 0)
            rec.subiter_residuals.push_back(transport_->solid_l2_distance(level.theta, prev));
        prev = level.theta;
        t1_guess = spatial_average(mesh_, *solid_space_, solid_part(level.theta));
    }

    rec.stokes_residual = level.stokes_residual;
    rec.transport_residual = level.transport_residual;
    rec.max_peclet = level.max_peclet;
    const auto subiter = rec.subiter_residuals;
    commit(node, t_new, std::move(level), t1_guess);
    StepRecord full = diagnose(node + 1);
    full.subiter_residuals = subiter;
    full.stokes_residual = rec.stokes_residual;
    full.transport_residual = rec.transport_residual;
    full.max_peclet = rec.max_peclet;
    records_.push_back(full);
    return full;
}

void Driver::run_staggered()
{
    while (times_.back() < config_.model.t_final - 1e-12)
        advance_step();
}

Checkpoint Driver::make_checkpoint() const
{
    Checkpoint ck;
    ck.t = times_.back();
    ck.step_index = int(times_.size()) - 1;
    ck.c = chem_.back().c;
    ck.c_x = chem_.back().c_x;
    ck.history_plateau = history_.plateau();
    ck.history_window = history_.window();
    ck.history_times = history_.times();
    ck.history_values = history_.values();
    ck.theta = theta_.back();
    ck.w = w_.back();
    ck.q = q_.back();
    return ck;
}

void Driver::restore(const Checkpoint& ck)
{
    require(ck.theta.size() == transport_->n_total(),
            "checkpoint does not match the configured discretization");
    require(int(ck.c.size()) == int(chemistry_->nodes().size()),
            "checkpoint does not match the concentration grid");

    times_ = {ck.t};
    theta_ = {ck.theta};
    w_ = {ck.w};
    q_ = {ck.q};
    history_ = AveragedHistory(ck.history_plateau, ck.history_window);
    for (std::size_t i = 0; i < ck.history_times.size(); ++i)
        history_.append(ck.history_times[i], ck.history_values[i]);
    ChemistryEngine::State st;
    st.t = ck.t;
    st.c = ck.c;
    st.c_x = ck.c_x;
    chem_.clear();
    chem_.push_back(std::move(st));
    slices_.clear();
    defs_.clear();
    records_.clear();
    cached_fixed_flow_.reset();
    if (config_.fixed_domain) {
        slices_.push_back(nullptr);
        defs_.push_back(nullptr);
    } else {
        slices_.push_back(
            std::make_unique<SampledRadiusSlice>(chemistry_->radius_slice(chem_.back(), history_)));
        defs_.push_back(
            std::make_unique<DeformationField>(config_.model, rho_field_, *slices_.back()));
    }
    records_.push_back(diagnose(0));
}

double Driver::trajectory_distance(const std::vector<Eigen::VectorXd>& a,
                                   const std::vector<Eigen::VectorXd>& b) const
{
    require(a.size() == b.size() && !a.empty(), "trajectory distance: size mismatch");
    double acc = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double weight = (n == 0 || n + 1 == a.size()) ? 0.5 * dt_ : dt_;
        const Eigen::VectorXd diff = a[n] - b[n];
        acc += weight * p1_l2_norm_sq(mesh_, *solid_space_, diff);
    }
    return std::sqrt(acc);
}

std::vector<Eigen::VectorXd> Driver::apply_solution_operator(
    const std::vector<Eigen::VectorXd>& solid_guess)
{
    require(int(solid_guess.size()) == n_steps_ + 1,
            "solution operator: guess trajectory has the wrong number of nodes");
    seed_initial_state();

    // Averaged-temperature history generated by the guess.
    AveragedHistory guess_history(history_.plateau(), config_.model.window);
    for (int n = 0; n <= n_steps_; ++n)
        guess_history.append(n == 0 ? 0.0 : n * dt_,
                             spatial_average(mesh_, *solid_space_, solid_guess[n]));

    // Chemistry, geometry and flow for the whole trajectory.
    std::vector<ChemistryEngine::State> chem_traj = {chemistry_->initial_state()};
    for (int n = 1; n <= n_steps_; ++n)
        chem_traj.push_back(chemistry_->advance(chem_traj.back(), n * dt_, guess_history));

    slices_.clear();
    defs_.clear();
    chem_ = std::move(chem_traj);
    for (int n = 0; n <= n_steps_; ++n) {
        if (config_.fixed_domain) {
            slices_.push_back(nullptr);
            defs_.push_back(nullptr);
            continue;
        }
        slices_.push_back(
            std::make_unique<SampledRadiusSlice>(chemistry_->radius_slice(chem_[n], guess_history)));
        defs_.push_back(
            std::make_unique<DeformationField>(config_.model, rho_field_, *slices_[n]));
    }

    // Transport sweep driven by the per-node flow solutions.
    w_.clear();
    q_.clear();
    {
        const auto sol0 = stokes_->solve_at(0.0, deformation_at(0));
        w_.push_back(sol0.w);
        q_.push_back(sol0.q);
    }
    std::vector<Eigen::VectorXd> result = {solid_part(theta_[0])};
    for (int n = 0; n < n_steps_; ++n) {
        const double t_new = (n + 1) * dt_;
        const auto flow = config_.fixed_domain && cached_fixed_flow_
                              ? *cached_fixed_flow_
                              : stokes_->solve_at(t_new, deformation_at(n + 1));
        if (config_.fixed_domain && !cached_fixed_flow_)
            cached_fixed_flow_ = flow;
        TransportVelocity vel(stokes_.get(), &flow.w);
        auto step = transport_->step(n * dt_, t_new, theta_[n], deformation_at(n),
                                     deformation_at(n + 1), vel);
        times_.push_back(t_new);
        theta_.push_back(std::move(step.theta));
        w_.push_back(flow.w);
        q_.push_back(flow.q);
        result.push_back(solid_part(theta_.back()));
    }

    // Rebuild the committed history from the produced trajectory.
    history_ = AveragedHistory(history_.plateau(), config_.model.window);
    for (int n = 0; n <= n_steps_; ++n)
        history_.append(n == 0 ? 0.0 : n * dt_,
                        spatial_average(mesh_, *solid_space_, result[n]));
    records_.clear();
    for (int n = 0; n <= n_steps_; ++n)
        records_.push_back(diagnose(n));
    return result;
}

Driver::PicardResult Driver::run_picard(double initial_guess_value)
{
    PicardResult out;
    seed_initial_state();
    std::vector<Eigen::VectorXd> guess(std::size_t(n_steps_) + 1);
    guess[0] = solid_part(theta_[0]);
    for (int n = 1; n <= n_steps_; ++n)
        guess[n] = Eigen::VectorXd::Constant(solid_space_->n_dofs(), initial_guess_value);

    for (int k = 1; k <= config_.picard_max_iter; ++k) {
        const auto next = apply_solution_operator(guess);
        const double resid = trajectory_distance(next, guess);
        out.residuals.push_back(resid);
        out.iterations = k;
        guess = next;
        if (resid < config_.picard_tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// End-to-end run with outputs
// ---------------------------------------------------------------------------

namespace {

std::vector<double> csv_row(const StepRecord& r)
{
    return {r.t,   r.t1,    r.t_avg,         r.r_min,  r.r_mean,
            r.r_max, r.q_in, r.q_out, r.interface_flux, r.energy};
}

void write_snapshots(const Driver& d, const std::string& dir, int node, int snapshot_index)
{
    const auto& mesh = d.mesh();
    const double t = d.times()[node];
    const DeformationField& def = d.deformation_at(node);
    const auto& transport = const_cast<Driver&>(d).transport();
    const auto& stokes = const_cast<Driver&>(d).stokes();
    const ScalarSpace& fluid = transport.fluid_space();
    const ScalarSpace& solid = transport.solid_space();

    const Eigen::VectorXd theta_f = d.theta()[node].head(fluid.n_dofs());
    const Eigen::VectorXd theta_s = d.theta()[node].tail(solid.n_dofs());
    const Eigen::VectorXd& w = d.velocity()[node];
    const Eigen::VectorXd& q = d.pressure()[node];

    // Physical reconstruction on the fluid: v = w + vb, p = q + fb.
    Eigen::VectorXd p_phys = q;
    for (int dof = 0; dof < q.size(); ++dof) {
        const Eigen::Vector3d x = mesh.vertices[stokes.pressure_space().dof_vertex(dof)];
        p_phys[dof] += def.params().boundary_stress.value(x[0], def.params().length);
    }
    const auto& vel_space = stokes.velocity_space();
    auto velocity_fn = [&](int vertex) {
        const int s = vel_space.vertex_scalar_dof(vertex);
        Eigen::Vector3d v = Eigen::Vector3d::Zero();
        if (s >= 0)
            v = Eigen::Vector3d(w[3 * s], w[3 * s + 1], w[3 * s + 2]);
        return Eigen::Vector3d(v + def.evaluate(t, mesh.vertices[vertex], Side::Fluid).vb);
    };

    char name[64];
    std::snprintf(name, sizeof name, "/fluid_%04d.vtk", snapshot_index);
    write_vtk_snapshot(dir + name, mesh, fluid, t, def,
                       {{"temperature", &theta_f}, {"pressure", &p_phys}},
                       {{"velocity", velocity_fn}});
    std::snprintf(name, sizeof name, "/solid_%04d.vtk", snapshot_index);
    write_vtk_snapshot(dir + name, mesh, solid, t, def, {{"temperature", &theta_s}}, {});
}

} // namespace

int run_simulation(const RunConfig& config, const std::string& out_dir, std::string* report_json,
                   const std::string& restart_checkpoint)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const auto wall_start = std::chrono::steady_clock::now();
    nlohmann::json report;
    report["mode"] = config.mode == CouplingMode::Picard ? "picard" : "staggered";
    report["fixed_domain"] = config.fixed_domain;
    report["deterministic"] = config.deterministic;
    report["dt"] = config.dt;
    report["t_final"] = config.model.t_final;
    report["resolution"] = {{"n_axial", config.resolution.n_axial},
                            {"n_angular", config.resolution.n_angular},
                            {"n_radial", config.resolution.n_radial},
                            {"n_outer", config.resolution.n_outer}};

    int exit_code = 0;
    std::string failure;
    Driver driver(config);
    CsvWriter csv(config.write_csv ? out_dir + "/series.csv" : "",
                  {"t", "T1", "T", "R_min", "R_mean", "R_max", "Q_in", "Q_out", "interface_flux",
                   "energy"});

    try {
        if (config.mode == CouplingMode::Picard) {
            const auto pic = driver.run_picard(config.model.theta_s0);
            report["picard"] = {{"residuals", pic.residuals},
                                {"iterations", pic.iterations},
                                {"converged", pic.converged}};
            if (!pic.converged) {
                exit_code = 3;
                failure = "fixed-point iteration did not reach tolerance";
            }
            for (const auto& r : driver.records())
                csv.append(csv_row(r));
        } else {
            if (!restart_checkpoint.empty())
                driver.restore(load_checkpoint(restart_checkpoint));
            else
                driver.initialize();
            csv.append(csv_row(driver.records().front()));
            if (config.write_csv)
                csv.flush();
            int snapshot = 0;
            if (config.write_vtk)
                write_snapshots(driver, out_dir, 0, snapshot++);
            while (driver.times().back() < config.model.t_final - 1e-12) {
                const auto rec = driver.advance_step();
                csv.append(csv_row(rec));
                if (config.write_csv)
                    csv.flush();
                const int node = int(driver.times().size()) - 1;
                if (config.write_vtk && node % config.vtk_stride == 0)
                    write_snapshots(driver, out_dir, node, snapshot++);
            }
        }
    } catch (const NotConverged& e) {
        exit_code = 3;
        failure = e.what();
    } catch (const InvariantViolation& e) {
        exit_code = 2;
        failure = e.what();
    }

    if (config.write_csv)
        csv.flush();
    if (config.write_checkpoint && !driver.times().empty() && exit_code == 0)
        save_checkpoint(out_dir + "/final.ckpt", driver.make_checkpoint());

    nlohmann::json steps = nlohmann::json::array();
    double j_min_overall = 1e300;
    double peclet_max = 0.0;
    for (const auto& r : driver.records()) {
        j_min_overall = std::min(j_min_overall, r.j_min);
        peclet_max = std::max(peclet_max, r.max_peclet);
        steps.push_back({{"t", r.t},
                         {"j_min", r.j_min},
                         {"stokes_residual", r.stokes_residual},
                         {"transport_residual", r.transport_residual},
                         {"volume_defect_rel", r.volume_defect_rel},
                         {"volume_quadrature_rel", r.volume_quadrature_rel},
                         {"subiter_residuals", r.subiter_residuals},
                         {"max_cell_peclet", r.max_peclet},
                         {"energy", r.energy}});
    }
    report["steps"] = steps;
    report["j_min_overall"] = j_min_overall;
    report["max_cell_peclet"] = peclet_max;
    if (peclet_max > 2.0)
        report["warnings"] = {"cell Peclet number above 2; consider refining the mesh"};
    report["exit_code"] = exit_code;
    if (!failure.empty())
        report["failure"] = failure;
    const auto wall_end = std::chrono::steady_clock::now();
    report["wall_time_s"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(wall_end - wall_start).count() /
        1000.0;

    const std::string json_text = report.dump(2);
    atomic_write(out_dir + "/report.json", json_text);
    if (report_json)
        *report_json = json_text;
    return exit_code;
}

} // namespace vasotherm
