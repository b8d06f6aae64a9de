// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vasotherm/checkpoint.hpp"
#include "vasotherm/chemistry.hpp"
#include "vasotherm/config.hpp"
#include "vasotherm/deformation.hpp"
#include "vasotherm/stokes.hpp"
#include "vasotherm/transport.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vasotherm {

// Per-step diagnostics recorded in the run report and the CSV series.
struct StepRecord {
    double t = 0.0;
    double t1 = 0.0;     // spatially averaged solid temperature
    double t_avg = 0.0;  // kernel-averaged temperature driving production
    double r_min = 0.0, r_mean = 0.0, r_max = 0.0;
    double q_in = 0.0, q_out = 0.0;
    double interface_flux = 0.0;
    double energy = 0.0;
    double j_min = 1.0;
    double stokes_residual = 0.0;
    double transport_residual = 0.0;
    double max_peclet = 0.0;
    double volume_defect_rel = 0.0;     // | int J - int pi R^2 | / int pi R^2
    double volume_quadrature_rel = 0.0; // against the exact image volume of the meshed polygon
    std::vector<double> subiter_residuals;
};

// Orchestrates the coupled time loop. Owns the mesh, the spaces, the
// sub-solvers and the committed trajectory; two driving modes share the
// same building blocks: a staggered step with sub-iterations, and the
// global fixed-point sweep over whole trajectories.
class Driver {
public:
    explicit Driver(const RunConfig& config);

    const RunConfig& config() const { return config_; }
    const ReferenceMesh& mesh() const { return mesh_; }
    TransportSolver& transport() { return *transport_; }
    StokesSolver& stokes() { return *stokes_; }
    const ChemistryEngine& chemistry() const { return *chemistry_; }
    int n_steps() const { return n_steps_; }
    double dt() const { return dt_; }

    // Committed trajectory (index 0 is the initial state).
    const std::vector<double>& times() const { return times_; }
    const std::vector<Eigen::VectorXd>& theta() const { return theta_; }
    const std::vector<Eigen::VectorXd>& velocity() const { return w_; }
    const std::vector<Eigen::VectorXd>& pressure() const { return q_; }
    const AveragedHistory& history() const { return history_; }
    const std::vector<StepRecord>& records() const { return records_; }

    // Staggered mode.
    void initialize();
    StepRecord advance_step();
    void run_staggered();

    // Restart support: rebuild the committed state from a checkpoint and
    // continue stepping to the final time.
    void restore(const Checkpoint& checkpoint);
    Checkpoint make_checkpoint() const;

    // Global fixed-point mode: iterate the solution operator on the full
    // space-time solid temperature until the L2(0,T;L2) increment drops
    // below the tolerance.
    struct PicardResult {
        std::vector<double> residuals;
        int iterations = 0;
        bool converged = false;
    };
    PicardResult run_picard(double initial_guess_value);

    // One application of the solution operator: trajectory of solid
    // temperatures in, full pipeline out (commits the resulting trajectory
    // into the driver state).
    std::vector<Eigen::VectorXd> apply_solution_operator(
        const std::vector<Eigen::VectorXd>& solid_guess);

    // L2(0,T;L2(solid)) distance between two solid-temperature trajectories
    // on the driver's time grid (trapezoidal in time).
    double trajectory_distance(const std::vector<Eigen::VectorXd>& a,
                               const std::vector<Eigen::VectorXd>& b) const;

    // Deformation bound to the committed radius slice at a node (identity in
    // fixed-domain mode).
    const DeformationField& deformation_at(int node) const;

    Eigen::VectorXd solid_part(const Eigen::VectorXd& combined) const;

private:
    RunConfig config_;
    ReferenceMesh mesh_;
    std::unique_ptr<ScalarSpace> fluid_space_, solid_space_, pressure_space_;
    std::unique_ptr<VelocitySpace> velocity_space_;
    std::unique_ptr<StokesSolver> stokes_;
    std::unique_ptr<TransportSolver> transport_;
    std::unique_ptr<RhoProfile> rho_profile_;
    std::unique_ptr<RhoTable> rho_table_;
    RhoField rho_field_;
    std::unique_ptr<ChemistryEngine> chemistry_;
    std::unique_ptr<DeformationField> identity_def_;

    int n_steps_ = 0;
    double dt_ = 0.0;

    // Committed trajectory.
    std::vector<double> times_;
    std::vector<ChemistryEngine::State> chem_;
    std::vector<std::unique_ptr<SampledRadiusSlice>> slices_;
    std::vector<std::unique_ptr<DeformationField>> defs_;
    std::vector<Eigen::VectorXd> theta_, w_, q_;
    AveragedHistory history_;
    std::vector<StepRecord> records_;
    std::optional<StokesSolver::Solution> cached_fixed_flow_;

    struct LevelSolution {
        ChemistryEngine::State chem;
        std::unique_ptr<SampledRadiusSlice> slice;
        std::unique_ptr<DeformationField> def;
        StokesSolver::Solution flow;
        Eigen::VectorXd theta;
        double stokes_residual = 0.0, transport_residual = 0.0, max_peclet = 0.0;
    };

    // Solve chemistry -> deformation -> flow -> transport at t_new given the
    // committed state at node n and a provisional averaged temperature.
    LevelSolution solve_level(int node, double t_new, double t1_guess,
                              const AveragedHistory& base_history);

    StepRecord diagnose(int new_node);
    void commit(int node, double t_new, LevelSolution&& level, double t1_value);
    double min_jacobian(const DeformationField& def, double t) const;
    void seed_initial_state();
};

// Execute the configured run and write outputs (CSV series, VTK snapshots,
// machine-readable report, final checkpoint) into out_dir. Returns the
// process exit code: 0 success, 2 invariant failure, 3 non-convergence.
int run_simulation(const RunConfig& config, const std::string& out_dir,
                   std::string* report_json = nullptr,
                   const std::string& restart_checkpoint = {});

} // namespace vasotherm
