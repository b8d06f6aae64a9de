// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/transport.hpp"

#include "vasotherm/chemistry.hpp"
#include "vasotherm/common.hpp"
#include "vasotherm/quadrature.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace vasotherm {

TransportSolver::TransportSolver(const ReferenceMesh& mesh, const ScalarSpace& fluid,
                                 const ScalarSpace& solid, const VelocitySpace& velocity,
                                 TransportOptions options)
    : mesh_(&mesh), fluid_(&fluid), solid_(&solid), velocity_space_(&velocity), options_(options)
{
    // Homogeneous Dirichlet rows: solid unknowns on the top face.
    std::vector<char> flag(std::size_t(solid.n_dofs()), 0);
    for (const auto& f : mesh.boundary_facets) {
        if (f.tag != BoundaryTag::Dirichlet)
            continue;
        for (int v : f.v) {
            const int d = solid.vertex_dof(v);
            require(d >= 0, "transport: Dirichlet facet outside the solid");
            flag[d] = 1;
        }
    }
    for (int d = 0; d < solid.n_dofs(); ++d)
        if (flag[d])
            dirichlet_.push_back(solid_offset() + d);
    condenser_ = std::make_unique<DofCondenser>(n_total(), dirichlet_);
}

Eigen::VectorXd TransportSolver::constant_state(double fluid_value, double solid_value) const
{
    Eigen::VectorXd v(n_total());
    v.head(fluid_->n_dofs()).setConstant(fluid_value);
    v.tail(solid_->n_dofs()).setConstant(solid_value);
    return v;
}

Eigen::VectorXd TransportSolver::interpolate(
    const std::function<double(const Eigen::Vector3d&, Side)>& f) const
{
    Eigen::VectorXd v(n_total());
    for (int d = 0; d < fluid_->n_dofs(); ++d)
        v[d] = f(mesh_->vertices[fluid_->dof_vertex(d)], Side::Fluid);
    for (int d = 0; d < solid_->n_dofs(); ++d)
        v[solid_offset() + d] = f(mesh_->vertices[solid_->dof_vertex(d)], Side::Solid);
    return v;
}

TransportSolver::StepResult TransportSolver::step(
    double t_old, double t_new, const Eigen::VectorXd& theta_old,
    const DeformationField& def_old, const DeformationField& def_new,
    const TransportVelocity& velocity,
    const std::function<double(double, const Eigen::Vector3d&)>* inflow_override,
    const TransportManufacturedRhs* mms) const
{
    require(t_new > t_old, "transport: nonpositive step");
    const double dt = t_new - t_old;
    const ModelParams& params = def_new.params();
    const double alpha = params.heat_transfer;

    std::vector<Triplet> trips;
    trips.reserve(std::size_t(mesh_->n_cells()) * 16 + mesh_->interface_facets.size() * 36);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_total());

    const TetRule rule = tet_rule(options_.quad_degree);
    const TriRule frule = tri_rule(options_.facet_degree);
    double max_peclet = 0.0;

    // Volume terms on both subdomains.
    for (int cell = 0; cell < mesh_->n_cells(); ++cell) {
        const Side side = mesh_->cell_domain[cell] == Subdomain::Fluid ? Side::Fluid : Side::Solid;
        const ScalarSpace& space = side == Side::Fluid ? *fluid_ : *solid_;
        const int offset = side == Side::Fluid ? 0 : solid_offset();
        const CellGeometry geo = CellGeometry::make(*mesh_, cell);
        const auto& tet = mesh_->cells[cell];
        int dofs[4];
        double old_vals[4];
        for (int i = 0; i < 4; ++i) {
            dofs[i] = offset + space.vertex_dof(tet[i]);
            old_vals[i] = theta_old[dofs[i]];
        }
        const int vk = side == Side::Fluid ? velocity_space_->cell_index(cell) : -1;

        Eigen::Matrix4d A_loc = Eigen::Matrix4d::Zero();
        Eigen::Vector4d b_loc = Eigen::Vector4d::Zero();
        double h_cell = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                h_cell = std::max(h_cell, (geo.x[i] - geo.x[j]).norm());

        for (std::size_t qp = 0; qp < rule.bary.size(); ++qp) {
            const auto& L = rule.bary[qp];
            const double wq = rule.weights[qp] * geo.volume;
            const Eigen::Vector3d x = geo.point(L);
            const DeformationEval de = def_new.evaluate(t_new, x, side);

            // J-weighted mass at the new level plus transformed diffusion.
            for (int i = 0; i < 4; ++i) {
                const Eigen::Vector3d kg = de.k_pull * geo.grad_lambda.col(i);
                for (int j = 0; j < 4; ++j)
                    A_loc(j, i) += wq * (de.J / dt * L[i] * L[j] +
                                         kg.dot(geo.grad_lambda.col(j)));
            }

            // Convection by the relative velocity (fluid only).
            if (side == Side::Fluid) {
                const Eigen::Vector3d aw = de.A * velocity.at(t_new, vk, L, x);
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        A_loc(i, j) -= wq * L[j] * aw.dot(geo.grad_lambda.col(i));
                if (qp == 0) {
                    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(
                        0.5 * (de.k_pull + de.k_pull.transpose()));
                    const double pe =
                        aw.norm() * h_cell / (2.0 * std::max(es.eigenvalues().minCoeff(), 1e-30));
                    max_peclet = std::max(max_peclet, pe);
                }
            }

            // Old-level J-weighted mass applied to the previous iterate.
            const double j_old = def_old.evaluate(t_old, x, side).J;
            double theta_qp = 0.0;
            for (int i = 0; i < 4; ++i)
                theta_qp += L[i] * old_vals[i];
            for (int i = 0; i < 4; ++i)
                b_loc(i) += wq * j_old / dt * theta_qp * L[i];

            if (mms && mms->volume) {
                const double src = mms->volume(t_new, x, side);
                for (int i = 0; i < 4; ++i)
                    b_loc(i) += wq * src * L[i];
            }
        }

        for (int i = 0; i < 4; ++i) {
            rhs[dofs[i]] += b_loc(i);
            for (int j = 0; j < 4; ++j)
                trips.emplace_back(dofs[i], dofs[j], A_loc(i, j));
        }
    }

    // Advective in/out faces of the fluid, split by the sign of w.n, and
    // the manufactured Neumann correction on the remaining solid boundary.
    for (const auto& f : mesh_->boundary_facets) {
        if (f.tag == BoundaryTag::Dirichlet)
            continue;
        if (f.tag == BoundaryTag::Neumann) {
            if (mms && mms->neumann) {
                const CellGeometry geo = CellGeometry::make(*mesh_, f.cell);
                for (std::size_t qp = 0; qp < frule.bary.size(); ++qp) {
                    const auto bc = facet_bary_in_cell(*mesh_, f.cell, f.v, frule.bary[qp]);
                    const Eigen::Vector3d x = geo.point(bc);
                    const double wq = frule.weights[qp] * f.area;
                    const double val = mms->neumann(t_new, x, f.normal);
                    for (int i = 0; i < 3; ++i)
                        rhs[solid_offset() + solid_->vertex_dof(f.v[i])] +=
                            wq * val * frule.bary[qp][i];
                }
            }
            continue;
        }

        // In/out face of the fluid.
        const CellGeometry geo = CellGeometry::make(*mesh_, f.cell);
        const int vk = velocity_space_->cell_index(f.cell);
        int dofs[3];
        for (int i = 0; i < 3; ++i)
            dofs[i] = fluid_->vertex_dof(f.v[i]);
        for (std::size_t qp = 0; qp < frule.bary.size(); ++qp) {
            const auto bc = facet_bary_in_cell(*mesh_, f.cell, f.v, frule.bary[qp]);
            const Eigen::Vector3d x = geo.point(bc);
            const double wq = frule.weights[qp] * f.area;
            const DeformationEval de = def_new.evaluate(t_new, x, Side::Fluid);
            const double wn = velocity.at(t_new, vk, bc, x).dot(f.normal);
            const double wn_pos = std::max(wn, 0.0);
            const double wn_neg = std::min(wn, 0.0);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j)
                    trips.emplace_back(dofs[i], dofs[j],
                                       wq * wn_pos * de.J * frule.bary[qp][i] * frule.bary[qp][j]);
                const double fin = inflow_override ? (*inflow_override)(t_new, x)
                                                   : params.inflow_temperature;
                rhs[dofs[i]] -= wq * fin * wn_neg * de.J * frule.bary[qp][i];
                if (mms && mms->inout)
                    rhs[dofs[i]] += wq * mms->inout(t_new, x, f.normal) * frule.bary[qp][i];
            }
        }
    }

    // Interface exchange with the surface-measure factor.
    for (const auto& f : mesh_->interface_facets) {
        int fd[3], sd[3];
        for (int i = 0; i < 3; ++i) {
            fd[i] = fluid_->vertex_dof(f.v[i]);
            sd[i] = solid_offset() + solid_->vertex_dof(f.v[i]);
        }
        const Eigen::Vector3d p0 = mesh_->vertices[f.v[0]];
        const Eigen::Vector3d p1 = mesh_->vertices[f.v[1]];
        const Eigen::Vector3d p2 = mesh_->vertices[f.v[2]];
        for (std::size_t qp = 0; qp < frule.bary.size(); ++qp) {
            const auto& b = frule.bary[qp];
            const Eigen::Vector3d x = b[0] * p0 + b[1] * p1 + b[2] * p2;
            const double factor = def_new.interface_factor(t_new, x[0]);
            const double wq = frule.weights[qp] * f.area * alpha * factor;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double m = wq * b[i] * b[j];
                    trips.emplace_back(fd[i], fd[j], m);
                    trips.emplace_back(sd[i], sd[j], m);
                    trips.emplace_back(fd[i], sd[j], -m);
                    trips.emplace_back(sd[i], fd[j], -m);
                }
            if (mms && mms->interface_flux) {
                const double gf = mms->interface_flux(t_new, x, f.normal_fluid, Side::Fluid);
                const double gs = mms->interface_flux(t_new, x, f.normal_fluid, Side::Solid);
                for (int i = 0; i < 3; ++i) {
                    rhs[fd[i]] += frule.weights[qp] * f.area * gf * b[i];
                    rhs[sd[i]] += frule.weights[qp] * f.area * gs * b[i];
                }
            }
        }
    }

    SparseMat full(n_total(), n_total());
    full.setFromTriplets(trips.begin(), trips.end());

    // Condense the Dirichlet rows (homogeneous data).
    const int n_red = condenser_->n_reduced();
    std::vector<Triplet> red_trips;
    red_trips.reserve(trips.size());
    for (int k = 0; k < full.outerSize(); ++k)
        for (SparseMat::InnerIterator it(full, k); it; ++it) {
            const int r = condenser_->reduced(int(it.row()));
            const int c = condenser_->reduced(int(it.col()));
            if (r >= 0 && c >= 0)
                red_trips.emplace_back(r, c, it.value());
        }
    SparseMat reduced(n_red, n_red);
    reduced.setFromTriplets(red_trips.begin(), red_trips.end());
    Eigen::VectorXd rhs_red = condenser_->restrict_vec(rhs);

    Eigen::SparseLU<SparseMat> lu;
    lu.analyzePattern(reduced);
    lu.factorize(reduced);
    require(lu.info() == Eigen::Success, "transport: factorization failed");
    const Eigen::VectorXd sol = lu.solve(rhs_red);

    StepResult out;
    out.max_cell_peclet = max_peclet;
    const double rhs_norm = rhs_red.norm();
    out.residual = (reduced * sol - rhs_red).norm();
    if (rhs_norm > 0.0)
        out.residual /= rhs_norm;
    require_invariant(out.residual <= options_.residual_tol || rhs_norm == 0.0,
                      "transport: solver residual above tolerance");
    out.theta = condenser_->expand(sol);
    return out;
}

double TransportSolver::energy_norm(double t, const Eigen::VectorXd& theta,
                                    const DeformationField& def) const
{
    const TetRule rule = tet_rule(options_.quad_degree);
    double acc = 0.0;
    for (int cell = 0; cell < mesh_->n_cells(); ++cell) {
        const Side side = mesh_->cell_domain[cell] == Subdomain::Fluid ? Side::Fluid : Side::Solid;
        const ScalarSpace& space = side == Side::Fluid ? *fluid_ : *solid_;
        const int offset = side == Side::Fluid ? 0 : solid_offset();
        const CellGeometry geo = CellGeometry::make(*mesh_, cell);
        const auto& tet = mesh_->cells[cell];
        for (std::size_t qp = 0; qp < rule.bary.size(); ++qp) {
            const auto& L = rule.bary[qp];
            const Eigen::Vector3d x = geo.point(L);
            double v = 0.0;
            for (int i = 0; i < 4; ++i)
                v += L[i] * theta[offset + space.vertex_dof(tet[i])];
            acc += rule.weights[qp] * geo.volume * def.evaluate(t, x, side).J * v * v;
        }
    }
    return acc;
}

double TransportSolver::interface_heat_flux(double t, const Eigen::VectorXd& theta,
                                            const DeformationField& def) const
{
    const TriRule frule = tri_rule(options_.facet_degree);
    const double alpha = def.params().heat_transfer;
    double acc = 0.0;
    for (const auto& f : mesh_->interface_facets) {
        const Eigen::Vector3d p0 = mesh_->vertices[f.v[0]];
        const Eigen::Vector3d p1 = mesh_->vertices[f.v[1]];
        const Eigen::Vector3d p2 = mesh_->vertices[f.v[2]];
        for (std::size_t qp = 0; qp < frule.bary.size(); ++qp) {
            const auto& b = frule.bary[qp];
            const Eigen::Vector3d x = b[0] * p0 + b[1] * p1 + b[2] * p2;
            double jump = 0.0;
            for (int i = 0; i < 3; ++i)
                jump += b[i] * (theta[fluid_->vertex_dof(f.v[i])] -
                                theta[solid_offset() + solid_->vertex_dof(f.v[i])]);
            acc += frule.weights[qp] * f.area * alpha * jump *
                   def.interface_factor(t, x[0]);
        }
    }
    return acc;
}

double TransportSolver::face_mean_temperature(const Eigen::VectorXd& theta, bool outlet) const
{
    const double x_face = outlet ? mesh_->length : 0.0;
    double num = 0.0, den = 0.0;
    for (const auto& f : mesh_->boundary_facets) {
        if (f.tag != BoundaryTag::InOut)
            continue;
        if (std::abs(mesh_->vertices[f.v[0]][0] - x_face) > 1e-9)
            continue;
        double mean3 = 0.0;
        for (int i = 0; i < 3; ++i)
            mean3 += theta[fluid_->vertex_dof(f.v[i])];
        num += f.area * mean3 / 3.0;
        den += f.area;
    }
    return den > 0.0 ? num / den : 0.0;
}

double TransportSolver::face_advective_flux(double t, const Eigen::VectorXd& theta,
                                            const DeformationField& def,
                                            const TransportVelocity& velocity,
                                            bool outlet) const
{
    const double x_face = outlet ? mesh_->length : 0.0;
    const TriRule frule = tri_rule(options_.facet_degree);
    double acc = 0.0;
    for (const auto& f : mesh_->boundary_facets) {
        if (f.tag != BoundaryTag::InOut)
            continue;
        if (std::abs(mesh_->vertices[f.v[0]][0] - x_face) > 1e-9)
            continue;
        const CellGeometry geo = CellGeometry::make(*mesh_, f.cell);
        const int vk = velocity_space_->cell_index(f.cell);
        for (std::size_t qp = 0; qp < frule.bary.size(); ++qp) {
            const auto bc = facet_bary_in_cell(*mesh_, f.cell, f.v, frule.bary[qp]);
            const Eigen::Vector3d x = geo.point(bc);
            const double wn = velocity.at(t, vk, bc, x).dot(f.normal);
            double v = 0.0;
            for (int i = 0; i < 3; ++i)
                v += frule.bary[qp][i] * theta[fluid_->vertex_dof(f.v[i])];
            acc += frule.weights[qp] * f.area * v * wn *
                   def.evaluate(t, x, Side::Fluid).J;
        }
    }
    return acc;
}

double TransportSolver::solid_l2_distance(const Eigen::VectorXd& a,
                                          const Eigen::VectorXd& b) const
{
    const Eigen::VectorXd diff =
        a.tail(solid_->n_dofs()) - b.tail(solid_->n_dofs());
    return std::sqrt(p1_l2_norm_sq(*mesh_, *solid_, diff));
}

} // namespace vasotherm
