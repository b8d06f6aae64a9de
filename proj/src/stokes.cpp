// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/stokes.hpp"

#include "vasotherm/common.hpp"
#include "vasotherm/quadrature.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace vasotherm {

namespace {

// Velocity unknown numbering: 3 * scalar + component.
inline int vdof(int scalar, int comp) { return 3 * scalar + comp; }

} // namespace

StokesSolver::StokesSolver(const ReferenceMesh& mesh, const VelocitySpace& velocity,
                           const ScalarSpace& pressure, StokesOptions options)
    : mesh_(&mesh), velocity_(&velocity), pressure_(&pressure), options_(options)
{
    std::vector<int> constrained;
    constrained.reserve(velocity.interface_scalar_dofs().size() * 3);
    for (int s : velocity.interface_scalar_dofs())
        for (int c = 0; c < 3; ++c)
            constrained.push_back(vdof(s, c));
    condenser_ = std::make_unique<DofCondenser>(velocity.n_dofs(), constrained);
}

StokesSolver::System StokesSolver::assemble(double t, const DeformationField& def,
                                            const StokesManufacturedRhs* mms) const
{
    const int n_w = condenser_->n_reduced();
    const int n_p = pressure_->n_dofs();
    const double mu = def.params().viscosity;
    const Eigen::Vector3d grad_fb = def.params().boundary_stress.gradient(def.params().length);

    std::vector<Triplet> trips;
    trips.reserve(std::size_t(velocity_->cells().size()) * 1200);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_w + n_p);

    const TetRule rule = tet_rule(options_.quad_degree);
    double N[10];
    Eigen::Vector3d grad[10];

    for (std::size_t k = 0; k < velocity_->cells().size(); ++k) {
        const int cell = velocity_->cells()[k];
        const CellGeometry geo = CellGeometry::make(*mesh_, cell);
        const auto& dofs = velocity_->cell_dofs(int(k));
        const auto& tet = mesh_->cells[cell];

        Eigen::Matrix<double, 30, 30> K_loc = Eigen::Matrix<double, 30, 30>::Zero();
        Eigen::Matrix<double, 4, 30> B_loc = Eigen::Matrix<double, 4, 30>::Zero();
        Eigen::Matrix<double, 30, 1> f_loc = Eigen::Matrix<double, 30, 1>::Zero();
        Eigen::Matrix<double, 4, 1> g_loc = Eigen::Matrix<double, 4, 1>::Zero();

        for (std::size_t qp = 0; qp < rule.bary.size(); ++qp) {
            const auto& L = rule.bary[qp];
            const double wq = rule.weights[qp] * geo.volume;
            const Eigen::Vector3d x = geo.point(L);
            const DeformationEval de = def.evaluate(t, x, Side::Fluid);
            const Eigen::Matrix3d finv_t = de.F_inv.transpose();

            p2_shape(L, geo, N, grad);
            Eigen::Vector3d g[10], h[10];
            for (int a = 0; a < 10; ++a) {
                g[a] = finv_t * grad[a];
                h[a] = de.A.transpose() * grad[a];
            }

            // Viscous block: 2 mu J e_F(u) : e_F(v).
            for (int a = 0; a < 10; ++a)
                for (int b = 0; b <= a; ++b) {
                    const double dot_ab = g[a].dot(g[b]);
                    for (int c = 0; c < 3; ++c)
                        for (int d = 0; d < 3; ++d) {
                            const double val =
                                mu * de.J * wq * ((c == d ? dot_ab : 0.0) + g[a][d] * g[b][c]);
                            K_loc(3 * a + c, 3 * b + d) += val;
                            if (a != b)
                                K_loc(3 * b + d, 3 * a + c) += val;
                        }
                }

            // Divergence block: -q A : grad(phi), with linear pressure.
            for (int p = 0; p < 4; ++p)
                for (int a = 0; a < 10; ++a)
                    for (int c = 0; c < 3; ++c)
                        B_loc(p, 3 * a + c) -= wq * L[p] * h[a][c];

            if (mms) {
                const Eigen::Vector3d fv = mms->volume_force(t, x);
                for (int a = 0; a < 10; ++a)
                    for (int c = 0; c < 3; ++c)
                        f_loc(3 * a + c) += wq * N[a] * fv[c];
                const double gs = mms->mass_source(t, x);
                for (int p = 0; p < 4; ++p)
                    g_loc(p) += wq * L[p] * gs;
            } else {
                // -(A^T grad fb) . phi - 2 mu J e_F(vb) : e_F(phi)
                const Eigen::Vector3d afb = de.A.transpose() * grad_fb;
                const Eigen::Matrix3d tvb = finv_t * de.grad_vb;
                const Eigen::Matrix3d evb = 0.5 * (tvb + tvb.transpose());
                for (int a = 0; a < 10; ++a) {
                    const Eigen::Vector3d evb_g = evb * g[a];
                    for (int c = 0; c < 3; ++c)
                        f_loc(3 * a + c) += wq * (-afb[c] * N[a] - 2.0 * mu * de.J * evb_g[c]);
                }
                // Mass row source: div(A vb) = A : grad(vb).
                const double div_avb = de.A.cwiseProduct(de.grad_vb).sum();
                for (int p = 0; p < 4; ++p)
                    g_loc(p) += wq * L[p] * div_avb;
            }
        }

        for (int a = 0; a < 10; ++a)
            for (int c = 0; c < 3; ++c) {
                const int row = condenser_->reduced(vdof(dofs[a], c));
                if (row < 0)
                    continue;
                rhs[row] += f_loc(3 * a + c);
                for (int b = 0; b < 10; ++b)
                    for (int d = 0; d < 3; ++d) {
                        const int col = condenser_->reduced(vdof(dofs[b], d));
                        if (col >= 0 && K_loc(3 * a + c, 3 * b + d) != 0.0)
                            trips.emplace_back(row, col, K_loc(3 * a + c, 3 * b + d));
                    }
            }
        for (int p = 0; p < 4; ++p) {
            const int prow = n_w + pressure_->vertex_dof(tet[p]);
            rhs[prow] += g_loc(p);
            for (int a = 0; a < 10; ++a)
                for (int c = 0; c < 3; ++c) {
                    const int col = condenser_->reduced(vdof(dofs[a], c));
                    if (col < 0 || B_loc(p, 3 * a + c) == 0.0)
                        continue;
                    trips.emplace_back(prow, col, B_loc(p, 3 * a + c));
                    trips.emplace_back(col, prow, B_loc(p, 3 * a + c));
                }
        }
    }

    // Manufactured traction on the end faces.
    if (mms && mms->traction) {
        const TriRule frule = tri_rule(options_.facet_degree);
        for (const auto& f : mesh_->boundary_facets) {
            if (f.tag != BoundaryTag::InOut)
                continue;
            const CellGeometry geo = CellGeometry::make(*mesh_, f.cell);
            const int k = velocity_->cell_index(f.cell);
            require(k >= 0, "stokes: in/out facet without fluid owner");
            const auto& dofs = velocity_->cell_dofs(k);
            for (std::size_t qp = 0; qp < frule.bary.size(); ++qp) {
                const auto bc = facet_bary_in_cell(*mesh_, f.cell, f.v, frule.bary[qp]);
                const Eigen::Vector3d x = geo.point(bc);
                const double wq = frule.weights[qp] * f.area;
                const Eigen::Vector3d tr = mms->traction(t, x, f.normal);
                p2_shape(bc, geo, N, grad);
                for (int a = 0; a < 10; ++a)
                    for (int c = 0; c < 3; ++c) {
                        const int row = condenser_->reduced(vdof(dofs[a], c));
                        if (row >= 0)
                            rhs[row] += wq * N[a] * tr[c];
                    }
            }
        }
    }

    System sys;
    sys.n_velocity = n_w;
    sys.n_pressure = n_p;
    sys.matrix.resize(n_w + n_p, n_w + n_p);
    sys.matrix.setFromTriplets(trips.begin(), trips.end());
    sys.rhs = std::move(rhs);

    // Symmetry diagnostic of the velocity block.
    double asym = 0.0;
    SparseMat kt = sys.matrix.transpose();
    SparseMat diff = sys.matrix - kt;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMat::InnerIterator it(diff, k); it; ++it)
            asym = std::max(asym, std::abs(it.value()));
    sys.block_asymmetry = asym;
    return sys;
}

StokesSolver::Solution StokesSolver::solve(const System& sys) const
{
    Eigen::SparseLU<SparseMat> lu;
    lu.analyzePattern(sys.matrix);
    lu.factorize(sys.matrix);
    require(lu.info() == Eigen::Success,
            "stokes: factorization failed (check the inf-sup diagnostic)");
    Eigen::VectorXd sol = lu.solve(sys.rhs);

    const double rhs_norm = sys.rhs.norm();
    double residual = (sys.matrix * sol - sys.rhs).norm();
    if (rhs_norm > 0.0)
        residual /= rhs_norm;
    require_invariant(residual <= options_.residual_tol || rhs_norm == 0.0,
                      "stokes: solver residual above tolerance");

    Solution out;
    out.residual = residual;
    out.w = condenser_->expand(sol.head(sys.n_velocity));
    out.q = sol.tail(sys.n_pressure);
    return out;
}

StokesSolver::Solution StokesSolver::solve_at(double t, const DeformationField& def) const
{
    return solve(assemble(t, def));
}

Eigen::Vector3d StokesSolver::velocity_at(int k, const std::array<double, 4>& bary,
                                          const Eigen::VectorXd& w) const
{
    const int cell = velocity_->cells()[k];
    const CellGeometry geo = CellGeometry::make(*mesh_, cell);
    double N[10];
    Eigen::Vector3d grad[10];
    p2_shape(bary, geo, N, grad);
    const auto& dofs = velocity_->cell_dofs(k);
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (int a = 0; a < 10; ++a)
        for (int c = 0; c < 3; ++c)
            v[c] += N[a] * w[vdof(dofs[a], c)];
    return v;
}

double StokesSolver::flow_rate(double t, const DeformationField& def, const Eigen::VectorXd& w,
                               bool outlet) const
{
    const double x_face = outlet ? mesh_->length : 0.0;
    const TriRule frule = tri_rule(options_.facet_degree);
    double N[10];
    Eigen::Vector3d grad[10];
    double acc = 0.0;
    for (const auto& f : mesh_->boundary_facets) {
        if (f.tag != BoundaryTag::InOut)
            continue;
        if (std::abs(mesh_->vertices[f.v[0]][0] - x_face) > 1e-9)
            continue;
        const int k = velocity_->cell_index(f.cell);
        const CellGeometry geo = CellGeometry::make(*mesh_, f.cell);
        const auto& dofs = velocity_->cell_dofs(k);
        for (std::size_t qp = 0; qp < frule.bary.size(); ++qp) {
            const auto bc = facet_bary_in_cell(*mesh_, f.cell, f.v, frule.bary[qp]);
            const Eigen::Vector3d x = geo.point(bc);
            const double wq = frule.weights[qp] * f.area;
            p2_shape(bc, geo, N, grad);
            Eigen::Vector3d v = Eigen::Vector3d::Zero();
            for (int a = 0; a < 10; ++a)
                for (int c = 0; c < 3; ++c)
                    v[c] += N[a] * w[vdof(dofs[a], c)];
            const double jac = def.evaluate(t, x, Side::Fluid).J;
            acc += wq * jac * v.dot(f.normal);
        }
    }
    return acc;
}

double StokesSolver::infsup_estimate(double t, const DeformationField& def) const
{
    const System sys = assemble(t, def);
    require(sys.n_velocity <= 20000, "inf-sup estimate is a coarse-mesh diagnostic");
    const Eigen::MatrixXd full = Eigen::MatrixXd(sys.matrix);
    const Eigen::MatrixXd K = full.topLeftCorner(sys.n_velocity, sys.n_velocity);
    const Eigen::MatrixXd B = full.bottomLeftCorner(sys.n_pressure, sys.n_velocity);

    // Pressure mass matrix.
    Eigen::MatrixXd Mp = Eigen::MatrixXd::Zero(sys.n_pressure, sys.n_pressure);
    for (int c : pressure_->cells()) {
        const double vol = mesh_->cell_volume(c);
        const auto& tet = mesh_->cells[c];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                Mp(pressure_->vertex_dof(tet[i]), pressure_->vertex_dof(tet[j])) +=
                    vol * (i == j ? 0.1 : 0.05);
    }

    const Eigen::LLT<Eigen::MatrixXd> llt(K);
    require(llt.info() == Eigen::Success, "inf-sup estimate: energy block not positive definite");
    const Eigen::MatrixXd C = B * llt.solve(B.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Mp);
    const double lam = es.eigenvalues().minCoeff();
    return lam > 0.0 ? std::sqrt(lam) : 0.0;
}

} // namespace vasotherm
