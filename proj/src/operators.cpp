#include "macvd/operators.hpp"

#include <ostream>
#include <iomanip>

namespace macvd {

VelocityDofs::VelocityDofs(const MacMesh& mesh)
{
    for (int d = 0; d < mesh.dim(); ++d) {
        dof_[d].assign(static_cast<std::size_t>(mesh.num_faces(d)), kNone);
        for (Index f : mesh.interior_faces(d)) {
            dof_[d][f] = static_cast<Index>(faces_.size());
            faces_.emplace_back(d, f);
        }
    }
}

Eigen::VectorXd VelocityDofs::gather(const VelocityField& u) const
{
    Eigen::VectorXd x(size());
    for (Index k = 0; k < size(); ++k) {
        x[k] = u.comp[faces_[k].first][faces_[k].second];
    }
    return x;
}

VelocityField VelocityDofs::scatter(const Eigen::VectorXd& x, const MeshPtr& mesh) const
{
    VelocityField u(mesh);
    for (Index k = 0; k < size(); ++k) {
        u.comp[faces_[k].first][faces_[k].second] = x[k];
    }
    return u;
}

Eigen::VectorXd to_vector(const ScalarField& q)
{
    return Eigen::Map<const Eigen::VectorXd>(q.values.data(), q.size());
}

ScalarField to_scalar(const Eigen::VectorXd& x, const MeshPtr& mesh)
{
    ScalarField q(mesh);
    for (Index c = 0; c < q.size(); ++c) {
        q[c] = x[c];
    }
    return q;
}

void write_coordinate(std::ostream& os, const SparseMatrix& m)
{
    os << "# rows " << m.rows() << " cols " << m.cols() << " nnz " << m.nonZeros() << '\n';
    os << std::setprecision(17);
    for (Index r = 0; r < m.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
            os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
        }
    }
}

double MassFluxSet::outward(Index cell, int dir, Index face) const
{
    if (mesh->face_lower_cell(dir, face) == cell) {
        return primal[dir][face];
    }
    if (mesh->face_upper_cell(dir, face) == cell) {
        return -primal[dir][face];
    }
    return 0.0;
}

double MassFluxSet::dual_outward(int dir, Index dual_face, Index face) const
{
    const auto& e = mesh->dual_faces(dir)[dual_face];
    if (e.lo == face) {
        return dual[dir][dual_face];
    }
    if (e.hi == face) {
        return -dual[dir][dual_face];
    }
    return 0.0;
}

// ---- primal -------------------------------------------------------------------

MassFluxSet upwind_flux(const ScalarField& rho, const VelocityField& u)
{
    require_same_mesh(rho.mesh, u.mesh, "upwind_flux");
    const auto& m = *rho.mesh;
    MassFluxSet out;
    out.mesh = rho.mesh;
    for (int d = 0; d < m.dim(); ++d) {
        out.primal[d].assign(static_cast<std::size_t>(m.num_faces(d)), 0.0);
        for (Index f : m.interior_faces(d)) {
            const double us = u.comp[d][f];
            const double rs = us >= 0.0 ? rho[m.face_lower_cell(d, f)] : rho[m.face_upper_cell(d, f)];
            out.primal[d][f] = m.face_area(d, f) * rs * us;
        }
    }
    return out;
}

ScalarField div_primal(const MassFluxSet& fluxes)
{
    const auto& m = *fluxes.mesh;
    ScalarField out(fluxes.mesh);
    for (int d = 0; d < m.dim(); ++d) {
        for (Index f = 0; f < m.num_faces(d); ++f) {
            const double F = fluxes.primal[d][f];
            if (const Index lo = m.face_lower_cell(d, f); lo != kNone) {
                out[lo] += F;
            }
            if (const Index hi = m.face_upper_cell(d, f); hi != kNone) {
                out[hi] -= F;
            }
        }
    }
    for (Index c = 0; c < out.size(); ++c) {
        out[c] /= m.cell_measure(c);
    }
    return out;
}

ScalarField div_primal(const ScalarField& rho, const VelocityField& u) { return div_primal(upwind_flux(rho, u)); }

ScalarField div_velocity(const VelocityField& u) { return div_primal(ScalarField(u.mesh, 1.0), u); }

VelocityField grad_pressure(const ScalarField& p)
{
    const auto& m = *p.mesh;
    VelocityField g(p.mesh);
    for (int d = 0; d < m.dim(); ++d) {
        for (Index f : m.interior_faces(d)) {
            const double jump = p[m.face_upper_cell(d, f)] - p[m.face_lower_cell(d, f)];
            g.comp[d][f] = m.face_area(d, f) / m.dual_measure(d, f) * jump;
        }
    }
    return g;
}

OperatorMatrix divergence_matrix(const MacMesh& mesh, const VelocityDofs& dofs)
{
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(2 * dofs.size()));
    for (Index k = 0; k < dofs.size(); ++k) {
        const auto [d, f] = dofs.face(k);
        trip.emplace_back(mesh.face_lower_cell(d, f), k, -mesh.face_area(d, f));
        trip.emplace_back(mesh.face_upper_cell(d, f), k, mesh.face_area(d, f));
    }
    OperatorMatrix out{SparseMatrix(mesh.num_cells(), dofs.size()), Space::Cells, Space::Faces};
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    return out;
}

OperatorMatrix gradient_matrix(const MacMesh& mesh, const VelocityDofs& dofs)
{
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(2 * dofs.size()));
    for (Index k = 0; k < dofs.size(); ++k) {
        const auto [d, f] = dofs.face(k);
        trip.emplace_back(k, mesh.face_upper_cell(d, f), mesh.face_area(d, f));
        trip.emplace_back(k, mesh.face_lower_cell(d, f), -mesh.face_area(d, f));
    }
    OperatorMatrix out{SparseMatrix(dofs.size(), mesh.num_cells()), Space::Faces, Space::Cells};
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    return out;
}

// ---- Laplacian ----------------------------------------------------------------------

VelocityField laplacian_apply(const VelocityField& u)
{
    const auto& m = *u.mesh;
    VelocityField out(u.mesh);
    for (int d = 0; d < m.dim(); ++d) {
        const auto& uc = u.comp[d];
        auto& oc = out.comp[d];
        for (const auto& e : m.dual_faces(d)) {
            const double lo = e.lo != kNone ? uc[e.lo] : 0.0;
            const double hi = e.hi != kNone ? uc[e.hi] : 0.0;
            const double flux = e.measure / e.distance * (hi - lo);
            if (e.lo != kNone) {
                oc[e.lo] += flux;
            }
            if (e.hi != kNone) {
                oc[e.hi] -= flux;
            }
        }
        for (Index f = 0; f < m.num_faces(d); ++f) {
            oc[f] = m.is_exterior(d, f) ? 0.0 : oc[f] / m.dual_measure(d, f);
        }
    }
    return out;
}

OperatorMatrix laplacian_matrix(const MacMesh& mesh, const VelocityDofs& dofs)
{
    std::vector<Eigen::Triplet<double>> trip;
    for (int d = 0; d < mesh.dim(); ++d) {
        for (const auto& e : mesh.dual_faces(d)) {
            const double w = e.measure / e.distance;
            const Index a = e.lo != kNone ? dofs.dof(d, e.lo) : kNone;
            const Index b = e.hi != kNone ? dofs.dof(d, e.hi) : kNone;
            if (a != kNone) {
                trip.emplace_back(a, a, w);
            }
            if (b != kNone) {
                trip.emplace_back(b, b, w);
            }
            if (a != kNone && b != kNone) {
                trip.emplace_back(a, b, -w);
                trip.emplace_back(b, a, -w);
            }
        }
    }
    OperatorMatrix out{SparseMatrix(dofs.size(), dofs.size()), Space::Faces, Space::Faces};
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    return out;
}

// ---- dual operators -----------------------------------------------------------------

void dual_flux(MassFluxSet& fluxes, int dir)
{
    const auto& m = *fluxes.mesh;
    const auto& faces = m.dual_faces(dir);
    auto& out = fluxes.dual[dir];
    out.assign(faces.size(), 0.0);
    for (std::size_t k = 0; k < faces.size(); ++k) {
        const auto& e = faces[k];
        const auto& F = fluxes.primal[e.flux_dir];
        out[k] = 0.5 * (F[e.flux_faces[0]] + F[e.flux_faces[1]]);
    }
}

MassFluxSet mass_fluxes(const ScalarField& rho, const VelocityField& u)
{
    MassFluxSet fl = upwind_flux(rho, u);
    for (int d = 0; d < rho.mesh->dim(); ++d) {
        dual_flux(fl, d);
    }
    return fl;
}

DualScalarField dual_density(const ScalarField& rho)
{
    const auto& m = *rho.mesh;
    DualScalarField out{rho.mesh, {}};
    for (int d = 0; d < m.dim(); ++d) {
        out.comp[d].assign(static_cast<std::size_t>(m.num_faces(d)), 0.0);
        for (Index f = 0; f < m.num_faces(d); ++f) {
            double mass = 0.0;
            if (const Index lo = m.face_lower_cell(d, f); lo != kNone) {
                mass += m.dual_half_lower(d, f) * rho[lo];
            }
            if (const Index hi = m.face_upper_cell(d, f); hi != kNone) {
                mass += m.dual_half_upper(d, f) * rho[hi];
            }
            out.comp[d][f] = mass / m.dual_measure(d, f);
        }
    }
    return out;
}

std::vector<double> div_dual(const MassFluxSet& fluxes, int dir)
{
    const auto& m = *fluxes.mesh;
    const auto& faces = m.dual_faces(dir);
    std::vector<double> out(static_cast<std::size_t>(m.num_faces(dir)), 0.0);
    for (std::size_t k = 0; k < faces.size(); ++k) {
        const auto& e = faces[k];
        const double F = fluxes.dual[dir][k];
        if (e.lo != kNone) {
            out[e.lo] += F;
        }
        if (e.hi != kNone) {
            out[e.hi] -= F;
        }
    }
    for (Index f = 0; f < m.num_faces(dir); ++f) {
        out[f] = m.is_exterior(dir, f) ? 0.0 : out[f] / m.dual_measure(dir, f);
    }
    return out;
}

std::vector<double> div_dual(const ScalarField& rho, const VelocityField& v, int dir)
{
    return div_dual(mass_fluxes(rho, v), dir);
}

VelocityField convection_apply(const MassFluxSet& fluxes, const VelocityField& v)
{
    require_same_mesh(fluxes.mesh, v.mesh, "convection_apply");
    const auto& m = *v.mesh;
    VelocityField out(v.mesh);
    for (int d = 0; d < m.dim(); ++d) {
        const auto& faces = m.dual_faces(d);
        const auto& vc = v.comp[d];
        auto& oc = out.comp[d];
        for (std::size_t k = 0; k < faces.size(); ++k) {
            const auto& e = faces[k];
            const double lo = e.lo != kNone ? vc[e.lo] : 0.0;
            const double hi = e.hi != kNone ? vc[e.hi] : 0.0;
            const double t = fluxes.dual[d][k] * 0.5 * (lo + hi);
            if (e.lo != kNone) {
                oc[e.lo] += t;
            }
            if (e.hi != kNone) {
                oc[e.hi] -= t;
            }
        }
        for (Index f = 0; f < m.num_faces(d); ++f) {
            oc[f] = m.is_exterior(d, f) ? 0.0 : oc[f] / m.dual_measure(d, f);
        }
    }
    return out;
}

VelocityField convection_apply(const ScalarField& rho, const VelocityField& u_conv, const VelocityField& v)
{
    require_same_mesh(rho.mesh, u_conv.mesh, "convection_apply");
    return convection_apply(mass_fluxes(rho, u_conv), v);
}

OperatorMatrix convection_matrix(const MassFluxSet& fluxes, const VelocityDofs& dofs)
{
    const auto& m = *fluxes.mesh;
    std::vector<Eigen::Triplet<double>> trip;
    for (int d = 0; d < m.dim(); ++d) {
        const auto& faces = m.dual_faces(d);
        for (std::size_t k = 0; k < faces.size(); ++k) {
            const auto& e = faces[k];
            const double half = 0.5 * fluxes.dual[d][k];
            const Index a = e.lo != kNone ? dofs.dof(d, e.lo) : kNone;
            const Index b = e.hi != kNone ? dofs.dof(d, e.hi) : kNone;
            // Row a receives +F (v_a + v_b)/2, row b receives -F (v_a + v_b)/2.
            if (a != kNone) {
                trip.emplace_back(a, a, half);
                if (b != kNone) {
                    trip.emplace_back(a, b, half);
                }
            }
            if (b != kNone) {
                trip.emplace_back(b, b, -half);
                if (a != kNone) {
                    trip.emplace_back(b, a, -half);
                }
            }
        }
    }
    OperatorMatrix out{SparseMatrix(dofs.size(), dofs.size()), Space::Faces, Space::Faces};
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    return out;
}

std::vector<double> dual_gradient(const VelocityField& w, int dir)
{
    const auto& faces = w.mesh->dual_faces(dir);
    const auto& wc = w.comp[dir];
    std::vector<double> out(faces.size());
    for (std::size_t k = 0; k < faces.size(); ++k) {
        const auto& e = faces[k];
        const double lo = e.lo != kNone ? wc[e.lo] : 0.0;
        const double hi = e.hi != kNone ? wc[e.hi] : 0.0;
        out[k] = (hi - lo) / e.distance;
    }
    return out;
}

std::vector<double> flux_reconstruction(const ScalarField& rho, const VelocityField& v, int dir)
{
    MassFluxSet fl = upwind_flux(rho, v);
    dual_flux(fl, dir);
    const auto& faces = rho.mesh->dual_faces(dir);
    std::vector<double> out(faces.size());
    for (std::size_t k = 0; k < faces.size(); ++k) {
        out[k] = fl.dual[dir][k] / faces[k].measure;
    }
    return out;
}

}  // namespace macvd
