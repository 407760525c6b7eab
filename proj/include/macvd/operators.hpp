/// @file operators.hpp
/// @brief Discrete spatial operators of the staggered scheme.
///
/// Sign conventions: a face sigma in E^(i) separates its lower cell K
/// (n_{K,sigma} = +e_i) from its upper cell L. Primal fluxes are stored once
/// per face, oriented along +e_i, so F_{K,sigma} = +F_sigma and
/// F_{L,sigma} = -F_sigma. Dual fluxes are stored once per dual face,
/// oriented from lo to hi (along +e_axis).
#pragma once

#include "macvd/fields.hpp"

#include <Eigen/SparseCore>

#include <iosfwd>
#include <vector>

namespace macvd {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Numbering of interior velocity faces (all directions concatenated, each
/// direction in lexicographic face order) as linear-system unknowns.
class VelocityDofs {
public:
    explicit VelocityDofs(const MacMesh& mesh);

    Index size() const noexcept { return static_cast<Index>(faces_.size()); }
    /// Unknown index of a face, or kNone for exterior faces.
    Index dof(int dir, Index face) const noexcept { return dof_[dir][face]; }
    std::pair<int, Index> face(Index dof) const noexcept { return faces_[dof]; }

    Eigen::VectorXd gather(const VelocityField& u) const;
    VelocityField scatter(const Eigen::VectorXd& x, const MeshPtr& mesh) const;

private:
    std::array<std::vector<Index>, 3> dof_;
    std::vector<std::pair<int, Index>> faces_;
};

Eigen::VectorXd to_vector(const ScalarField& q);
ScalarField to_scalar(const Eigen::VectorXd& x, const MeshPtr& mesh);

enum class Space { Cells, Faces };

/// Sparse operator in compressed row storage with the index spaces of its
/// rows and columns.
struct OperatorMatrix {
    SparseMatrix matrix;
    Space rows = Space::Faces;
    Space cols = Space::Faces;
};

/// Coordinate text dump: one "row col value" triple per stored entry.
void write_coordinate(std::ostream& os, const SparseMatrix& m);

/// Primal (per face) and dual (per dual face) mass fluxes.
struct MassFluxSet {
    MeshPtr mesh;
    std::array<std::vector<double>, 3> primal;  ///< F_sigma along +e_i
    std::array<std::vector<double>, 3> dual;    ///< F_eps from lo to hi

    /// F_{K,sigma} seen from cell K (zero when K is not adjacent to sigma).
    double outward(Index cell, int dir, Index face) const;
    /// F_{sigma,eps}, outward from D_sigma.
    double dual_outward(int dir, Index dual_face, Index face) const;
};

// ---- primal operators -------------------------------------------------

/// Upwind mass fluxes |sigma| rho_sigma u_sigma; u_sigma = 0 picks the lower cell.
MassFluxSet upwind_flux(const ScalarField& rho, const VelocityField& u);

/// div_M(rho u)_K = (1/|K|) Sum_sigma F_{K,sigma}.
ScalarField div_primal(const ScalarField& rho, const VelocityField& u);
ScalarField div_primal(const MassFluxSet& fluxes);
/// div_M(1 x u).
ScalarField div_velocity(const VelocityField& u);

/// Transpose gradient: (grad p)_sigma = |sigma|/|D_sigma| (p_L - p_K) on
/// interior faces, zero on exterior ones.
VelocityField grad_pressure(const ScalarField& p);

/// Divergence block B: (B u)_K = -Sum_sigma |sigma| u_{K,sigma} = -|K| div(u)_K.
OperatorMatrix divergence_matrix(const MacMesh& mesh, const VelocityDofs& dofs);
/// Gradient block G: (G p)_sigma = |D_sigma| (grad p)_sigma. Equals B^T.
OperatorMatrix gradient_matrix(const MacMesh& mesh, const VelocityDofs& dofs);

// ---- MAC Laplacian ------------------------------------------------------

/// (Lap u)_sigma = (1/|D_sigma|) Sum_eps |eps|/d_eps (u_sigma' - u_sigma), with
/// zero wall values; interior faces only.
VelocityField laplacian_apply(const VelocityField& u);

/// Stiffness form S = -M_D Lap on interior unknowns: symmetric positive
/// definite, u^T S u = norm_h1(u)^2.
OperatorMatrix laplacian_matrix(const MacMesh& mesh, const VelocityDofs& dofs);

// ---- dual-cell operators -----------------------------------------------------

/// Fills fluxes.dual from fluxes.primal for direction i (both cases).
void dual_flux(MassFluxSet& fluxes, int dir);
/// Primal upwind fluxes plus dual fluxes for every direction.
MassFluxSet mass_fluxes(const ScalarField& rho, const VelocityField& u);

/// rho_{D_sigma} = (|D_{K,sigma}| rho_K + |D_{L,sigma}| rho_L) / |D_sigma|.
DualScalarField dual_density(const ScalarField& rho);

/// div_{D_sigma}(rho, v) = (1/|D_sigma|) Sum_eps F_{sigma,eps}; interior faces
/// of direction i, zero elsewhere.
std::vector<double> div_dual(const MassFluxSet& fluxes, int dir);
std::vector<double> div_dual(const ScalarField& rho, const VelocityField& v, int dir);

/// C(rho,u) v: per interior sigma, (1/|D_sigma|) Sum_eps F_{sigma,eps} (v_sigma + v_sigma')/2.
VelocityField convection_apply(const ScalarField& rho, const VelocityField& u_conv, const VelocityField& v);
VelocityField convection_apply(const MassFluxSet& fluxes, const VelocityField& v);

/// M_D-weighted convection matrix: row sigma holds |D_sigma| (C v)_sigma.
OperatorMatrix convection_matrix(const MassFluxSet& fluxes, const VelocityDofs& dofs);

/// Dual-face difference quotients (w_hi - w_lo)/d_eps for direction i.
std::vector<double> dual_gradient(const VelocityField& w, int dir);

/// Mass-flux density through each dual face of direction i, oriented along
/// +e_axis: (rho v)_eps = F_eps / |eps|. Paired with dual_gradient it gives
/// int div_dual(rho,v) w + int (rho v)_eps . (grad w)_eps = 0, with the
/// integrals taken over the diamond cells |D_eps| = |eps| d_eps.
std::vector<double> flux_reconstruction(const ScalarField& rho, const VelocityField& v, int dir);

}  // namespace macvd
