/// @file fields.hpp
/// @brief Discrete unknowns on the MAC mesh, interpolation of initial data,
/// and the Lebesgue norms used by the estimates.
#pragma once

#include "macvd/mesh.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace macvd {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<std::array<double, 3>(const Point&)>;

/// One value per primal cell (density or pressure).
struct ScalarField {
    MeshPtr mesh;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(MeshPtr m, double fill = 0.0);

    double& operator[](Index c) { return values[c]; }
    double operator[](Index c) const { return values[c]; }
    Index size() const noexcept { return static_cast<Index>(values.size()); }

    /// Sum_K |K| q_K.
    double integral() const;
    /// Shifts the field to zero mean (space L_{M,0}).
    void remove_mean();
};

/// Normal velocity per face, one array per direction. Exterior faces hold 0.
struct VelocityField {
    MeshPtr mesh;
    std::array<std::vector<double>, 3> comp;

    VelocityField() = default;
    explicit VelocityField(MeshPtr m);

    std::vector<double>& operator[](int dir) { return comp[dir]; }
    const std::vector<double>& operator[](int dir) const { return comp[dir]; }

    /// Forces u_sigma = 0 on exterior faces.
    void zero_exterior();
    /// True when every exterior face holds exactly 0.
    bool satisfies_boundary() const;

    VelocityField& operator+=(const VelocityField& o);
    VelocityField& operator-=(const VelocityField& o);
    VelocityField& operator*=(double s);
};

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double s, VelocityField a);

/// Per-direction values on the dual cells D_sigma (e.g. rho_{D_sigma}).
struct DualScalarField {
    MeshPtr mesh;
    std::array<std::vector<double>, 3> comp;
};

/// Volume-weighted inner product Sum_i Sum_sigma |D_sigma| u_sigma v_sigma.
double dual_inner(const VelocityField& u, const VelocityField& v);
/// Volume-weighted inner product Sum_K |K| p_K q_K.
double cell_inner(const ScalarField& p, const ScalarField& q);

/// Throws ValidationError unless both objects live on the same mesh.
void require_same_mesh(const MeshPtr& a, const MeshPtr& b, const char* what);

/// Face means of u0 (Gauss-Legendre, 3 points per transverse axis);
/// exterior faces are set to zero.
VelocityField fortin_interpolate(const MeshPtr& mesh, const VectorFunction& u0);

/// Cell means of q (tensor Gauss-Legendre, 3 points per axis).
ScalarField cell_average(const MeshPtr& mesh, const ScalarFunction& q);

/// Mean over D_sigma of component i of f, sampled at the dual-cell centroid.
VelocityField dual_centroid_sample(const MeshPtr& mesh, const VectorFunction& f);

enum class LpExponent { L2 = 2, L4 = 4, L6 = 6, Inf = 0 };

/// Parses 2, 4, 6 or 0/"inf"; anything else is rejected.
LpExponent lp_exponent(int p);

/// L^p norm of a velocity field over the dual-cell partition (all components).
double norm_lp_dual(const VelocityField& u, LpExponent p);
/// Same for a single component i.
double norm_lp_dual(const VelocityField& u, int dir, LpExponent p);
double norm_l2_cells(const ScalarField& q);
double norm_linf_cells(const ScalarField& q);

/// Discrete H1 seminorm ||u||_{1,eps,0}: square root of
/// Sum_eps |eps|/d_eps (u_hi - u_lo)^2 over all dual faces, missing or
/// exterior neighbors read as zero. It is the quadratic form of the MAC
/// Laplacian, so -int Lap(u).u = norm_h1(u)^2 holds by construction.
double norm_h1(const VelocityField& u);

/// Uniform-in-time sequence of discrete states.
struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<ScalarField> density;
    std::vector<VelocityField> velocity;
    std::vector<ScalarField> pressure;

    std::size_t size() const noexcept { return times.size(); }
    void push(double t, ScalarField rho, VelocityField u, ScalarField p);
};

/// Accumulators for ||u||_{L2(H1)} = (Sum dt ||u^{n+1}||_1^2)^{1/2} and
/// ||u||_{Linf(L2)} = max_n ||u^{n+1}||_{L2}, skipping the initial state.
struct EnergyNorms {
    double l2_h1 = 0.0;
    double linf_l2 = 0.0;
};
EnergyNorms trajectory_energy_norms(const Trajectory& traj);

// ---- field I/O ------------------------------------------------------------

void write_scalar_csv(std::ostream& os, const ScalarField& q, const std::string& header = {});
void write_velocity_csv(std::ostream& os, const VelocityField& u, const std::string& header = {});
ScalarField read_scalar_csv(std::istream& is, const MeshPtr& mesh);
VelocityField read_velocity_csv(std::istream& is, const MeshPtr& mesh);

/// Legacy VTK structured grid with cell scalars and the cell-centred average
/// of the face velocities.
void write_vtk(std::ostream& os, const ScalarField& rho, const VelocityField& u, const ScalarField& p,
               const std::string& title);

}  // namespace macvd
