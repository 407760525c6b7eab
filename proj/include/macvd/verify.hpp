/// @file verify.hpp
/// @brief Verification harness: identity batteries on random fields, the
/// time-translate measurement, convergence studies and the trilinear
/// convection bound monitor.
#pragma once

#include "macvd/timestepper.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace macvd {

// ---- random fields ------------------------------------------------------------

/// Velocity with i.i.d. uniform [-1, 1] values on interior faces.
VelocityField random_velocity(const MeshPtr& mesh, std::mt19937_64& rng);
/// Cell field with i.i.d. uniform [lo, hi] values.
ScalarField random_scalar(const MeshPtr& mesh, std::mt19937_64& rng, double lo, double hi);

/// Tensor mesh on the unit box with cell sizes perturbed by up to +-30%.
MeshPtr random_nonuniform_mesh(const std::vector<Index>& cells, std::mt19937_64& rng);

// ---- identity batteries -------------------------------------------------------

struct IdentityReport {
    std::string name;
    int trials = 0;
    double max_residual = 0.0;  ///< relative to the sum of absolute terms
    double threshold = 0.0;
    bool pass() const { return max_residual < threshold; }
};

/// int div_dual(rho, v) w + int (rho v)_eps . (grad w)_eps = 0 for random
/// (rho, v, w), all directions.
IdentityReport check_duality(const MeshPtr& mesh, int trials, std::uint64_t seed);

/// Both sides of the duality identity for one triple and direction.
struct DualitySides {
    double divergence_side = 0.0;  ///< Sum_sigma |D_sigma| div_D w_sigma
    double gradient_side = 0.0;    ///< Sum_eps |eps| d_eps (rho v)_eps (grad w)_eps
    double scale = 0.0;
};
DualitySides duality_sides(const ScalarField& rho, const VelocityField& v, const VelocityField& w, int dir);

/// int p div(v) + int grad(p) . v = 0 for random (p, v).
IdentityReport check_adjointness(const MeshPtr& mesh, int trials, std::uint64_t seed);

/// -int Lap(u) . u = norm_h1(u)^2 for random u.
IdentityReport check_coercivity(const MeshPtr& mesh, int trials, std::uint64_t seed);

/// max |S - S^T| / max |S| for the assembled stiffness matrix.
IdentityReport check_laplacian_symmetry(const MeshPtr& mesh);

/// |B^T - G| / |G| for the assembled divergence and gradient blocks.
IdentityReport check_block_transpose(const MeshPtr& mesh);

// ---- time translates ----------------------------------------------------------

struct TranslateReport {
    std::vector<double> taus;
    std::vector<double> integrals;  ///< int_0^{T-tau} int |u(t+tau) - u(t)|^2
    double slope = 0.0;             ///< least-squares slope of log I vs log(tau + dt)
    double scale_factor = 0.0;      ///< (rho_max/rho_min)(||u||_{L2(H1)}^3 + 1)
};

/// Exact translate integral for a velocity trajectory that is piecewise
/// constant on the intervals (t_n, t_{n+1}] (value u^{n+1}).
double translate_integral(const Trajectory& traj, double tau);

/// Requires at least three positive taus below T.
TranslateReport measure_translates(const Trajectory& traj, const std::vector<double>& taus, double rho_min,
                                   double rho_max);

// ---- convergence ----------------------------------------------------------------

struct LevelErrors {
    Index cells = 0;
    double h = 0.0;
    double dt = 0.0;
    double eta = 0.0;
    double velocity = 0.0;  ///< L2(L2) against face means of the exact field
    double density = 0.0;   ///< L2(L2) against cell means
    double pressure = 0.0;  ///< L2(L2), both pressures shifted to zero mean
    double l2_h1 = 0.0;
    double linf_l2 = 0.0;
    bool diagnostics_pass = false;
    double wall_time = 0.0;
};

struct ConvergenceReport {
    std::string preset;
    std::vector<LevelErrors> levels;
    std::vector<double> velocity_factors;
    std::vector<double> density_factors;
    double min_factor = 1.5;

    bool monotone() const;
    bool factors_pass() const;
};

struct StudyOptions {
    std::string preset = "smooth-vortex";
    int dim = 2;
    int levels = 3;
    Index base_cells = 16;
    double T = 0.5;
    double dt_over_h = 0.5;  ///< dt = dt_over_h * (1 / cells): dt proportional to h
    SolverOptions solver;
};

/// L2(L2) errors of one run against an exact solution.
LevelErrors trajectory_errors(const Trajectory& traj, const ManufacturedFields& exact);

ConvergenceReport convergence_study(const StudyOptions& opts);

// ---- trilinear convection bound -------------------------------------------------

struct ConvectionBoundStats {
    Index cells = 0;
    int samples = 0;
    int skipped = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
};

/// Random smooth samples: rho in [1, 2], u divergence-free (projected), v, w
/// vanishing on the boundary. Ratio |int C(rho,u)v.w| / (|rho|_inf |u|_1 |v|_1 |w|_1).
ConvectionBoundStats measure_convection_bound(const MeshPtr& mesh, int samples, std::uint64_t seed);

/// Trilinear form int C(rho,u) v . w.
double convection_form(const ScalarField& rho, const VelocityField& u, const VelocityField& v,
                       const VelocityField& w);

// ---- reports --------------------------------------------------------------------

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep, const std::string& header = {});
void write_translate_csv(std::ostream& os, const TranslateReport& rep, const std::string& header = {});

}  // namespace macvd
