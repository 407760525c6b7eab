/// @file linsolve.hpp
/// @brief The two linear solves of each time step: implicit upwind transport
/// for the density and the generalized Oseen saddle-point system for
/// velocity and pressure.
#pragma once

#include "macvd/operators.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace macvd {

enum class SolverStrategy { Direct, Iterative };

SolverStrategy parse_strategy(const std::string& name);
const char* strategy_name(SolverStrategy s);

struct SolverOptions {
    SolverStrategy strategy = SolverStrategy::Direct;
    double transport_tol = 1e-12;  ///< relative residual
    double oseen_tol = 1e-10;      ///< relative residual
    int max_iterations = 1000;
};

struct SolveReport {
    std::string strategy;           ///< strategy that produced the answer
    bool fell_back = false;         ///< iterative path abandoned for the direct one
    int iterations = 0;             ///< 1 for direct solves
    double transport_residual = 0.0;
    double momentum_residual = 0.0;
    double divergence_residual = 0.0;  ///< ||div_M u||_{L2}
    Index pinned_cell = kNone;         ///< pressure unknown fixed during the solve
    double removed_pressure_mean = 0.0;
    double wall_time = 0.0;            ///< seconds
    std::vector<double> residual_history;
};

/// Raised when no strategy reaches the requested tolerance.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, SolveReport report)
        : std::runtime_error(what), report_(std::move(report))
    {
    }
    const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

// ---- transport ------------------------------------------------------------

/// Rows |K|/dt rho_K + Sum_sigma F_{K,sigma}(rho, u), upwind in u.
OperatorMatrix transport_matrix(const MacMesh& mesh, const VelocityField& u, double dt);

struct TransportResult {
    ScalarField rho;
    SolveReport report;
};

/// Solves (rho^{n+1} - rho^n)/dt + div_M(rho^{n+1} u^n) = 0.
TransportResult solve_transport(const ScalarField& rho_n, const VelocityField& u_n, double dt,
                                const SolverOptions& opts = {});

// ---- Oseen ------------------------------------------------------------------

/// Saddle-point system, momentum rows scaled by |D_sigma|:
///   [A  G] [u]   [rhs_u]
///   [B  0] [p] = [0    ]
/// with A = M_D rho_D^{n+1}/dt + M_D C(rho^{n+1}, u^n) + S and G = B^T.
struct SaddleSystem {
    MeshPtr mesh;
    VelocityDofs dofs;
    SparseMatrix A;
    SparseMatrix B;
    SparseMatrix G;
    Eigen::VectorXd rhs_u;
    Eigen::VectorXd rhs_p;
};

SaddleSystem assemble_oseen(const ScalarField& rho_n, const ScalarField& rho_n1, const VelocityField& u_n,
                            const VelocityField& forcing, double dt);

/// Monolithic matrix with the continuity row of `pinned` replaced by p_pinned = 0.
SparseMatrix monolithic_matrix(const SaddleSystem& sys, Index pinned);
Eigen::VectorXd monolithic_rhs(const SaddleSystem& sys, Index pinned);

struct OseenResult {
    VelocityField u;
    ScalarField p;
    SolveReport report;
};

OseenResult solve_oseen(const SaddleSystem& sys, const SolverOptions& opts = {});
OseenResult solve_oseen(const ScalarField& rho_n, const ScalarField& rho_n1, const VelocityField& u_n,
                        const VelocityField& forcing, double dt, const SolverOptions& opts = {});

/// L2-orthogonal (M_D-weighted) projection of v onto discretely
/// divergence-free fields.
VelocityField project_divergence_free(const VelocityField& v);

/// Smallest nonzero singular value of M_K^{-1/2} B M_D^{-1/2} (dense SVD,
/// meant for small meshes).
double infsup_constant(const MacMesh& mesh);

}  // namespace macvd
