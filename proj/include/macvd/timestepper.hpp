/// @file timestepper.hpp
/// @brief Semi-implicit time loop: density transport with the old velocity,
/// then the Oseen solve for the new velocity and pressure.
#pragma once

#include "macvd/diagnostics.hpp"
#include "macvd/linsolve.hpp"
#include "macvd/problem.hpp"

#include <optional>
#include <string>

namespace macvd {

struct SchemeConfig {
    MeshPtr mesh;
    double T = 1.0;
    double dt = 0.1;
    Problem problem;
    SolverOptions solver;
    bool diagnostics = true;
    bool keep_trajectory = true;
};

/// Throws ValidationError on 0 < dt <= T, rho_min > 0, mesh/problem mismatch.
void validate(const SchemeConfig& cfg);

struct SchemeState {
    Index n = 0;
    double t = 0.0;
    ScalarField rho;
    VelocityField u;
    ScalarField p;
    DualScalarField rho_dual;
};

/// u^0 = Fortin interpolant of u0 projected onto div_M u = 0, rho^0 = cell
/// means of rho0, p^0 = 0.
SchemeState initialize(const SchemeConfig& cfg);

struct StepResult {
    SchemeState state;
    VelocityField forcing;  ///< f^{n+1} on the dual cells
    SolveReport transport;
    SolveReport oseen;
};

/// f^{n+1}: component i of f sampled at the centroid of D_sigma at t_{n+1}.
VelocityField sample_forcing(const MeshPtr& mesh, const TimeVectorFunction& f, double t);

StepResult step(const SchemeState& state, const SchemeConfig& cfg, double dt);
inline StepResult step(const SchemeState& state, const SchemeConfig& cfg) { return step(state, cfg, cfg.dt); }

struct RunResult {
    Trajectory trajectory;
    DiagnosticsRecord diagnostics;
    Index steps = 0;
    double dt = 0.0;
    bool dt_adjusted = false;
    bool completed = false;
    std::string failure;  ///< solver failure message when !completed
    SchemeState final_state;
};

/// Runs N = T/dt steps; a non-integer ratio shortens dt to T/ceil(T/dt).
/// Solver failures stop the loop and leave the partial trajectory in the result.
RunResult run(const SchemeConfig& cfg);

}  // namespace macvd
