/// @file diagnostics.hpp
/// @brief Per-step identity residuals and estimate trackers.
///
/// Residuals are reported relative to the magnitude of the terms entering
/// the identity (largest single term over the field), so they can be compared
/// directly with the relative solver tolerances.
#pragma once

#include "macvd/operators.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace macvd {

/// Max over interior dual cells of
///   (rho_D^{n+1} - rho_D^n)/dt + div_D(rho^{n+1} u^n),
/// relative to max |rho_D| / dt.
double mass_dual_residual(const ScalarField& rho_n, const ScalarField& rho_n1, const VelocityField& u_n, double dt);

struct KineticCheck {
    double max_residual = 0.0;   ///< relative to the largest term
    double max_remainder = 0.0;  ///< largest -(1/(2dt)) rho_D^n (u^{n+1}-u^n)^2, must be <= 0
    double term_scale = 0.0;
};

/// Per-dual-cell kinetic-energy balance of one step, every term re-evaluated
/// from its definition.
KineticCheck check_kinetic(const ScalarField& rho_n, const VelocityField& u_n, const ScalarField& rho_n1,
                           const VelocityField& u_n1, const ScalarField& p_n1, const VelocityField& f_n1,
                           double dt);

/// 1/2 Sum_sigma |D_sigma| rho_D u_sigma^2.
double kinetic_energy(const ScalarField& rho, const VelocityField& u);

struct StepDiagnostics {
    Index n = 0;  ///< index of the new state
    double t = 0.0;
    double rho_min_margin = 0.0;  ///< min rho - rho_min
    double rho_max_margin = 0.0;  ///< rho_max - max rho
    double rho_l2 = 0.0;
    double rho_l2_growth = 0.0;  ///< ||rho^{n+1}|| - ||rho^n||
    double div_l2 = 0.0;
    double mass_dual = 0.0;
    double kinetic = 0.0;
    double remainder_max = 0.0;
    double h1 = 0.0;
    double l2 = 0.0;
    double energy = 0.0;         ///< kinetic energy of the new state
    double energy_budget = 0.0;  ///< energy + cumulative dissipation - cumulative forcing work
    double budget_growth = 0.0;
    double cum_l2_h1 = 0.0;
    double cum_linf_l2 = 0.0;
    double transport_residual = 0.0;
    double momentum_residual = 0.0;
};

struct DiagnosticsThresholds {
    double bound_margin = 1e-12;
    double l2_growth = 1e-12;  ///< relative to ||rho^n||
    double divergence = 1e-9;
    double mass_dual = 1e-11;
    double kinetic = 1e-9;
    double budget_growth = 1e-9;  ///< relative to the energy scale
};

/// Thresholds tied to the solver tolerances (10x each).
DiagnosticsThresholds thresholds_for(double transport_tol, double oseen_tol);

struct CheckFlags {
    bool bounds = true;
    bool l2_decay = true;
    bool divergence = true;
    bool mass_dual = true;
    bool kinetic = true;
    bool remainder = true;
    bool budget = true;

    bool all() const { return bounds && l2_decay && divergence && mass_dual && kinetic && remainder && budget; }
};

CheckFlags evaluate(const StepDiagnostics& s, const DiagnosticsThresholds& th, double energy_scale,
                    double rho_scale);

struct DiagnosticsRecord {
    DiagnosticsThresholds thresholds;
    double energy_scale = 0.0;  ///< max energy budget seen, for relative checks
    std::vector<StepDiagnostics> steps;
    std::vector<CheckFlags> flags;

    double l2_h1() const { return steps.empty() ? 0.0 : steps.back().cum_l2_h1; }
    double linf_l2() const { return steps.empty() ? 0.0 : steps.back().cum_linf_l2; }
    bool all_pass() const;
    CheckFlags combined() const;
};

/// CSV time series, one row per step with pass flags.
void write_diagnostics_csv(std::ostream& os, const DiagnosticsRecord& rec, const std::string& header = {});

}  // namespace macvd
