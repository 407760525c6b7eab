#include "macvd/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace macvd {

void validate(const SchemeConfig& cfg)
{
    if (!cfg.mesh) {
        throw ValidationError("scheme config has no mesh");
    }
    if (!(cfg.T > 0.0)) {
        throw ValidationError("final time T must be positive");
    }
    if (!(cfg.dt > 0.0) || cfg.dt > cfg.T) {
        std::ostringstream msg;
        msg << "time step must satisfy 0 < dt <= T (dt = " << cfg.dt << ", T = " << cfg.T << ")";
        throw ValidationError(msg.str());
    }
    if (!(cfg.problem.rho_min > 0.0) || cfg.problem.rho_max < cfg.problem.rho_min) {
        throw ValidationError("declared density bounds must satisfy 0 < rho_min <= rho_max");
    }
    if (cfg.problem.dim != cfg.mesh->dim()) {
        throw ValidationError("problem dimension does not match the mesh");
    }
    if (!cfg.problem.rho0 || !cfg.problem.u0 || !cfg.problem.forcing) {
        throw ValidationError("problem is missing initial data or forcing");
    }
}

SchemeState initialize(const SchemeConfig& cfg)
{
    validate(cfg);
    SchemeState s;
    s.rho = cell_average(cfg.mesh, cfg.problem.rho0);
    // Quadrature leaves a small discrete divergence; the transport maximum
    // principle needs div_M u^0 = 0 exactly.
    s.u = project_divergence_free(fortin_interpolate(cfg.mesh, cfg.problem.u0));
    s.p = ScalarField(cfg.mesh, 0.0);
    s.rho_dual = dual_density(s.rho);
    const auto [lo, hi] = std::minmax_element(s.rho.values.begin(), s.rho.values.end());
    const double slack = 1e-12 * std::max(1.0, cfg.problem.rho_max);
    if (*lo < cfg.problem.rho_min - slack || *hi > cfg.problem.rho_max + slack) {
        std::ostringstream msg;
        msg << "initial density range [" << *lo << ", " << *hi << "] violates the declared bounds ["
            << cfg.problem.rho_min << ", " << cfg.problem.rho_max << "]";
        throw ValidationError(msg.str());
    }
    return s;
}

VelocityField sample_forcing(const MeshPtr& mesh, const TimeVectorFunction& f, double t)
{
    return dual_centroid_sample(mesh, [&f, t](const Point& x) { return f(x, t); });
}

StepResult step(const SchemeState& state, const SchemeConfig& cfg, double dt)
{
    const double t1 = state.t + dt;
    TransportResult tr = solve_transport(state.rho, state.u, dt, cfg.solver);
    VelocityField f = sample_forcing(cfg.mesh, cfg.problem.forcing, t1);
    OseenResult os = solve_oseen(state.rho, tr.rho, state.u, f, dt, cfg.solver);

    StepResult out;
    out.state.n = state.n + 1;
    out.state.t = t1;
    out.state.rho = std::move(tr.rho);
    out.state.u = std::move(os.u);
    out.state.p = std::move(os.p);
    out.state.rho_dual = dual_density(out.state.rho);
    out.forcing = std::move(f);
    out.transport = tr.report;
    out.oseen = os.report;
    return out;
}

RunResult run(const SchemeConfig& cfg)
{
    validate(cfg);
    RunResult res;
    const double ratio = cfg.T / cfg.dt;
    Index steps = static_cast<Index>(std::llround(ratio));
    double dt = cfg.dt;
    if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
        steps = static_cast<Index>(std::ceil(ratio));
        res.dt_adjusted = true;
    }
    dt = cfg.T / static_cast<double>(steps);
    res.steps = steps;
    res.dt = dt;
    res.trajectory.dt = dt;
    res.diagnostics.thresholds = thresholds_for(cfg.solver.transport_tol, cfg.solver.oseen_tol);

    SchemeState state = initialize(cfg);
    if (cfg.keep_trajectory) {
        res.trajectory.push(0.0, state.rho, state.u, state.p);
    }

    double dissipation = 0.0;
    double work = 0.0;
    double cum_h1_sq = 0.0;
    double linf_l2 = 0.0;
    double budget_prev = kinetic_energy(state.rho, state.u);
    double energy_scale = budget_prev;

    for (Index n = 0; n < steps; ++n) {
        StepResult sr;
        try {
            sr = step(state, cfg, dt);
        } catch (const SolverFailure& e) {
            std::ostringstream msg;
            msg << "step " << n + 1 << ": " << e.what();
            res.failure = msg.str();
            res.final_state = state;
            return res;
        }
        // Pin the time grid to t_n = n dt exactly.
        sr.state.t = static_cast<double>(n + 1) * dt;

        if (cfg.diagnostics) {
            StepDiagnostics d;
            d.n = sr.state.n;
            d.t = sr.state.t;
            const auto [lo, hi] = std::minmax_element(sr.state.rho.values.begin(), sr.state.rho.values.end());
            d.rho_min_margin = *lo - cfg.problem.rho_min;
            d.rho_max_margin = cfg.problem.rho_max - *hi;
            const double rho_l2_prev = norm_l2_cells(state.rho);
            d.rho_l2 = norm_l2_cells(sr.state.rho);
            d.rho_l2_growth = d.rho_l2 - rho_l2_prev;
            d.div_l2 = sr.oseen.divergence_residual;
            d.mass_dual = mass_dual_residual(state.rho, sr.state.rho, state.u, dt);
            const KineticCheck kc =
                check_kinetic(state.rho, state.u, sr.state.rho, sr.state.u, sr.state.p, sr.forcing, dt);
            d.kinetic = kc.max_residual;
            d.remainder_max = kc.max_remainder;
            d.h1 = norm_h1(sr.state.u);
            d.l2 = norm_lp_dual(sr.state.u, LpExponent::L2);
            d.energy = kinetic_energy(sr.state.rho, sr.state.u);
            dissipation += dt * d.h1 * d.h1;
            work += dt * dual_inner(sr.forcing, sr.state.u);
            d.energy_budget = d.energy + dissipation - work;
            d.budget_growth = d.energy_budget - budget_prev;
            budget_prev = d.energy_budget;
            energy_scale = std::max({energy_scale, d.energy, dissipation, std::abs(work)});
            cum_h1_sq += dt * d.h1 * d.h1;
            linf_l2 = std::max(linf_l2, d.l2);
            d.cum_l2_h1 = std::sqrt(cum_h1_sq);
            d.cum_linf_l2 = linf_l2;
            d.transport_residual = sr.transport.transport_residual;
            d.momentum_residual = sr.oseen.momentum_residual;
            res.diagnostics.steps.push_back(d);
            res.diagnostics.flags.push_back(
                evaluate(d, res.diagnostics.thresholds, energy_scale, std::max(rho_l2_prev, 1.0)));
        }

        state = std::move(sr.state);
        if (cfg.keep_trajectory) {
            res.trajectory.push(state.t, state.rho, state.u, state.p);
        }
    }
    res.diagnostics.energy_scale = energy_scale;
    res.completed = true;
    res.final_state = std::move(state);
    return res;
}

}  // namespace macvd
