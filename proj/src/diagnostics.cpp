#include "macvd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace macvd {

double mass_dual_residual(const ScalarField& rho_n, const ScalarField& rho_n1, const VelocityField& u_n, double dt)
{
    const auto& m = *rho_n.mesh;
    const DualScalarField r0 = dual_density(rho_n);
    const DualScalarField r1 = dual_density(rho_n1);
    const MassFluxSet fl = mass_fluxes(rho_n1, u_n);
    double worst = 0.0;
    double scale = 0.0;
    for (int d = 0; d < m.dim(); ++d) {
        const std::vector<double> div = div_dual(fl, d);
        for (Index f : m.interior_faces(d)) {
            const double res = (r1.comp[d][f] - r0.comp[d][f]) / dt + div[f];
            worst = std::max(worst, std::abs(res));
            scale = std::max({scale, std::abs(r1.comp[d][f]) / dt, std::abs(r0.comp[d][f]) / dt});
        }
    }
    return scale > 0.0 ? worst / scale : worst;
}

KineticCheck check_kinetic(const ScalarField& rho_n, const VelocityField& u_n, const ScalarField& rho_n1,
                           const VelocityField& u_n1, const ScalarField& p_n1, const VelocityField& f_n1,
                           double dt)
{
    const auto& m = *rho_n.mesh;
    const DualScalarField r0 = dual_density(rho_n);
    const DualScalarField r1 = dual_density(rho_n1);
    const MassFluxSet fl = mass_fluxes(rho_n1, u_n);
    const VelocityField lap = laplacian_apply(u_n1);
    const VelocityField grad = grad_pressure(p_n1);

    KineticCheck out;
    double worst = 0.0;
    for (int d = 0; d < m.dim(); ++d) {
        const auto& u0 = u_n.comp[d];
        const auto& u1 = u_n1.comp[d];
        // 1/2 Sum_eps F_{sigma,eps} u_sigma u_sigma', accumulated per dual cell.
        std::vector<double> conv(static_cast<std::size_t>(m.num_faces(d)), 0.0);
        const auto& faces = m.dual_faces(d);
        for (std::size_t k = 0; k < faces.size(); ++k) {
            const auto& e = faces[k];
            if (e.lo == kNone || e.hi == kNone) {
                continue;  // wall: the missing side carries u = 0
            }
            const double t = 0.5 * fl.dual[d][k] * u1[e.lo] * u1[e.hi];
            conv[e.lo] += t;
            conv[e.hi] -= t;
        }
        for (Index f : m.interior_faces(d)) {
            const double vol = m.dual_measure(d, f);
            const double e1 = r1.comp[d][f] * u1[f] * u1[f] / (2.0 * dt);
            const double e0 = r0.comp[d][f] * u0[f] * u0[f] / (2.0 * dt);
            const double tc = conv[f] / vol;
            const double td = -lap.comp[d][f] * u1[f];
            const double tp = grad.comp[d][f] * u1[f];
            const double tf = -f_n1.comp[d][f] * u1[f];
            const double du = u1[f] - u0[f];
            const double rem = -r0.comp[d][f] * du * du / (2.0 * dt);
            const double res = e1 - e0 + tc + td + tp + tf - rem;
            worst = std::max(worst, std::abs(res));
            out.max_remainder = std::max(out.max_remainder, rem);
            out.term_scale = std::max({out.term_scale, std::abs(e1), std::abs(e0), std::abs(tc), std::abs(td),
                                       std::abs(tp), std::abs(tf), std::abs(rem)});
        }
    }
    out.max_residual = out.term_scale > 0.0 ? worst / out.term_scale : worst;
    return out;
}

double kinetic_energy(const ScalarField& rho, const VelocityField& u)
{
    const auto& m = *rho.mesh;
    const DualScalarField rd = dual_density(rho);
    double e = 0.0;
    for (int d = 0; d < m.dim(); ++d) {
        for (Index f : m.interior_faces(d)) {
            e += 0.5 * m.dual_measure(d, f) * rd.comp[d][f] * u.comp[d][f] * u.comp[d][f];
        }
    }
    return e;
}

DiagnosticsThresholds thresholds_for(double transport_tol, double oseen_tol)
{
    DiagnosticsThresholds th;
    th.mass_dual = 10.0 * transport_tol;
    th.kinetic = 10.0 * oseen_tol;
    th.divergence = 10.0 * oseen_tol;
    th.budget_growth = 10.0 * oseen_tol;
    return th;
}

CheckFlags evaluate(const StepDiagnostics& s, const DiagnosticsThresholds& th, double energy_scale,
                    double rho_scale)
{
    CheckFlags c;
    c.bounds = s.rho_min_margin >= -th.bound_margin && s.rho_max_margin >= -th.bound_margin;
    c.l2_decay = s.rho_l2_growth <= th.l2_growth * std::max(rho_scale, 1.0);
    c.divergence = s.div_l2 <= th.divergence;
    c.mass_dual = s.mass_dual <= th.mass_dual;
    c.kinetic = s.kinetic <= th.kinetic;
    c.remainder = s.remainder_max <= 0.0;
    c.budget = s.budget_growth <= th.budget_growth * std::max(energy_scale, 1.0);
    return c;
}

bool DiagnosticsRecord::all_pass() const { return combined().all(); }

CheckFlags DiagnosticsRecord::combined() const
{
    CheckFlags all;
    for (const auto& f : flags) {
        all.bounds = all.bounds && f.bounds;
        all.l2_decay = all.l2_decay && f.l2_decay;
        all.divergence = all.divergence && f.divergence;
        all.mass_dual = all.mass_dual && f.mass_dual;
        all.kinetic = all.kinetic && f.kinetic;
        all.remainder = all.remainder && f.remainder;
        all.budget = all.budget && f.budget;
    }
    return all;
}

void write_diagnostics_csv(std::ostream& os, const DiagnosticsRecord& rec, const std::string& header)
{
    os << header;
    os << "n,t,rho_min_margin,rho_max_margin,rho_l2,rho_l2_growth,div_l2,mass_dual_residual,"
          "kinetic_residual,remainder_max,h1_norm,l2_norm,kinetic_energy,energy_budget,cum_l2_h1,"
          "cum_linf_l2,transport_residual,momentum_residual,pass_bounds,pass_l2_decay,pass_divergence,"
          "pass_mass_dual,pass_kinetic,pass_remainder,pass_budget\n";
    os << std::setprecision(10);
    for (std::size_t k = 0; k < rec.steps.size(); ++k) {
        const auto& s = rec.steps[k];
        const auto& f = rec.flags[k];
        os << s.n << ',' << s.t << ',' << s.rho_min_margin << ',' << s.rho_max_margin << ',' << s.rho_l2 << ','
           << s.rho_l2_growth << ',' << s.div_l2 << ',' << s.mass_dual << ',' << s.kinetic << ','
           << s.remainder_max << ',' << s.h1 << ',' << s.l2 << ',' << s.energy << ',' << s.energy_budget << ','
           << s.cum_l2_h1 << ',' << s.cum_linf_l2 << ',' << s.transport_residual << ','
           << s.momentum_residual << ',' << f.bounds << ',' << f.l2_decay << ',' << f.divergence << ','
           << f.mass_dual << ',' << f.kinetic << ',' << f.remainder << ',' << f.budget << '\n';
    }
}

}  // namespace macvd
