#include "macvd/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace macvd {

// ---- random fields ------------------------------------------------------------

VelocityField random_velocity(const MeshPtr& mesh, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    VelocityField v(mesh);
    for (int d = 0; d < mesh->dim(); ++d) {
        for (Index f : mesh->interior_faces(d)) {
            v.comp[d][f] = dist(rng);
        }
    }
    return v;
}

ScalarField random_scalar(const MeshPtr& mesh, std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    ScalarField q(mesh);
    for (auto& x : q.values) {
        x = dist(rng);
    }
    return q;
}

MeshPtr random_nonuniform_mesh(const std::vector<Index>& cells, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(0.7, 1.3);
    std::vector<std::array<double, 2>> box(cells.size(), {0.0, 1.0});
    std::vector<std::vector<double>> coords(cells.size());
    for (std::size_t a = 0; a < cells.size(); ++a) {
        std::vector<double> w(static_cast<std::size_t>(cells[a]));
        for (auto& x : w) {
            x = dist(rng);
        }
        double total = 0.0;
        for (double x : w) {
            total += x;
        }
        coords[a].push_back(0.0);
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < w.size(); ++k) {
            acc += w[k];
            coords[a].push_back(acc / total);
        }
        coords[a].push_back(1.0);
    }
    return build_mesh(box, coords);
}

// ---- identities ---------------------------------------------------------------

DualitySides duality_sides(const ScalarField& rho, const VelocityField& v, const VelocityField& w, int dir)
{
    const auto& m = *rho.mesh;
    DualitySides out;
    const std::vector<double> div = div_dual(rho, v, dir);
    for (Index f : m.interior_faces(dir)) {
        out.divergence_side += m.dual_measure(dir, f) * div[f] * w.comp[dir][f];
    }
    const std::vector<double> flux = flux_reconstruction(rho, v, dir);
    const std::vector<double> grad = dual_gradient(w, dir);
    const auto& faces = m.dual_faces(dir);
    for (std::size_t k = 0; k < faces.size(); ++k) {
        const double term = faces[k].measure * faces[k].distance * flux[k] * grad[k];
        out.gradient_side += term;
        out.scale += std::abs(term);
    }
    return out;
}

IdentityReport check_duality(const MeshPtr& mesh, int trials, std::uint64_t seed)
{
    IdentityReport rep{"duality", trials, 0.0, 1e-12};
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        const ScalarField rho = random_scalar(mesh, rng, 0.5, 2.0);
        const VelocityField v = random_velocity(mesh, rng);
        const VelocityField w = random_velocity(mesh, rng);
        for (int d = 0; d < mesh->dim(); ++d) {
            const DualitySides s = duality_sides(rho, v, w, d);
            const double res = std::abs(s.divergence_side + s.gradient_side);
            rep.max_residual = std::max(rep.max_residual, s.scale > 0.0 ? res / s.scale : res);
        }
    }
    return rep;
}

IdentityReport check_adjointness(const MeshPtr& mesh, int trials, std::uint64_t seed)
{
    IdentityReport rep{"adjointness", trials, 0.0, 1e-12};
    std::mt19937_64 rng(seed);
    const auto& m = *mesh;
    for (int t = 0; t < trials; ++t) {
        const ScalarField p = random_scalar(mesh, rng, -1.0, 1.0);
        const VelocityField v = random_velocity(mesh, rng);
        const ScalarField div = div_velocity(v);
        const VelocityField grad = grad_pressure(p);
        double lhs = 0.0;
        double scale = 0.0;
        for (Index c = 0; c < m.num_cells(); ++c) {
            const double term = m.cell_measure(c) * p[c] * div[c];
            lhs += term;
            scale += std::abs(term);
        }
        double rhs = 0.0;
        for (int d = 0; d < m.dim(); ++d) {
            for (Index f : m.interior_faces(d)) {
                const double term = m.dual_measure(d, f) * grad.comp[d][f] * v.comp[d][f];
                rhs += term;
                scale += std::abs(term);
            }
        }
        const double res = std::abs(lhs + rhs);
        rep.max_residual = std::max(rep.max_residual, scale > 0.0 ? res / scale : res);
    }
    return rep;
}

IdentityReport check_coercivity(const MeshPtr& mesh, int trials, std::uint64_t seed)
{
    IdentityReport rep{"coercivity", trials, 0.0, 1e-12};
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        const VelocityField u = random_velocity(mesh, rng);
        const double form = -dual_inner(laplacian_apply(u), u);
        const double h1 = norm_h1(u);
        const double res = std::abs(form - h1 * h1);
        rep.max_residual = std::max(rep.max_residual, h1 > 0.0 ? res / (h1 * h1) : res);
    }
    return rep;
}

IdentityReport check_laplacian_symmetry(const MeshPtr& mesh)
{
    IdentityReport rep{"laplacian-symmetry", 1, 0.0, 1e-13};
    const VelocityDofs dofs(*mesh);
    const SparseMatrix S = laplacian_matrix(*mesh, dofs).matrix;
    const SparseMatrix St = S.transpose();
    const double diff = SparseMatrix(S - St).coeffs().cwiseAbs().maxCoeff();
    const double scale = S.coeffs().cwiseAbs().maxCoeff();
    rep.max_residual = scale > 0.0 ? diff / scale : diff;
    return rep;
}

IdentityReport check_block_transpose(const MeshPtr& mesh)
{
    IdentityReport rep{"block-transpose", 1, 0.0, 1e-13};
    const VelocityDofs dofs(*mesh);
    const SparseMatrix B = divergence_matrix(*mesh, dofs).matrix;
    const SparseMatrix G = gradient_matrix(*mesh, dofs).matrix;
    const SparseMatrix Bt = B.transpose();
    const SparseMatrix diff = Bt - G;
    const double num = diff.nonZeros() > 0 ? diff.coeffs().cwiseAbs().maxCoeff() : 0.0;
    const double scale = G.coeffs().cwiseAbs().maxCoeff();
    rep.max_residual = scale > 0.0 ? num / scale : num;
    return rep;
}

// ---- translates -------------------------------------------------------------------

namespace {

// Index into the trajectory of the value held on (t_n, t_{n+1}] containing t.
std::size_t held_index(const Trajectory& traj, double t)
{
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - traj.times.begin());
    return std::clamp<std::size_t>(k, 1, traj.size() - 1);
}

}  // namespace

double translate_integral(const Trajectory& traj, double tau)
{
    if (traj.size() < 2 || tau <= 0.0) {
        return 0.0;
    }
    const double T = traj.times.back();
    const double end = T - tau;
    if (end <= 0.0) {
        return 0.0;
    }
    std::vector<double> cuts{0.0, end};
    for (double t : traj.times) {
        if (t > 0.0 && t < end) {
            cuts.push_back(t);
        }
        if (t - tau > 0.0 && t - tau < end) {
            cuts.push_back(t - tau);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        if (b - a <= 1e-14 * T) {
            continue;
        }
        const double mid = 0.5 * (a + b);
        const std::size_t i0 = held_index(traj, mid);
        const std::size_t i1 = held_index(traj, mid + tau);
        if (i0 == i1) {
            continue;
        }
        const VelocityField diff = traj.velocity[i1] - traj.velocity[i0];
        total += (b - a) * dual_inner(diff, diff);
    }
    return total;
}

TranslateReport measure_translates(const Trajectory& traj, const std::vector<double>& taus, double rho_min,
                                   double rho_max)
{
    if (taus.size() < 3) {
        throw ValidationError("translate fit needs at least three tau values");
    }
    const double T = traj.times.empty() ? 0.0 : traj.times.back();
    TranslateReport rep;
    for (double tau : taus) {
        if (!(tau > 0.0) || tau >= T) {
            throw ValidationError("translate tau values must lie in (0, T)");
        }
        rep.taus.push_back(tau);
        rep.integrals.push_back(translate_integral(traj, tau));
    }
    // Least-squares slope in log-log coordinates.
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const double n = static_cast<double>(taus.size());
    for (std::size_t k = 0; k < taus.size(); ++k) {
        const double x = std::log(taus[k] + traj.dt);
        const double y = std::log(rep.integrals[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double norm = trajectory_energy_norms(traj).l2_h1;
    rep.scale_factor = rho_max / rho_min * (norm * norm * norm + 1.0);
    return rep;
}

// ---- convergence -------------------------------------------------------------------

bool ConvergenceReport::monotone() const
{
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (!(levels[k].velocity < levels[k - 1].velocity) || !(levels[k].density < levels[k - 1].density)) {
            return false;
        }
    }
    return levels.size() >= 2;
}

bool ConvergenceReport::factors_pass() const
{
    if (!monotone()) {
        return false;
    }
    for (std::size_t k = 0; k < velocity_factors.size(); ++k) {
        if (velocity_factors[k] < min_factor || density_factors[k] < min_factor) {
            return false;
        }
    }
    return true;
}

LevelErrors trajectory_errors(const Trajectory& traj, const ManufacturedFields& exact)
{
    LevelErrors err;
    const auto u_ex = exact_velocity(exact);
    const auto r_ex = exact_density(exact);
    const auto p_ex = exact_pressure(exact);
    double eu = 0.0;
    double er = 0.0;
    double ep = 0.0;
    for (std::size_t n = 1; n < traj.size(); ++n) {
        const double t = traj.times[n];
        const MeshPtr& mesh = traj.density[n].mesh;
        const VelocityField uh = fortin_interpolate(mesh, [&](const Point& x) { return u_ex(x, t); });
        const ScalarField rh = cell_average(mesh, [&](const Point& x) { return r_ex(x, t); });
        ScalarField ph = cell_average(mesh, [&](const Point& x) { return p_ex(x, t); });
        ph.remove_mean();
        ScalarField pd = traj.pressure[n];
        pd.remove_mean();

        const VelocityField du = traj.velocity[n] - uh;
        eu += traj.dt * dual_inner(du, du);
        ScalarField dr = traj.density[n];
        for (Index c = 0; c < dr.size(); ++c) {
            dr[c] -= rh[c];
            pd[c] -= ph[c];
        }
        er += traj.dt * cell_inner(dr, dr);
        ep += traj.dt * cell_inner(pd, pd);
    }
    err.velocity = std::sqrt(eu);
    err.density = std::sqrt(er);
    err.pressure = std::sqrt(ep);
    return err;
}

ConvergenceReport convergence_study(const StudyOptions& opts)
{
    if (opts.levels < 2) {
        throw ValidationError("a convergence study needs at least two levels");
    }
    ConvergenceReport rep;
    rep.preset = opts.preset;
    const Problem problem = make_preset(opts.preset, opts.dim);
    if (!problem.exact) {
        throw ValidationError("preset '" + opts.preset + "' has no exact solution");
    }
    for (int l = 0; l < opts.levels; ++l) {
        const auto t0 = std::chrono::steady_clock::now();
        const Index cells = opts.base_cells << l;
        SchemeConfig cfg;
        cfg.mesh = build_uniform_mesh(problem.domain, std::vector<Index>(static_cast<std::size_t>(opts.dim), cells));
        cfg.T = opts.T;
        cfg.dt = opts.dt_over_h / static_cast<double>(cells);
        cfg.problem = problem;
        cfg.solver = opts.solver;
        const RunResult run_result = run(cfg);
        if (!run_result.completed) {
            throw SolverFailure("convergence level " + std::to_string(cells) + ": " + run_result.failure,
                                SolveReport{});
        }
        LevelErrors e = trajectory_errors(run_result.trajectory, *problem.exact);
        e.cells = cells;
        e.h = mesh_step(*cfg.mesh);
        e.dt = run_result.dt;
        e.eta = regularity(*cfg.mesh);
        e.l2_h1 = run_result.diagnostics.l2_h1();
        e.linf_l2 = run_result.diagnostics.linf_l2();
        e.diagnostics_pass = run_result.diagnostics.all_pass();
        e.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.levels.push_back(e);
    }
    for (std::size_t k = 1; k < rep.levels.size(); ++k) {
        rep.velocity_factors.push_back(rep.levels[k - 1].velocity / rep.levels[k].velocity);
        rep.density_factors.push_back(rep.levels[k - 1].density / rep.levels[k].density);
    }
    return rep;
}

// ---- convection bound -----------------------------------------------------------------

double convection_form(const ScalarField& rho, const VelocityField& u, const VelocityField& v,
                       const VelocityField& w)
{
    return dual_inner(convection_apply(rho, u, v), w);
}

namespace {

// Random combination of sin(k pi x) sin(l pi y) [sin(m pi z)] modes, k,l,m <= 3.
VelocityField random_smooth_velocity(const MeshPtr& mesh, std::mt19937_64& rng)
{
    constexpr int kModes = 3;
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int dim = mesh->dim();
    const int mz = dim == 3 ? kModes : 1;
    std::vector<double> coef(static_cast<std::size_t>(3 * kModes * kModes * mz));
    for (auto& c : coef) {
        c = dist(rng);
    }
    const auto field = [coef, dim, mz](const Point& x) {
        constexpr double pi = std::numbers::pi;
        std::array<double, 3> out{0.0, 0.0, 0.0};
        std::size_t k = 0;
        for (int c = 0; c < 3; ++c) {
            for (int a = 1; a <= kModes; ++a) {
                for (int b = 1; b <= kModes; ++b) {
                    for (int e = 1; e <= mz; ++e) {
                        double mode = std::sin(a * pi * x[0]) * std::sin(b * pi * x[1]);
                        if (dim == 3) {
                            mode *= std::sin(e * pi * x[2]);
                        }
                        out[c] += coef[k++] * mode;
                    }
                }
            }
        }
        return out;
    };
    return fortin_interpolate(mesh, field);
}

}  // namespace

ConvectionBoundStats measure_convection_bound(const MeshPtr& mesh, int samples, std::uint64_t seed)
{
    ConvectionBoundStats st;
    st.cells = mesh->num_cells();
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    int used = 0;
    for (int s = 0; s < samples; ++s) {
        const ScalarField rho = random_scalar(mesh, rng, 1.0, 2.0);
        const VelocityField u = project_divergence_free(random_smooth_velocity(mesh, rng));
        const VelocityField v = random_smooth_velocity(mesh, rng);
        const VelocityField w = random_smooth_velocity(mesh, rng);
        const double denom = norm_linf_cells(rho) * norm_h1(u) * norm_h1(v) * norm_h1(w);
        if (!(denom > 0.0)) {
            ++st.skipped;
            continue;
        }
        const double ratio = std::abs(convection_form(rho, u, v, w)) / denom;
        st.max_ratio = std::max(st.max_ratio, ratio);
        sum += ratio;
        ++used;
    }
    st.samples = used;
    st.mean_ratio = used > 0 ? sum / used : 0.0;
    return st;
}

// ---- reports -------------------------------------------------------------------------

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep, const std::string& header)
{
    os << header;
    os << "cells,h,dt,eta,velocity_error,density_error,pressure_error,velocity_factor,density_factor,"
          "l2_h1,linf_l2,diagnostics_pass\n";
    os << std::setprecision(10);
    for (std::size_t k = 0; k < rep.levels.size(); ++k) {
        const auto& l = rep.levels[k];
        os << l.cells << ',' << l.h << ',' << l.dt << ',' << l.eta << ',' << l.velocity << ',' << l.density << ','
           << l.pressure << ',';
        if (k > 0) {
            os << rep.velocity_factors[k - 1] << ',' << rep.density_factors[k - 1];
        } else {
            os << ',';
        }
        os << ',' << l.l2_h1 << ',' << l.linf_l2 << ',' << l.diagnostics_pass << '\n';
    }
}

void write_translate_csv(std::ostream& os, const TranslateReport& rep, const std::string& header)
{
    os << header;
    os << "tau,integral\n" << std::setprecision(12);
    for (std::size_t k = 0; k < rep.taus.size(); ++k) {
        os << rep.taus[k] << ',' << rep.integrals[k] << '\n';
    }
    os << "# slope," << rep.slope << "\n# scale_factor," << rep.scale_factor << '\n';
}

}  // namespace macvd
