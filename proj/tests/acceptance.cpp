// Acceptance suite: one PASS/FAIL line per criterion.

#include "macvd/verify.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace macvd;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, double seconds)
{
    std::printf("%s criterion %2d: %s [%.2f s]\n", pass ? "PASS" : "FAIL", id, what.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) {
        ++failures;
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

std::vector<MeshPtr> identity_meshes()
{
    std::mt19937_64 rng(2024);
    const std::vector<std::array<double, 2>> box2{{0.0, 1.0}, {0.0, 1.0}};
    const std::vector<std::array<double, 2>> box3{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
    return {build_uniform_mesh(box2, {5, 4}), random_nonuniform_mesh({5, 4}, rng), build_uniform_mesh(box3, {3, 3, 3}),
            random_nonuniform_mesh({3, 3, 3}, rng)};
}

double worst(const std::vector<MeshPtr>& meshes, const std::function<IdentityReport(const MeshPtr&, std::uint64_t)>& f)
{
    double w = 0.0;
    std::uint64_t seed = 11;
    for (const auto& m : meshes) {
        w = std::max(w, f(m, seed++).max_residual);
    }
    return w;
}

void oracle_criterion()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(77);
    const std::vector<std::array<double, 2>> box{{0.0, 1.0}, {0.0, 1.0}};
    std::vector<MeshPtr> meshes{build_uniform_mesh(box, {8, 8}), random_nonuniform_mesh({6, 5}, rng),
                                random_nonuniform_mesh({3, 3, 3}, rng)};
    double err = 0.0;
    for (const auto& mesh : meshes) {
        const ScalarField rho_n = random_scalar(mesh, rng, 1.0, 2.0);
        const ScalarField rho_n1 = random_scalar(mesh, rng, 1.0, 2.0);
        const VelocityField u_n = random_velocity(mesh, rng);
        const VelocityField f = random_velocity(mesh, rng);
        const SaddleSystem sys = assemble_oseen(rho_n, rho_n1, u_n, f, 0.01);

        const Eigen::MatrixXd K = Eigen::MatrixXd(monolithic_matrix(sys, 0));
        const Eigen::VectorXd b = monolithic_rhs(sys, 0);
        Eigen::VectorXd x = K.partialPivLu().solve(b);
        const Index nu = sys.dofs.size();
        Eigen::VectorXd p = x.tail(x.size() - nu);
        const MacMesh& m = *mesh;
        double mean = 0.0;
        for (Index c = 0; c < m.num_cells(); ++c) {
            mean += m.cell_measure(c) * p[c];
        }
        mean /= m.domain_measure();
        p.array() -= mean;
        x.tail(p.size()) = p;

        for (SolverStrategy s : {SolverStrategy::Direct, SolverStrategy::Iterative}) {
            SolverOptions opts;
            opts.strategy = s;
            opts.oseen_tol = 1e-13;
            const OseenResult r = solve_oseen(sys, opts);
            Eigen::VectorXd y(x.size());
            y << sys.dofs.gather(r.u), to_vector(r.p);
            err = std::max(err, (y - x).norm() / x.norm());
        }
    }
    report(11, err < 1e-10, fmt("Oseen step matches dense solve, max relative difference %.3e (< 1e-10)", err),
           seconds_since(t0));
}

}  // namespace

int main()
{
    const auto meshes = identity_meshes();

    auto t0 = std::chrono::steady_clock::now();
    const double dual = worst(meshes, [](const MeshPtr& m, std::uint64_t s) { return check_duality(m, 100, s); });
    report(1, dual < 1e-12, fmt("discrete duality, max relative residual %.3e (< 1e-12)", dual), seconds_since(t0));

    t0 = std::chrono::steady_clock::now();
    const double adj = worst(meshes, [](const MeshPtr& m, std::uint64_t s) { return check_adjointness(m, 100, s); });
    report(2, adj < 1e-12, fmt("gradient/divergence adjointness, max relative residual %.3e (< 1e-12)", adj),
           seconds_since(t0));

    t0 = std::chrono::steady_clock::now();
    const double coer = worst(meshes, [](const MeshPtr& m, std::uint64_t s) { return check_coercivity(m, 100, s); });
    const double sym = worst(meshes, [](const MeshPtr& m, std::uint64_t) { return check_laplacian_symmetry(m); });
    report(3, coer < 1e-12 && sym < 1e-13,
           fmt("coercivity residual %.3e (< 1e-12), Laplacian asymmetry %.3e (< 1e-13)", coer, sym),
           seconds_since(t0));

    // Rotating patch, 32^2, 200 steps.
    t0 = std::chrono::steady_clock::now();
    SchemeConfig cfg;
    cfg.problem = make_preset("rotating-patch", 2);
    cfg.mesh = build_uniform_mesh(cfg.problem.domain, {32, 32});
    cfg.T = 1.0;
    cfg.dt = 0.005;
    const RunResult patch = run(cfg);
    const double patch_time = seconds_since(t0);
    const CheckFlags flags = patch.diagnostics.combined();
    double min_margin = 0.0;
    double max_growth = -1e300;
    double max_mass = 0.0;
    double max_kin = 0.0;
    double max_rem = -1e300;
    double max_div = 0.0;
    for (const auto& d : patch.diagnostics.steps) {
        min_margin = std::min({min_margin, d.rho_min_margin, d.rho_max_margin});
        max_growth = std::max(max_growth, d.rho_l2_growth);
        max_mass = std::max(max_mass, d.mass_dual);
        max_kin = std::max(max_kin, d.kinetic);
        max_rem = std::max(max_rem, d.remainder_max);
        max_div = std::max(max_div, d.div_l2);
    }
    const bool ran = patch.completed && patch.steps == 200;
    report(4, ran && flags.bounds && flags.l2_decay,
           fmt("density bounds and L2 decay over %.0f steps, worst margin %.3e, max L2 growth %.3e",
               static_cast<double>(patch.diagnostics.steps.size()), min_margin, max_growth),
           patch_time);
    report(5, ran && flags.mass_dual,
           fmt("dual-cell mass balance, max relative residual %.3e (<= %.1e)", max_mass,
               patch.diagnostics.thresholds.mass_dual),
           0.0);
    report(6, ran && flags.kinetic && flags.remainder,
           fmt("kinetic energy identity, max relative residual %.3e (<= %.1e), max remainder %.3e (<= 0)", max_kin,
               patch.diagnostics.thresholds.kinetic, max_rem),
           0.0);
    report(7, ran && flags.divergence, fmt("divergence-free velocity, max L2 divergence %.3e (<= 1e-9)", max_div),
           0.0);

    // Smooth preset at 16, 32, 64.
    t0 = std::chrono::steady_clock::now();
    StudyOptions study;
    const ConvergenceReport conv = convergence_study(study);
    const double study_time = seconds_since(t0);
    const auto& l32 = conv.levels[1];
    const auto& l64 = conv.levels[2];
    const double dh1 = std::abs(l64.l2_h1 - l32.l2_h1) / l32.l2_h1;
    const double dl2 = std::abs(l64.linf_l2 - l32.linf_l2) / l32.linf_l2;
    report(8, dh1 < 0.2 && dl2 < 0.2,
           fmt("energy norms 32 vs 64: L2(H1) %.4f vs %.4f, Linf(L2) %.4f vs %.4f (within 20%%)", l32.l2_h1,
               l64.l2_h1, l32.linf_l2, l64.linf_l2),
           0.0);

    t0 = std::chrono::steady_clock::now();
    const double dt = patch.dt;
    const TranslateReport tr =
        measure_translates(patch.trajectory, {dt, 2 * dt, 4 * dt, 8 * dt}, cfg.problem.rho_min, cfg.problem.rho_max);
    report(9, tr.slope >= 0.4, fmt("time-translate log-log slope %.4f (>= 0.4)", tr.slope), seconds_since(t0));

    std::string errs;
    for (const auto& l : conv.levels) {
        errs += fmt(" %.0f:", static_cast<double>(l.cells)) + fmt("u=%.3e,rho=%.3e", l.velocity, l.density);
    }
    double minf = 1e300;
    for (std::size_t k = 0; k < conv.velocity_factors.size(); ++k) {
        minf = std::min({minf, conv.velocity_factors[k], conv.density_factors[k]});
    }
    report(10, conv.factors_pass(), "convergence" + errs + fmt(", min factor %.3f (>= 1.5)", minf), study_time);

    oracle_criterion();

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
