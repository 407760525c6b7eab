#include "support.hpp"

#include <sstream>

using namespace macvd;
using namespace macvd::testing;

namespace {

// Velocities u^n = a_n phi for a fixed phi: the translate integral has a closed form.
Trajectory scalar_multiple_trajectory(const std::vector<double>& amplitudes, double dt, VelocityField& phi)
{
    std::mt19937_64 rng(31);
    const MeshPtr m = unit_mesh({4, 4});
    phi = random_velocity(m, rng);
    Trajectory traj;
    traj.dt = dt;
    for (std::size_t n = 0; n < amplitudes.size(); ++n) {
        traj.push(dt * static_cast<double>(n), ScalarField(m, 1.0), amplitudes[n] * phi, ScalarField(m));
    }
    return traj;
}

}  // namespace

TEST(Translates, DegenerateCases)
{
    VelocityField phi;
    const Trajectory steady = scalar_multiple_trajectory(std::vector<double>(9, 1.0), 0.1, phi);
    EXPECT_EQ(translate_integral(steady, 0.0), 0.0);
    for (double tau : {0.1, 0.25, 0.4}) {
        EXPECT_EQ(translate_integral(steady, tau), 0.0);
    }
    EXPECT_THROW(measure_translates(steady, {0.1, 0.2}, 1.0, 1.0), ValidationError);
    EXPECT_THROW(measure_translates(steady, {0.1, 0.2, 5.0}, 1.0, 1.0), ValidationError);
}

TEST(Translates, MultiplesOfStepMatchDirectSum)
{
    const std::vector<double> a{0.0, 1.0, 0.5, -0.25, 2.0, 1.5, 0.0, 3.0, -1.0};
    const double dt = 0.1;
    VelocityField phi;
    const Trajectory traj = scalar_multiple_trajectory(a, dt, phi);
    const double phi2 = dual_inner(phi, phi);
    const std::size_t N = a.size() - 1;
    for (std::size_t k = 1; k <= 4; ++k) {
        double direct = 0.0;
        for (std::size_t n = 1; n + k <= N; ++n) {
            direct += dt * (a[n + k] - a[n]) * (a[n + k] - a[n]) * phi2;
        }
        EXPECT_NEAR(translate_integral(traj, dt * static_cast<double>(k)), direct, 1e-12 * (1 + direct));
    }
}

TEST(Translates, FractionalShiftMatchesFineQuadrature)
{
    const std::vector<double> a{0.0, 1.0, 0.5, -0.25, 2.0, 1.5};
    const double dt = 0.2;
    VelocityField phi;
    const Trajectory traj = scalar_multiple_trajectory(a, dt, phi);
    const double phi2 = dual_inner(phi, phi);
    const double T = dt * 5.0;
    const double tau = 0.33;
    const auto held = [&](double t) { return a[std::min<std::size_t>(5, static_cast<std::size_t>(std::ceil(t / dt - 1e-12)))]; };
    const int samples = 200000;
    const double h = (T - tau) / samples;
    double quad = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double t = (s + 0.5) * h;
        const double d = held(t + tau) - held(t);
        quad += h * d * d * phi2;
    }
    EXPECT_NEAR(translate_integral(traj, tau), quad, 1e-4 * quad);
}

TEST(Translates, SlopeOfSmoothRun)
{
    SchemeConfig cfg;
    cfg.problem = make_preset("smooth-vortex", 2);
    cfg.mesh = unit_mesh({12, 12});
    cfg.T = 0.5;
    cfg.dt = 0.02;
    const RunResult r = run(cfg);
    const TranslateReport rep =
        measure_translates(r.trajectory, {0.02, 0.04, 0.08, 0.16}, cfg.problem.rho_min, cfg.problem.rho_max);
    EXPECT_GE(rep.slope, 0.4);
    EXPECT_GT(rep.scale_factor, 1.0);
    std::ostringstream os;
    write_translate_csv(os, rep, "# units: nondimensional\n");
    EXPECT_NE(os.str().find("tau,integral"), std::string::npos);
}

TEST(Convergence, RestPresetIsExact)
{
    const Problem pb = make_preset("rest", 2);
    SchemeConfig cfg;
    cfg.problem = pb;
    cfg.mesh = unit_mesh({6, 6});
    cfg.T = 0.2;
    cfg.dt = 0.05;
    const RunResult r = run(cfg);
    const LevelErrors e = trajectory_errors(r.trajectory, *pb.exact);
    EXPECT_LT(e.velocity, 1e-14);
    EXPECT_LT(e.density, 1e-14);
    EXPECT_LT(e.pressure, 1e-14);
}

TEST(Convergence, SmallStudyReport)
{
    StudyOptions opts;
    opts.levels = 2;
    opts.base_cells = 8;
    opts.T = 0.25;
    const ConvergenceReport rep = convergence_study(opts);
    ASSERT_EQ(rep.levels.size(), 2u);
    EXPECT_TRUE(rep.monotone());
    EXPECT_DOUBLE_EQ(rep.levels[0].eta, rep.levels[1].eta);
    EXPECT_NEAR(rep.levels[1].dt, 0.5 * rep.levels[0].dt, 1e-15);
    EXPECT_TRUE(rep.levels[1].diagnostics_pass);
    std::ostringstream os;
    write_convergence_csv(os, rep);
    const std::string csv = os.str();
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

    opts.levels = 1;
    EXPECT_THROW(convergence_study(opts), ValidationError);
    opts.levels = 2;
    opts.preset = "taylor-green";
    opts.T = 0.125;
    EXPECT_NO_THROW(convergence_study(opts));
}

TEST(Convergence, FactorLogic)
{
    ConvergenceReport rep;
    rep.levels.resize(3);
    rep.levels[0].velocity = 4.0;
    rep.levels[1].velocity = 2.0;
    rep.levels[2].velocity = 1.0;
    rep.levels[0].density = 4.0;
    rep.levels[1].density = 3.0;
    rep.levels[2].density = 1.0;
    rep.velocity_factors = {2.0, 2.0};
    rep.density_factors = {4.0 / 3.0, 3.0};
    EXPECT_TRUE(rep.monotone());
    EXPECT_FALSE(rep.factors_pass());
    rep.levels[2].density = 3.0;
    EXPECT_FALSE(rep.monotone());
}

TEST(KineticCheck, ZeroFixedPoint)
{
    const MeshPtr m = unit_mesh({4, 4});
    const ScalarField rho(m, 1.0);
    const VelocityField zero(m);
    const KineticCheck k = check_kinetic(rho, zero, rho, zero, ScalarField(m), zero, 0.1);
    EXPECT_EQ(k.max_residual, 0.0);
    EXPECT_EQ(k.max_remainder, 0.0);
}

TEST(ConvectionBound, HomogeneityAndTrend)
{
    std::mt19937_64 rng(41);
    const MeshPtr m = unit_mesh({6, 6});
    const ScalarField rho = random_scalar(m, rng, 1.0, 2.0);
    const VelocityField u = project_divergence_free(random_velocity(m, rng));
    const VelocityField v = random_velocity(m, rng);
    const VelocityField w = random_velocity(m, rng);
    const double form = convection_form(rho, u, v, w);
    EXPECT_NEAR(convection_form(rho, 2.0 * u, v, w), 2.0 * form, 1e-13 * std::abs(form));
    EXPECT_EQ(convection_form(rho, u, VelocityField(m), w), 0.0);

    const ConvectionBoundStats s8 = measure_convection_bound(unit_mesh({8, 8}), 20, 5);
    const ConvectionBoundStats s16 = measure_convection_bound(unit_mesh({16, 16}), 20, 5);
    EXPECT_EQ(s8.samples, 20);
    EXPECT_GT(s8.max_ratio, 0.0);
    EXPECT_LE(s16.max_ratio, 1.1 * s8.max_ratio);
}
