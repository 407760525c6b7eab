#include "support.hpp"

#include <numbers>

using namespace macvd;
using namespace macvd::testing;

namespace {

SchemeConfig rest_config(Index cells, double T, double dt)
{
    SchemeConfig cfg;
    cfg.problem = make_preset("rest", 2, 1.3);
    cfg.mesh = unit_mesh({cells, cells});
    cfg.T = T;
    cfg.dt = dt;
    return cfg;
}

}  // namespace

TEST(Initialize, RestState)
{
    const SchemeState s = initialize(rest_config(4, 1.0, 0.25));
    for (double x : s.rho.values) {
        EXPECT_DOUBLE_EQ(x, 1.3);
    }
    EXPECT_EQ(max_abs(s.u), 0.0);
    EXPECT_EQ(max_abs(s.p.values), 0.0);
}

TEST(Initialize, AveragedDensityAndPolynomialVelocity)
{
    SchemeConfig cfg = rest_config(8, 1.0, 0.25);
    cfg.problem.rho_min = 0.5;
    cfg.problem.rho_max = 1.5;
    cfg.problem.rho0 = [](const Point& p) {
        return 1.0 + 0.5 * std::sin(std::numbers::pi * p[0]) * std::sin(std::numbers::pi * p[1]);
    };
    cfg.problem.u0 = [](const Point& p) {
        const double x = p[0];
        const double y = p[1];
        return std::array<double, 3>{x * x * (1 - x) * (1 - x) * 2 * y * (1 - y) * (1 - 2 * y),
                                     -2 * x * (1 - x) * (1 - 2 * x) * y * y * (1 - y) * (1 - y), 0.0};
    };
    const SchemeState s = initialize(cfg);
    for (double x : s.rho.values) {
        EXPECT_GT(x, 0.5);
        EXPECT_LT(x, 1.5);
    }
    EXPECT_LT(max_abs(div_velocity(s.u).values), 1e-14);
    EXPECT_GT(max_abs(s.u), 1e-3);
}

TEST(Initialize, RejectsDensityOutsideDeclaredBounds)
{
    SchemeConfig cfg = rest_config(4, 1.0, 0.25);
    cfg.problem.rho_max = 1.2;
    cfg.problem.rho_min = 1.0;
    EXPECT_THROW(initialize(cfg), ValidationError);
}

TEST(Validate, RejectsBadTimes)
{
    EXPECT_THROW(validate(rest_config(4, 1.0, 2.0)), ValidationError);
    EXPECT_THROW(validate(rest_config(4, 1.0, 0.0)), ValidationError);
    EXPECT_THROW(validate(rest_config(4, -1.0, 0.1)), ValidationError);
    SchemeConfig cfg = rest_config(4, 1.0, 0.1);
    cfg.problem = make_preset("rest", 3);
    EXPECT_THROW(validate(cfg), ValidationError);
}

TEST(Step, ZeroFixedPoint)
{
    const SchemeConfig cfg = rest_config(5, 1.0, 0.1);
    const SchemeState s0 = initialize(cfg);
    const StepResult r = step(s0, cfg);
    EXPECT_EQ(r.state.n, 1);
    EXPECT_DOUBLE_EQ(r.state.t, 0.1);
    EXPECT_EQ(r.state.rho.values, s0.rho.values);
    EXPECT_EQ(max_abs(r.state.u), 0.0);
    EXPECT_EQ(max_abs(r.state.p.values), 0.0);
}

TEST(Step, ManufacturedStepResidualsAndResubstitution)
{
    SchemeConfig cfg;
    cfg.problem = make_preset("smooth-vortex", 2);
    cfg.mesh = unit_mesh({8, 8});
    cfg.T = 0.1;
    cfg.dt = 0.05;
    SchemeState s = initialize(cfg);
    for (int n = 0; n < 2; ++n) {
        const StepResult r = step(s, cfg);
        const SaddleSystem sys = assemble_oseen(s.rho, r.state.rho, s.u, r.forcing, cfg.dt);
        const Eigen::VectorXd res = sys.A * sys.dofs.gather(r.state.u) + sys.G * to_vector(r.state.p) - sys.rhs_u;
        EXPECT_LE(res.norm(), 1e-10 * sys.rhs_u.norm());
        EXPECT_LE(mass_dual_residual(s.rho, r.state.rho, s.u, cfg.dt), 1e-12);
        const KineticCheck k = check_kinetic(s.rho, s.u, r.state.rho, r.state.u, r.state.p, r.forcing, cfg.dt);
        EXPECT_LE(k.max_residual, 1e-9);
        EXPECT_LE(k.max_remainder, 0.0);
        s = r.state;
    }
}

TEST(Run, FourIdenticalSteps)
{
    const RunResult r = run(rest_config(4, 0.4, 0.1));
    ASSERT_TRUE(r.completed);
    EXPECT_EQ(r.steps, 4);
    EXPECT_FALSE(r.dt_adjusted);
    ASSERT_EQ(r.trajectory.size(), 5u);
    for (std::size_t n = 0; n < 5; ++n) {
        EXPECT_DOUBLE_EQ(r.trajectory.times[n], 0.1 * static_cast<double>(n));
        EXPECT_EQ(r.trajectory.density[n].values, r.trajectory.density[0].values);
        EXPECT_EQ(max_abs(r.trajectory.velocity[n]), 0.0);
    }
    EXPECT_TRUE(r.diagnostics.all_pass());
}

TEST(Run, NonIntegerRatioShortensStep)
{
    const RunResult r = run(rest_config(3, 1.0, 0.3));
    EXPECT_TRUE(r.dt_adjusted);
    EXPECT_EQ(r.steps, 4);
    EXPECT_DOUBLE_EQ(r.dt, 0.25);
}

TEST(Run, EnergyAccountingWithoutForcing)
{
    SchemeConfig cfg;
    cfg.problem = make_preset("rotating-patch", 2);
    cfg.problem.forcing = [](const Point&, double) { return std::array<double, 3>{0.0, 0.0, 0.0}; };
    cfg.mesh = unit_mesh({12, 12});
    cfg.T = 0.2;
    cfg.dt = 0.02;
    const RunResult r = run(cfg);
    ASSERT_TRUE(r.completed);
    double prev = kinetic_energy(r.trajectory.density[0], r.trajectory.velocity[0]);
    double dissipation = 0.0;
    for (std::size_t n = 1; n < r.trajectory.size(); ++n) {
        dissipation += cfg.dt * std::pow(norm_h1(r.trajectory.velocity[n]), 2);
        const double e = kinetic_energy(r.trajectory.density[n], r.trajectory.velocity[n]) + dissipation;
        EXPECT_LE(e, prev * (1 + 1e-12));
        prev = e;
    }
    const EnergyNorms en = trajectory_energy_norms(r.trajectory);
    EXPECT_TRUE(std::isfinite(en.l2_h1));
    EXPECT_NEAR(en.l2_h1, r.diagnostics.l2_h1(), 1e-12);
    EXPECT_NEAR(en.linf_l2, r.diagnostics.linf_l2(), 1e-14);
    EXPECT_TRUE(r.diagnostics.all_pass());
}

TEST(Run, ManufacturedErrorDecreasesUnderRefinement)
{
    const Problem pb = make_preset("smooth-vortex", 2);
    std::vector<double> errs;
    for (Index cells : {16, 32}) {
        SchemeConfig cfg;
        cfg.problem = pb;
        cfg.mesh = unit_mesh({cells, cells});
        cfg.T = 0.25;
        cfg.dt = 0.5 / static_cast<double>(cells);
        const RunResult r = run(cfg);
        ASSERT_TRUE(r.completed);
        errs.push_back(trajectory_errors(r.trajectory, *pb.exact).velocity);
    }
    EXPECT_LT(errs[1], errs[0]);
}

TEST(Run, ThreeDimensionalPatch)
{
    SchemeConfig cfg;
    cfg.problem = make_preset("rotating-patch", 3);
    cfg.mesh = unit_mesh({6, 6, 6});
    cfg.T = 0.1;
    cfg.dt = 0.05;
    const RunResult r = run(cfg);
    ASSERT_TRUE(r.completed);
    EXPECT_TRUE(r.diagnostics.all_pass());
}

TEST(Presets, ForcingOfRestIsZero)
{
    const Problem pb = make_preset("rest", 2);
    const auto f = pb.forcing({0.3, 0.6, 0.0}, 0.4);
    EXPECT_EQ(f[0], 0.0);
    EXPECT_EQ(f[1], 0.0);
}

TEST(Presets, TaylorGreenNeedsNoForcing)
{
    const Problem pb = make_preset("taylor-green", 2);
    EXPECT_FALSE(pb.no_slip);
    for (double t : {0.0, 0.3}) {
        for (const Point& p : {Point{0.2, 0.7, 0.0}, Point{0.55, 0.15, 0.0}}) {
            const auto f = pb.forcing(p, t);
            EXPECT_NEAR(f[0], 0.0, 1e-12);
            EXPECT_NEAR(f[1], 0.0, 1e-12);
        }
    }
}

TEST(Presets, ExactDensityIsTransported)
{
    for (const std::string name : {"rotating-patch", "smooth-vortex"}) {
        for (int dim : {2, 3}) {
            const Problem pb = make_preset(name, dim);
            ASSERT_TRUE(pb.exact.has_value());
            const auto res = transport_residual(*pb.exact, dim);
            const auto div = velocity_divergence(*pb.exact, dim);
            for (double t : {0.1, 0.45, 0.8}) {
                for (const Point& p : {Point{0.3, 0.6, 0.4}, Point{0.52, 0.71, 0.5}, Point{0.7, 0.4, 0.2}}) {
                    EXPECT_NEAR(res(p, t), 0.0, 1e-10) << name << " dim " << dim;
                    EXPECT_NEAR(div(p, t), 0.0, 1e-12) << name << " dim " << dim;
                }
            }
            const auto u = exact_velocity(*pb.exact);
            const auto wall = u({0.0, 0.37, 0.5}, 0.2);
            EXPECT_EQ(wall[0], 0.0);
        }
    }
    EXPECT_THROW(make_preset("nonsense", 2), ValidationError);
}
