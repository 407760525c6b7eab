#include "support.hpp"

#include <Eigen/Dense>

using namespace macvd;
using namespace macvd::testing;

TEST(Transport, ConstantDensityIsStationary)
{
    std::mt19937_64 rng(1);
    const MeshPtr m = random_nonuniform_mesh({6, 5}, rng);
    const VelocityField u = project_divergence_free(random_velocity(m, rng));
    const TransportResult r = solve_transport(ScalarField(m, 1.25), u, 0.05);
    for (double x : r.rho.values) {
        EXPECT_NEAR(x, 1.25, 1e-13);
    }
    const ScalarField rho = random_scalar(m, rng, 1.0, 2.0);
    EXPECT_EQ(solve_transport(rho, VelocityField(m), 0.05).rho.values, rho.values);  // identity rows
}

TEST(Transport, ColumnAdvectionMatchesDenseOracle)
{
    const MeshPtr m = build_uniform_mesh({{0.0, 1.0}, {0.0, 0.25}}, {8, 1});
    VelocityField u(m);
    for (Index f : m->interior_faces(0)) {
        u.comp[0][f] = 1.0;
    }
    ScalarField rho(m);
    for (Index c = 0; c < 8; ++c) {
        rho[c] = 1.0 + 0.1 * static_cast<double>(c * c % 5);
    }
    const double dt = 0.03;
    const double h = 0.125;
    const double area = 0.25;
    // Row K: |K|/dt rho_K + area rho_K (outflow, K < 7) - area rho_{K-1} (inflow, K > 0).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(8, 8);
    Eigen::VectorXd b(8);
    for (Index k = 0; k < 8; ++k) {
        A(k, k) = h * area / dt + (k < 7 ? area : 0.0);
        if (k > 0) {
            A(k, k - 1) = -area;
        }
        b[k] = h * area / dt * rho[k];
    }
    const Eigen::VectorXd oracle = A.partialPivLu().solve(b);
    for (SolverStrategy s : {SolverStrategy::Direct, SolverStrategy::Iterative}) {
        SolverOptions opts;
        opts.strategy = s;
        const TransportResult r = solve_transport(rho, u, dt, opts);
        for (Index k = 0; k < 8; ++k) {
            EXPECT_NEAR(r.rho[k], oracle[k], 1e-12);
        }
        EXPECT_LE(r.report.transport_residual, 1e-12);
    }
}

TEST(Transport, MMatrixForDivergenceFreeVelocity)
{
    std::mt19937_64 rng(2);
    const MeshPtr m = random_nonuniform_mesh({5, 4, 3}, rng);
    const VelocityField u = project_divergence_free(random_velocity(m, rng));
    const SparseMatrix T = transport_matrix(*m, u, 0.1).matrix;
    for (Index r = 0; r < T.outerSize(); ++r) {
        double diag = 0.0;
        double off = 0.0;
        for (SparseMatrix::InnerIterator it(T, r); it; ++it) {
            if (it.col() == r) {
                diag = it.value();
            } else {
                EXPECT_LE(it.value(), 0.0);
                off += std::abs(it.value());
            }
        }
        EXPECT_GE(diag, off * (1 - 1e-12));
    }
}

TEST(Transport, MaximumPrinciple)
{
    std::mt19937_64 rng(3);
    const MeshPtr m = unit_mesh({10, 10});
    VelocityField u = project_divergence_free(random_velocity(m, rng));
    u *= 5.0;
    ScalarField rho = random_scalar(m, rng, 1.0, 3.0);
    for (int n = 0; n < 5; ++n) {
        const double l2 = norm_l2_cells(rho);
        rho = solve_transport(rho, u, 0.2).rho;
        EXPECT_LE(norm_l2_cells(rho), l2 * (1 + 1e-14));
    }
    for (double x : rho.values) {
        EXPECT_GE(x, 1.0 - 1e-12);
        EXPECT_LE(x, 3.0 + 1e-12);
    }
}

TEST(Oseen, ZeroDataGivesZeroSolution)
{
    const MeshPtr m = unit_mesh({6, 6});
    const ScalarField rho(m, 1.0);
    const OseenResult r = solve_oseen(rho, rho, VelocityField(m), VelocityField(m), 0.1);
    EXPECT_EQ(max_abs(r.u), 0.0);
    EXPECT_EQ(max_abs(r.p.values), 0.0);
}

TEST(Oseen, StokesLimitMatchesDenseSolve)
{
    const MeshPtr m = unit_mesh({8, 8});
    const ScalarField rho(m, 1.0);
    const VelocityField f = dual_centroid_sample(m, [](const Point& p) {
        return std::array<double, 3>{p[1] * (1 - p[1]) + 2 * p[0], p[0] * p[0] - p[1], 0.0};
    });
    const SaddleSystem sys = assemble_oseen(rho, rho, VelocityField(m), f, 0.05);
    const Eigen::MatrixXd K = Eigen::MatrixXd(monolithic_matrix(sys, 0));
    const Eigen::VectorXd x = K.partialPivLu().solve(monolithic_rhs(sys, 0));
    const Index nu = sys.dofs.size();
    ScalarField p = to_scalar(x.tail(x.size() - nu), m);
    p.remove_mean();
    for (SolverStrategy s : {SolverStrategy::Direct, SolverStrategy::Iterative}) {
        SolverOptions opts;
        opts.strategy = s;
        const OseenResult r = solve_oseen(sys, opts);
        const Eigen::VectorXd du = sys.dofs.gather(r.u) - x.head(nu);
        EXPECT_LT(du.norm(), 1e-10 * x.head(nu).norm());
        EXPECT_LT((to_vector(r.p) - to_vector(p)).norm(), 1e-10 * to_vector(p).norm());
        EXPECT_NEAR(r.p.integral(), 0.0, 1e-13);
        EXPECT_LE(r.report.divergence_residual, 1e-10);
        EXPECT_EQ(r.report.pinned_cell, 0);
    }
}

TEST(Oseen, BlocksAreTransposes)
{
    std::mt19937_64 rng(4);
    for (const MeshPtr& m : {unit_mesh({4, 4}), random_nonuniform_mesh({3, 4, 3}, rng)}) {
        const SaddleSystem sys = assemble_oseen(random_scalar(m, rng, 1.0, 2.0), random_scalar(m, rng, 1.0, 2.0),
                                                random_velocity(m, rng), random_velocity(m, rng), 0.1);
        const SparseMatrix diff = SparseMatrix(sys.B.transpose()) - sys.G;
        EXPECT_LT(diff.nonZeros() ? diff.coeffs().cwiseAbs().maxCoeff() : 0.0, 1e-13);
    }
}

TEST(Oseen, IterativeFallsBackToDirect)
{
    std::mt19937_64 rng(5);
    const MeshPtr m = unit_mesh({6, 6});
    SolverOptions opts;
    opts.strategy = SolverStrategy::Iterative;
    opts.max_iterations = 1;
    opts.oseen_tol = 1e-13;
    const OseenResult r = solve_oseen(random_scalar(m, rng, 1.0, 2.0), random_scalar(m, rng, 1.0, 2.0),
                                      random_velocity(m, rng), random_velocity(m, rng), 0.1, opts);
    EXPECT_TRUE(r.report.fell_back);
    EXPECT_STREQ(r.report.strategy.c_str(), "direct");
    EXPECT_LE(r.report.momentum_residual, 1e-13);
}

TEST(Oseen, StrategyNames)
{
    EXPECT_EQ(parse_strategy("direct"), SolverStrategy::Direct);
    EXPECT_EQ(parse_strategy("iterative"), SolverStrategy::Iterative);
    EXPECT_THROW(parse_strategy("magic"), ValidationError);
}

TEST(Projection, DivergenceFreeAndIdempotent)
{
    std::mt19937_64 rng(6);
    const MeshPtr m = random_nonuniform_mesh({5, 6}, rng);
    const VelocityField u = project_divergence_free(random_velocity(m, rng));
    EXPECT_LT(norm_l2_cells(div_velocity(u)), 1e-12);
    EXPECT_TRUE(u.satisfies_boundary());
    const VelocityField again = project_divergence_free(u);
    EXPECT_LT(max_abs(again - u), 1e-12);
}

TEST(InfSup, PositiveAndStableUnderRefinement)
{
    const double c4 = infsup_constant(*unit_mesh({4, 4}));
    const double c8 = infsup_constant(*unit_mesh({8, 8}));
    EXPECT_GT(c4, 0.0);
    EXPECT_GT(c8, 0.0);
    EXPECT_GE(c8 / c4, 0.5);
}
