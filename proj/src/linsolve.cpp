#include "macvd/linsolve.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <chrono>
#include <cmath>

namespace macvd {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative(double residual, double scale) { return scale > 0.0 ? residual / scale : residual; }

// Block upper-triangular preconditioner for the pinned saddle matrix
//   [A  G]      [A  G]
//   [B~ C]  ~=  [0  S],   S = C - B~ diag(A)^{-1} G.
class SchurBlockPreconditioner {
public:
    SchurBlockPreconditioner() = default;

    void setup(const SparseMatrix& A, const SparseMatrix& G, const SparseMatrix& B_pinned,
               const SparseMatrix& C)
    {
        nu_ = A.rows();
        G_ = G;
        Eigen::VectorXd inv_diag = A.diagonal().cwiseInverse();
        SparseMatrix S = C - SparseMatrix(B_pinned * inv_diag.asDiagonal() * G);
        a_lu_.compute(ColMatrix(A));
        s_lu_.compute(ColMatrix(S));
        info_ = (a_lu_.info() == Eigen::Success && s_lu_.info() == Eigen::Success) ? Eigen::Success
                                                                                     : Eigen::NumericalIssue;
    }

    template <class Mat>
    SchurBlockPreconditioner& analyzePattern(const Mat&) { return *this; }
    template <class Mat>
    SchurBlockPreconditioner& factorize(const Mat&) { return *this; }
    template <class Mat>
    SchurBlockPreconditioner& compute(const Mat&) { return *this; }

    template <class Rhs>
    Eigen::VectorXd solve(const Rhs& b) const
    {
        const Eigen::VectorXd r = b;
        const Index np = r.size() - nu_;
        Eigen::VectorXd y(r.size());
        const Eigen::VectorXd yp = s_lu_.solve(r.tail(np));
        const Eigen::VectorXd ru = r.head(nu_) - G_ * yp;
        y.head(nu_) = a_lu_.solve(ru);
        y.tail(np) = yp;
        return y;
    }

    Eigen::ComputationInfo info() const { return info_; }

private:
    Index nu_ = 0;
    SparseMatrix G_;
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> a_lu_;
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> s_lu_;
    Eigen::ComputationInfo info_ = Eigen::Success;
};

Eigen::VectorXd direct_solve(const SparseMatrix& K, const Eigen::VectorXd& b, const char* what)
{
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(ColMatrix(K));
    if (lu.info() != Eigen::Success) {
        throw SolverFailure(std::string(what) + ": sparse LU factorization failed: " + lu.lastErrorMessage(),
                            SolveReport{});
    }
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) {
        throw SolverFailure(std::string(what) + ": sparse LU solve failed", SolveReport{});
    }
    return x;
}

}  // namespace

SolverStrategy parse_strategy(const std::string& name)
{
    if (name == "direct") {
        return SolverStrategy::Direct;
    }
    if (name == "iterative") {
        return SolverStrategy::Iterative;
    }
    throw ValidationError("unknown solver strategy '" + name + "' (expected direct or iterative)");
}

const char* strategy_name(SolverStrategy s) { return s == SolverStrategy::Direct ? "direct" : "iterative"; }

// ---- transport -------------------------------------------------------------------

namespace {

// Rows of the implicit upwind transport operator. With `per_volume` each row
// is divided by |K|/dt, so the diagonal is exactly 1 when u = 0.
SparseMatrix transport_rows(const MacMesh& mesh, const VelocityField& u, double dt, bool per_volume)
{
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(mesh.num_cells() * (1 + 2 * mesh.dim())));
    const auto weight = [&](Index c) { return per_volume ? dt / mesh.cell_measure(c) : 1.0; };
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        trip.emplace_back(c, c, per_volume ? 1.0 : mesh.cell_measure(c) / dt);
    }
    for (int d = 0; d < mesh.dim(); ++d) {
        for (Index f : mesh.interior_faces(d)) {
            const Index lo = mesh.face_lower_cell(d, f);
            const Index hi = mesh.face_upper_cell(d, f);
            const double q = mesh.face_area(d, f) * u.comp[d][f];  // volume flux along +e_d
            // Outflow from the upwind cell feeds its diagonal, inflow its neighbor.
            if (q >= 0.0) {
                trip.emplace_back(lo, lo, q * weight(lo));
                trip.emplace_back(hi, lo, -q * weight(hi));
            } else {
                trip.emplace_back(lo, hi, q * weight(lo));
                trip.emplace_back(hi, hi, -q * weight(hi));
            }
        }
    }
    SparseMatrix K(mesh.num_cells(), mesh.num_cells());
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

}  // namespace

OperatorMatrix transport_matrix(const MacMesh& mesh, const VelocityField& u, double dt)
{
    return {transport_rows(mesh, u, dt, false), Space::Cells, Space::Cells};
}

TransportResult solve_transport(const ScalarField& rho_n, const VelocityField& u_n, double dt,
                                const SolverOptions& opts)
{
    require_same_mesh(rho_n.mesh, u_n.mesh, "solve_transport");
    const auto t0 = Clock::now();
    const auto& mesh = *rho_n.mesh;
    const SparseMatrix K = transport_rows(mesh, u_n, dt, true);
    const Eigen::VectorXd b = to_vector(rho_n);

    SolveReport rep;
    Eigen::VectorXd x;
    bool done = false;
    if (opts.strategy == SolverStrategy::Iterative) {
        Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> it;
        it.setTolerance(opts.transport_tol);
        it.setMaxIterations(opts.max_iterations);
        it.compute(K);
        x = it.solveWithGuess(b, to_vector(rho_n));
        rep.iterations = static_cast<int>(it.iterations());
        const double res = relative((K * x - b).norm(), b.norm());
        rep.residual_history.push_back(res);
        if (it.info() == Eigen::Success && res <= opts.transport_tol) {
            rep.strategy = "iterative";
            done = true;
        } else {
            rep.fell_back = true;
        }
    }
    if (!done) {
        x = direct_solve(K, b, "solve_transport");
        rep.strategy = "direct";
        rep.iterations = 1;
    }
    rep.transport_residual = relative((K * x - b).norm(), b.norm());
    rep.residual_history.push_back(rep.transport_residual);
    rep.wall_time = seconds_since(t0);
    if (!(rep.transport_residual <= opts.transport_tol)) {
        throw SolverFailure("solve_transport: residual " + std::to_string(rep.transport_residual) +
                                " above tolerance",
                            rep);
    }
    return {to_scalar(x, rho_n.mesh), rep};
}

// ---- Oseen --------------------------------------------------------------------

SaddleSystem assemble_oseen(const ScalarField& rho_n, const ScalarField& rho_n1, const VelocityField& u_n,
                            const VelocityField& forcing, double dt)
{
    require_same_mesh(rho_n.mesh, rho_n1.mesh, "assemble_oseen");
    require_same_mesh(rho_n.mesh, u_n.mesh, "assemble_oseen");
    require_same_mesh(rho_n.mesh, forcing.mesh, "assemble_oseen");
    const auto& mesh = *rho_n.mesh;
    SaddleSystem sys{rho_n.mesh, VelocityDofs(mesh), {}, {}, {}, {}, {}};
    const auto& dofs = sys.dofs;

    const DualScalarField rd_n = dual_density(rho_n);
    const DualScalarField rd_n1 = dual_density(rho_n1);
    const MassFluxSet fluxes = mass_fluxes(rho_n1, u_n);

    SparseMatrix mass(dofs.size(), dofs.size());
    std::vector<Eigen::Triplet<double>> trip;
    sys.rhs_u.resize(dofs.size());
    for (Index k = 0; k < dofs.size(); ++k) {
        const auto [d, f] = dofs.face(k);
        const double vol = mesh.dual_measure(d, f);
        trip.emplace_back(k, k, vol * rd_n1.comp[d][f] / dt);
        sys.rhs_u[k] = vol * (forcing.comp[d][f] + rd_n.comp[d][f] * u_n.comp[d][f] / dt);
    }
    mass.setFromTriplets(trip.begin(), trip.end());

    sys.A = mass + convection_matrix(fluxes, dofs).matrix + laplacian_matrix(mesh, dofs).matrix;
    sys.B = divergence_matrix(mesh, dofs).matrix;
    sys.G = gradient_matrix(mesh, dofs).matrix;
    sys.rhs_p = Eigen::VectorXd::Zero(mesh.num_cells());
    return sys;
}

SparseMatrix monolithic_matrix(const SaddleSystem& sys, Index pinned)
{
    const Index nu = sys.A.rows();
    const Index np = sys.B.rows();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(sys.A.nonZeros() + 2 * sys.B.nonZeros() + 1));
    for (Index r = 0; r < sys.A.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(sys.A, r); it; ++it) {
            trip.emplace_back(it.row(), it.col(), it.value());
        }
        for (SparseMatrix::InnerIterator it(sys.G, r); it; ++it) {
            trip.emplace_back(it.row(), nu + it.col(), it.value());
        }
    }
    for (Index r = 0; r < sys.B.outerSize(); ++r) {
        if (r == pinned) {
            continue;
        }
        for (SparseMatrix::InnerIterator it(sys.B, r); it; ++it) {
            trip.emplace_back(nu + it.row(), it.col(), it.value());
        }
    }
    if (pinned != kNone) {
        trip.emplace_back(nu + pinned, nu + pinned, 1.0);
    }
    SparseMatrix K(nu + np, nu + np);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

Eigen::VectorXd monolithic_rhs(const SaddleSystem& sys, Index pinned)
{
    const Index nu = sys.A.rows();
    Eigen::VectorXd b(nu + sys.B.rows());
    b.head(nu) = sys.rhs_u;
    b.tail(sys.B.rows()) = sys.rhs_p;
    if (pinned != kNone) {
        b[nu + pinned] = 0.0;
    }
    return b;
}

OseenResult solve_oseen(const SaddleSystem& sys, const SolverOptions& opts)
{
    const auto t0 = Clock::now();
    const auto& mesh = *sys.mesh;
    const Index nu = sys.A.rows();
    const Index np = sys.B.rows();
    // Continuity rows sum to zero identically (fluxes telescope and exterior
    // velocities vanish), so one of them is traded for a pressure pin.
    const Index pinned = 0;
    const SparseMatrix K = monolithic_matrix(sys, pinned);
    const Eigen::VectorXd b = monolithic_rhs(sys, pinned);

    SolveReport rep;
    rep.pinned_cell = pinned;
    const double bnorm = b.norm();
    Eigen::VectorXd x;
    bool done = false;
    if (opts.strategy == SolverStrategy::Iterative) {
        SparseMatrix B_pinned = sys.B;
        B_pinned.prune([pinned](Index r, Index, double) { return r != pinned; });
        SparseMatrix C(np, np);
        C.insert(pinned, pinned) = 1.0;
        Eigen::GMRES<SparseMatrix, SchurBlockPreconditioner> gmres;
        gmres.preconditioner().setup(sys.A, sys.G, B_pinned, C);
        gmres.setTolerance(opts.oseen_tol * 1e-2);
        gmres.setMaxIterations(opts.max_iterations);
        gmres.set_restart(200);
        gmres.compute(K);
        x = gmres.solve(b);
        rep.iterations = static_cast<int>(gmres.iterations());
        const double res = relative((K * x - b).norm(), bnorm);
        rep.residual_history.push_back(res);
        if (gmres.info() == Eigen::Success && res <= opts.oseen_tol) {
            rep.strategy = "iterative";
            done = true;
        } else {
            rep.fell_back = true;
        }
    }
    if (!done) {
        x = direct_solve(K, b, "solve_oseen");
        rep.strategy = "direct";
        rep.iterations = 1;
    }

    OseenResult out{sys.dofs.scatter(x.head(nu), sys.mesh), to_scalar(x.tail(np), sys.mesh), {}};
    const double mean = out.p.integral() / mesh.domain_measure();
    out.p.remove_mean();
    rep.removed_pressure_mean = mean;

    // Residuals of the unpinned system with the mean-free pressure.
    const Eigen::VectorXd xu = x.head(nu);
    const Eigen::VectorXd xp = to_vector(out.p);
    rep.momentum_residual =
        relative((sys.A * xu + sys.G * xp - sys.rhs_u).norm(), std::max(sys.rhs_u.norm(), (sys.A * xu).norm()));
    rep.divergence_residual = norm_l2_cells(div_velocity(out.u));
    rep.residual_history.push_back(rep.momentum_residual);
    rep.wall_time = seconds_since(t0);
    if (!(rep.momentum_residual <= opts.oseen_tol)) {
        throw SolverFailure("solve_oseen: momentum residual " + std::to_string(rep.momentum_residual) +
                                " above tolerance",
                            rep);
    }
    out.report = rep;
    return out;
}

OseenResult solve_oseen(const ScalarField& rho_n, const ScalarField& rho_n1, const VelocityField& u_n,
                        const VelocityField& forcing, double dt, const SolverOptions& opts)
{
    return solve_oseen(assemble_oseen(rho_n, rho_n1, u_n, forcing, dt), opts);
}

VelocityField project_divergence_free(const VelocityField& v)
{
    const auto& mesh = *v.mesh;
    SaddleSystem sys{v.mesh, VelocityDofs(mesh), {}, {}, {}, {}, {}};
    std::vector<Eigen::Triplet<double>> trip;
    sys.rhs_u.resize(sys.dofs.size());
    for (Index k = 0; k < sys.dofs.size(); ++k) {
        const auto [d, f] = sys.dofs.face(k);
        trip.emplace_back(k, k, mesh.dual_measure(d, f));
        sys.rhs_u[k] = mesh.dual_measure(d, f) * v.comp[d][f];
    }
    sys.A.resize(sys.dofs.size(), sys.dofs.size());
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.B = divergence_matrix(mesh, sys.dofs).matrix;
    sys.G = gradient_matrix(mesh, sys.dofs).matrix;
    sys.rhs_p = Eigen::VectorXd::Zero(mesh.num_cells());
    const Eigen::VectorXd x = direct_solve(monolithic_matrix(sys, 0), monolithic_rhs(sys, 0), "project");
    return sys.dofs.scatter(x.head(sys.dofs.size()), v.mesh);
}

double infsup_constant(const MacMesh& mesh)
{
    const VelocityDofs dofs(mesh);
    const Eigen::MatrixXd B = Eigen::MatrixXd(divergence_matrix(mesh, dofs).matrix);
    Eigen::MatrixXd scaled(B.rows(), B.cols());
    for (Index r = 0; r < B.rows(); ++r) {
        for (Index k = 0; k < B.cols(); ++k) {
            const auto [d, f] = dofs.face(k);
            scaled(r, k) = B(r, k) / std::sqrt(mesh.cell_measure(r) * mesh.dual_measure(d, f));
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled);
    const auto& s = svd.singularValues();
    // The constant pressure mode is the only zero singular value.
    const double cut = 1e-10 * s[0];
    double smallest = s[0];
    for (Index k = 0; k < s.size(); ++k) {
        if (s[k] > cut) {
            smallest = std::min(smallest, s[k]);
        }
    }
    return smallest;
}

}  // namespace macvd
