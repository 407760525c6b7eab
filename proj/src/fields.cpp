#include "macvd/fields.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace macvd {

namespace {

// Gauss-Legendre, 3 points on [-1, 1]; exact for degree 5.
constexpr std::array<double, 3> kGaussNodes{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

struct Interval {
    double lo;
    double hi;
};

// Tensor Gauss rule over a box; degenerate axes (point) take a single node.
template <class F>
double integrate_box(const std::array<Interval, 3>& box, int dim, F&& fn)
{
    std::array<int, 3> npts{1, 1, 1};
    for (int a = 0; a < dim; ++a) {
        npts[a] = box[a].hi > box[a].lo ? 3 : 1;
    }
    double sum = 0.0;
    Point x{0.0, 0.0, 0.0};
    for (int k2 = 0; k2 < npts[2]; ++k2) {
        for (int k1 = 0; k1 < npts[1]; ++k1) {
            for (int k0 = 0; k0 < npts[0]; ++k0) {
                const std::array<int, 3> k{k0, k1, k2};
                double w = 1.0;
                for (int a = 0; a < dim; ++a) {
                    const double mid = 0.5 * (box[a].lo + box[a].hi);
                    const double half = 0.5 * (box[a].hi - box[a].lo);
                    if (npts[a] == 3) {
                        x[a] = mid + half * kGaussNodes[k[a]];
                        w *= 0.5 * kGaussWeights[k[a]];
                    } else {
                        x[a] = box[a].lo;
                    }
                }
                sum += w * fn(x);
            }
        }
    }
    return sum;  // mean value over the box
}

}  // namespace

void require_same_mesh(const MeshPtr& a, const MeshPtr& b, const char* what)
{
    if (!a || !b || a.get() != b.get()) {
        throw ValidationError(std::string(what) + ": fields live on different meshes");
    }
}

ScalarField::ScalarField(MeshPtr m, double fill) : mesh(std::move(m))
{
    values.assign(static_cast<std::size_t>(mesh->num_cells()), fill);
}

double ScalarField::integral() const
{
    double s = 0.0;
    for (Index c = 0; c < size(); ++c) {
        s += mesh->cell_measure(c) * values[c];
    }
    return s;
}

void ScalarField::remove_mean()
{
    const double mean = integral() / mesh->domain_measure();
    for (auto& v : values) {
        v -= mean;
    }
}

VelocityField::VelocityField(MeshPtr m) : mesh(std::move(m))
{
    for (int d = 0; d < mesh->dim(); ++d) {
        comp[d].assign(static_cast<std::size_t>(mesh->num_faces(d)), 0.0);
    }
}

void VelocityField::zero_exterior()
{
    for (int d = 0; d < mesh->dim(); ++d) {
        for (Index f = 0; f < mesh->num_faces(d); ++f) {
            if (mesh->is_exterior(d, f)) {
                comp[d][f] = 0.0;
            }
        }
    }
}

bool VelocityField::satisfies_boundary() const
{
    for (int d = 0; d < mesh->dim(); ++d) {
        for (Index f = 0; f < mesh->num_faces(d); ++f) {
            if (mesh->is_exterior(d, f) && comp[d][f] != 0.0) {
                return false;
            }
        }
    }
    return true;
}

VelocityField& VelocityField::operator+=(const VelocityField& o)
{
    require_same_mesh(mesh, o.mesh, "VelocityField::operator+=");
    for (int d = 0; d < mesh->dim(); ++d) {
        for (std::size_t k = 0; k < comp[d].size(); ++k) {
            comp[d][k] += o.comp[d][k];
        }
    }
    return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& o)
{
    require_same_mesh(mesh, o.mesh, "VelocityField::operator-=");
    for (int d = 0; d < mesh->dim(); ++d) {
        for (std::size_t k = 0; k < comp[d].size(); ++k) {
            comp[d][k] -= o.comp[d][k];
        }
    }
    return *this;
}

VelocityField& VelocityField::operator*=(double s)
{
    for (auto& c : comp) {
        for (auto& v : c) {
            v *= s;
        }
    }
    return *this;
}

VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
VelocityField operator*(double s, VelocityField a) { return a *= s; }

double dual_inner(const VelocityField& u, const VelocityField& v)
{
    require_same_mesh(u.mesh, v.mesh, "dual_inner");
    const auto& m = *u.mesh;
    double s = 0.0;
    for (int d = 0; d < m.dim(); ++d) {
        for (Index f = 0; f < m.num_faces(d); ++f) {
            s += m.dual_measure(d, f) * u.comp[d][f] * v.comp[d][f];
        }
    }
    return s;
}

double cell_inner(const ScalarField& p, const ScalarField& q)
{
    require_same_mesh(p.mesh, q.mesh, "cell_inner");
    double s = 0.0;
    for (Index c = 0; c < p.size(); ++c) {
        s += p.mesh->cell_measure(c) * p[c] * q[c];
    }
    return s;
}

VelocityField fortin_interpolate(const MeshPtr& mesh, const VectorFunction& u0)
{
    VelocityField v(mesh);
    const auto& m = *mesh;
    for (int d = 0; d < m.dim(); ++d) {
        for (Index f = 0; f < m.num_faces(d); ++f) {
            if (m.is_exterior(d, f)) {
                continue;
            }
            const GridIndex g = m.face_grid(d, f);
            std::array<Interval, 3> box{};
            for (int a = 0; a < 3; ++a) {
                if (a == d) {
                    box[a] = {m.coords(a)[g[a]], m.coords(a)[g[a]]};
                } else {
                    box[a] = {m.coords(a)[g[a]], m.coords(a)[g[a] + 1]};
                }
            }
            v.comp[d][f] = integrate_box(box, m.dim(), [&](const Point& x) { return u0(x)[d]; });
        }
    }
    return v;
}

ScalarField cell_average(const MeshPtr& mesh, const ScalarFunction& q)
{
    ScalarField out(mesh);
    const auto& m = *mesh;
    for (Index c = 0; c < m.num_cells(); ++c) {
        const GridIndex g = m.cell_grid(c);
        std::array<Interval, 3> box{};
        for (int a = 0; a < 3; ++a) {
            box[a] = {m.coords(a)[g[a]], m.coords(a)[g[a] + 1]};
        }
        out[c] = integrate_box(box, m.dim(), q);
    }
    return out;
}

VelocityField dual_centroid_sample(const MeshPtr& mesh, const VectorFunction& f)
{
    VelocityField v(mesh);
    const auto& m = *mesh;
    for (int d = 0; d < m.dim(); ++d) {
        for (Index s : m.interior_faces(d)) {
            v.comp[d][s] = f(m.dual_centroid(d, s))[d];
        }
    }
    return v;
}

LpExponent lp_exponent(int p)
{
    switch (p) {
    case 0:
        return LpExponent::Inf;
    case 2:
        return LpExponent::L2;
    case 4:
        return LpExponent::L4;
    case 6:
        return LpExponent::L6;
    default:
        throw ValidationError("unsupported Lebesgue exponent " + std::to_string(p) + " (use 2, 4, 6 or inf)");
    }
}

namespace {

double lp_accumulate(const MacMesh& m, const std::vector<double>& values, int dir, LpExponent p, double acc)
{
    const int e = static_cast<int>(p);
    for (Index f = 0; f < m.num_faces(dir); ++f) {
        const double a = std::abs(values[f]);
        if (p == LpExponent::Inf) {
            acc = std::max(acc, a);
        } else {
            double pw = a * a;
            if (e >= 4) {
                pw *= a * a;
            }
            if (e >= 6) {
                pw *= a * a;
            }
            acc += m.dual_measure(dir, f) * pw;
        }
    }
    return acc;
}

double lp_finish(double acc, LpExponent p)
{
    if (p == LpExponent::Inf) {
        return acc;
    }
    return std::pow(acc, 1.0 / static_cast<double>(static_cast<int>(p)));
}

}  // namespace

double norm_lp_dual(const VelocityField& u, LpExponent p)
{
    double acc = 0.0;
    for (int d = 0; d < u.mesh->dim(); ++d) {
        acc = lp_accumulate(*u.mesh, u.comp[d], d, p, acc);
    }
    return lp_finish(acc, p);
}

double norm_lp_dual(const VelocityField& u, int dir, LpExponent p)
{
    return lp_finish(lp_accumulate(*u.mesh, u.comp[dir], dir, p, 0.0), p);
}

double norm_l2_cells(const ScalarField& q) { return std::sqrt(cell_inner(q, q)); }

double norm_linf_cells(const ScalarField& q)
{
    double m = 0.0;
    for (double v : q.values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double norm_h1(const VelocityField& u)
{
    const auto& m = *u.mesh;
    double s = 0.0;
    for (int d = 0; d < m.dim(); ++d) {
        const auto& uc = u.comp[d];
        for (const auto& e : m.dual_faces(d)) {
            const double lo = e.lo != kNone ? uc[e.lo] : 0.0;
            const double hi = e.hi != kNone ? uc[e.hi] : 0.0;
            const double jump = hi - lo;
            s += e.measure / e.distance * jump * jump;
        }
    }
    return std::sqrt(s);
}

void Trajectory::push(double t, ScalarField rho, VelocityField u, ScalarField p)
{
    times.push_back(t);
    density.push_back(std::move(rho));
    velocity.push_back(std::move(u));
    pressure.push_back(std::move(p));
}

EnergyNorms trajectory_energy_norms(const Trajectory& traj)
{
    EnergyNorms out;
    double acc = 0.0;
    for (std::size_t n = 1; n < traj.size(); ++n) {
        const double h1 = norm_h1(traj.velocity[n]);
        acc += traj.dt * h1 * h1;
        out.linf_l2 = std::max(out.linf_l2, norm_lp_dual(traj.velocity[n], LpExponent::L2));
    }
    out.l2_h1 = std::sqrt(acc);
    return out;
}

// ---- I/O -------------------------------------------------------------------

void write_scalar_csv(std::ostream& os, const ScalarField& q, const std::string& header)
{
    os << header;
    os << "id,value\n" << std::setprecision(17);
    for (Index c = 0; c < q.size(); ++c) {
        os << c << ',' << q[c] + 0.0 << '\n';  // + 0.0 folds -0 into 0
    }
}

void write_velocity_csv(std::ostream& os, const VelocityField& u, const std::string& header)
{
    os << header;
    os << "direction,id,value\n" << std::setprecision(17);
    for (int d = 0; d < u.mesh->dim(); ++d) {
        for (std::size_t f = 0; f < u.comp[d].size(); ++f) {
            os << d << ',' << f << ',' << u.comp[d][f] + 0.0 << '\n';
        }
    }
}

namespace {

std::vector<std::vector<double>> read_csv_rows(std::istream& is, std::size_t columns)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        if (row.size() != columns) {
            throw ValidationError("malformed CSV row: '" + line + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ScalarField read_scalar_csv(std::istream& is, const MeshPtr& mesh)
{
    ScalarField q(mesh);
    const auto rows = read_csv_rows(is, 2);
    if (static_cast<Index>(rows.size()) != q.size()) {
        throw ValidationError("scalar CSV row count does not match the mesh");
    }
    for (const auto& r : rows) {
        const auto id = static_cast<Index>(r[0]);
        if (id < 0 || id >= q.size()) {
            throw ValidationError("scalar CSV id out of range");
        }
        q[id] = r[1];
    }
    return q;
}

VelocityField read_velocity_csv(std::istream& is, const MeshPtr& mesh)
{
    VelocityField u(mesh);
    const auto rows = read_csv_rows(is, 3);
    for (const auto& r : rows) {
        const int d = static_cast<int>(r[0]);
        const auto id = static_cast<Index>(r[1]);
        if (d < 0 || d >= mesh->dim() || id < 0 || id >= mesh->num_faces(d)) {
            throw ValidationError("velocity CSV entry out of range");
        }
        u.comp[d][id] = r[2];
    }
    return u;
}

void write_vtk(std::ostream& os, const ScalarField& rho, const VelocityField& u, const ScalarField& p,
               const std::string& title)
{
    const auto& m = *rho.mesh;
    const auto& n = m.cells_per_axis();
    const Index nz = m.dim() == 3 ? n[2] + 1 : 1;
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_GRID\n";
    os << "DIMENSIONS " << n[0] + 1 << ' ' << n[1] + 1 << ' ' << nz << '\n';
    os << "POINTS " << (n[0] + 1) * (n[1] + 1) * nz << " double\n" << std::setprecision(12);
    for (Index k = 0; k < nz; ++k) {
        for (Index j = 0; j <= n[1]; ++j) {
            for (Index i = 0; i <= n[0]; ++i) {
                os << m.coords(0)[i] << ' ' << m.coords(1)[j] << ' ' << (m.dim() == 3 ? m.coords(2)[k] : 0.0)
                   << '\n';
            }
        }
    }
    os << "CELL_DATA " << m.num_cells() << '\n';
    os << "SCALARS density double 1\nLOOKUP_TABLE default\n";
    for (double v : rho.values) {
        os << v + 0.0 << '\n';
    }
    os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (double v : p.values) {
        os << v + 0.0 << '\n';
    }
    os << "VECTORS velocity double\n";
    for (Index c = 0; c < m.num_cells(); ++c) {
        std::array<double, 3> vc{0.0, 0.0, 0.0};
        for (const auto& cf : m.cell_faces(c)) {
            vc[cf.dir] += 0.5 * u.comp[cf.dir][cf.face];
        }
        os << vc[0] + 0.0 << ' ' << vc[1] + 0.0 << ' ' << vc[2] + 0.0 << '\n';
    }
}

}  // namespace macvd
