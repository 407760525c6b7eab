#include "macvd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace macvd {

namespace {

const char* case_name(DualFaceCase c)
{
    return c == DualFaceCase::Normal ? "normal" : "tangent";
}

}  // namespace

MacMesh::MacMesh(int dim, std::array<std::vector<double>, 3> coords)
    : dim_(dim), coords_(std::move(coords))
{
    if (dim_ != 2 && dim_ != 3) {
        throw ValidationError("mesh dimension must be 2 or 3, got " + std::to_string(dim_));
    }
    if (dim_ == 2) {
        coords_[2] = {0.0, 1.0};
    }
    for (int a = 0; a < 3; ++a) {
        const auto& c = coords_[a];
        if (c.size() < 2) {
            throw ValidationError("axis " + std::to_string(a) + " needs at least one cell");
        }
        for (std::size_t k = 1; k < c.size(); ++k) {
            if (!(c[k] > c[k - 1])) {
                std::ostringstream msg;
                msg << "axis " << a << " coordinates are not strictly increasing at position " << k
                    << " (" << c[k - 1] << " >= " << c[k] << ")";
                throw ValidationError(msg.str());
            }
        }
        n_[a] = static_cast<Index>(c.size()) - 1;
    }

    cell_measure_.resize(static_cast<std::size_t>(num_cells()));
    for (Index c = 0; c < num_cells(); ++c) {
        const GridIndex g = cell_grid(c);
        cell_measure_[c] = spacing(0, g[0]) * spacing(1, g[1]) * spacing(2, g[2]);
    }
    domain_measure_ = 1.0;
    for (int a = 0; a < 3; ++a) {
        domain_measure_ *= coords_[a].back() - coords_[a].front();
    }
    build_faces();
    build_dual_faces();
}

GridIndex MacMesh::cell_grid(Index c) const noexcept
{
    GridIndex g{};
    g[0] = c % n_[0];
    c /= n_[0];
    g[1] = c % n_[1];
    g[2] = c / n_[1];
    return g;
}

Point MacMesh::cell_centroid(Index c) const
{
    const GridIndex g = cell_grid(c);
    Point p{cell_center(0, g[0]), cell_center(1, g[1]), cell_center(2, g[2])};
    if (dim_ == 2) {
        p[2] = 0.0;
    }
    return p;
}

double MacMesh::cell_diameter(Index c) const
{
    const GridIndex g = cell_grid(c);
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
        s += spacing(a, g[a]) * spacing(a, g[a]);
    }
    return std::sqrt(s);
}

std::array<Index, 3> MacMesh::face_extent(int dir) const noexcept
{
    std::array<Index, 3> e = n_;
    e[dir] += 1;
    return e;
}

Index MacMesh::face_index(int dir, const GridIndex& g) const noexcept
{
    const auto e = face_extent(dir);
    return g[0] + e[0] * (g[1] + e[1] * g[2]);
}

GridIndex MacMesh::face_grid(int dir, Index f) const noexcept
{
    const auto e = face_extent(dir);
    GridIndex g{};
    g[0] = f % e[0];
    f /= e[0];
    g[1] = f % e[1];
    g[2] = f / e[1];
    return g;
}

Point MacMesh::face_center(int dir, Index f) const
{
    const GridIndex g = face_grid(dir, f);
    Point p{};
    for (int a = 0; a < 3; ++a) {
        p[a] = (a == dir) ? coords_[a][g[a]] : cell_center(a, g[a]);
    }
    if (dim_ == 2) {
        p[2] = 0.0;
    }
    return p;
}

Point MacMesh::dual_centroid(int dir, Index f) const
{
    const GridIndex g = face_grid(dir, f);
    Point p = face_center(dir, f);
    const double lo = lower_cell_[dir][f] != kNone ? cell_center(dir, g[dir] - 1) : coords_[dir][g[dir]];
    const double hi = upper_cell_[dir][f] != kNone ? cell_center(dir, g[dir]) : coords_[dir][g[dir]];
    p[dir] = 0.5 * (lo + hi);
    return p;
}

std::vector<MacMesh::CellFace> MacMesh::cell_faces(Index c) const
{
    std::vector<CellFace> out;
    out.reserve(static_cast<std::size_t>(2 * dim_));
    const GridIndex g = cell_grid(c);
    for (int d = 0; d < dim_; ++d) {
        GridIndex lo = g;
        GridIndex hi = g;
        hi[d] += 1;
        out.push_back({d, face_index(d, lo), -1.0});
        out.push_back({d, face_index(d, hi), +1.0});
    }
    return out;
}

void MacMesh::build_faces()
{
    for (int d = 0; d < dim_; ++d) {
        const auto e = face_extent(d);
        const Index nf = e[0] * e[1] * e[2];
        num_faces_[d] = nf;
        exterior_[d].assign(static_cast<std::size_t>(nf), 0);
        face_area_[d].assign(static_cast<std::size_t>(nf), 0.0);
        lower_cell_[d].assign(static_cast<std::size_t>(nf), kNone);
        upper_cell_[d].assign(static_cast<std::size_t>(nf), kNone);
        dual_measure_[d].assign(static_cast<std::size_t>(nf), 0.0);
        half_lower_[d].assign(static_cast<std::size_t>(nf), 0.0);
        half_upper_[d].assign(static_cast<std::size_t>(nf), 0.0);
        face_distance_[d].assign(static_cast<std::size_t>(nf), 0.0);
        interior_[d].clear();

        for (Index f = 0; f < nf; ++f) {
            const GridIndex g = face_grid(d, f);
            double area = 1.0;
            for (int a = 0; a < 3; ++a) {
                if (a != d) {
                    area *= spacing(a, g[a]);
                }
            }
            face_area_[d][f] = area;
            const bool has_lower = g[d] > 0;
            const bool has_upper = g[d] < n_[d];
            if (has_lower) {
                GridIndex cg = g;
                cg[d] -= 1;
                lower_cell_[d][f] = cell_index(cg);
                half_lower_[d][f] = 0.5 * cell_measure_[lower_cell_[d][f]];
            }
            if (has_upper) {
                upper_cell_[d][f] = cell_index(g);
                half_upper_[d][f] = 0.5 * cell_measure_[upper_cell_[d][f]];
            }
            dual_measure_[d][f] = half_lower_[d][f] + half_upper_[d][f];
            if (has_lower && has_upper) {
                interior_[d].push_back(f);
                face_distance_[d][f] = cell_center(d, g[d]) - cell_center(d, g[d] - 1);
            } else {
                exterior_[d][f] = 1;
                face_distance_[d][f] = 0.5 * spacing(d, has_upper ? g[d] : g[d] - 1);
            }
        }
    }
}

void MacMesh::build_dual_faces()
{
    for (int i = 0; i < dim_; ++i) {
        auto& faces = dual_faces_[i];
        faces.clear();
        const Index nf = num_faces_[i];

        // Normal case: epsilon inside the primal cell between two i-faces.
        for (Index f = 0; f < nf; ++f) {
            const GridIndex g = face_grid(i, f);
            if (g[i] == n_[i]) {
                continue;
            }
            GridIndex gh = g;
            gh[i] += 1;
            const Index hi = face_index(i, gh);
            if (is_exterior(i, f) && is_exterior(i, hi)) {
                continue;
            }
            DualFace e;
            e.direction = i;
            e.axis = i;
            e.kind = DualFaceCase::Normal;
            e.lo = f;
            e.hi = hi;
            e.measure = face_area_[i][f];
            e.distance = spacing(i, g[i]);
            e.flux_dir = i;
            e.flux_faces = {f, hi};
            e.cell = cell_index(g);
            faces.push_back(e);
        }

        // Tangent case: epsilon on a j grid line, built only around interior
        // i-faces; boundary lines give wall faces with one missing side.
        for (Index f : interior_[i]) {
            const GridIndex g = face_grid(i, f);
            const double along = 0.5 * (spacing(i, g[i] - 1) + spacing(i, g[i]));
            for (int j = 0; j < dim_; ++j) {
                if (j == i) {
                    continue;
                }
                double cross = 1.0;
                for (int l = 0; l < 3; ++l) {
                    if (l != i && l != j) {
                        cross *= spacing(l, g[l]);
                    }
                }
                auto make = [&](Index lo, Index hi, Index line, double dist) {
                    DualFace e;
                    e.direction = i;
                    e.axis = j;
                    e.kind = DualFaceCase::Tangent;
                    e.lo = lo;
                    e.hi = hi;
                    e.measure = along * cross;
                    e.distance = dist;
                    e.flux_dir = j;
                    GridIndex tk = g;
                    tk[j] = line;
                    tk[i] = g[i] - 1;
                    GridIndex tl = tk;
                    tl[i] = g[i];
                    e.flux_faces = {face_index(j, tk), face_index(j, tl)};
                    faces.push_back(e);
                };
                if (g[j] == 0) {
                    make(kNone, f, 0, 0.5 * spacing(j, 0));
                }
                if (g[j] + 1 < n_[j]) {
                    GridIndex gh = g;
                    gh[j] += 1;
                    make(f, face_index(i, gh), g[j] + 1, cell_center(j, g[j] + 1) - cell_center(j, g[j]));
                } else {
                    make(f, kNone, n_[j], 0.5 * spacing(j, g[j]));
                }
            }
        }

        dual_adjacency_[i].assign(static_cast<std::size_t>(nf), {});
        for (std::size_t k = 0; k < faces.size(); ++k) {
            if (faces[k].lo != kNone) {
                dual_adjacency_[i][faces[k].lo].push_back(static_cast<Index>(k));
            }
            if (faces[k].hi != kNone) {
                dual_adjacency_[i][faces[k].hi].push_back(static_cast<Index>(k));
            }
        }
    }
}

void MacMesh::write_face_csv(std::ostream& os) const
{
    os << "id,direction,exterior,area,dual_measure,lower_cell,upper_cell\n";
    for (int d = 0; d < dim_; ++d) {
        for (Index f = 0; f < num_faces_[d]; ++f) {
            os << f << ',' << d << ',' << (is_exterior(d, f) ? 1 : 0) << ',' << face_area_[d][f] << ','
               << dual_measure_[d][f] << ',' << lower_cell_[d][f] << ',' << upper_cell_[d][f] << '\n';
        }
    }
}

void MacMesh::write_dual_face_csv(std::ostream& os) const
{
    os << "id,direction,case,measure,neighbors\n";
    for (int d = 0; d < dim_; ++d) {
        const auto& faces = dual_faces_[d];
        for (std::size_t k = 0; k < faces.size(); ++k) {
            const auto& e = faces[k];
            os << k << ',' << d << ',' << case_name(e.kind) << ',' << e.measure << ',' << e.lo << ' ' << e.hi
               << '\n';
        }
    }
}

MeshPtr build_mesh(const std::vector<std::array<double, 2>>& domain_box,
                   const std::vector<std::vector<double>>& axis_coords)
{
    const int dim = static_cast<int>(domain_box.size());
    if (dim != 2 && dim != 3) {
        throw ValidationError("domain box must have 2 or 3 axes, got " + std::to_string(dim));
    }
    if (axis_coords.size() != domain_box.size()) {
        throw ValidationError("axis coordinate lists do not match the domain dimension");
    }
    std::array<std::vector<double>, 3> coords;
    for (int a = 0; a < dim; ++a) {
        const auto& c = axis_coords[a];
        if (c.size() < 2) {
            throw ValidationError("axis " + std::to_string(a) + " needs at least two grid lines");
        }
        if (!(domain_box[a][1] > domain_box[a][0])) {
            throw ValidationError("axis " + std::to_string(a) + " of the domain box is empty");
        }
        if (c.front() != domain_box[a][0] || c.back() != domain_box[a][1]) {
            std::ostringstream msg;
            msg << "axis " << a << " coordinates [" << c.front() << ", " << c.back()
                << "] do not match the domain box [" << domain_box[a][0] << ", " << domain_box[a][1] << "]";
            throw ValidationError(msg.str());
        }
        coords[a] = c;
    }
    return std::make_shared<const MacMesh>(dim, std::move(coords));
}

MeshPtr build_uniform_mesh(const std::vector<std::array<double, 2>>& domain_box, const std::vector<Index>& cells)
{
    if (cells.size() != domain_box.size()) {
        throw ValidationError("cell counts do not match the domain dimension");
    }
    std::vector<std::vector<double>> coords(domain_box.size());
    for (std::size_t a = 0; a < domain_box.size(); ++a) {
        if (cells[a] < 1) {
            throw ValidationError("axis " + std::to_string(a) + " needs at least one cell");
        }
        const double lo = domain_box[a][0];
        const double hi = domain_box[a][1];
        coords[a].resize(static_cast<std::size_t>(cells[a]) + 1);
        for (Index k = 0; k <= cells[a]; ++k) {
            coords[a][k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(cells[a]);
        }
        coords[a].back() = hi;
    }
    return build_mesh(domain_box, coords);
}

double regularity(const MacMesh& mesh)
{
    std::array<double, 3> max_area{0.0, 0.0, 0.0};
    std::array<double, 3> min_area{0.0, 0.0, 0.0};
    for (int d = 0; d < mesh.dim(); ++d) {
        double lo = INFINITY;
        double hi = 0.0;
        for (Index f = 0; f < mesh.num_faces(d); ++f) {
            lo = std::min(lo, mesh.face_area(d, f));
            hi = std::max(hi, mesh.face_area(d, f));
        }
        min_area[d] = lo;
        max_area[d] = hi;
    }
    double eta = 0.0;
    for (int i = 0; i < mesh.dim(); ++i) {
        for (int j = 0; j < mesh.dim(); ++j) {
            if (i != j) {
                eta = std::max(eta, max_area[i] / min_area[j]);
            }
        }
    }
    return eta;
}

double mesh_step(const MacMesh& mesh)
{
    double h = 0.0;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        h = std::max(h, mesh.cell_diameter(c));
    }
    return h;
}

}  // namespace macvd
