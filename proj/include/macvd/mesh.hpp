/// @file mesh.hpp
/// @brief Tensor-product MAC mesh: primal cells, direction-classified faces,
/// dual cells D_sigma and their dual faces.
///
/// Cells carry density and pressure. Each face direction i carries the i-th
/// velocity component; its control volume D_sigma is the union of the two
/// half-cells adjacent to the face (a single half-cell for boundary faces).
///
/// Two-dimensional meshes are stored with a virtual third axis made of one
/// cell of unit length, so every measure below is computed by the same
/// formulas in 2D and 3D (products with 1.0 are exact).
#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace macvd {

using Index = std::ptrdiff_t;
using Point = std::array<double, 3>;
using GridIndex = std::array<Index, 3>;

inline constexpr Index kNone = -1;

/// Thrown for malformed inputs (mesh coordinates, configs, field mismatch).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class DualFaceCase {
    Normal,   ///< e_i normal to epsilon; epsilon lies inside one primal cell.
    Tangent,  ///< e_i tangent to epsilon; union of two primal half-faces.
};

/// Interface epsilon = lo|hi between two dual cells of the same direction.
///
/// The pair is ordered so that hi = lo + e_axis. Either side may be kNone when
/// the dual face lies on the boundary (Tangent case only); a side may also be
/// an exterior face, whose velocity is identically zero.
///
/// The dual mass flux through epsilon, oriented along +e_axis, is the mean of
/// the +e_flux_dir oriented primal fluxes through flux_faces[0] and
/// flux_faces[1] (both faces belong to E^(flux_dir)).
struct DualFace {
    int direction = 0;  ///< i: velocity component owning the dual cells
    int axis = 0;       ///< j: normal of epsilon
    DualFaceCase kind = DualFaceCase::Normal;
    Index lo = kNone;
    Index hi = kNone;
    double measure = 0.0;   ///< |epsilon|
    double distance = 0.0;  ///< d_epsilon (center-to-wall for boundary faces)
    int flux_dir = 0;
    std::array<Index, 2> flux_faces{kNone, kNone};
    Index cell = kNone;     ///< primal cell containing epsilon (Normal case)
};

/// Immutable after construction; share it through std::shared_ptr.
class MacMesh {
public:
    MacMesh(int dim, std::array<std::vector<double>, 3> coords);

    int dim() const noexcept { return dim_; }
    const std::array<Index, 3>& cells_per_axis() const noexcept { return n_; }
    const std::vector<double>& coords(int axis) const { return coords_[axis]; }

    double spacing(int axis, Index k) const { return coords_[axis][k + 1] - coords_[axis][k]; }
    double cell_center(int axis, Index k) const
    {
        return 0.5 * (coords_[axis][k] + coords_[axis][k + 1]);
    }

    double domain_measure() const noexcept { return domain_measure_; }

    // ---- cells -----------------------------------------------------------
    Index num_cells() const noexcept { return n_[0] * n_[1] * n_[2]; }
    Index cell_index(const GridIndex& g) const noexcept { return g[0] + n_[0] * (g[1] + n_[1] * g[2]); }
    GridIndex cell_grid(Index c) const noexcept;
    double cell_measure(Index c) const noexcept { return cell_measure_[c]; }
    Point cell_centroid(Index c) const;
    double cell_diameter(Index c) const;

    // ---- faces E^(i) -----------------------------------------------------
    /// Face counts per axis for direction i: n_i + 1 along i, n_j across.
    std::array<Index, 3> face_extent(int dir) const noexcept;
    Index num_faces(int dir) const noexcept { return num_faces_[dir]; }
    Index face_index(int dir, const GridIndex& g) const noexcept;
    GridIndex face_grid(int dir, Index f) const noexcept;
    bool is_exterior(int dir, Index f) const noexcept { return exterior_[dir][f] != 0; }
    double face_area(int dir, Index f) const noexcept { return face_area_[dir][f]; }
    Point face_center(int dir, Index f) const;
    /// Cell with n_{K,sigma} = +e_i (below the face) or kNone.
    Index face_lower_cell(int dir, Index f) const noexcept { return lower_cell_[dir][f]; }
    /// Cell with n_{K,sigma} = -e_i (above the face) or kNone.
    Index face_upper_cell(int dir, Index f) const noexcept { return upper_cell_[dir][f]; }
    const std::vector<Index>& interior_faces(int dir) const noexcept { return interior_[dir]; }

    /// The 2*dim faces of a cell with their outward sign n_{K,sigma}.e_dir.
    struct CellFace {
        int dir;
        Index face;
        double sign;
    };
    std::vector<CellFace> cell_faces(Index c) const;

    // ---- dual cells D_sigma ----------------------------------------------
    double dual_measure(int dir, Index f) const noexcept { return dual_measure_[dir][f]; }
    /// |D_{K,sigma}| for the lower and upper half (0 when the cell is absent).
    double dual_half_lower(int dir, Index f) const noexcept { return half_lower_[dir][f]; }
    double dual_half_upper(int dir, Index f) const noexcept { return half_upper_[dir][f]; }
    /// Distance between the two cell centers, or center-to-boundary.
    double face_distance(int dir, Index f) const noexcept { return face_distance_[dir][f]; }
    Point dual_centroid(int dir, Index f) const;

    // ---- dual faces --------------------------------------------------------
    const std::vector<DualFace>& dual_faces(int dir) const noexcept { return dual_faces_[dir]; }
    /// Indices into dual_faces(dir) of the faces bounding D_sigma.
    const std::vector<Index>& dual_faces_of(int dir, Index f) const { return dual_adjacency_[dir][f]; }

    /// Debug table: id, direction, case, measure, neighbors.
    void write_dual_face_csv(std::ostream& os) const;
    void write_face_csv(std::ostream& os) const;

private:
    void build_faces();
    void build_dual_faces();

    int dim_;
    std::array<std::vector<double>, 3> coords_;
    std::array<Index, 3> n_{1, 1, 1};
    double domain_measure_ = 0.0;

    std::vector<double> cell_measure_;
    std::array<Index, 3> num_faces_{0, 0, 0};
    std::array<std::vector<char>, 3> exterior_;
    std::array<std::vector<double>, 3> face_area_;
    std::array<std::vector<Index>, 3> lower_cell_, upper_cell_;
    std::array<std::vector<Index>, 3> interior_;
    std::array<std::vector<double>, 3> dual_measure_, half_lower_, half_upper_, face_distance_;
    std::array<std::vector<DualFace>, 3> dual_faces_;
    std::array<std::vector<std::vector<Index>>, 3> dual_adjacency_;
};

using MeshPtr = std::shared_ptr<const MacMesh>;

/// Domain box given as d (lo, hi) pairs; coordinates strictly increasing and
/// matching the box endpoints.
MeshPtr build_mesh(const std::vector<std::array<double, 2>>& domain_box,
                   const std::vector<std::vector<double>>& axis_coords);

/// Uniform tensor mesh with the given cell counts.
MeshPtr build_uniform_mesh(const std::vector<std::array<double, 2>>& domain_box,
                           const std::vector<Index>& cells);

/// eta_M: largest ratio |sigma| / |sigma'| over faces of different directions.
double regularity(const MacMesh& mesh);

/// h_M: largest primal-cell diameter.
double mesh_step(const MacMesh& mesh);

}  // namespace macvd
