/// @file problem.hpp
/// @brief Problem data (initial fields, forcing, declared density bounds) and
/// the manufactured-solution presets used for verification runs.
#pragma once

#include "macvd/fields.hpp"
#include "macvd/jet.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace macvd {

using TimeScalarFunction = std::function<double(const Point&, double)>;
using TimeVectorFunction = std::function<std::array<double, 3>(const Point&, double)>;

/// Closed-form fields, evaluated on jets so derivatives come for free.
struct ManufacturedFields {
    std::function<std::array<Jet, 3>(const JetArgs&)> velocity;
    std::function<Jet(const JetArgs&)> density;
    std::function<Jet(const JetArgs&)> pressure;
};

/// Continuous momentum residual d_t(rho u) + div(rho u (x) u) - Lap u + grad p
/// of the exact fields, used as the forcing f.
TimeVectorFunction manufactured_forcing(const ManufacturedFields& fields, int dim);

/// d_t rho + div(rho u) of the exact fields (zero for admissible presets).
TimeScalarFunction transport_residual(const ManufacturedFields& fields, int dim);

/// div u of the exact fields.
TimeScalarFunction velocity_divergence(const ManufacturedFields& fields, int dim);

/// Plain-double views of the exact fields.
TimeVectorFunction exact_velocity(const ManufacturedFields& fields);
TimeScalarFunction exact_density(const ManufacturedFields& fields);
TimeScalarFunction exact_pressure(const ManufacturedFields& fields);

struct Problem {
    std::string name;
    int dim = 2;
    std::vector<std::array<double, 2>> domain;
    double rho_min = 1.0;  ///< declared analytic range of rho0
    double rho_max = 1.0;
    ScalarFunction rho0;
    VectorFunction u0;
    TimeVectorFunction forcing;
    std::optional<ManufacturedFields> exact;
    bool no_slip = true;  ///< exact velocity vanishes on the boundary
};

/// Known presets:
///  - "rest": constant density, fluid at rest, no forcing.
///  - "rotating-patch": compactly supported swirl with oscillating amplitude
///    carrying a flat-topped heavy patch; density in [1, 2].
///  - "smooth-vortex": same swirl carrying a Gaussian density bump; density
///    in [1, 1.5]. The smooth preset for refinement studies.
///  - "taylor-green": decaying Taylor-Green vortex with rho = 1 (exact
///    Navier-Stokes solution, f = 0); not no-slip, only for forcing checks.
Problem make_preset(const std::string& name, int dim, double rest_density = 1.0);

std::vector<std::string> preset_names();

}  // namespace macvd
