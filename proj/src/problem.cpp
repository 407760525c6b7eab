#include "macvd/problem.hpp"

#include <numbers>

namespace macvd {

namespace {

constexpr double kPi = std::numbers::pi;

JetArgs jet_args(const Point& x, double t)
{
    return {Jet::variable(x[0], 0), Jet::variable(x[1], 1), Jet::variable(x[2], 2), Jet::variable(t, 3)};
}

JetArgs value_args(const Point& x, double t) { return {Jet(x[0]), Jet(x[1]), Jet(x[2]), Jet(t)}; }

constexpr int kT = 3;

// Swirl about the vertical axis through (0.5, 0.5):
//   u = g(t) a(x) (-(y - 0.5), x - 0.5, 0),
//   a = omega0 (1 - s/R^2)^4 for s = |(x,y) - c|^2 < R^2, times 16 z^2 (1-z)^2 in 3D.
// Particles keep s and z and turn by a G(t), G' = g, so any rho0 rotated
// back by that angle is transported exactly.
struct Swirl {
    int dim = 2;
    double omega0 = 8.0;
    double radius = 0.45;

    static Jet amplitude(const Jet& t) { return cos(kPi * t); }
    static Jet turned(const Jet& t) { return sin(kPi * t) * (1.0 / kPi); }

    Jet angular(const JetArgs& a) const
    {
        const Jet X = a[0] - 0.5;
        const Jet Y = a[1] - 0.5;
        const Jet s = X * X + Y * Y;
        const double r2 = radius * radius;
        Jet w(0.0);
        if (s.v < r2) {
            w = pow(1.0 - s * (1.0 / r2), 4) * omega0;
        }
        if (dim == 3) {
            const Jet z = a[2];
            w = w * sqr(z * (1.0 - z)) * 16.0;
        }
        return w;
    }

    std::array<Jet, 3> velocity(const JetArgs& a) const
    {
        const Jet w = angular(a) * amplitude(a[kT]);
        return {-(a[1] - 0.5) * w, (a[0] - 0.5) * w, Jet(0.0)};
    }

    /// Departure point of the particle found at a.
    JetArgs departure(const JetArgs& a) const
    {
        const Jet phi = angular(a) * turned(a[kT]);
        const Jet c = cos(phi);
        const Jet s = sin(phi);
        const Jet X = a[0] - 0.5;
        const Jet Y = a[1] - 0.5;
        return {c * X + s * Y + 0.5, c * Y - s * X + 0.5, a[2], a[kT]};
    }
};

Jet pressure_mode(const JetArgs& a, int dim)
{
    const Jet g = Swirl::amplitude(a[kT]);
    Jet p = cos(a[0] * kPi) * cos(a[1] * kPi) * sqr(g) * 0.1;
    if (dim == 3) {
        p = p * cos(a[2] * kPi);
    }
    return p;
}

Problem from_fields(std::string name, int dim, ManufacturedFields fields, double rho_min, double rho_max)
{
    Problem pb;
    pb.name = std::move(name);
    pb.dim = dim;
    pb.domain.assign(static_cast<std::size_t>(dim), {0.0, 1.0});
    pb.rho_min = rho_min;
    pb.rho_max = rho_max;
    const auto rho = exact_density(fields);
    const auto u = exact_velocity(fields);
    pb.rho0 = [rho](const Point& x) { return rho(x, 0.0); };
    pb.u0 = [u](const Point& x) { return u(x, 0.0); };
    pb.forcing = manufactured_forcing(fields, dim);
    pb.exact = std::move(fields);
    return pb;
}

}  // namespace

TimeVectorFunction manufactured_forcing(const ManufacturedFields& fields, int dim)
{
    return [fields, dim](const Point& x, double t) {
        const JetArgs a = jet_args(x, t);
        const auto u = fields.velocity(a);
        const Jet rho = fields.density(a);
        const Jet p = fields.pressure(a);
        std::array<double, 3> f{0.0, 0.0, 0.0};
        for (int i = 0; i < dim; ++i) {
            // d_t(rho u_i)
            double fi = rho.d[kT] * u[i].v + rho.v * u[i].d[kT];
            for (int j = 0; j < dim; ++j) {
                // d_j(rho u_i u_j) - d_jj u_i
                fi += rho.d[j] * u[i].v * u[j].v + rho.v * u[i].d[j] * u[j].v + rho.v * u[i].v * u[j].d[j];
                fi -= u[i].h[j][j];
            }
            f[i] = fi + p.d[i];
        }
        return f;
    };
}

TimeScalarFunction transport_residual(const ManufacturedFields& fields, int dim)
{
    return [fields, dim](const Point& x, double t) {
        const JetArgs a = jet_args(x, t);
        const auto u = fields.velocity(a);
        const Jet rho = fields.density(a);
        double r = rho.d[kT];
        for (int j = 0; j < dim; ++j) {
            r += rho.d[j] * u[j].v + rho.v * u[j].d[j];
        }
        return r;
    };
}

TimeScalarFunction velocity_divergence(const ManufacturedFields& fields, int dim)
{
    return [fields, dim](const Point& x, double t) {
        const auto u = fields.velocity(jet_args(x, t));
        double r = 0.0;
        for (int j = 0; j < dim; ++j) {
            r += u[j].d[j];
        }
        return r;
    };
}

TimeVectorFunction exact_velocity(const ManufacturedFields& fields)
{
    return [fields](const Point& x, double t) {
        const auto u = fields.velocity(value_args(x, t));
        return std::array<double, 3>{u[0].v, u[1].v, u[2].v};
    };
}

TimeScalarFunction exact_density(const ManufacturedFields& fields)
{
    return [fields](const Point& x, double t) { return fields.density(value_args(x, t)).v; };
}

TimeScalarFunction exact_pressure(const ManufacturedFields& fields)
{
    return [fields](const Point& x, double t) { return fields.pressure(value_args(x, t)).v; };
}

Problem make_preset(const std::string& name, int dim, double rest_density)
{
    if (dim != 2 && dim != 3) {
        throw ValidationError("preset dimension must be 2 or 3");
    }
    if (name == "rest") {
        if (!(rest_density > 0.0)) {
            throw ValidationError("rest density must be positive");
        }
        ManufacturedFields f;
        f.velocity = [](const JetArgs&) { return std::array<Jet, 3>{Jet(0.0), Jet(0.0), Jet(0.0)}; };
        f.density = [rest_density](const JetArgs&) { return Jet(rest_density); };
        f.pressure = [](const JetArgs&) { return Jet(0.0); };
        return from_fields(name, dim, std::move(f), rest_density, rest_density);
    }
    if (name == "rotating-patch" || name == "smooth-vortex") {
        const Swirl swirl{dim};
        const bool patch = name == "rotating-patch";
        ManufacturedFields f;
        f.velocity = [swirl](const JetArgs& a) { return swirl.velocity(a); };
        f.density = [swirl, patch, dim](const JetArgs& a) {
            const JetArgs x0 = swirl.departure(a);
            Jet d2 = sqr(x0[0] - 0.5) + sqr(x0[1] - 0.72);
            if (dim == 3) {
                d2 += sqr(x0[2] - 0.5);
            }
            if (patch) {
                // Flat-topped super-Gaussian of radius 0.12.
                return 1.0 + exp(-pow(d2 * (1.0 / (0.12 * 0.12)), 4));
            }
            return 1.0 + 0.5 * exp(-d2 * (1.0 / 0.05));
        };
        f.pressure = [dim](const JetArgs& a) { return pressure_mode(a, dim); };
        return from_fields(name, dim, std::move(f), 1.0, patch ? 2.0 : 1.5);
    }
    if (name == "taylor-green") {
        ManufacturedFields f;
        f.velocity = [](const JetArgs& a) {
            const Jet decay = exp(a[kT] * (-2.0 * kPi * kPi));
            return std::array<Jet, 3>{sin(a[0] * kPi) * cos(a[1] * kPi) * decay,
                                      -(cos(a[0] * kPi) * sin(a[1] * kPi) * decay), Jet(0.0)};
        };
        f.density = [](const JetArgs&) { return Jet(1.0); };
        f.pressure = [](const JetArgs& a) {
            const Jet decay = exp(a[kT] * (-4.0 * kPi * kPi));
            return (cos(a[0] * (2.0 * kPi)) + cos(a[1] * (2.0 * kPi))) * decay * 0.25;
        };
        Problem pb = from_fields(name, dim, std::move(f), 1.0, 1.0);
        pb.no_slip = false;
        return pb;
    }
    throw ValidationError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"rest", "rotating-patch", "smooth-vortex", "taylor-green"}; }

}  // namespace macvd
