/// @file jet.hpp
/// @brief Second-order forward-mode automatic differentiation in the four
/// variables (x, y, z, t). Used to turn closed-form exact solutions into
/// manufactured forcing terms.
#pragma once

#include <array>
#include <cmath>

namespace macvd {

struct Jet {
    static constexpr int N = 4;

    double v = 0.0;
    std::array<double, N> d{};                 // first derivatives
    std::array<std::array<double, N>, N> h{};  // Hessian

    Jet() = default;
    Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly

    static Jet variable(double value, int k)
    {
        Jet j(value);
        j.d[k] = 1.0;
        return j;
    }
};

using JetArgs = std::array<Jet, 4>;  // x, y, z, t

/// Applies a scalar function with value f0, slope f1 and curvature f2 at a.v.
inline Jet chain(const Jet& a, double f0, double f1, double f2)
{
    Jet r(f0);
    for (int i = 0; i < Jet::N; ++i) {
        r.d[i] = f1 * a.d[i];
        for (int k = 0; k < Jet::N; ++k) {
            r.h[i][k] = f1 * a.h[i][k] + f2 * a.d[i] * a.d[k];
        }
    }
    return r;
}

inline Jet operator+(const Jet& a, const Jet& b)
{
    Jet r(a.v + b.v);
    for (int i = 0; i < Jet::N; ++i) {
        r.d[i] = a.d[i] + b.d[i];
        for (int k = 0; k < Jet::N; ++k) {
            r.h[i][k] = a.h[i][k] + b.h[i][k];
        }
    }
    return r;
}

inline Jet operator-(const Jet& a)
{
    Jet r(-a.v);
    for (int i = 0; i < Jet::N; ++i) {
        r.d[i] = -a.d[i];
        for (int k = 0; k < Jet::N; ++k) {
            r.h[i][k] = -a.h[i][k];
        }
    }
    return r;
}

inline Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

inline Jet operator*(const Jet& a, const Jet& b)
{
    Jet r(a.v * b.v);
    for (int i = 0; i < Jet::N; ++i) {
        r.d[i] = a.d[i] * b.v + a.v * b.d[i];
        for (int k = 0; k < Jet::N; ++k) {
            r.h[i][k] = a.h[i][k] * b.v + a.d[i] * b.d[k] + a.d[k] * b.d[i] + a.v * b.h[i][k];
        }
    }
    return r;
}

inline Jet reciprocal(const Jet& a)
{
    const double inv = 1.0 / a.v;
    return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet exp(const Jet& a)
{
    const double e = std::exp(a.v);
    return chain(a, e, e, e);
}

/// Non-negative integer power.
inline Jet pow(const Jet& a, int n)
{
    if (n == 0) {
        return Jet(1.0);
    }
    if (n == 1) {
        return a;
    }
    return chain(a, std::pow(a.v, n), n * std::pow(a.v, n - 1), n * (n - 1) * std::pow(a.v, n - 2));
}

inline Jet sqr(const Jet& a) { return a * a; }

}  // namespace macvd
