#pragma once

#include "macvd/verify.hpp"

#include <gtest/gtest.h>

#include <random>

namespace macvd::testing {

inline std::vector<std::array<double, 2>> unit_box(int dim)
{
    return std::vector<std::array<double, 2>>(static_cast<std::size_t>(dim), {0.0, 1.0});
}

inline MeshPtr unit_mesh(std::vector<Index> cells)
{
    return build_uniform_mesh(unit_box(static_cast<int>(cells.size())), cells);
}

inline double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

inline double max_abs(const VelocityField& u)
{
    double m = 0.0;
    for (int d = 0; d < 3; ++d) {
        m = std::max(m, max_abs(u.comp[d]));
    }
    return m;
}

}  // namespace macvd::testing
