#pragma once

#include <cstddef>
#include <vector>

#include "degheat/grid.hpp"

namespace degheat {

/// u(x_j, t_i) on an x-grid times a TimeGrid, stored time-major.
struct TemperatureField {
    std::vector<double> x;
    TimeGrid grid;
    std::vector<double> values;

    double at(std::size_t ix, std::size_t it) const noexcept { return values[it * x.size() + ix]; }
    double& at(std::size_t ix, std::size_t it) noexcept { return values[it * x.size() + ix]; }
};

/// u_x(0, t_i). Solvers that cannot evaluate the flux at t = 0 store NaN there.
struct FluxTrace {
    TimeGrid grid;
    std::vector<double> values;
};

} // namespace degheat
