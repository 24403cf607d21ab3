#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <string>

#include "degheat/coefficient.hpp"
#include "degheat/grid.hpp"
#include "degheat/manufacture.hpp"
#include "degheat/problem.hpp"

namespace degheat::testing {

/// Heating-scenario data for a* = c t^beta from the finite-difference oracle
/// on a time grid `refine` times finer than a solver grid of `panels` panels.
inline Manufactured heating_data(double beta, double c, std::size_t panels, std::size_t refine = 4) {
    const FdMesh mesh = oracle_mesh(1.0, 1.0, refine * panels);
    return manufacture(Coefficient::power_law(mesh.grid, c, beta), heating(1.0), mesh);
}

/// u = x data with mu3 = t^beta.
inline Manufactured steady_data(double beta, std::size_t panels) {
    const FdMesh mesh = oracle_mesh(1.0, 1.0, panels, 20);
    return manufacture(Coefficient::power_law(mesh.grid, 1.0, beta), steady_linear(1.0), mesh, 20);
}

/// sup over t_i >= t_min of |a - c t^beta| / (c t^beta).
inline double relative_error(const Coefficient& a, double c, double beta, double t_min) {
    double worst = 0.0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double t = a.grid()[i];
        if (t >= t_min) {
            const double exact = c * std::pow(t, beta);
            worst = std::max(worst, std::abs(a[i] - exact) / exact);
        }
    }
    return worst;
}

/// Problem sampled from closed-form data on uniform x and graded t grids.
inline ProblemData tabulate(double beta, std::size_t nx, std::size_t nt, const std::function<double(double)>& phi,
                            const std::function<double(double, double)>& f, const std::function<double(double)>& mu1,
                            const std::function<double(double)>& mu2, const std::function<double(double)>& mu3,
                            double h = 1.0, double T = 1.0) {
    ProblemData p;
    p.h = h;
    p.T = T;
    p.beta = beta;
    p.x_grid = uniform_nodes(h, nx);
    const TimeGrid g = TimeGrid::graded(T, nt);
    p.t_grid.assign(g.nodes().begin(), g.nodes().end());
    for (double x : p.x_grid) {
        p.phi.push_back(phi(x));
        for (double t : p.t_grid) p.f.push_back(f(x, t));
    }
    for (double t : p.t_grid) {
        p.mu1.push_back(mu1(t));
        p.mu2.push_back(mu2(t));
        p.mu3.push_back(mu3(t));
    }
    return p;
}

/// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("degheat_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace degheat::testing
