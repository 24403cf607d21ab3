#include "degheat/manufacture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degheat/error.hpp"

namespace degheat {

Scenario steady_linear(double h) {
    return Scenario{"steady-linear", h, [](double x) { return x; }, [](double, double) { return 0.0; },
                    [](double) { return 0.0; }, [h](double) { return h; }};
}

Scenario constant_state(double c, double h) {
    return Scenario{"constant", h, [c](double) { return c; }, [](double, double) { return 0.0; },
                    [c](double) { return c; }, [c](double) { return c; }};
}

Scenario heating(double h) {
    return Scenario{"heating", h, [](double x) { return x; }, [](double x, double) { return 1.0 + x; },
                    [](double) { return 0.0; }, [h](double t) { return h + (2.0 + h) * t; }};
}

Scenario scenario_by_name(const std::string& name, double h) {
    if (name == "steady-linear") {
        return steady_linear(h);
    }
    if (name == "constant") {
        return constant_state(1.0, h);
    }
    if (name == "heating") {
        return heating(h);
    }
    throw InputError("unknown scenario '" + name + "'");
}

FdMesh oracle_mesh(double h, double T, std::size_t time_panels, std::size_t x_panels, double gamma) {
    return FdMesh::clustered(h, x_panels, TimeGrid::graded(T, time_panels, gamma), 1e-11 * h, 1.08);
}

Manufactured manufacture(const Coefficient& a_true, const Scenario& scenario, const FdMesh& mesh,
                         std::size_t data_x_panels) {
    if (!(a_true.beta() >= 1.0)) {
        throw InputError("strong degeneration requires beta ≥ 1");
    }
    if (a_true[0] != 0.0) {
        throw InputError("manufactured coefficient must vanish at t = 0");
    }
    const double h = scenario.h;
    mesh.validate(h);
    const TimeGrid& grid = mesh.grid;
    const Coefficient truth = Coefficient::from_function(grid, [&](double t) { return a_true.at(t); }, a_true.beta());

    FdInputs in{h, scenario.phi, scenario.f, scenario.mu1, scenario.mu2};
    FdSolution sol = fd_solve(in, truth, mesh);

    ProblemData p;
    p.h = h;
    p.T = grid.horizon();
    p.beta = a_true.beta();
    if (data_x_panels < 2) {
        throw InputError("manufactured data need at least 2 x-panels");
    }
    p.x_grid = uniform_nodes(h, data_x_panels);
    p.t_grid.assign(grid.nodes().begin(), grid.nodes().end());
    const std::size_t nx = p.x_grid.size();
    const std::size_t nt = p.t_grid.size();
    p.phi.resize(nx);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        p.phi[ix] = scenario.phi(p.x_grid[ix]);
    }
    p.f.resize(nx * nt);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t it = 0; it < nt; ++it) {
            p.f[ix * nt + it] = scenario.f(p.x_grid[ix], p.t_grid[it]);
        }
    }
    // one-sided differences of a constant state leave rounding of size eps |u| / dx
    double umax = 0.0;
    for (double v : sol.field.values) {
        umax = std::max(umax, std::abs(v));
    }
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * umax / (mesh.x[1] - mesh.x[0]);
    p.mu1.resize(nt);
    p.mu2.resize(nt);
    p.mu3.resize(nt);
    for (std::size_t it = 0; it < nt; ++it) {
        p.mu1[it] = scenario.mu1(p.t_grid[it]);
        p.mu2[it] = scenario.mu2(p.t_grid[it]);
        double flux = sol.flux.values[it];
        if (std::abs(flux) <= rounding) {
            flux = 0.0;
        }
        if (truth[it] > 0.0 && !(flux >= 0.0)) {
            throw SolverError("oracle flux is negative at t = " + std::to_string(p.t_grid[it]));
        }
        p.mu3[it] = truth[it] * flux;
    }
    p.validate();
    return Manufactured{std::move(p), truth, std::move(sol.flux)};
}

namespace {

std::vector<double> cumulative_trapezoid(const std::vector<double>& nodes, const std::vector<double>& v) {
    std::vector<double> out(nodes.size(), 0.0);
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        out[k] = out[k - 1] + 0.5 * (nodes[k] - nodes[k - 1]) * (v[k] + v[k - 1]);
    }
    return out;
}

} // namespace

ProblemData neumann_lift(const ProblemData& v, double f0) {
    v.validate();
    ProblemData u = v;
    u.phi = cumulative_trapezoid(v.x_grid, v.phi);
    const std::size_t nx = v.nx();
    const std::size_t nt = v.nt();
    std::vector<double> column(nx);
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            column[ix] = v.f_node(ix, it);
        }
        const std::vector<double> integral = cumulative_trapezoid(v.x_grid, column);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            u.f[ix * nt + it] = f0 + integral[ix];
        }
    }
    std::vector<double> rate(nt);
    for (std::size_t it = 0; it < nt; ++it) {
        rate[it] = f0 + v.mu3[it];
    }
    u.mu3 = cumulative_trapezoid(v.t_grid, rate);
    return u;
}

} // namespace degheat
