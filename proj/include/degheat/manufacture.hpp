#pragma once

#include <functional>
#include <string>

#include "degheat/coefficient.hpp"
#include "degheat/fdoracle.hpp"
#include "degheat/field.hpp"
#include "degheat/problem.hpp"

namespace degheat {

/// Shapes of phi, f, mu1, mu2 used to generate data for a chosen coefficient.
struct Scenario {
    std::string name;
    double h = 1.0;
    std::function<double(double)> phi;
    std::function<double(double, double)> f;
    std::function<double(double)> mu1;
    std::function<double(double)> mu2;
};

/// phi = x, f = 0, mu1 = 0, mu2 = h: u = x is a steady solution.
Scenario steady_linear(double h = 1.0);

/// Everything equal to c: u = c.
Scenario constant_state(double c, double h = 1.0);

/// phi = x, f = 1 + x, mu1 = 0, mu2 = h + (2 + h) t. Satisfies every sign
/// condition with margin 1 (f(0,t) - mu1' = 1, mu2' - f(h,t) = 1).
Scenario heating(double h = 1.0);

/// Looks a scenario up by name ("steady-linear", "constant", "heating").
Scenario scenario_by_name(const std::string& name, double h = 1.0);

struct Manufactured {
    ProblemData problem;
    Coefficient truth;
    FluxTrace oracle_flux;
};

/// Runs the finite-difference oracle with a_true and records mu1, mu2 and
/// mu3 = a_true * u_x(0, t) on the mesh time nodes. phi and f are sampled
/// from the scenario on a uniform x-grid with `data_x_panels` panels, not on
/// the clustered oracle mesh, so that differenced data stay free of rounding
/// noise. Throws InputError for a_true with beta < 1 or a_true(0) != 0,
/// SolverError when the oracle fails or the flux is negative where
/// a_true > 0. Fluxes within rounding of zero are published as zero.
Manufactured manufacture(const Coefficient& a_true, const Scenario& scenario, const FdMesh& mesh,
                         std::size_t data_x_panels = 200);

/// Default oracle mesh for manufactured data: graded time grid with
/// `time_panels` panels and an x-mesh clustered at x = 0 that becomes
/// uniform with cell width h / x_panels away from the boundary.
FdMesh oracle_mesh(double h, double T, std::size_t time_panels, std::size_t x_panels = 200, double gamma = 2.0);

/// Neumann-form data whose transform is the given Dirichlet problem for
/// v = u_x: phi_u = int phi, f_u = f0 + int_0^x f, boundary fluxes mu1, mu2,
/// and u(0, t) = int_0^t (f0 + mu3) as the overdetermination datum.
/// Integrals are cumulative trapezoid sums on the problem's grids.
ProblemData neumann_lift(const ProblemData& v, double f0 = 1.0);

} // namespace degheat
