#pragma once

#include <functional>
#include <vector>

#include "degheat/coefficient.hpp"
#include "degheat/field.hpp"
#include "degheat/grid.hpp"
#include "degheat/problem.hpp"

namespace degheat {

/// Time stepping of the finite-difference reference solver.
///
/// Bdf2 is variable-step BDF2 started by one implicit Euler step, with a taken
/// at the new time level. Theta is the one-step theta-scheme with a at the
/// panel midpoint; with implicitness 0.5 (Crank-Nicolson) it rings in the
/// boundary layer at x = 0 because u_xx(0, t) = -(f(0,t) - mu1'(t)) / a(t)
/// is unbounded as t -> 0.
enum class FdScheme { Bdf2, Theta };

/// Mesh for the finite-difference reference solver.
struct FdMesh {
    std::vector<double> x;
    TimeGrid grid;
    FdScheme scheme = FdScheme::Bdf2;
    double implicitness = 1.0; // Theta only

    static FdMesh uniform(double h, std::size_t panels, TimeGrid grid);

    /// x-nodes whose width grows geometrically (ratio `growth`) from
    /// `first_width` at x = 0 until it reaches h / panels, then stays uniform.
    /// Resolves the thin boundary layer at x = 0 that forms while a(t) is small.
    static FdMesh clustered(double h, std::size_t panels, TimeGrid grid, double first_width, double growth = 1.08);

    /// Throws InputError on an invalid mesh.
    void validate(double h) const;
};

/// Data of the direct problem as functions.
struct FdInputs {
    double h = 1.0;
    std::function<double(double)> phi;
    std::function<double(double, double)> f;
    std::function<double(double)> mu1;
    std::function<double(double)> mu2;

    static FdInputs from_problem(const ProblemData& p);
};

struct FdSolution {
    TemperatureField field;
    FluxTrace flux; // includes t = 0 (derivative of the initial data)
};

/// One tridiagonal solve per step on the nonuniform three-point Laplacian;
/// the flux at x = 0 is the three-point one-sided difference.
FdSolution fd_solve(const FdInputs& in, const Coefficient& a, const FdMesh& mesh);
FdSolution fd_solve(const ProblemData& p, const Coefficient& a, const FdMesh& mesh);

} // namespace degheat
