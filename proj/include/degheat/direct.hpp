#pragma once

#include <span>
#include <vector>

#include "degheat/coefficient.hpp"
#include "degheat/field.hpp"
#include "degheat/grid.hpp"
#include "degheat/problem.hpp"
#include "degheat/quad.hpp"

namespace degheat {

/// Per-node breakdown of the flux u_x(0, t_i) into its four contributions.
struct FluxTerms {
    std::vector<double> initial; // int G2(0,t;xi,0) phi'(xi) dxi
    std::vector<double> left;    // int G2(0,t;0,tau) (f(0,tau) - mu1'(tau)) dtau
    std::vector<double> right;   // int G2(0,t;h,tau) (mu2'(tau) - f(h,tau)) dtau
    std::vector<double> volume;  // int int G2(0,t;xi,tau) f_xi(xi,tau) dxi dtau
};

/// Boundary flux u_x(0, t_i) as a function of the coefficient, for fixed data
/// resampled once onto a solver TimeGrid and a uniform solver x-grid.
///
/// The left boundary term splits off the n = 0 image as a weakly singular
/// integral; the remaining image terms and the right boundary term are
/// regular. The volume term uses the trapezoid rule in tau over solver nodes.
class FluxOperator {
public:
    FluxOperator(const ProblemData& problem, TimeGrid grid, std::size_t x_panels = 64);

    const TimeGrid& grid() const noexcept { return grid_; }

    /// f(0, t_i) - mu1'(t_i) on the solver grid.
    std::span<const double> left_density() const noexcept { return g2_; }
    /// mu2'(t_i) - f(h, t_i) on the solver grid.
    std::span<const double> right_density() const noexcept { return g3_; }
    /// mu3(t_i) on the solver grid.
    std::span<const double> mu3() const noexcept { return mu3_; }

    /// values[0] is NaN; the flux is not evaluated at t = 0. Throws
    /// SolverError when a vanishes at some t_i > 0 or lives on another grid.
    FluxTrace flux(const Coefficient& a, FluxTerms* terms = nullptr) const;

private:
    double h_;
    TimeGrid grid_;
    std::vector<double> g2_;
    std::vector<double> g3_;
    std::vector<double> mu3_;
    std::vector<double> fx0_;
    SpatialRule data_rule_;
    SpatialRule solver_rule_;
    SpatialRule::Prepared phi_x_;
    std::vector<SpatialRule::Prepared> fx_;
};

/// Flux on the coefficient's own grid.
FluxTrace flux_left(const ProblemData& problem, const Coefficient& a);

/// u(x, t_i) on the coefficient's grid from the Green representation:
/// initial layer, two boundary layers with densities a*mu1 and a*mu2, and the
/// source volume potential. Boundary columns and the t = 0 row hold the data.
/// The source is resampled on a uniform grid with `x_panels` panels.
TemperatureField evaluate_u(const ProblemData& problem, const Coefficient& a, std::span<const double> x,
                            std::size_t x_panels = 64);

} // namespace degheat
