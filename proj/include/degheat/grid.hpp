#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace degheat {

/// Strictly increasing time mesh t_0 = 0 < t_1 < ... < t_N = T.
///
/// Graded meshes put t_i = T (i/N)^gamma, clustering nodes at t = 0 where the
/// diffusivity degenerates.
class TimeGrid {
public:
    static TimeGrid graded(double horizon, std::size_t panels, double gamma = 2.0);
    static TimeGrid from_nodes(std::vector<double> nodes);

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t panels() const noexcept { return nodes_.size() - 1; }
    double operator[](std::size_t i) const noexcept { return nodes_[i]; }
    double horizon() const noexcept { return nodes_.back(); }
    double width(std::size_t panel) const noexcept { return nodes_[panel + 1] - nodes_[panel]; }

    /// Grading exponent; 0 when the grid was built from explicit nodes.
    double gamma() const noexcept { return gamma_; }
    bool is_graded() const noexcept { return gamma_ > 0.0; }

    /// Index j of the panel [t_j, t_{j+1}] containing t, clamped to the grid.
    std::size_t panel_of(double t) const noexcept;

    /// Grid with `factor` times as many panels whose nodes include every node of
    /// this grid (regraded when graded, panels split uniformly otherwise).
    TimeGrid refined(std::size_t factor) const;

private:
    TimeGrid(std::vector<double> nodes, double gamma) : nodes_(std::move(nodes)), gamma_(gamma) {}

    std::vector<double> nodes_;
    double gamma_ = 0.0;
};

/// Throws InputError("non-monotone grid") unless nodes are strictly increasing.
void require_increasing(std::span<const double> nodes, const char* what);

/// Index j with nodes[j] <= x <= nodes[j+1], clamped to [0, n-2].
std::size_t locate(std::span<const double> nodes, double x) noexcept;

/// Piecewise-linear interpolation; constant extrapolation outside the nodes.
double interpolate(std::span<const double> nodes, std::span<const double> values, double x) noexcept;

/// Second-order derivative estimate at every node: three-point centered
/// formula on interior nodes (nonuniform spacing allowed), three-point
/// one-sided formula at both ends. Needs at least 3 nodes.
std::vector<double> differentiate(std::span<const double> nodes, std::span<const double> values);

/// Uniform nodes 0, h/n, ..., h.
std::vector<double> uniform_nodes(double length, std::size_t panels);

} // namespace degheat
