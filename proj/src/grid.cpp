#include "degheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degheat/error.hpp"

namespace degheat {

TimeGrid TimeGrid::graded(double horizon, std::size_t panels, double gamma) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw InputError("time grid horizon must be positive");
    }
    if (panels < 1) {
        throw InputError("time grid needs at least one panel");
    }
    if (!(gamma >= 1.0)) {
        throw InputError("grading exponent must be >= 1");
    }
    std::vector<double> nodes(panels + 1);
    const auto n = static_cast<double>(panels);
    for (std::size_t i = 0; i <= panels; ++i) {
        nodes[i] = horizon * std::pow(static_cast<double>(i) / n, gamma);
    }
    nodes.back() = horizon;
    return TimeGrid(std::move(nodes), gamma);
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2) {
        throw InputError("time grid needs at least two nodes");
    }
    if (nodes.front() != 0.0) {
        throw InputError("time grid must start at t = 0");
    }
    require_increasing(nodes, "time grid");
    return TimeGrid(std::move(nodes), 0.0);
}

std::size_t TimeGrid::panel_of(double t) const noexcept { return locate(nodes_, t); }

TimeGrid TimeGrid::refined(std::size_t factor) const {
    if (factor < 1) {
        throw InputError("refinement factor must be >= 1");
    }
    if (is_graded()) {
        return graded(horizon(), panels() * factor, gamma_);
    }
    std::vector<double> out;
    out.reserve(panels() * factor + 1);
    for (std::size_t j = 0; j < panels(); ++j) {
        for (std::size_t k = 0; k < factor; ++k) {
            out.push_back(nodes_[j] + width(j) * static_cast<double>(k) / static_cast<double>(factor));
        }
    }
    out.push_back(horizon());
    return TimeGrid(std::move(out), 0.0);
}

void require_increasing(std::span<const double> nodes, const char* what) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!std::isfinite(nodes[i])) {
            throw InputError(std::string(what) + ": non-finite node");
        }
        if (i > 0 && !(nodes[i] > nodes[i - 1])) {
            throw InputError(std::string(what) + ": non-monotone grid");
        }
    }
}

std::size_t locate(std::span<const double> nodes, double x) noexcept {
    const std::size_t n = nodes.size();
    if (n < 2 || x <= nodes[0]) {
        return 0;
    }
    if (x >= nodes[n - 1]) {
        return n - 2;
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

double interpolate(std::span<const double> nodes, std::span<const double> values, double x) noexcept {
    if (nodes.size() == 1) {
        return values[0];
    }
    if (x <= nodes.front()) {
        return values.front();
    }
    if (x >= nodes.back()) {
        return values.back();
    }
    const std::size_t j = locate(nodes, x);
    const double s = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
    return values[j] + s * (values[j + 1] - values[j]);
}

std::vector<double> differentiate(std::span<const double> nodes, std::span<const double> values) {
    const std::size_t n = nodes.size();
    if (n < 3 || values.size() != n) {
        throw InputError("differencing needs at least 3 samples");
    }
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = nodes[i] - nodes[i - 1];
        const double hr = nodes[i + 1] - nodes[i];
        d[i] = -hr / (hl * (hl + hr)) * values[i - 1] + (hr - hl) / (hl * hr) * values[i] +
               hl / (hr * (hl + hr)) * values[i + 1];
    }
    {
        const double h0 = nodes[1] - nodes[0];
        const double h1 = nodes[2] - nodes[1];
        d[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * values[0] + (h0 + h1) / (h0 * h1) * values[1] -
               h0 / (h1 * (h0 + h1)) * values[2];
    }
    {
        const double h0 = nodes[n - 1] - nodes[n - 2];
        const double h1 = nodes[n - 2] - nodes[n - 3];
        d[n - 1] = (2.0 * h0 + h1) / (h0 * (h0 + h1)) * values[n - 1] - (h0 + h1) / (h0 * h1) * values[n - 2] +
                   h0 / (h1 * (h0 + h1)) * values[n - 3];
    }
    return d;
}

std::vector<double> uniform_nodes(double length, std::size_t panels) {
    std::vector<double> x(panels + 1);
    for (std::size_t j = 0; j <= panels; ++j) {
        x[j] = length * static_cast<double>(j) / static_cast<double>(panels);
    }
    x.back() = length;
    return x;
}

} // namespace degheat
