#include "degheat/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degheat/error.hpp"

namespace degheat {

namespace {

struct Extreme {
    double value = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    Location location;
    bool finite = true;
};

// Minimum of values over a set of (x, t) sample points.
class MinTracker {
public:
    void add(double v, std::optional<double> x, std::optional<double> t) {
        if (!std::isfinite(v)) {
            e_.finite = false;
            if (e_.value != -std::numeric_limits<double>::infinity()) {
                e_.value = -std::numeric_limits<double>::infinity();
                e_.location = {x, t};
            }
            return;
        }
        e_.scale = std::max(e_.scale, std::abs(v));
        if (v < e_.value) {
            e_.value = v;
            e_.location = {x, t};
        }
    }
    const Extreme& result() const noexcept { return e_; }

private:
    Extreme e_;
};

// `scale` bounds the rounding in the checked quantity, e.g. max|mu| / min dt
// for a differenced rate.
ConditionCheck nonnegative(const std::string& name, const Extreme& e, double scale) {
    const double slack = 1e-12 * std::max({1.0, e.scale, scale});
    return {name, e.finite && e.value >= -slack, e.value, e.location};
}

ConditionCheck strictly_above(const std::string& name, const Extreme& e, double epsilon) {
    return {name, e.finite && e.value > epsilon, e.value, e.location};
}

ConditionCheck compatibility(const std::string& name, double a, double b, double tol, Location where) {
    const double allowed = tol * std::max({1.0, std::abs(a), std::abs(b)});
    const double gap = std::abs(a - b);
    return {name, gap <= allowed, allowed - gap, where};
}

// Largest magnitude of several derivative tables against a bound.
class MaxTracker {
public:
    void add(std::span<const double> v, std::span<const double> xs, std::span<const double> ts) {
        const std::size_t nt = ts.size();
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double m = std::isfinite(v[k]) ? std::abs(v[k]) : std::numeric_limits<double>::infinity();
            if (m > worst_) {
                worst_ = m;
                if (xs.empty()) {
                    where_ = {std::nullopt, ts[k]};
                } else if (ts.empty()) {
                    where_ = {xs[k], std::nullopt};
                } else {
                    where_ = {xs[k / nt], ts[k % nt]};
                }
            }
        }
    }
    ConditionCheck check(const std::string& name, double limit) const {
        return {name, worst_ <= limit, limit - worst_, where_};
    }

private:
    double worst_ = 0.0;
    Location where_;
};

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double min_step(std::span<const double> nodes) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        m = std::min(m, nodes[i] - nodes[i - 1]);
    }
    return m;
}

} // namespace

PowerFit fit_power_law(std::span<const double> t, std::span<const double> v, double t_max) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || t[i] > t_max) {
            continue;
        }
        if (!(v[i] > 0.0)) {
            throw InputError("power-law fit: nonpositive value at t = " + std::to_string(t[i]));
        }
        const double lx = std::log(t[i]);
        const double ly = std::log(v[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 4) {
        throw InputError("power-law fit: fewer than 4 nodes in (0, " + std::to_string(t_max) + "]");
    }
    const double nn = static_cast<double>(n);
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / nn;
    return {slope, std::exp(intercept), n};
}

double estimate_beta(const Coefficient& a) {
    const auto t = a.grid().nodes();
    return fit_power_law(t, a.values(), 0.1 * a.grid().horizon()).slope;
}

HypothesisReport check_hypotheses(const ProblemData& p, const ValidateOptions& opts) {
    p.validate();
    const DerivedData d = derive(p);
    const std::size_t nx = p.nx();
    const std::size_t nt = p.nt();
    HypothesisReport report;

    MaxTracker strong;
    strong.add(d.phi_xx, p.x_grid, {});
    strong.add(d.mu1_t, {}, p.t_grid);
    strong.add(d.mu2_t, {}, p.t_grid);
    strong.add(d.f_xx, p.x_grid, p.t_grid);
    report.checks.push_back(strong.check("smoothness", opts.smooth_limit));

    MaxTracker weak;
    weak.add(d.phi_x, p.x_grid, {});
    weak.add(d.f_x, p.x_grid, p.t_grid);
    ConditionCheck relaxed = weak.check("smoothness_relaxed", opts.smooth_limit);
    relaxed.required = false;
    report.checks.push_back(relaxed);

    MinTracker phi_x;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        phi_x.add(d.phi_x[ix], p.x_grid[ix], std::nullopt);
    }
    const double dx = min_step(p.x_grid);
    const double dt = min_step(p.t_grid);
    report.checks.push_back(nonnegative("phi_x_nonnegative", phi_x.result(), max_abs(p.phi) / dx));

    MinTracker left, right, mu3;
    for (std::size_t it = 0; it < nt; ++it) {
        const double t = p.t_grid[it];
        left.add(p.f_node(0, it) - d.mu1_t[it], std::nullopt, t);
        right.add(d.mu2_t[it] - p.f_node(nx - 1, it), std::nullopt, t);
        if (it > 0) {
            mu3.add(p.mu3[it], std::nullopt, t);
        }
    }
    report.checks.push_back(strictly_above("source_exceeds_left_rate", left.result(), opts.epsilon));
    report.checks.push_back(
        nonnegative("right_rate_exceeds_source", right.result(), std::max(max_abs(p.mu2) / dt, max_abs(p.f))));
    report.checks.push_back(strictly_above("mu3_positive", mu3.result(), opts.epsilon));

    ConditionCheck limit{"mu3_limit", false, std::numeric_limits<double>::quiet_NaN(), {}};
    try {
        const PowerFit fit = fit_power_law(p.t_grid, p.mu3, 0.1 * p.T);
        const double deviation = std::abs(fit.slope - 0.5 * (p.beta + 1.0));
        limit.margin = opts.slope_tolerance - deviation;
        limit.pass = limit.margin >= 0.0 && fit.prefactor > 0.0;
        limit.location = {std::nullopt, 0.1 * p.T};
    } catch (const InputError&) {
        limit.pass = false;
    }
    report.checks.push_back(limit);

    MinTracker fx;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t it = 0; it < nt; ++it) {
            fx.add(d.f_x[ix * nt + it], p.x_grid[ix], p.t_grid[it]);
        }
    }
    report.checks.push_back(nonnegative("f_x_nonnegative", fx.result(), max_abs(p.f) / dx));

    report.checks.push_back(
        compatibility("compatibility_left", p.phi.front(), p.mu1.front(), opts.compat_tolerance, {0.0, 0.0}));
    report.checks.push_back(
        compatibility("compatibility_right", p.phi.back(), p.mu2.front(), opts.compat_tolerance, {p.h, 0.0}));
    return report;
}

nlohmann::ordered_json report_to_json(const HypothesisReport& report) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["pass"] = c.pass;
        j["margin"] = std::isfinite(c.margin) ? nlohmann::ordered_json(c.margin) : nlohmann::ordered_json(nullptr);
        nlohmann::ordered_json loc = nlohmann::ordered_json::object();
        if (c.location.x) {
            loc["x"] = *c.location.x;
        }
        if (c.location.t) {
            loc["t"] = *c.location.t;
        }
        j["location"] = loc;
        j["required"] = c.required;
        out.push_back(j);
    }
    return out;
}

} // namespace degheat
