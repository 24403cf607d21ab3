#include "degheat/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "degheat/error.hpp"
#include "degheat/greens.hpp"
#include "degheat/kernels.hpp"
#include "degheat/quad.hpp"
#include "degheat/validate.hpp"

namespace degheat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// f(0, t_i) - mu1'(t_i) on the grid.
std::vector<double> left_density(const ProblemData& p, const TimeGrid& grid) {
    const std::vector<double> mu1_t = differentiate(p.t_grid, p.mu1);
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        g[i] = p.f_at(0.0, grid[i]) - interpolate(p.t_grid, mu1_t, grid[i]);
    }
    return g;
}

// J_i for every i >= 1 with theta = tau^(beta+1); throws at the first node
// whose density is nonpositive.
std::vector<double> reference_integrals(const std::vector<double>& g, const TimeGrid& grid, double beta,
                                        std::size_t last) {
    for (std::size_t i = 0; i <= last; ++i) {
        if (!(g[i] > 0.0)) {
            throw AdmissibilityError("f(0,t) - mu1'(t) is nonpositive", i);
        }
    }
    const Theta theta = Theta::accumulate(Coefficient::power_law(grid, beta + 1.0, beta));
    std::vector<double> J(last + 1, kNaN);
    std::vector<double> isq;
    for (std::size_t i = 1; i <= last; ++i) {
        const TimePoints pts = time_points(theta, i);
        isq.resize(pts.size());
        kernels::active().inv_sqrt(pts.gap.data(), isq.data(), pts.size());
        double s = 0.0;
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const std::size_t j = pts.panel[q];
            s += (pts.left[q] * g[j] + pts.right[q] * g[j + 1]) * isq[q];
        }
        J[i] = s;
    }
    return J;
}

double H_from(const ProblemData& p, double t, double J) {
    return std::sqrt(std::numbers::pi) * p.mu3_at(t) / (std::sqrt(p.beta + 1.0) * std::pow(t, p.beta) * J);
}

double weighted_sup(const Coefficient& a, std::span<const double> b, std::size_t* where = nullptr) {
    const auto t = a.grid().nodes();
    double worst = -1.0;
    std::size_t at = 1;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]) / std::pow(t[i], a.beta());
        if (d > worst) {
            worst = d;
            at = i;
        }
    }
    if (where != nullptr) {
        *where = at;
    }
    return worst;
}

struct Step {
    Coefficient image;
    double residual;
};

Step step_with_residual(const FluxOperator& op, const Coefficient& a) {
    const FluxTrace F = op.flux(a);
    const auto mu3 = op.mu3();
    std::vector<double> out(a.size(), 0.0);
    double residual = 0.0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (!(mu3[i] > 0.0)) {
            throw AdmissibilityError("mu3 is nonpositive", i);
        }
        if (!(F.values[i] > 0.0)) {
            throw AdmissibilityError("boundary flux u_x(0,t) is nonpositive", i);
        }
        out[i] = mu3[i] / F.values[i];
        residual = std::max(residual, std::abs(a[i] * F.values[i] - mu3[i]) / mu3[i]);
    }
    return {Coefficient(a.grid(), std::move(out), a.beta()), residual};
}

Coefficient default_start(const ProblemData& p, const TimeGrid& grid, double scale) {
    double level = 1.0;
    try {
        const double H0 = h_limit(p);
        if (std::isfinite(H0) && H0 > 0.0) {
            level = std::clamp(H0 * H0, 1e-6, 1e6);
        }
    } catch (const Error&) {
        level = 1.0;
    }
    return Coefficient::power_law(grid, level * scale, p.beta);
}

} // namespace

double compute_H(const ProblemData& problem, const TimeGrid& grid, std::size_t i) {
    if (i == 0) {
        throw InputError("H is not defined at t = 0; use h_limit");
    }
    if (i >= grid.size()) {
        throw InputError("time index out of range");
    }
    const std::vector<double> g = left_density(problem, grid);
    const std::vector<double> J = reference_integrals(g, grid, problem.beta, i);
    return H_from(problem, grid[i], J[i]);
}

double h_limit(const ProblemData& problem) {
    problem.validate();
    const double expected = 0.5 * (problem.beta + 1.0);
    PowerFit fit;
    try {
        fit = fit_power_law(problem.t_grid, problem.mu3, 0.1 * problem.T);
    } catch (const InputError& e) {
        throw InputError(std::string("limit hypothesis violated: ") + e.what());
    }
    if (std::abs(fit.slope - expected) > 0.1) {
        throw InputError("limit hypothesis violated: mu3 ~ t^" + std::to_string(fit.slope) + " near 0, expected t^" +
                         std::to_string(expected));
    }
    const double t1 = problem.t_grid[1];
    const double M = problem.mu3[1] / std::pow(t1, expected);
    const double c = problem.f_node(0, 0) - differentiate(problem.t_grid, problem.mu1)[0];
    if (!(c > 0.0)) {
        throw InputError("limit hypothesis violated: f(0,0) - mu1'(0) is not positive");
    }
    return std::sqrt(std::numbers::pi) * M / (std::sqrt(problem.beta + 1.0) * c * I1(problem.beta));
}

BandProfile apriori_band(const ProblemData& problem, const TimeGrid& grid) {
    problem.validate();
    const std::size_t n = grid.size();
    const double beta = problem.beta;
    const std::vector<double> g = left_density(problem, grid);
    const std::vector<double> J = reference_integrals(g, grid, beta, n - 1);

    BandProfile band{grid, std::vector<double>(n, kNaN), std::vector<double>(n, kNaN), std::vector<double>(n, 0.0),
                     std::vector<double>(n, 0.0)};
    try {
        band.H[0] = h_limit(problem);
    } catch (const InputError&) {
        band.H[0] = kNaN;
    }
    double running = std::isfinite(band.H[0]) ? band.H[0] : 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        band.H[i] = H_from(problem, grid[i], J[i]);
        running = std::max(running, band.H[i]);
        band.H_max[i] = running;
        band.upper[i] = running * running * std::pow(grid[i], beta);
    }
    band.H_max[0] = std::isfinite(band.H[0]) ? band.H[0] : band.H_max[1];

    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < problem.nt(); ++i) {
        const double t = problem.t_grid[i];
        if (t > 0.0) {
            band.M1 = std::max(band.M1, problem.mu3[i] / std::pow(t, 0.5 * (beta + 1.0)));
        }
    }
    for (std::size_t i = 1; i < n; ++i) {
        band.M1 = std::max(band.M1, problem.mu3_at(grid[i]) / std::pow(grid[i], 0.5 * (beta + 1.0)));
    }
    for (double v : g) {
        gmin = std::min(gmin, v);
    }
    band.H1 = std::sqrt(std::numbers::pi) * band.M1 / (std::sqrt(beta + 1.0) * gmin * I1(beta));

    // Surrogate for C6: bound every non-singular part of the flux by data
    // magnitudes times the largest values of the regular kernels over the
    // range of theta allowed by the upper band.
    const DerivedData d = derive(problem);
    double phi_x = 0.0, f_x = 0.0, g3 = 0.0;
    for (double v : d.phi_x) {
        phi_x = std::max(phi_x, v);
    }
    for (double v : d.f_x) {
        f_x = std::max(f_x, v);
    }
    for (std::size_t i = 0; i < problem.nt(); ++i) {
        g3 = std::max(g3, d.mu2_t[i] - problem.f_node(problem.nx() - 1, i));
    }
    double gmax = 0.0;
    for (double v : g) {
        gmax = std::max(gmax, v);
    }
    const double T = problem.T;
    const double HT = band.H_max[n - 1];
    const double theta_max = HT * HT * std::pow(T, beta + 1.0) / (beta + 1.0);
    constexpr std::size_t kSamples = 256;
    std::vector<double> D(kSamples), rem(kSamples), far(kSamples);
    for (std::size_t k = 0; k < kSamples; ++k) {
        D[k] = theta_max * std::pow(10.0, -12.0 * static_cast<double>(kSamples - 1 - k) / (kSamples - 1));
    }
    kernels::active().boundary_series(D.data(), rem.data(), far.data(), kSamples, problem.h);
    const double sup_rem = *std::max_element(rem.begin(), rem.end());
    const double sup_far = *std::max_element(far.begin(), far.end());
    const double C4 = phi_x + T * f_x + T * g3 * sup_far + T * gmax * sup_rem;
    const double C5 = C4 * HT;
    for (std::size_t i = 1; i < n; ++i) {
        band.C6 = std::max(band.C6, C5 * std::pow(grid[i], 0.5 * (beta + 1.0)) * band.H[i] / problem.mu3_at(grid[i]));
    }
    double running_min = std::isfinite(band.H[0]) ? band.H[0] : std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        running_min = std::min(running_min, band.H[i]);
        const double denom = band.C6 * std::pow(grid[i], 0.5 * (beta - 1.0)) + 1.0;
        band.lower[i] = running_min * running_min / (denom * denom) * std::pow(grid[i], beta);
    }
    return band;
}

Coefficient picard_step(const FluxOperator& op, const Coefficient& a) { return step_with_residual(op, a).image; }

Coefficient picard_step(const ProblemData& problem, const Coefficient& a) {
    return picard_step(FluxOperator(problem, a.grid()), a);
}

InverseResult picard_solve(const ProblemData& problem, const TimeGrid& grid, const PicardOptions& opts) {
    problem.validate();
    if (!(opts.tolerance > 0.0)) {
        throw InputError("tolerance must be positive");
    }
    if (!(opts.relaxation > 0.0 && opts.relaxation <= 1.0)) {
        throw InputError("relaxation must lie in (0, 1]");
    }
    if (!opts.force) {
        const HypothesisReport report = check_hypotheses(problem);
        if (!report.pass()) {
            std::string names;
            for (const auto& f : report.failures()) {
                names += (names.empty() ? "" : ", ") + f;
            }
            throw InputError("hypotheses not satisfied: " + names);
        }
    }

    const FluxOperator op(problem, grid, opts.x_panels);
    std::optional<BandProfile> band;
    try {
        band = apriori_band(problem, grid);
    } catch (const Error&) {
        if (!opts.force) {
            throw;
        }
    }

    Coefficient a = opts.initial ? *opts.initial : default_start(problem, grid, opts.initial_scale);
    if (a.grid().size() != grid.size() || a.beta() != problem.beta) {
        throw InputError("initial coefficient must live on the solver grid with the problem's beta");
    }
    InverseResult result{a, {}, false, 0, kNaN, band, {}};
    if (opts.keep_iterates) {
        result.iterates.push_back(a);
    }

    double omega = opts.relaxation;
    int alternations = 0;
    double last_sign = 0.0;
    for (std::size_t n = 0;; ++n) {
        const Step s = step_with_residual(op, a);
        std::size_t where = 0;
        const double change = weighted_sup(a, s.image.values(), &where);
        result.residual = s.residual;
        if (change < opts.tolerance && s.residual <= 10.0 * opts.tolerance) {
            result.converged = true;
            break;
        }
        if (n == opts.max_iterations) {
            break;
        }

        const double sign = s.image[where] > a[where] ? 1.0 : -1.0;
        alternations = (last_sign != 0.0 && sign != last_sign) ? alternations + 1 : 0;
        last_sign = sign;
        if (alternations >= 3) {
            omega = std::max(0.5 * omega, 1e-3);
            alternations = 0;
        }

        std::vector<double> next(a.size(), 0.0);
        double excess = band ? -std::numeric_limits<double>::infinity() : kNaN;
        for (std::size_t i = 1; i < a.size(); ++i) {
            next[i] = (1.0 - omega) * a[i] + omega * s.image[i];
            if (band) {
                excess = std::max(excess, next[i] - band->upper[i]);
                if (opts.enforce_band) {
                    next[i] = std::min(next[i], band->upper[i]);
                }
            }
        }
        Coefficient updated(grid, std::move(next), problem.beta);
        IterationRecord rec;
        rec.iteration = n + 1;
        rec.weighted_change = weighted_sup(a, updated.values());
        rec.relaxation = omega;
        rec.residual = s.residual;
        rec.band_excess = excess;
        rec.band_violation = band && excess > 0.0;
        result.log.records.push_back(rec);
        a = std::move(updated);
        if (opts.keep_iterates) {
            result.iterates.push_back(a);
        }
    }
    result.iterations = result.log.records.size();
    result.a = std::move(a);
    return result;
}

ProbeResult uniqueness_probe(const ProblemData& problem, const TimeGrid& grid, std::size_t n_starts, double spread,
                             const PicardOptions& opts) {
    if (n_starts < 2) {
        throw InputError("uniqueness probe needs at least 2 starts");
    }
    if (!(spread >= 1.0)) {
        throw InputError("spread must be at least 1");
    }
    ProbeResult probe;
    std::vector<std::future<InverseResult>> jobs;
    for (std::size_t k = 0; k < n_starts; ++k) {
        const double e = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n_starts - 1);
        const double factor = std::pow(spread, e);
        probe.factors.push_back(factor);
        PicardOptions o = opts;
        o.initial.reset();
        o.initial_scale = opts.initial_scale * factor;
        jobs.push_back(std::async(std::launch::async, [&problem, &grid, o] { return picard_solve(problem, grid, o); }));
    }
    std::string failures;
    for (std::size_t k = 0; k < n_starts; ++k) {
        try {
            InverseResult r = jobs[k].get();
            if (!r.converged) {
                failures += " start " + std::to_string(k) + " (x" + std::to_string(probe.factors[k]) +
                            "): no convergence in " + std::to_string(r.iterations) + " iterations;";
            }
            probe.runs.push_back(std::move(r));
        } catch (const Error& e) {
            failures += " start " + std::to_string(k) + " (x" + std::to_string(probe.factors[k]) + "): " + e.what() + ";";
        }
    }
    if (!failures.empty()) {
        throw SolverError("uniqueness probe:" + failures);
    }
    for (std::size_t j = 0; j < probe.runs.size(); ++j) {
        for (std::size_t k = j + 1; k < probe.runs.size(); ++k) {
            probe.distance = std::max(probe.distance, weighted_distance(probe.runs[j].a, probe.runs[k].a));
        }
    }
    return probe;
}

} // namespace degheat
