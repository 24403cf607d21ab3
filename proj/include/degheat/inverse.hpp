#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "degheat/coefficient.hpp"
#include "degheat/direct.hpp"
#include "degheat/grid.hpp"
#include "degheat/problem.hpp"

namespace degheat {

/// Bounds on a(t) derived from the data.
///
/// upper[i] = H_max(t_i)^2 t_i^beta is rigorous for the fixed point. lower is
/// a diagnostic: its constant C6 is a surrogate built from the data.
struct BandProfile {
    TimeGrid grid;
    std::vector<double> H;     // H(t_i); H[0] = h_limit, NaN when unavailable
    std::vector<double> H_max; // running maximum of H
    std::vector<double> upper;
    std::vector<double> lower;
    double H1 = 0.0;
    double M1 = 0.0;
    double C6 = 0.0;
};

/// H(t_i) = sqrt(pi) mu3 / (sqrt(beta+1) t^beta J), where
/// J = int_0^t (f(0,tau) - mu1'(tau)) / sqrt(t^(beta+1) - tau^(beta+1)) dtau.
/// Throws InputError for i = 0, AdmissibilityError when f(0,.) - mu1' is
/// nonpositive at a node up to t_i.
double compute_H(const ProblemData& problem, const TimeGrid& grid, std::size_t i);

/// Limit of H at t = 0, with M = lim mu3 / t^((beta+1)/2) taken from the first
/// positive data node after the exponent is checked by a power-law fit over
/// (0, T/10]. Throws InputError("limit hypothesis violated") when the fitted
/// exponent is off by more than 0.1 or the data are not positive there.
double h_limit(const ProblemData& problem);

BandProfile apriori_band(const ProblemData& problem, const TimeGrid& grid);

struct IterationRecord {
    std::size_t iteration = 0;
    double weighted_change = 0.0; // sup_i |a_n - a_{n-1}| / t_i^beta
    double relaxation = 1.0;
    double residual = 0.0;        // sup_i |a_{n-1} u_x - mu3| / mu3 before the update
    double band_excess = 0.0;     // max_i (a_n - upper), NaN without a band
    bool band_violation = false;
};

struct ConvergenceLog {
    std::vector<IterationRecord> records;
};

struct PicardOptions {
    double relaxation = 1.0;
    double tolerance = 1e-8;
    std::size_t max_iterations = 200;
    std::size_t x_panels = 64;
    /// Clip every iterate to the upper band.
    bool enforce_band = true;
    /// Skip the hypothesis gate.
    bool force = false;
    /// Starting coefficient; defaults to clamp(h_limit^2, 1e-6, 1e6) t^beta.
    std::optional<Coefficient> initial;
    /// Multiplies the default starting coefficient.
    double initial_scale = 1.0;
    bool keep_iterates = false;
};

struct InverseResult {
    Coefficient a;
    ConvergenceLog log;
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0; // sup_i |a u_x - mu3| / mu3 of the returned a
    std::optional<BandProfile> band;
    std::vector<Coefficient> iterates; // a_0, a_1, ... when keep_iterates
};

/// P a = mu3 / u_x(0, t; a) at t_i >= t_1 and 0 at t = 0. Throws
/// AdmissibilityError at the first node where mu3 or the flux is nonpositive.
Coefficient picard_step(const FluxOperator& op, const Coefficient& a);
Coefficient picard_step(const ProblemData& problem, const Coefficient& a);

/// Damped iteration a <- (1 - w) a + w P a on `grid`. Stops when the weighted
/// change falls below the tolerance and the relative residual is at most ten
/// times the tolerance. w is halved after the signed change at its largest
/// node alternates three times in a row. Without `force`, data failing
/// check_hypotheses raise InputError. Non-convergence is reported through
/// `converged`, not thrown.
InverseResult picard_solve(const ProblemData& problem, const TimeGrid& grid, const PicardOptions& opts = {});

struct ProbeResult {
    double distance = 0.0;
    std::vector<double> factors;
    std::vector<InverseResult> runs;
};

/// Runs picard_solve from n_starts multiples spread^(-1 + 2k/(n-1)) of the
/// default start and returns the largest pairwise weighted distance. Throws
/// SolverError naming every start that failed or did not converge.
ProbeResult uniqueness_probe(const ProblemData& problem, const TimeGrid& grid, std::size_t n_starts = 4,
                             double spread = 4.0, const PicardOptions& opts = {});

} // namespace degheat
