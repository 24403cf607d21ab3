#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "degheat/coefficient.hpp"
#include "degheat/problem.hpp"

namespace degheat {

struct ValidateOptions {
    /// Strict inequalities require a margin above epsilon.
    double epsilon = 0.0;
    /// Finite-difference derivatives above this are treated as unbounded.
    double smooth_limit = 1e8;
    /// Allowed deviation of the fitted mu3 exponent from (beta + 1) / 2.
    double slope_tolerance = 0.1;
    /// Compatibility tolerance relative to max(1, |phi|, |mu|).
    double compat_tolerance = 1e-10;
};

/// Checks, at the sample nodes:
///   smoothness            phi'', mu1', mu2', f_xx finite and below smooth_limit
///   smoothness_relaxed    phi', f_x bounded (informational)
///   phi_x_nonnegative     phi' >= 0
///   source_exceeds_left_rate   f(0,t) - mu1'(t) > epsilon
///   right_rate_exceeds_source  mu2'(t) - f(h,t) >= 0
///   mu3_positive          mu3 > epsilon for t > 0
///   mu3_limit             mu3 ~ M t^((beta+1)/2) near 0 with M > 0
///   f_x_nonnegative       f_x >= 0
///   compatibility_left    phi(0) = mu1(0)
///   compatibility_right   phi(h) = mu2(0)
/// Non-strict inequalities tolerate rounding of 1e-12 times the largest
/// magnitude of the checked quantity. Never throws on bad data; structural
/// errors in `problem` still raise InputError.
HypothesisReport check_hypotheses(const ProblemData& problem, const ValidateOptions& opts = {});

/// Least-squares fit log v = log M + slope * log t over nodes with
/// 0 < t <= t_max.
struct PowerFit {
    double slope = 0.0;
    double prefactor = 0.0;
    std::size_t points = 0;
};

/// Throws InputError when fewer than 4 nodes fall in the window or any value
/// there is nonpositive.
PowerFit fit_power_law(std::span<const double> t, std::span<const double> v, double t_max);

/// Degeneration exponent of a: power-law slope over (0, T/10].
double estimate_beta(const Coefficient& a);

/// JSON array with one {name, pass, margin, location, required} object per
/// check; non-finite margins are written as null.
nlohmann::ordered_json report_to_json(const HypothesisReport& report);

} // namespace degheat
