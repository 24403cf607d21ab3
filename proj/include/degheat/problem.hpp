#pragma once

#include <optional>
#include <string>
#include <vector>

namespace degheat {

/// Tabulated data of the inverse problem
///   u_t = a(t) u_xx + f(x, t),  u(x, 0) = phi,  u(0, t) = mu1,  u(h, t) = mu2,
///   a(t) u_x(0, t) = mu3.
/// f is stored row-major over x_grid x t_grid: f[ix * t_grid.size() + it].
/// Values between samples are piecewise-linear interpolants.
struct ProblemData {
    double h = 1.0;
    double T = 1.0;
    double beta = 1.0;
    std::vector<double> x_grid;
    std::vector<double> t_grid;
    std::vector<double> phi;
    std::vector<double> f;
    std::vector<double> mu1;
    std::vector<double> mu2;
    std::vector<double> mu3;

    /// Throws InputError on any structural violation.
    void validate() const;

    std::size_t nx() const noexcept { return x_grid.size(); }
    std::size_t nt() const noexcept { return t_grid.size(); }
    double f_node(std::size_t ix, std::size_t it) const noexcept { return f[ix * t_grid.size() + it]; }

    double phi_at(double x) const noexcept;
    double f_at(double x, double t) const noexcept;
    double mu1_at(double t) const noexcept;
    double mu2_at(double t) const noexcept;
    double mu3_at(double t) const noexcept;
};

/// Finite-difference derivatives of the tabulated data (second order,
/// one-sided at the ends). f_x and f_xx share the layout of f.
struct DerivedData {
    std::vector<double> phi_x;
    std::vector<double> phi_xx;
    std::vector<double> mu1_t;
    std::vector<double> mu2_t;
    std::vector<double> mu3_t;
    std::vector<double> f_x;
    std::vector<double> f_xx;
};

DerivedData derive(const ProblemData& p);

ProblemData problem_from_json(const std::string& text);
std::string problem_to_json(const ProblemData& p);
ProblemData load_problem(const std::string& path);
void save_problem(const ProblemData& p, const std::string& path);

/// Dirichlet-form problem for v = u_x built from a problem whose mu1, mu2
/// hold u_x(0, t), u_x(h, t) and whose mu3 holds u(0, t): initial data phi',
/// source f_x, the same mu1, mu2, and overdetermination datum mu3' - f(0, t).
ProblemData neumann_transform(const ProblemData& neumann);

struct Location {
    std::optional<double> x;
    std::optional<double> t;
};

struct ConditionCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    Location location;
    bool required = true; // informational checks do not affect pass()
};

struct HypothesisReport {
    std::vector<ConditionCheck> checks;

    bool pass() const noexcept;
    const ConditionCheck* find(const std::string& name) const noexcept;
    std::vector<std::string> failures() const;
};

} // namespace degheat
