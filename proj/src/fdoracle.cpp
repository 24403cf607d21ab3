#include "degheat/fdoracle.hpp"

#include <algorithm>
#include <cmath>

#include "degheat/error.hpp"

namespace degheat {

FdMesh FdMesh::uniform(double h, std::size_t panels, TimeGrid grid) {
    FdMesh m{uniform_nodes(h, panels), std::move(grid)};
    m.validate(h);
    return m;
}

FdMesh FdMesh::clustered(double h, std::size_t panels, TimeGrid grid, double first_width, double growth) {
    if (!(first_width > 0.0) || !(growth > 1.0) || panels < 2) {
        throw InputError("invalid clustered mesh parameters");
    }
    const double coarse = h / static_cast<double>(panels);
    std::vector<double> x{0.0};
    double w = std::min(first_width, coarse);
    while (x.back() + w < h) {
        x.push_back(x.back() + w);
        w = std::min(w * growth, coarse);
    }
    // Merge a too-short last cell into its neighbour.
    if (h - x.back() < 0.5 * w && x.size() > 2) {
        x.pop_back();
    }
    x.push_back(h);
    FdMesh m{std::move(x), std::move(grid)};
    m.validate(h);
    return m;
}

void FdMesh::validate(double h) const {
    if (x.size() < 3) {
        throw InputError("finite-difference mesh needs at least 3 x-nodes");
    }
    require_increasing(x, "finite-difference mesh");
    if (x.front() != 0.0 || std::abs(x.back() - h) > 1e-12 * h) {
        throw InputError("finite-difference mesh must span [0, h]");
    }
    if (!(implicitness >= 0.5 && implicitness <= 1.0)) {
        throw InputError("implicitness must lie in [0.5, 1]");
    }
}

FdInputs FdInputs::from_problem(const ProblemData& p) {
    FdInputs in;
    in.h = p.h;
    in.phi = [&p](double x) { return p.phi_at(x); };
    in.f = [&p](double x, double t) { return p.f_at(x, t); };
    in.mu1 = [&p](double t) { return p.mu1_at(t); };
    in.mu2 = [&p](double t) { return p.mu2_at(t); };
    return in;
}

FdSolution fd_solve(const ProblemData& p, const Coefficient& a, const FdMesh& mesh) {
    return fd_solve(FdInputs::from_problem(p), a, mesh);
}

FdSolution fd_solve(const FdInputs& in, const Coefficient& a, const FdMesh& mesh) {
    mesh.validate(in.h);
    const std::vector<double>& x = mesh.x;
    const TimeGrid& grid = mesh.grid;
    const std::size_t m = x.size();
    const std::size_t nt = grid.size();
    const double th = mesh.implicitness;

    FdSolution sol{TemperatureField{x, grid, std::vector<double>(m * nt)}, FluxTrace{grid, std::vector<double>(nt)}};

    std::vector<double> lo(m), up(m);
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double hl = x[j] - x[j - 1];
        const double hr = x[j + 1] - x[j];
        lo[j] = 2.0 / (hl * (hl + hr));
        up[j] = 2.0 / (hr * (hl + hr));
    }
    const double h0 = x[1] - x[0];
    const double h1 = x[2] - x[1];
    const double c0 = -(2.0 * h0 + h1) / (h0 * (h0 + h1));
    const double c1 = (h0 + h1) / (h0 * h1);
    const double c2 = -h0 / (h1 * (h0 + h1));
    auto flux_of = [&](const double* u) { return c0 * u[0] + c1 * u[1] + c2 * u[2]; };

    std::vector<double> u(m), u_prev(m), f_old(m), f_new(m), rhs(m), cp(m), r(m);
    for (std::size_t j = 0; j < m; ++j) {
        u[j] = in.phi(x[j]);
        f_old[j] = in.f(x[j], grid[0]);
    }
    std::copy(u.begin(), u.end(), sol.field.values.begin());
    sol.flux.values[0] = flux_of(u.data());

    for (std::size_t n = 0; n + 1 < nt; ++n) {
        const double t0 = grid[n];
        const double t1 = grid[n + 1];
        const double dt = t1 - t0;
        for (std::size_t j = 0; j < m; ++j) {
            f_new[j] = in.f(x[j], t1);
        }
        const double left = in.mu1(t1);
        const double right = in.mu2(t1);

        // Every step solves (b - ei L) u_new = r on the interior nodes.
        double b = 1.0;
        double ei = 0.0;
        if (mesh.scheme == FdScheme::Theta) {
            const double am = a.at(0.5 * (t0 + t1));
            ei = dt * am * th;
            const double ee = dt * am * (1.0 - th);
            for (std::size_t j = 1; j + 1 < m; ++j) {
                const double lap = lo[j] * u[j - 1] - (lo[j] + up[j]) * u[j] + up[j] * u[j + 1];
                r[j] = u[j] + ee * lap + dt * (th * f_new[j] + (1.0 - th) * f_old[j]);
            }
        } else if (n == 0) {
            ei = dt * a.at(t1);
            for (std::size_t j = 1; j + 1 < m; ++j) {
                r[j] = u[j] + dt * f_new[j];
            }
        } else {
            const double w = dt / (t0 - grid[n - 1]);
            b = (1.0 + 2.0 * w) / (1.0 + w);
            ei = dt * a.at(t1);
            const double keep = 1.0 + w;
            const double drop = w * w / (1.0 + w);
            for (std::size_t j = 1; j + 1 < m; ++j) {
                r[j] = keep * u[j] - drop * u_prev[j] + dt * f_new[j];
            }
        }

        // Thomas algorithm over interior nodes 1..m-2.
        double prev_c = 0.0;
        double prev_r = 0.0;
        for (std::size_t j = 1; j + 1 < m; ++j) {
            const double a_j = -ei * lo[j];
            const double b_j = b + ei * (lo[j] + up[j]);
            double c_j = -ei * up[j];
            double rj = r[j];
            if (j == 1) {
                rj -= a_j * left;
            }
            if (j + 2 == m) {
                rj -= c_j * right;
                c_j = 0.0;
            }
            const double denom = b_j - (j == 1 ? 0.0 : a_j * prev_c);
            if (denom == 0.0 || !std::isfinite(denom)) {
                throw SolverError("singular tridiagonal system in finite-difference step " + std::to_string(n));
            }
            cp[j] = c_j / denom;
            rhs[j] = (rj - (j == 1 ? 0.0 : a_j * prev_r)) / denom;
            prev_c = cp[j];
            prev_r = rhs[j];
        }
        u_prev = u;
        u[0] = left;
        u[m - 1] = right;
        u[m - 2] = rhs[m - 2];
        for (std::size_t j = m - 2; j-- > 1;) {
            u[j] = rhs[j] - cp[j] * u[j + 1];
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (!std::isfinite(u[j])) {
                throw SolverError("finite-difference solution diverged at step " + std::to_string(n));
            }
        }
        std::copy(u.begin(), u.end(), sol.field.values.begin() + static_cast<std::ptrdiff_t>((n + 1) * m));
        sol.flux.values[n + 1] = flux_of(u.data());
        std::swap(f_old, f_new);
    }
    return sol;
}

} // namespace degheat
