#include "degheat/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "degheat/error.hpp"
#include "degheat/kernels.hpp"

namespace degheat {

namespace {

template <std::size_t N>
struct UnitRule {
    std::array<double, N> x{};
    std::array<double, N> w{};

    UnitRule() {
        using G = boost::math::quadrature::gauss<double, N>;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        std::size_t k = 0;
        for (std::size_t m = a.size(); m-- > 0;) {
            if (a[m] != 0.0) {
                x[k] = 0.5 * (1.0 - a[m]);
                w[k] = 0.5 * wt[m];
                ++k;
            }
        }
        if (N % 2 == 1) {
            x[k] = 0.5;
            w[k] = 0.5 * wt[0];
            ++k;
        }
        for (std::size_t m = 0; m < a.size(); ++m) {
            if (a[m] != 0.0) {
                x[k] = 0.5 * (1.0 + a[m]);
                w[k] = 0.5 * wt[m];
                ++k;
            }
        }
    }
};

template <std::size_t N>
GaussRule rule() {
    static const UnitRule<N> r;
    return {r.x, r.w};
}

void append_point(TimePoints& p, double tau, double gap, double weight, double frac, std::size_t panel) {
    p.tau.push_back(tau);
    p.gap.push_back(gap);
    p.weight.push_back(weight);
    p.left.push_back(weight * (1.0 - frac));
    p.right.push_back(weight * frac);
    p.panel.push_back(static_cast<std::uint32_t>(panel));
}

[[noreturn]] void flat(std::size_t panel) {
    throw SolverError("theta is flat on panel " + std::to_string(panel) + " (coefficient vanished after t = 0)");
}

// (erf(b) - erf(a)) / 2 without cancellation in the tails.
double half_erf_diff(double a, double b) {
    if (a >= 0.0) {
        return 0.5 * (std::erfc(a) - std::erfc(b));
    }
    if (b <= 0.0) {
        return 0.5 * (std::erfc(-b) - std::erfc(-a));
    }
    return 0.5 * (std::erf(b) - std::erf(a));
}

double exact_integral(std::span<const double> nodes, double h, double x, double d, Boundary kind,
                      std::span<const double> g) {
    const double sd = std::sqrt(d);
    const double reach = 13.0 * sd;
    const double norm = 1.0 / (2.0 * std::sqrt(std::numbers::pi * d));
    const double sgn = kind == Boundary::Dirichlet ? -1.0 : 1.0;
    const ImageRange r = image_range(GreenParams{kind, h, 1e-16}, d);
    const std::size_t last = nodes.size() - 2;

    auto one_centre = [&](double c) {
        if (c + reach < 0.0 || c - reach > h) {
            return 0.0;
        }
        const std::size_t p0 = locate(nodes, c - reach);
        const std::size_t p1 = std::min(locate(nodes, c + reach), last);
        double sum = 0.0;
        double ya = nodes[p0] - c;
        double ka = norm * std::exp(-ya * ya / (4.0 * d));
        for (std::size_t p = p0; p <= p1; ++p) {
            const double yb = nodes[p + 1] - c;
            const double kb = norm * std::exp(-yb * yb / (4.0 * d));
            const double slope = (g[p + 1] - g[p]) / (nodes[p + 1] - nodes[p]);
            const double dphi = half_erf_diff(ya / (2.0 * sd), yb / (2.0 * sd));
            sum += (g[p] - slope * ya) * dphi - 2.0 * d * slope * (kb - ka);
            ya = yb;
            ka = kb;
        }
        return sum;
    };

    double total = 0.0;
    for (int n = r.lo; n <= r.hi; ++n) {
        total += one_centre(x + 2.0 * n * h);
        total += sgn * one_centre(-x - 2.0 * n * h);
    }
    return total;
}

} // namespace

GaussRule gauss_legendre(std::size_t n) {
    switch (n) {
    case 4:
        return rule<4>();
    case 8:
        return rule<8>();
    case 16:
        return rule<16>();
    case 64:
        return rule<64>();
    default:
        throw InputError("unsupported Gauss-Legendre order");
    }
}

double I1(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw InputError("I1 needs beta >= 0");
    }
    // z = 1 - u^2 removes the endpoint singularity at z = 1 for every beta.
    // For non-integer beta the integrand keeps a weak z^(beta+1) kink at
    // z = 0 (u = 1), so the u-interval is refined towards 1.
    const GaussRule gl = gauss_legendre(64);
    const double e = beta + 1.0;
    double sum = 0.0;
    double u0 = 0.0;
    double len = 0.5;
    for (int piece = 0; piece < 6; ++piece) {
        const double u1 = piece == 5 ? 1.0 : u0 + len;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double u = u0 + (u1 - u0) * gl.x[q];
            const double den = -std::expm1(e * std::log1p(-u * u));
            sum += (u1 - u0) * gl.w[q] * 2.0 * u / std::sqrt(den);
        }
        u0 = u1;
        len *= 0.5;
    }
    return sum;
}

TimePoints time_points(const Theta& theta, std::size_t i, int levels) {
    const TimeGrid& grid = theta.grid();
    if (i == 0 || i >= grid.size()) {
        throw InputError("time quadrature target must be an interior or final node");
    }
    TimePoints p;
    const std::size_t reserve = 16 * (i - 1) + (levels > 0 ? 8 * (levels + 1) : 16);
    p.tau.reserve(reserve);
    p.gap.reserve(reserve);
    p.weight.reserve(reserve);
    p.left.reserve(reserve);
    p.right.reserve(reserve);
    p.panel.reserve(reserve);

    const double ti = grid[i];
    const double thi = theta[i];
    const GaussRule g16 = gauss_legendre(16);
    const GaussRule g8 = gauss_legendre(8);

    for (std::size_t j = 0; j + 1 < i; ++j) {
        const double ta = grid[j];
        const double tb = grid[j + 1];
        const double width = tb - ta;
        const double gap0 = ti - tb;
        if (width <= gap0) {
            for (std::size_t q = 0; q < 16; ++q) {
                const double gap = thi - theta.at_panel_point(j, q);
                if (!(gap > 0.0)) {
                    flat(j);
                }
                append_point(p, ta + width * g16.x[q], gap, width * g16.w[q], g16.x[q], j);
            }
            continue;
        }
        // Panel much wider than its distance to t_i: split it geometrically
        // towards t_{j+1} so every piece is no wider than its distance to t_i.
        const double base = thi - theta[j + 1];
        if (!(base > 0.0)) {
            flat(j + 1);
        }
        double hi = tb;
        double len = gap0;
        while (hi > ta) {
            const double lo = std::max(ta, hi - len);
            const double piece = hi - lo;
            for (std::size_t q = 0; q < 16; ++q) {
                const double tau = lo + piece * g16.x[q];
                const double gap = base + theta.tail(j + 1, tb - tau);
                append_point(p, tau, gap, piece * g16.w[q], (tau - ta) / width, j);
            }
            hi = lo;
            len *= 2.0;
        }
    }

    const std::size_t j = i - 1;
    const double width = grid.width(j);
    auto final_piece = [&](double u0, double u1, const GaussRule& gl) {
        const double piece = u1 - u0;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double u = u0 + piece * gl.x[q];
            const double s = width * u * u;
            const double gap = theta.tail(i, s);
            if (!(gap > 0.0)) {
                flat(j);
            }
            append_point(p, ti - s, gap, piece * gl.w[q] * 2.0 * width * u, 1.0 - u * u, j);
        }
    };
    if (levels <= 0) {
        final_piece(0.0, 1.0, g16);
    } else {
        double u1 = 1.0;
        for (int l = 0; l < levels; ++l) {
            final_piece(0.5 * u1, u1, g8);
            u1 *= 0.5;
        }
        final_piece(0.0, u1, g8);
    }
    return p;
}

SingularRule build_singular_rule(const Theta& theta, std::size_t target) {
    const TimePoints p = time_points(theta, target);
    std::vector<double> k(p.size());
    kernels::active().inv_sqrt(p.gap.data(), k.data(), p.size());
    SingularRule rule;
    rule.target = target;
    rule.weights.assign(target + 1, 0.0);
    for (std::size_t m = 0; m < p.size(); ++m) {
        rule.weights[p.panel[m]] += p.left[m] * k[m];
        rule.weights[p.panel[m] + 1] += p.right[m] * k[m];
    }
    return rule;
}

double singular_integral(std::span<const double> g, const Theta& theta, std::size_t target) {
    if (g.size() != theta.grid().size()) {
        throw InputError("integrand is not sampled on the quadrature grid");
    }
    const SingularRule rule = build_singular_rule(theta, target);
    double sum = 0.0;
    for (std::size_t j = 0; j <= target; ++j) {
        sum += rule.weights[j] * g[j];
    }
    return sum;
}

SpatialRule::SpatialRule(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2 || nodes_.front() != 0.0) {
        throw InputError("spatial grid must start at 0 and have at least two nodes");
    }
    require_increasing(nodes_, "spatial grid");
    const GaussRule g4 = gauss_legendre(4);
    points_.reserve(4 * (nodes_.size() - 1));
    for (std::size_t p = 0; p + 1 < nodes_.size(); ++p) {
        const double w = nodes_[p + 1] - nodes_[p];
        max_width_ = std::max(max_width_, w);
        for (std::size_t q = 0; q < 4; ++q) {
            points_.push_back(nodes_[p] + w * g4.x[q]);
        }
    }
}

SpatialRule::Prepared SpatialRule::prepare(std::span<const double> g) const {
    if (g.size() != nodes_.size()) {
        throw InputError("integrand is not sampled on the spatial grid");
    }
    Prepared out;
    out.g.assign(g.begin(), g.end());
    double scale = 0.0;
    double spread = 0.0;
    for (double v : g) {
        scale = std::max(scale, std::abs(v));
        spread = std::max(spread, std::abs(v - g[0]));
    }
    out.zero = scale == 0.0;
    out.constant = spread <= 1e-13 * scale;
    const GaussRule g4 = gauss_legendre(4);
    out.wg.resize(points_.size());
    for (std::size_t p = 0; p + 1 < nodes_.size(); ++p) {
        const double w = nodes_[p + 1] - nodes_[p];
        for (std::size_t q = 0; q < 4; ++q) {
            out.wg[4 * p + q] = w * g4.w[q] * ((1.0 - g4.x[q]) * g[p] + g4.x[q] * g[p + 1]);
        }
    }
    return out;
}

double SpatialRule::integrate(double x, double d, Boundary kind, const Prepared& g) const {
    if (!(d > 0.0)) {
        throw InputError("spatial integral needs theta_diff > 0");
    }
    if (g.zero) {
        return 0.0;
    }
    if (g.constant && kind == Boundary::Neumann) {
        return g.g[0];
    }
    if (std::sqrt(d) < 4.0 * max_width_) {
        return exact(x, d, kind, g.g);
    }
    const double h = length();
    const ImageRange r = image_range(GreenParams{kind, h, 1e-16}, d);
    thread_local std::vector<double> buf;
    buf.resize(points_.size());
    const auto& k = kernels::active();
    k.green_batch(points_.data(), buf.data(), points_.size(), x, 1.0 / (4.0 * d), 2.0 * h, r.lo, r.hi,
                  kind == Boundary::Dirichlet ? -1.0 : 1.0, 1.0 / (2.0 * std::sqrt(std::numbers::pi * d)));
    return k.dot(buf.data(), g.wg.data(), buf.size());
}

double SpatialRule::integrate(double x, double d, Boundary kind, std::span<const double> g) const {
    return integrate(x, d, kind, prepare(g));
}

double SpatialRule::mass(double x, double d, Boundary kind) const {
    if (!(d > 0.0)) {
        throw InputError("spatial integral needs theta_diff > 0");
    }
    const double h = length();
    const std::array<double, 2> nodes{0.0, h};
    const std::array<double, 2> one{1.0, 1.0};
    return exact_integral(nodes, h, x, d, kind, one);
}

double SpatialRule::exact(double x, double d, Boundary kind, std::span<const double> g) const {
    return exact_integral(nodes_, length(), x, d, kind, g);
}

} // namespace degheat
