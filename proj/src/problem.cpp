#include "degheat/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "degheat/error.hpp"
#include "degheat/grid.hpp"

namespace degheat {

using ordered_json = nlohmann::ordered_json;

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw InputError(std::string(what) + " contains a non-finite value");
        }
    }
}

void require_size(const std::vector<double>& v, std::size_t n, const char* what) {
    if (v.size() != n) {
        throw InputError(std::string(what) + " has " + std::to_string(v.size()) + " samples, expected " +
                         std::to_string(n));
    }
}

void require_span(const std::vector<double>& g, double end, const char* what) {
    if (g.front() != 0.0) {
        throw InputError(std::string(what) + " must start at 0");
    }
    if (std::abs(g.back() - end) > 1e-12 * std::abs(end)) {
        throw InputError(std::string(what) + " must end at " + std::to_string(end));
    }
}

std::vector<double> read_array(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw InputError(std::string("problem file: missing array '") + key + "'");
    }
    std::vector<double> out;
    out.reserve(j.at(key).size());
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) {
            throw InputError(std::string("problem file: non-numeric entry in '") + key + "'");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

double read_number(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw InputError(std::string("problem file: missing number '") + key + "'");
    }
    return j.at(key).get<double>();
}

} // namespace

void ProblemData::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InputError("domain length h must be positive");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw InputError("horizon T must be positive");
    }
    if (!(beta >= 1.0) || !std::isfinite(beta)) {
        throw InputError("strong degeneration requires beta ≥ 1");
    }
    if (x_grid.size() < 3 || t_grid.size() < 3) {
        throw InputError("x_grid and t_grid need at least 3 nodes each");
    }
    require_increasing(x_grid, "x_grid");
    require_increasing(t_grid, "t_grid");
    require_span(x_grid, h, "x_grid");
    require_span(t_grid, T, "t_grid");
    require_size(phi, x_grid.size(), "phi");
    require_size(mu1, t_grid.size(), "mu1");
    require_size(mu2, t_grid.size(), "mu2");
    require_size(mu3, t_grid.size(), "mu3");
    require_size(f, x_grid.size() * t_grid.size(), "f");
    require_finite(phi, "phi");
    require_finite(f, "f");
    require_finite(mu1, "mu1");
    require_finite(mu2, "mu2");
    require_finite(mu3, "mu3");
}

double ProblemData::phi_at(double x) const noexcept { return interpolate(x_grid, phi, x); }
double ProblemData::mu1_at(double t) const noexcept { return interpolate(t_grid, mu1, t); }
double ProblemData::mu2_at(double t) const noexcept { return interpolate(t_grid, mu2, t); }
double ProblemData::mu3_at(double t) const noexcept { return interpolate(t_grid, mu3, t); }

double ProblemData::f_at(double x, double t) const noexcept {
    const double xc = std::clamp(x, x_grid.front(), x_grid.back());
    const double tc = std::clamp(t, t_grid.front(), t_grid.back());
    const std::size_t i = locate(x_grid, xc);
    const std::size_t j = locate(t_grid, tc);
    const double sx = (xc - x_grid[i]) / (x_grid[i + 1] - x_grid[i]);
    const double st = (tc - t_grid[j]) / (t_grid[j + 1] - t_grid[j]);
    const double f00 = f_node(i, j);
    const double f10 = f_node(i + 1, j);
    const double f01 = f_node(i, j + 1);
    const double f11 = f_node(i + 1, j + 1);
    return (1.0 - sx) * ((1.0 - st) * f00 + st * f01) + sx * ((1.0 - st) * f10 + st * f11);
}

DerivedData derive(const ProblemData& p) {
    DerivedData d;
    d.phi_x = differentiate(p.x_grid, p.phi);
    d.phi_xx = differentiate(p.x_grid, d.phi_x);
    d.mu1_t = differentiate(p.t_grid, p.mu1);
    d.mu2_t = differentiate(p.t_grid, p.mu2);
    d.mu3_t = differentiate(p.t_grid, p.mu3);
    const std::size_t nx = p.nx();
    const std::size_t nt = p.nt();
    d.f_x.resize(nx * nt);
    d.f_xx.resize(nx * nt);
    std::vector<double> column(nx);
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            column[ix] = p.f_node(ix, it);
        }
        const std::vector<double> fx = differentiate(p.x_grid, column);
        const std::vector<double> fxx = differentiate(p.x_grid, fx);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            d.f_x[ix * nt + it] = fx[ix];
            d.f_xx[ix * nt + it] = fxx[ix];
        }
    }
    return d;
}

ProblemData problem_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("problem file: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw InputError("problem file: top level must be an object");
    }
    ProblemData p;
    p.h = read_number(j, "h");
    p.T = read_number(j, "T");
    p.beta = read_number(j, "beta");
    p.x_grid = read_array(j, "x_grid");
    p.t_grid = read_array(j, "t_grid");
    p.phi = read_array(j, "phi");
    p.f = read_array(j, "f");
    p.mu1 = read_array(j, "mu1");
    p.mu2 = read_array(j, "mu2");
    p.mu3 = read_array(j, "mu3");
    p.validate();
    return p;
}

std::string problem_to_json(const ProblemData& p) {
    ordered_json j;
    j["h"] = p.h;
    j["T"] = p.T;
    j["beta"] = p.beta;
    j["x_grid"] = p.x_grid;
    j["t_grid"] = p.t_grid;
    j["phi"] = p.phi;
    j["f"] = p.f;
    j["mu1"] = p.mu1;
    j["mu2"] = p.mu2;
    j["mu3"] = p.mu3;
    return j.dump() + "\n";
}

ProblemData load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open problem file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return problem_from_json(ss.str());
}

void save_problem(const ProblemData& p, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError("cannot write '" + tmp + "'");
        }
        out << problem_to_json(p);
        if (!out) {
            throw InputError("write failed for '" + tmp + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

ProblemData neumann_transform(const ProblemData& neumann) {
    if (neumann.t_grid.size() < 3 || neumann.mu3.size() != neumann.t_grid.size()) {
        throw InputError("mu3 samples too sparse to difference (need at least 3 nodes)");
    }
    if (neumann.x_grid.size() < 3) {
        throw InputError("x samples too sparse to difference (need at least 3 nodes)");
    }
    const DerivedData d = derive(neumann);
    ProblemData v = neumann;
    v.phi = d.phi_x;
    v.f = d.f_x;
    v.mu3.resize(neumann.nt());
    for (std::size_t it = 0; it < neumann.nt(); ++it) {
        v.mu3[it] = d.mu3_t[it] - neumann.f_node(0, it);
    }
    return v;
}

bool HypothesisReport::pass() const noexcept {
    for (const auto& c : checks) {
        if (c.required && !c.pass) {
            return false;
        }
    }
    return true;
}

const ConditionCheck* HypothesisReport::find(const std::string& name) const noexcept {
    for (const auto& c : checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

std::vector<std::string> HypothesisReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
        if (c.required && !c.pass) {
            out.push_back(c.name);
        }
    }
    return out;
}

} // namespace degheat
