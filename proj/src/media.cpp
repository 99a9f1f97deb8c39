#include "bcm/media.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "bcm/errors.hpp"
#include "bcm/numerics.hpp"

namespace bcm {

MediumProfile MediumProfile::from_functions(std::string name, double x_end, int n_cells,
                                            std::function<double(double)> rho_fn,
                                            std::function<double(double)> q_fn,
                                            std::optional<double> support_bound) {
    MediumProfile m;
    m.name = std::move(name);
    m.x_end = x_end;
    m.n_cells = n_cells;
    const SpaceGrid g(x_end, n_cells);
    m.rho.resize(g.size());
    m.q.resize(g.size());
    for (int i = 0; i < g.size(); ++i) {
        m.rho[i] = rho_fn(g.node(i));
        m.q[i] = q_fn(g.node(i));
    }
    m.rho_fn = std::move(rho_fn);
    m.q_fn = std::move(q_fn);
    m.support_bound = support_bound;
    m.validate();
    return m;
}

MediumProfile MediumProfile::from_samples(std::string name, double x_end, Vec rho, Vec q,
                                          std::optional<double> support_bound) {
    if (rho.size() != q.size()) throw DomainError("rho and q sample counts differ");
    MediumProfile m;
    m.name = std::move(name);
    m.x_end = x_end;
    m.n_cells = static_cast<int>(rho.size()) - 1;
    m.rho = std::move(rho);
    m.q = std::move(q);
    m.support_bound = support_bound;
    m.validate();
    return m;
}

void MediumProfile::validate() const {
    (void)grid();
    if (rho.size() != n_cells + 1 || q.size() != n_cells + 1)
        throw DomainError("medium sample count does not match grid");
    if (!rho.allFinite() || !q.allFinite()) throw DomainError("medium samples must be finite");
    if (rho.minCoeff() < 1e-8) throw DomainError("density must satisfy rho >= 1e-8");
    if (support_bound) {
        const double a = *support_bound;
        const SpaceGrid g = grid();
        for (int i = 0; i < g.size(); ++i)
            if (g.node(i) > a && q[i] != 0.0)
                throw DomainError("potential does not vanish beyond the support bound");
    }
}

double MediumProfile::rho_at(double x) const {
    x = std::clamp(x, 0.0, x_end);
    if (rho_fn) return rho_fn(x);
    return lagrange4(rho, x_end / n_cells, x);
}

double MediumProfile::q_at(double x) const {
    x = std::clamp(x, 0.0, x_end);
    if (support_bound && x > *support_bound) return 0.0;
    if (q_fn) return q_fn(x);
    return lagrange4(q, x_end / n_cells, x);
}

// ---------------------------------------------------------------------------

double Eikonal::tau_at(double x) const { return interp_linear(tau_of_x.grid.nodes(), tau_of_x.values, x); }

double Eikonal::x_at(double t) const { return x_of_t.at(t); }

Eikonal build_eikonal(const MediumProfile& m) {
    m.validate();
    const SpaceGrid g = m.grid();
    const Vec tau = cumtrapz(m.rho.cwiseSqrt(), g.step());
    for (int i = 1; i < tau.size(); ++i)
        if (!(tau[i] > tau[i - 1])) throw Error("eikonal accumulation is not strictly increasing");
    Eikonal e;
    e.tau_of_x = SampledFunction(g, tau);
    const TimeGrid tg(tau[tau.size() - 1], m.n_cells);
    const Vec xs = g.nodes();
    Vec xt(tg.size());
    for (int j = 0; j < tg.size(); ++j) xt[j] = interp_linear(tau, xs, tg.node(j));
    e.x_of_t = SampledFunction(tg, xt);
    return e;
}

namespace {
/// Simpson step for the travel-time integrand.
double tau_increment(const MediumProfile& m, double x, double h) {
    return h / 6.0 * (std::sqrt(m.rho_at(x)) + 4 * std::sqrt(m.rho_at(x + 0.5 * h)) + std::sqrt(m.rho_at(x + h)));
}
}  // namespace

double travel_time(const MediumProfile& m, double x) {
    if (x <= 0.0) return 0.0;
    const int n = std::max(64, static_cast<int>(std::ceil(x / 1e-3)));
    const double h = x / n;
    double tau = 0.0;
    for (int i = 0; i < n; ++i) tau += tau_increment(m, i * h, h);
    return tau;
}

double depth_at_time(const MediumProfile& m, double t) {
    if (t <= 0.0) return 0.0;
    const double h = 1e-3 / std::sqrt(std::max(1.0, m.rho_at(0.0)));
    double x = 0.0, tau = 0.0;
    for (;;) {
        const double d = tau_increment(m, x, h);
        if (tau + d >= t) {
            // linear finish inside the last cell
            return x + h * (t - tau) / d;
        }
        tau += d;
        x += h;
        if (x > 1e6) throw Error("travel time never reaches requested value");
    }
}

Vec rk4_sturm_liouville(const std::function<double(double)>& q, double lambda, double x0, double x1, int n,
                        double y0, double y0p) {
    if (n < 1) throw GridError("RK4 needs at least one step");
    const double h = (x1 - x0) / n;
    Vec out(n + 1);
    double y = y0, yp = y0p;
    out[0] = y;
    // y'' = (q - lambda) y
    auto acc = [&](double x, double yy) { return (q(x) - lambda) * yy; };
    for (int k = 0; k < n; ++k) {
        const double x = x0 + k * h;
        const double k1y = yp, k1p = acc(x, y);
        const double k2y = yp + 0.5 * h * k1p, k2p = acc(x + 0.5 * h, y + 0.5 * h * k1y);
        const double k3y = yp + 0.5 * h * k2p, k3p = acc(x + 0.5 * h, y + 0.5 * h * k2y);
        const double k4y = yp + h * k3p, k4p = acc(x + h, y + h * k3y);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        yp += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        out[k + 1] = y;
    }
    return out;
}

SampledFunction sl_solution(const MediumProfile& m, double y0, double y0p, double lambda) {
    const SpaceGrid g = m.grid();
    auto q = [&m](double x) { return m.q_at(x); };
    return SampledFunction(g, rk4_sturm_liouville(q, lambda, 0.0, m.x_end, m.n_cells, y0, y0p));
}

double scatter_bump_q(double x) {
    const double u = (x - 1.0) / 0.5;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

MediumProfile make_test_medium(const std::string& name, double x_end, int n_cells) {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    if (name == "unit") return MediumProfile::from_functions(name, x_end, n_cells, one, zero);
    if (name == "gl_rational")
        return MediumProfile::from_functions(name, x_end, n_cells, one, [](double x) { return 6.0 / (1.0 + x * x); });
    if (name == "krein_exp")
        return MediumProfile::from_functions(name, x_end, n_cells, [](double x) { return 4.0 * std::exp(2.0 * x); },
                                             zero);
    if (name == "krein_exp_unit")
        return MediumProfile::from_functions(name, x_end, n_cells, [](double x) { return std::exp(2.0 * x); }, zero);
    if (name == "scatter_bump") {
        if (x_end < 1.5) throw DomainError("scatter_bump needs x_end >= 1.5");
        return MediumProfile::from_functions(name, x_end, n_cells, one, scatter_bump_q, 1.5);
    }
    if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") return read_medium_csv(name);
    throw DomainError("unknown medium '" + name + "'");
}

// ---------------------------------------------------------------------------

MediumProfile read_medium_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open medium file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty medium file '" + path + "'");
    auto trim = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
        return s;
    };
    if (trim(line) != "x,rho,q") throw ParseError("medium file must start with header 'x,rho,q'");
    std::vector<double> xs, rs, qs;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw ParseError("line " + std::to_string(lineno) + ": expected three columns");
        try {
            xs.push_back(std::stod(a));
            rs.push_back(std::stod(b));
            qs.push_back(std::stod(c));
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": malformed number");
        }
    }
    if (xs.size() < 3) throw ParseError("medium file needs at least 3 rows");
    if (std::abs(xs[0]) > 1e-12) throw ParseError("medium grid must start at x = 0");
    const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw ParseError("x column must be strictly increasing");
        if (std::abs((xs[i] - xs[i - 1]) - h) > 1e-9 * h)
            throw ParseError("x column is not uniformly spaced (row " + std::to_string(i + 2) + ")");
    }
    Vec rho = Eigen::Map<Vec>(rs.data(), static_cast<Eigen::Index>(rs.size()));
    Vec q = Eigen::Map<Vec>(qs.data(), static_cast<Eigen::Index>(qs.size()));
    return MediumProfile::from_samples(path, xs.back(), rho, q);
}

std::optional<double> potential_support(const MediumProfile& m) {
    const SpaceGrid g = m.grid();
    for (int i = g.size() - 1; i >= 0; --i)
        if (m.q[i] != 0.0) return g.node(std::min(i + 1, g.size() - 1));
    return std::nullopt;
}

void write_medium_csv(const std::string& path, const MediumProfile& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "x,rho,q\n";
    const SpaceGrid g = m.grid();
    char buf[128];
    for (int i = 0; i < g.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.node(i), m.rho[i], m.q[i]);
        out << buf;
    }
}

}  // namespace bcm
