#include "bcm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <limits>

#include "bcm/errors.hpp"

namespace bcm {

Vec trapezoid_weights(int n_steps, double step) {
    Vec w = Vec::Constant(n_steps + 1, step);
    w[0] = w[n_steps] = 0.5 * step;
    if (n_steps == 0) w[0] = 0.0;
    return w;
}

Vec trapezoid_weights(const TimeGrid& grid) { return trapezoid_weights(grid.n_steps(), grid.step()); }

double inner(const SampledFunction& f, const SampledFunction& g) {
    if (f.size() != g.size()) throw GridError("inner product of functions on different grids");
    const Vec w = trapezoid_weights(f.grid);
    return (w.array() * f.values.array() * g.values.array()).sum();
}

Vec differentiate(const Vec& f, double h, int order) {
    const Eigen::Index n = f.size();
    if (n < 5) throw GridError("differentiation needs at least 5 nodes");
    Vec d(n);
    if (order == 1) {
        for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
        d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
        d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
    } else if (order == 2) {
        const double h2 = h * h;
        for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / h2;
        d[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h2;
        d[n - 1] = (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / h2;
    } else {
        throw DomainError("differentiation order must be 1 or 2");
    }
    return d;
}

SampledFunction differentiate(const SampledFunction& f, int order) {
    return SampledFunction(f.grid, differentiate(f.values, f.grid.step(), order));
}

Vec cumtrapz(const Vec& f, double h) {
    Vec out = Vec::Zero(f.size());
    for (Eigen::Index i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i] + f[i - 1]);
    return out;
}

SampledFunction time_reverse(const SampledFunction& f) {
    return SampledFunction(f.grid, f.values.reverse().eval());
}

double poly_fit_eval(const std::vector<double>& xs, const std::vector<double>& ys, int degree, double x) {
    const int m = static_cast<int>(xs.size());
    if (m < degree + 1 || ys.size() != xs.size()) throw DomainError("not enough points for polynomial fit");
    // centre and scale for conditioning
    const double c = xs[m / 2];
    double s = 0.0;
    for (double v : xs) s = std::max(s, std::abs(v - c));
    if (s == 0.0) s = 1.0;
    Mat V(m, degree + 1);
    Vec y(m);
    for (int i = 0; i < m; ++i) {
        double u = (xs[i] - c) / s, p = 1.0;
        for (int k = 0; k <= degree; ++k, p *= u) V(i, k) = p;
        y[i] = ys[i];
    }
    const Vec coef = V.colPivHouseholderQr().solve(y);
    const double u = (x - c) / s;
    double acc = 0.0;
    for (int k = degree; k >= 0; --k) acc = acc * u + coef[k];
    return acc;
}

namespace {
Eigen::Index bracket(const Vec& xs, double x) {
    const auto* b = xs.data();
    const auto* e = b + xs.size();
    auto it = std::upper_bound(b, e, x);
    Eigen::Index i = (it - b) - 1;
    return std::clamp<Eigen::Index>(i, 0, xs.size() - 2);
}
}  // namespace

double interp_linear(const Vec& xs, const Vec& ys, double x) {
    if (x <= xs[0]) return ys[0];
    if (x >= xs[xs.size() - 1]) return ys[ys.size() - 1];
    const Eigen::Index i = bracket(xs, x);
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return (1 - t) * ys[i] + t * ys[i + 1];
}

double interp_hermite(const Vec& xs, const Vec& ys, const Vec& dys, double x) {
    if (x <= xs[0]) return ys[0] + dys[0] * (x - xs[0]);
    const Eigen::Index last = xs.size() - 1;
    if (x >= xs[last]) return ys[last] + dys[last] * (x - xs[last]);
    const Eigen::Index i = bracket(xs, x);
    const double h = xs[i + 1] - xs[i];
    const double t = (x - xs[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * ys[i] + h10 * h * dys[i] + h01 * ys[i + 1] + h11 * h * dys[i + 1];
}

double observed_order(double err_a, double err_b, double n_a, double n_b) {
    if (!(err_a > 0.0) || !(err_b > 0.0)) return std::numeric_limits<double>::infinity();
    return std::log(err_a / err_b) / std::log(n_b / n_a);
}

std::vector<SampledFunction> random_smooth_controls(const TimeGrid& g, int count, std::uint64_t seed, int modes) {
    std::mt19937_64 eng(seed);
    std::vector<SampledFunction> out;
    const double pi = std::acos(-1.0);
    for (int c = 0; c < count; ++c) {
        std::vector<double> coef(modes);
        for (double& v : coef) v = 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
        out.push_back(SampledFunction::sample(g, [&](double t) {
            double acc = 0.0;
            for (int m = 1; m <= modes; ++m) acc += coef[m - 1] * (1.0 - std::cos(m * pi * t / g.t_end()));
            return acc;
        }));
    }
    return out;
}

}  // namespace bcm
