#include "bcm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bcm/errors.hpp"

namespace bcm {

TimeGrid::TimeGrid(double t_end, int n_steps) : t_end_(t_end), n_steps_(n_steps) {
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw GridError("grid length must be positive and finite");
    if (n_steps < 2) throw GridError("grid needs at least 2 steps, got " + std::to_string(n_steps));
}

Vec TimeGrid::nodes() const {
    Vec t(size());
    for (int j = 0; j < size(); ++j) t[j] = node(j);
    return t;
}

TimeGrid TimeGrid::prefix(int j) const {
    if (j < 2 || j > n_steps_) throw GridError("prefix grid out of range");
    return TimeGrid(node(j), j);
}

SampledFunction::SampledFunction(TimeGrid g, Vec v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
        throw GridError("sample count " + std::to_string(values.size()) + " does not match node count " +
                        std::to_string(grid.size()));
    if (!values.allFinite()) throw GridError("sampled function contains non-finite values");
}

double SampledFunction::at(double t) const { return lagrange4(values, grid.step(), t); }

double lagrange4(const Vec& values, double h, double t) {
    const int n = static_cast<int>(values.size()) - 1;
    if (t <= 0.0) return values[0];
    if (t >= n * h) return values[n];
    const double s = t / h;
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, n - 1);
    // four-point stencil i-1..i+2, shifted inside the grid at the ends
    int lo = std::clamp(i - 1, 0, n - 3);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (s - (lo + b)) / static_cast<double>(a - b);
        acc += w * values[lo + a];
    }
    return acc;
}

}  // namespace bcm
