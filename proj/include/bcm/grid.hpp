#pragma once

#include <Eigen/Dense>

namespace bcm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Uniform grid on [0, t_end] with n_steps cells (n_steps + 1 nodes).
/// Also used for spatial grids, where the coordinate is x instead of t.
class TimeGrid {
public:
    TimeGrid() = default;
    TimeGrid(double t_end, int n_steps);

    double t_end() const { return t_end_; }
    int n_steps() const { return n_steps_; }
    int size() const { return n_steps_ + 1; }
    double step() const { return t_end_ / n_steps_; }

    /// Node j; the last node is exactly t_end.
    double node(int j) const { return j == n_steps_ ? t_end_ : j * step(); }
    Vec nodes() const;

    /// Sub-grid [0, j*step] sharing the first j+1 nodes.
    TimeGrid prefix(int j) const;

private:
    double t_end_ = 1.0;
    int n_steps_ = 2;
};

using SpaceGrid = TimeGrid;

/// Samples of a function on a uniform grid.
struct SampledFunction {
    TimeGrid grid;
    Vec values;

    SampledFunction() = default;
    SampledFunction(TimeGrid g, Vec v);

    /// Sample a callable at the grid nodes.
    template <class F>
    static SampledFunction sample(const TimeGrid& g, F&& f) {
        Vec v(g.size());
        for (int j = 0; j < g.size(); ++j) v[j] = f(g.node(j));
        return SampledFunction(g, std::move(v));
    }

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int j) const { return values[j]; }

    /// Piecewise-cubic (4-point Lagrange) evaluation between nodes; the value
    /// outside [0, t_end] is clamped to the nearest endpoint value.
    double at(double t) const;
};

/// Four-point Lagrange interpolation of samples on the grid j*h, clamped
/// to the end values outside [0, n*h].  Needs at least 4 samples.
double lagrange4(const Vec& values, double h, double t);

}  // namespace bcm
