#pragma once

#include <cstdint>
#include <vector>

#include "bcm/grid.hpp"

namespace bcm {

/// Trapezoid weights step*(1/2, 1, ..., 1, 1/2) for a grid with n+1 nodes.
Vec trapezoid_weights(int n_steps, double step);
Vec trapezoid_weights(const TimeGrid& grid);

/// Trapezoid approximation of the L2 inner product (f, g).
double inner(const SampledFunction& f, const SampledFunction& g);

/// First or second derivative, second order everywhere: centred stencils inside,
/// three/four point one-sided stencils at both ends. Needs at least 5 nodes.
SampledFunction differentiate(const SampledFunction& f, int order);
Vec differentiate(const Vec& f, double step, int order);

/// Cumulative trapezoid integral, starting from 0 at the first node.
Vec cumtrapz(const Vec& f, double step);

/// Node j receives node n-j.
SampledFunction time_reverse(const SampledFunction& f);

/// Least-squares polynomial of the given degree through (x_i, y_i), evaluated at x.
double poly_fit_eval(const std::vector<double>& xs, const std::vector<double>& ys, int degree, double x);

/// Linear interpolation of a strictly increasing table (xs, ys) at x,
/// clamped at both ends.
double interp_linear(const Vec& xs, const Vec& ys, double x);

/// Cubic Hermite interpolation of (xs, ys) with slopes dys at x.
double interp_hermite(const Vec& xs, const Vec& ys, const Vec& dys, double x);

/// Observed convergence order from errors on grids n_a < n_b.
double observed_order(double err_a, double err_b, double n_a, double n_b);

/// Seeded smooth controls f(t) = sum_m c_m (1 - cos(m pi t / t_end)), m = 1..modes,
/// with c_m uniform in [-1, 1] drawn from the raw output of mt19937_64
/// (identical on every platform).  Every control satisfies f(0) = f'(0) = 0.
std::vector<SampledFunction> random_smooth_controls(const TimeGrid& g, int count, std::uint64_t seed,
                                                    int modes = 4);

}  // namespace bcm
