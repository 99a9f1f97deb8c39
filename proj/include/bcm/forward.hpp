#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcm/grid.hpp"
#include "bcm/media.hpp"

namespace bcm {

enum class System { Dirichlet, Neumann, Scattering };

std::string to_string(System s);
System system_from_string(const std::string& s);

/// Snapshot data of a leapfrog solve.
///
/// The full space-time field is never stored: the solver keeps boundary
/// traces at full time resolution, an optional trace at one interior node,
/// and the spatial slices at requested time levels.
struct WaveField {
    System system = System::Dirichlet;
    double hx = 0.0;  ///< spatial step, nodes x_i = i*hx, i = 0..nx-1
    double ht = 0.0;  ///< time step, levels t_j = t0 + j*ht, j = 0..nt
    double t0 = 0.0;
    int nx = 0;
    int nt = 0;

    Vec trace0, trace1, trace2;  ///< u at x_0, x_1, x_2 for every time level
    int record_node = -1;
    Vec record;                  ///< u at record_node for every level (if requested)

    std::vector<int> slice_levels;  ///< time levels of stored slices (ascending)
    Mat slices;                     ///< nx x slice_levels.size()

    double time(int j) const { return t0 + j * ht; }
    double x(int i) const { return i * hx; }
    /// Column of `slices` holding level j; throws if not stored.
    Vec slice(int level) const;
    /// Cubic interpolation of a stored slice at position x.
    double slice_at(int level, double x) const;
};

struct WaveOptions {
    double ht = 0.0;       ///< required time step
    double hx = 0.0;       ///< 0: derived from cfl and the minimum density on the domain
    double cfl = 0.9;      ///< target ratio ht / (hx min rho^{1/2})
    double x_end = 0.0;    ///< 0: automatic domain length
    double t0 = 0.0;       ///< start time (scattering only; must be a multiple of ht)
    int slice_every = 0;   ///< store every k-th level (0: none)
    std::vector<int> slice_levels;  ///< additional levels to store
    int record_node = -1;  ///< interior node recorded at every level
    /// scattering: support of the incoming profile f (inf, sup)
    double support_lo = 0.0, support_hi = 0.0;
    /// scattering: right end of the region that must stay free of boundary echoes
    double x_interest = 0.0;
};

/// Explicit leapfrog for rho u_tt - u_xx + q u = 0.
///
///  * Dirichlet:  u(0,t) = f(t); zero initial data; f(0) must vanish.
///  * Neumann:    u_x(0,t) = f(t) via a ghost node; f(0) must vanish.
///  * Scattering: rho = 1, incoming wave u = f(x+t) imposed at t0 < -a;
///                u(0,t) = 0 (only influences t > x + inf supp f).
/// The control is a callable on the time axis (the incoming profile for scattering).
WaveField solve_wave(System system, const MediumProfile& m, const std::function<double(double)>& control,
                     double horizon, const WaveOptions& opt);
/// Same with a sampled control, interpolated by piecewise cubics.
WaveField solve_wave(System system, const MediumProfile& m, const SampledFunction& control, double horizon,
                     const WaveOptions& opt);

/// Largest |u(x_i,t_j)| / max|u| over stored slices at points with t_j < tau(x_i) - 2 ht.
double finite_speed_violation(const WaveField& field, const MediumProfile& m);

/// Sampled response kernel: the complete inverse data of one system.
struct ResponseKernel {
    System system = System::Dirichlet;
    double T = 1.0;        ///< horizon (Dirichlet/Neumann); support bound a for scattering
    SampledFunction r;     ///< on [0, 2T] (Dirichlet/Neumann) or [0, 2a + margin] (scattering)
    double alpha = 1.0;    ///< rho^{1/2}(0)
    double beta = 0.0;     ///< -rho'(0) / (4 rho(0))
    SampledFunction p;     ///< Dirichlet: p(t) = (1/2) \int_0^t r (trapezoid, exact)
    std::optional<double> a;  ///< scattering support bound
    double pulse_width = 0.0;  ///< width of the probe pulse used for extraction

    double step() const { return r.grid.step(); }
    /// Number of kernel steps per horizon T (Dirichlet/Neumann) or per 2a (scattering).
    int n() const;
    /// Index of the node at 2a (scattering).
    int support_index() const;

    static ResponseKernel dirichlet(double T, const Vec& r, double alpha = 1.0, double beta = 0.0);
    static ResponseKernel neumann(double T, const Vec& r, double alpha = 1.0, double beta = 0.0);
    /// r sampled with step 2a/n on n + extra + 1 nodes.
    static ResponseKernel scattering(double a, int n, const Vec& r);
};

struct ExtractionOptions {
    int refine = 8;        ///< leapfrog time steps per kernel step
    int probe_steps = 6;   ///< probe mollifier width in kernel steps
    double cfl = 0.9;
    int tail_steps = 8;    ///< scattering: kernel nodes kept beyond 2a
};

/// Synthesize the response kernel of a medium by finite-difference probing.
/// Dirichlet/Neumann: kernel step T/n on [0, 2T].  Scattering: kernel step
/// 2a/n on [0, 2a] (plus a short zero tail); T is ignored.
ResponseKernel extract_response_kernel(System system, const MediumProfile& m, double T, int n,
                                       const ExtractionOptions& opt = {});

/// rho'(0) by the one-sided second-order stencil on the profile samples.
double density_slope_at_origin(const MediumProfile& m);

/// Apply the control operator through a forward solve.
///  * Dirichlet: u^f(., T) on [0, x(T)];  Neumann: u^f_t(., T) on [0, x(T)]
///    (f on [0, T], f(0) = 0);  both resampled with f's step count.
///  * Scattering: u^f(., 0) on [0, L] for f sampled on [0, L] (f(0) = 0).
SampledFunction apply_control_operator(System system, const MediumProfile& m, const SampledFunction& f, double T,
                                       int refine = 8);

/// Cubic B-spline with support [-2, 2] (a smoothed hat).
double cubic_bspline(double u);

/// Gram matrix (trapezoid rule on the FD grid) of the scattering states
/// u^{e_i}(., 0) for the delayed basis e_i(tau) = B((tau - tau_i)/h), h = 2a/n,
/// i = 2..n, each computed by its own leapfrog solve.
Mat scattering_state_gram(const MediumProfile& m, int n, int refine = 8);

}  // namespace bcm
