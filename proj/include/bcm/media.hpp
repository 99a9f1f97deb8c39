#pragma once

#include <functional>
#include <optional>
#include <string>

#include "bcm/grid.hpp"

namespace bcm {

/// Sampled density rho(x) > 0 and potential q(x) on [0, x_end].
///
/// Catalog media additionally carry their analytic forms, which the solvers
/// prefer over interpolation.  Beyond x_end both coefficients are extended
/// by their value at x_end (finite propagation speed keeps this invisible to
/// every computation on [0, x(T)]).
struct MediumProfile {
    std::string name;
    double x_end = 1.0;
    int n_cells = 2;
    Vec rho;
    Vec q;
    std::optional<double> support_bound;  ///< q = 0 for x > a (scattering media)
    std::function<double(double)> rho_fn;  ///< optional analytic density
    std::function<double(double)> q_fn;    ///< optional analytic potential

    static MediumProfile from_functions(std::string name, double x_end, int n_cells,
                                        std::function<double(double)> rho_fn, std::function<double(double)> q_fn,
                                        std::optional<double> support_bound = std::nullopt);
    static MediumProfile from_samples(std::string name, double x_end, Vec rho, Vec q,
                                      std::optional<double> support_bound = std::nullopt);

    SpaceGrid grid() const { return SpaceGrid(x_end, n_cells); }
    double rho_at(double x) const;
    double q_at(double x) const;

    /// Throws DomainError when an invariant is violated.
    void validate() const;
};

/// Travel-time coordinate tau(x) = \int_0^x rho^{1/2} and its inverse x(t).
struct Eikonal {
    SampledFunction tau_of_x;  ///< on the medium's spatial grid
    SampledFunction x_of_t;    ///< on a uniform time grid over [0, tau(x_end)]

    double tau_at(double x) const;
    double x_at(double t) const;
};

Eikonal build_eikonal(const MediumProfile& m);

/// Depth x at which the travel time reaches t, following the medium
/// (with constant extension) past x_end if needed.
double depth_at_time(const MediumProfile& m, double t);
/// Travel time tau(x) for any x >= 0, integrating the (extended) density.
double travel_time(const MediumProfile& m, double x);

/// Classical RK4 for -y'' + q y = lambda y from x0 to x1 (either direction) in
/// n steps; returns the n+1 values of y at x0 + k (x1 - x0)/n.
Vec rk4_sturm_liouville(const std::function<double(double)>& q, double lambda, double x0, double x1, int n,
                        double y0, double y0p);

/// Oracle solution of -y'' + q y = lambda y, y(0) = y0, y'(0) = y0p on the
/// medium's spatial grid (rho is ignored).
SampledFunction sl_solution(const MediumProfile& m, double y0, double y0p, double lambda = 0.0);

/// Catalog media: unit, gl_rational, krein_exp, krein_exp_unit, scatter_bump;
/// any name ending in ".csv" is read as a medium CSV file.
MediumProfile make_test_medium(const std::string& name, double x_end = 4.0, int n_cells = 4000);

/// Medium CSV `x,rho,q`: strictly increasing, uniformly spaced x starting at 0.
MediumProfile read_medium_csv(const std::string& path);
void write_medium_csv(const std::string& path, const MediumProfile& m);

/// Smallest grid node beyond which the sampled potential vanishes
/// (nullopt when q is identically zero).
std::optional<double> potential_support(const MediumProfile& m);

/// The smooth scattering bump e*exp(-1/(1-((x-1)/0.5)^2)) on (0.5, 1.5).
double scatter_bump_q(double x);

}  // namespace bcm
