#pragma once

#include <string>

#include "bcm/forward.hpp"
#include "bcm/linalg.hpp"

namespace bcm {

/// Nyström matrix of the response operator on the first `nodes` kernel nodes.
///  * Dirichlet: -alpha d/dt + beta + \int_0^t r(t-s) . ds
///    (second-order differentiation stencil, trapezoid convolution)
///  * Neumann:   \int_0^t r(t-s) . ds
///  * Scattering: \int r(tau+s) . ds over the node range
Mat response_matrix(const ResponseKernel& k, int nodes);

/// Response operator (or its discrete adjoint W^{-1} R^T W) applied to f,
/// which must be sampled with the kernel step from t = 0.
SampledFunction apply_response(const ResponseKernel& k, const SampledFunction& f, bool adjoint = false);

/// Connecting operator on the nodes first..last of the kernel grid.
///
/// Dirichlet/Neumann: controls on [0, xi] (first = 0, last = index of xi).
/// Scattering: controls on [xi, max(xi, 2a - xi)].
struct ConnectingOperator {
    System system = System::Dirichlet;
    double xi = 0.0;
    int first = 0;
    int last = 0;
    double step = 0.0;
    DenseOperator op;

    int size() const { return last - first + 1; }
    Vec nodes() const;
};

/// Closed form of the connecting operator for the control interval ending at xi
/// (xi must lie on the kernel grid).
///  * Dirichlet:  alpha f + \int_0^xi [p(2xi-t-s) - p(|t-s|)] f(s) ds
///  * Neumann:    -r(0) f - 1/2 \int_0^xi [r'(2xi-t-s) + r'(|t-s|)] f(s) ds
///  * Scattering: f + \int r(tau+s) f(s) ds on [xi, max(xi, 2a-xi)]
ConnectingOperator assemble_connecting(const ResponseKernel& k, double xi);
ConnectingOperator assemble_connecting_at(const ResponseKernel& k, int j);

/// Dirichlet connecting operator on [0, T] built from the factorization
/// -1/2 S^* R J S (odd extension S, integration J, extended response R).
ConnectingOperator assemble_connecting_factorized(const ResponseKernel& k, double T);

/// ||R J - J R||_F / (||R||_F ||J||_F) for the causal response and integration
/// matrices on [0, 2T] restricted to controls with f(0) = 0.
double commutation_defect(const ResponseKernel& k);

struct AdmissibilityVerdict {
    bool admissible = false;
    std::string reason;
    int failed_pivot = 0;     ///< 1-based (0 if none)
    double failed_value = 0.0;
    double pivot_ratio = 0.0; ///< min/max accepted pivot
    int size = 0;
};

/// Admissible iff the Cholesky sweep succeeds and min/max pivot >= 1e-10.
AdmissibilityVerdict check_admissibility(const ConnectingOperator& c);
/// Check the largest connecting operator the kernel supports.
AdmissibilityVerdict check_admissibility(const ResponseKernel& k);

/// Kernel with r replaced by r + shift (p is re-integrated).
ResponseKernel shift_kernel(const ResponseKernel& k, double shift);

/// Galerkin matrix of I + R (scattering) in the cubic B-spline basis centred
/// at tau_2..tau_last: exact B-spline mass matrix plus the kernel sampled at
/// the nodes with the weights of the degree-7 B-spline (the autocorrelation
/// of two cubic ones).
Mat scattering_galerkin(const ResponseKernel& k, int last);

double relative_frobenius(const Mat& a, const Mat& b);

}  // namespace bcm
