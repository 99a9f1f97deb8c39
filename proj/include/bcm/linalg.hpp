#pragma once

#include <functional>

#include "bcm/grid.hpp"

namespace bcm {

/// Nyström discretisation of an integral operator on a uniform grid.
///
/// The operator acts on nodal values as A f.  Internally it is stored in
/// symmetric coordinates E = W^{1/2} A W^{-1/2} (W = quadrature weights), in which
/// self-adjointness with respect to the trapezoid inner product is plain
/// matrix symmetry and positivity is checked by an ordinary Cholesky sweep.
class DenseOperator {
public:
    DenseOperator() = default;

    /// Build from a Nyström matrix A. When `symmetric` is set the symmetric
    /// coordinates are averaged, (E + E^T)/2, to remove quadrature asymmetry noise.
    static DenseOperator from_nystrom(const Mat& A, const Vec& weights, bool symmetric);
    /// Build directly from symmetric coordinates.
    static DenseOperator from_entries(const Mat& E, const Vec& weights, bool symmetric);

    int size() const { return static_cast<int>(entries_.rows()); }
    const Mat& entries() const { return entries_; }
    const Vec& weights() const { return weights_; }
    bool symmetric() const { return symmetric_; }

    /// The Nyström matrix A acting on nodal values.
    Mat nystrom() const;
    Vec apply(const Vec& f) const;
    /// Adjoint with respect to the trapezoid inner product.
    DenseOperator adjoint() const;

private:
    Mat entries_;
    Vec weights_;
    Vec sqrt_w_;
    bool symmetric_ = false;
};

/// alpha(t) f(t) + \int_0^t K(t,s) f(s) ds = rhs(t), trapezoid rule,
/// solved by forward substitution.
SampledFunction solve_volterra2(const std::function<double(double, double)>& kernel,
                                const SampledFunction& rhs, const SampledFunction& diag_coeff);
/// Same with a sampled kernel K(i, j) = K(t_i, t_j) (only j <= i is read).
SampledFunction solve_volterra2(const Mat& kernel, const SampledFunction& rhs, const SampledFunction& diag_coeff);

struct FredholmOptions {
    double ridge = 0.0;                ///< Tikhonov shift mu >= 0
    double max_condition = 1e14;       ///< NonInvertible above this estimate
};

/// Solve (A + mu I) f = rhs for a dense Nyström operator.
Vec solve_fredholm2(const DenseOperator& op, const Vec& rhs, const FredholmOptions& opt = {});
SampledFunction solve_fredholm2(const DenseOperator& op, const SampledFunction& rhs,
                                const FredholmOptions& opt = {});

struct CholeskyResult {
    bool success = false;
    int failed_pivot = 0;       ///< 1-based index of the first rejected pivot (0 if none)
    double failed_value = 0.0;  ///< value of that pivot
    double min_pivot = 0.0;     ///< smallest accepted pivot
    double max_pivot = 0.0;     ///< largest accepted pivot
    Mat L;                      ///< lower factor (valid when success)
};

/// Cholesky sweep of a symmetric matrix.  Succeeds iff every pivot exceeds
/// 1e-12 times the largest diagonal entry.  Throws DomainError on asymmetric input.
CholeskyResult cholesky_posdef(const Mat& A);
CholeskyResult cholesky_posdef(const DenseOperator& op);

}  // namespace bcm
