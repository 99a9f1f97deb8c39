#include "bcm/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bcm/errors.hpp"

namespace bcm {

DenseOperator DenseOperator::from_entries(const Mat& E, const Vec& weights, bool symmetric) {
    if (E.rows() != E.cols()) throw DomainError("dense operator must be square");
    if (weights.size() != E.rows()) throw DomainError("weight count does not match operator size");
    if (!E.allFinite()) throw DomainError("dense operator has non-finite entries");
    if ((weights.array() <= 0.0).any()) throw DomainError("quadrature weights must be positive");
    DenseOperator op;
    op.entries_ = symmetric ? Mat(0.5 * (E + E.transpose())) : E;
    op.weights_ = weights;
    op.sqrt_w_ = weights.cwiseSqrt();
    op.symmetric_ = symmetric;
    return op;
}

DenseOperator DenseOperator::from_nystrom(const Mat& A, const Vec& weights, bool symmetric) {
    if (A.rows() != A.cols() || weights.size() != A.rows())
        throw DomainError("Nystrom matrix and weights disagree in size");
    const Vec s = weights.cwiseSqrt();
    Mat E = s.asDiagonal() * A * s.cwiseInverse().asDiagonal();
    return from_entries(E, weights, symmetric);
}

Mat DenseOperator::nystrom() const { return sqrt_w_.cwiseInverse().asDiagonal() * entries_ * sqrt_w_.asDiagonal(); }

Vec DenseOperator::apply(const Vec& f) const {
    if (f.size() != size()) throw DomainError("operand size does not match operator");
    return sqrt_w_.cwiseInverse().cwiseProduct(entries_ * sqrt_w_.cwiseProduct(f));
}

DenseOperator DenseOperator::adjoint() const {
    if (symmetric_) return *this;
    return from_entries(entries_.transpose(), weights_, false);
}

// ---------------------------------------------------------------------------

SampledFunction solve_volterra2(const Mat& K, const SampledFunction& rhs, const SampledFunction& diag) {
    const int n = rhs.grid.n_steps();
    if (diag.size() != rhs.size() || K.rows() < rhs.size() || K.cols() < rhs.size())
        throw DomainError("Volterra operands disagree in size");
    if (diag.values.cwiseAbs().minCoeff() < 1e-10)
        throw SingularEquation("Volterra diagonal coefficient vanishes (min |alpha| < 1e-10)");
    const double h = rhs.grid.step();
    Vec f(n + 1);
    for (int i = 0; i <= n; ++i) {
        double acc = rhs[i];
        if (i > 0) {
            acc -= 0.5 * h * K(i, 0) * f[0];
            for (int j = 1; j < i; ++j) acc -= h * K(i, j) * f[j];
        }
        const double d = diag[i] + (i > 0 ? 0.5 * h * K(i, i) : 0.0);
        if (std::abs(d) < 1e-14) throw SingularEquation("Volterra forward substitution hit a zero pivot");
        f[i] = acc / d;
    }
    return SampledFunction(rhs.grid, f);
}

SampledFunction solve_volterra2(const std::function<double(double, double)>& kernel, const SampledFunction& rhs,
                                const SampledFunction& diag) {
    const int m = rhs.size();
    Mat K = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) K(i, j) = kernel(rhs.grid.node(i), rhs.grid.node(j));
    return solve_volterra2(K, rhs, diag);
}

// ---------------------------------------------------------------------------

Vec solve_fredholm2(const DenseOperator& op, const Vec& rhs, const FredholmOptions& opt) {
    const int n = op.size();
    if (rhs.size() != n) throw DomainError("right-hand side size does not match operator");
    if (opt.ridge < 0.0) throw DomainError("ridge parameter must be non-negative");
    const Vec s = op.weights().cwiseSqrt();
    Mat E = op.entries();
    if (opt.ridge > 0.0) E.diagonal().array() += opt.ridge;
    const Vec b = s.cwiseProduct(rhs);

    Vec z;
    double rcond = 0.0;
    bool done = false;
    if (op.symmetric()) {
        Eigen::LLT<Mat> llt(E);
        if (llt.info() == Eigen::Success) {
            rcond = llt.rcond();
            z = llt.solve(b);
            done = true;
            // refine once against the unfactored matrix
            Vec res = b - E * z;
            z += llt.solve(res);
        }
    }
    if (!done) {
        Eigen::PartialPivLU<Mat> lu(E);
        rcond = lu.rcond();
        // the estimator misses exact zero pivots; bound it by the pivot spread
        const Vec piv = lu.matrixLU().diagonal().cwiseAbs();
        const double spread = piv.maxCoeff() > 0.0 ? piv.minCoeff() / piv.maxCoeff() : 0.0;
        rcond = std::min(rcond, spread);
        if (!(rcond > 0.0) || !std::isfinite(rcond)) rcond = 0.0;
        if (rcond > 0.0) {
            z = lu.solve(b);
            Vec res = b - E * z;
            z += lu.solve(res);
        }
    }
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (cond > opt.max_condition || !z.allFinite()) {
        std::ostringstream os;
        os << "matrix is numerically singular (condition estimate " << cond << ")";
        throw NonInvertible(os.str(), cond);
    }
    return s.cwiseInverse().cwiseProduct(z);
}

SampledFunction solve_fredholm2(const DenseOperator& op, const SampledFunction& rhs, const FredholmOptions& opt) {
    return SampledFunction(rhs.grid, solve_fredholm2(op, rhs.values, opt));
}

// ---------------------------------------------------------------------------

CholeskyResult cholesky_posdef(const Mat& A) {
    if (A.rows() != A.cols()) throw DomainError("Cholesky needs a square matrix");
    const double scale = A.cwiseAbs().maxCoeff();
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (scale > 0 ? scale : 1.0))
        throw DomainError("Cholesky input is not symmetric");
    const Eigen::Index n = A.rows();
    CholeskyResult res;
    const double max_diag = A.diagonal().maxCoeff();
    const double tol = 1e-12 * std::max(max_diag, 0.0);
    Mat L = Mat::Zero(n, n);
    res.min_pivot = std::numeric_limits<double>::infinity();
    res.max_pivot = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double pivot = A(k, k) - L.row(k).head(k).squaredNorm();
        if (!(pivot > tol) || max_diag <= 0.0) {
            res.success = false;
            res.failed_pivot = static_cast<int>(k + 1);
            res.failed_value = pivot;
            return res;
        }
        res.min_pivot = std::min(res.min_pivot, pivot);
        res.max_pivot = std::max(res.max_pivot, pivot);
        const double lkk = std::sqrt(pivot);
        L(k, k) = lkk;
        if (k + 1 < n) {
            const Eigen::Index m = n - k - 1;
            L.col(k).tail(m) = (A.col(k).tail(m) - L.bottomLeftCorner(m, k) * L.row(k).head(k).transpose()) / lkk;
        }
    }
    res.success = true;
    res.L = std::move(L);
    return res;
}

CholeskyResult cholesky_posdef(const DenseOperator& op) {
    if (!op.symmetric()) throw DomainError("Cholesky requires an operator tagged symmetric");
    return cholesky_posdef(op.entries());
}

}  // namespace bcm
