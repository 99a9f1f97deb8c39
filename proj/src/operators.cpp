#include "bcm/operators.hpp"

#include <cmath>
#include <cstdio>

#include "bcm/errors.hpp"
#include "bcm/numerics.hpp"

namespace bcm {

namespace {

// Causal trapezoid convolution (K f)_i = \int_0^{t_i} r(t_i - s) f(s) ds.
Mat volterra_matrix(const Vec& r, double h, int nodes) {
    Mat K = Mat::Zero(nodes, nodes);
    for (int i = 1; i < nodes; ++i) {
        for (int l = 0; l <= i; ++l) K(i, l) = h * r[i - l];
        K(i, 0) *= 0.5;
        K(i, i) *= 0.5;
    }
    return K;
}

Mat derivative_matrix(int nodes, double h) {
    if (nodes < 3) throw GridError("differentiation needs at least 3 nodes");
    Mat D = Mat::Zero(nodes, nodes);
    const double c = 0.5 / h;
    D(0, 0) = -3.0 * c;
    D(0, 1) = 4.0 * c;
    D(0, 2) = -c;
    for (int i = 1; i < nodes - 1; ++i) {
        D(i, i - 1) = -c;
        D(i, i + 1) = c;
    }
    D(nodes - 1, nodes - 1) = 3.0 * c;
    D(nodes - 1, nodes - 2) = -4.0 * c;
    D(nodes - 1, nodes - 3) = c;
    return D;
}

double kernel_value(const Vec& v, int idx) { return idx < v.size() ? v[idx] : 0.0; }

void require_dn(const ResponseKernel& k, const char* what) {
    if (k.system == System::Scattering) throw DomainError(std::string(what) + " needs a boundary-control kernel");
}

}  // namespace

Mat response_matrix(const ResponseKernel& k, int nodes) {
    if (nodes < 1 || nodes > k.r.size()) throw GridError("response matrix size outside the kernel grid");
    const double h = k.step();
    switch (k.system) {
        case System::Dirichlet: {
            Mat R = volterra_matrix(k.r.values, h, nodes);
            R -= k.alpha * derivative_matrix(nodes, h);
            R.diagonal().array() += k.beta;
            return R;
        }
        case System::Neumann: return volterra_matrix(k.r.values, h, nodes);
        case System::Scattering: {
            const Vec w = trapezoid_weights(nodes - 1, h);
            Mat R(nodes, nodes);
            for (int i = 0; i < nodes; ++i)
                for (int l = 0; l < nodes; ++l) R(i, l) = kernel_value(k.r.values, i + l) * w[l];
            return R;
        }
    }
    return {};
}

SampledFunction apply_response(const ResponseKernel& k, const SampledFunction& f, bool adjoint) {
    if (std::abs(f.grid.step() - k.step()) > 1e-9 * k.step())
        throw GridError("control must be sampled with the kernel step");
    const int N = f.size();
    if (k.system == System::Dirichlet) {
        const double tol = 1e-12 * std::max(1.0, f.values.cwiseAbs().maxCoeff());
        if (!adjoint && std::abs(f[0]) > tol) throw DomainError("Dirichlet response needs f(0) = 0");
        if (adjoint && std::abs(f[N - 1]) > tol) throw DomainError("Dirichlet adjoint response needs f(T) = 0");
    }
    const Mat R = response_matrix(k, N);
    if (!adjoint) return SampledFunction(f.grid, R * f.values);
    const Vec w = trapezoid_weights(f.grid);
    const Vec g = R.transpose() * w.cwiseProduct(f.values);
    return SampledFunction(f.grid, g.cwiseQuotient(w));
}

Vec ConnectingOperator::nodes() const {
    Vec t(size());
    for (int i = 0; i < size(); ++i) t[i] = (first + i) * step;
    return t;
}

ConnectingOperator assemble_connecting_at(const ResponseKernel& k, int j) {
    const double h = k.step();
    ConnectingOperator c;
    c.system = k.system;
    c.step = h;
    c.xi = j * h;
    if (k.system == System::Scattering) {
        const int n2a = k.support_index();
        if (j < 0 || j > n2a) throw GridError("xi outside [0, 2a]");
        c.first = j;
        c.last = std::max(j, n2a - j);
        if (c.last == c.first) throw GridError("degenerate control interval at xi = a..2a");
    } else {
        if (j < 1 || 2 * j > k.r.size() - 1) throw GridError("xi outside (0, T]");
        c.first = 0;
        c.last = j;
    }
    const int N = c.size();
    const Vec w = trapezoid_weights(N - 1, h);
    Mat A(N, N);
    switch (k.system) {
        case System::Dirichlet: {
            const Vec& p = k.p.values;
            for (int i = 0; i < N; ++i)
                for (int l = 0; l < N; ++l) A(i, l) = (p[2 * j - i - l] - p[std::abs(i - l)]) * w[l];
            A.diagonal().array() += k.alpha;
            break;
        }
        case System::Neumann: {
            const Vec rp = differentiate(k.r.values, h, 1);
            for (int i = 0; i < N; ++i)
                for (int l = 0; l < N; ++l) A(i, l) = -0.5 * (rp[2 * j - i - l] + rp[std::abs(i - l)]) * w[l];
            A.diagonal().array() -= k.r[0];
            break;
        }
        case System::Scattering: {
            for (int i = 0; i < N; ++i)
                for (int l = 0; l < N; ++l) A(i, l) = kernel_value(k.r.values, 2 * j + i + l) * w[l];
            A.diagonal().array() += 1.0;
            break;
        }
    }
    c.op = DenseOperator::from_nystrom(A, w, true);
    return c;
}

ConnectingOperator assemble_connecting(const ResponseKernel& k, double xi) {
    const double s = xi / k.step();
    const int j = static_cast<int>(std::lround(s));
    if (std::abs(s - j) > 1e-6) throw GridError("xi must lie on the kernel grid");
    return assemble_connecting_at(k, j);
}

ConnectingOperator assemble_connecting_factorized(const ResponseKernel& k, double T) {
    if (k.system != System::Dirichlet) throw DomainError("factorized form is implemented for the Dirichlet system");
    const double h = k.step();
    const int n = static_cast<int>(std::lround(T / h));
    if (n < 2 || 2 * n > k.r.size() - 1) throw GridError("T outside the kernel horizon");
    const int N = n + 1, M = 2 * n + 1;
    // J S: integral of the odd extension, on [0, 2T]
    Mat JS = Mat::Zero(M, N);
    for (int i = 1; i <= n; ++i) {
        for (int l = 0; l <= i; ++l) JS(i, l) = h;
        JS(i, 0) *= 0.5;
        JS(i, i) *= 0.5;
    }
    for (int i = n + 1; i < M; ++i) {
        JS.row(i) = JS.row(n);
        const int lo = 2 * n - i;  // subtract \int_{t_lo}^{T} f
        for (int l = lo; l <= n; ++l) JS(i, l) -= (l == lo || l == n) ? 0.5 * h : h;
    }
    Mat BK = volterra_matrix(k.r.values, h, M);
    BK.diagonal().array() += k.beta;
    const Mat inner = BK * JS;
    // S^* h = h_i - h_{2n-i}
    Mat A(N, N);
    for (int i = 0; i < N; ++i) A.row(i) = inner.row(i) - inner.row(2 * n - i);
    A *= -0.5;
    A.diagonal().array() += k.alpha;
    ConnectingOperator c;
    c.system = k.system;
    c.step = h;
    c.xi = n * h;
    c.first = 0;
    c.last = n;
    c.op = DenseOperator::from_nystrom(A, trapezoid_weights(n, h), false);
    return c;
}

double commutation_defect(const ResponseKernel& k) {
    require_dn(k, "commutation check");
    const int M = k.r.size();
    const double h = k.step();
    // restrict to nodes 1..M-1 (f_0 = 0)
    const int N = M - 1;
    Mat R = Mat::Zero(N, N), J = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        for (int l = 0; l <= i; ++l) {
            R(i, l) = h * k.r[i - l] * (l == i ? 0.5 : 1.0);
            J(i, l) = l == i ? 0.5 * h : h;
        }
        if (k.system == System::Dirichlet) {
            // backward second-order differentiation, zero history before t_1
            R(i, i) += k.beta - k.alpha * 1.5 / h;
            if (i >= 1) R(i, i - 1) += k.alpha * 2.0 / h;
            if (i >= 2) R(i, i - 2) -= k.alpha * 0.5 / h;
        }
    }
    const Mat d = R * J - J * R;
    return d.norm() / (R.norm() * J.norm());
}

AdmissibilityVerdict check_admissibility(const ConnectingOperator& c) {
    AdmissibilityVerdict v;
    v.size = c.size();
    const CholeskyResult ch = cholesky_posdef(c.op);
    v.failed_pivot = ch.failed_pivot;
    v.failed_value = ch.failed_value;
    v.pivot_ratio = ch.max_pivot > 0.0 ? ch.min_pivot / ch.max_pivot : 0.0;
    char buf[160];
    if (!ch.success) {
        std::snprintf(buf, sizeof buf, "%s pivot at index %d (value %.6g)", ch.failed_value < 0.0 ? "negative" : "vanishing", ch.failed_pivot, ch.failed_value);
        v.reason = buf;
    } else if (v.pivot_ratio < 1e-10) {
        std::snprintf(buf, sizeof buf, "pivot ratio %.3g below 1e-10", v.pivot_ratio);
        v.reason = buf;
    } else {
        v.admissible = true;
        std::snprintf(buf, sizeof buf, "positive definite, pivot ratio %.3g", v.pivot_ratio);
        v.reason = buf;
    }
    return v;
}

AdmissibilityVerdict check_admissibility(const ResponseKernel& k) {
    const int j = k.system == System::Scattering ? 0 : k.n();
    return check_admissibility(assemble_connecting_at(k, j));
}

ResponseKernel shift_kernel(const ResponseKernel& k, double shift) {
    ResponseKernel out = k;
    out.r.values.array() += shift;
    if (k.system == System::Dirichlet)
        out.p = SampledFunction(out.r.grid, 0.5 * cumtrapz(out.r.values, out.step()));
    return out;
}

Mat scattering_galerkin(const ResponseKernel& k, int last) {
    if (k.system != System::Scattering) throw DomainError("Galerkin check is for scattering kernels");
    if (last < 3) throw GridError("basis needs at least two functions");
    const double h = k.step();
    const Vec& r = k.r.values;
    static const double mass[4] = {151.0 / 315.0, 397.0 / 1680.0, 1.0 / 42.0, 1.0 / 5040.0};
    static const double w7[7] = {1.0, 120.0, 1191.0, 2416.0, 1191.0, 120.0, 1.0};
    const int N = last - 1;
    Mat A(N, N);
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
            const int s = (a + 2) + (b + 2);
            double acc = 0.0;
            for (int d = -3; d <= 3; ++d) acc += w7[d + 3] / 5040.0 * kernel_value(r, s + d);
            const int off = std::abs(a - b);
            A(a, b) = h * h * acc + (off < 4 ? h * mass[off] : 0.0);
        }
    }
    return A;
}

double relative_frobenius(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("matrix shapes differ");
    const double nb = b.norm();
    return nb > 0.0 ? (a - b).norm() / nb : (a - b).norm();
}

}  // namespace bcm
