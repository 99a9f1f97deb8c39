#include "bcm/bcp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "bcm/errors.hpp"
#include "bcm/numerics.hpp"

namespace bcm {

double ControlFamily::value(int j, int i) const {
    if (j < 0 || j >= count()) throw GridError("family index out of range");
    if (system == System::Scattering) {
        if (i < first[j]) throw GridError("scattering control evaluated before xi");
        if (i > last[j]) return std::exp(-target.k * i * step);
        return solutions[j][i - first[j]];
    }
    if (i < 0 || i > last[j]) throw GridError("control evaluated outside [0, xi]");
    return solutions[j][i];
}

namespace {

Vec family_rhs(const ResponseKernel& k, const FamilyTarget& tg, int j, int first, int last, const Vec& aux) {
    const int N = last - first + 1;
    const double h = k.step();
    Vec rhs(N);
    for (int i = 0; i < N; ++i) {
        const int ti = first + i;
        switch (k.system) {
            case System::Dirichlet: {
                // y'(0) kappa - y(0) R^* kappa with kappa = xi - t;  aux = \int_0^v p
                const double kappa = (j - ti) * h;
                const double adj = -k.alpha + k.beta * kappa + 2.0 * aux[j - ti];
                rhs[i] = tg.y0p * kappa - tg.y0 * adj;
                break;
            }
            case System::Neumann:
                // -y(0) + y'(0) \int_t^xi r(s - t) ds;  aux = \int_0^v r
                rhs[i] = -tg.y0 + tg.y0p * aux[j - ti];
                break;
            case System::Scattering: rhs[i] = std::exp(-tg.k * ti * h); break;
        }
    }
    return rhs;
}

}  // namespace

ControlFamily solve_special_family(const ResponseKernel& k, const FamilyTarget& target, int j_max,
                                   const FredholmOptions& opt) {
    const bool scat = k.system == System::Scattering;
    const int jtop = scat ? k.support_index() : k.n();
    if (j_max < 0) j_max = jtop;
    if (j_max > jtop) throw GridError("family horizon exceeds the kernel data");

    {
        const AdmissibilityVerdict v = check_admissibility(scat ? assemble_connecting_at(k, 0)
                                                                : assemble_connecting_at(k, std::max(1, j_max)));
        if (!v.admissible) throw InadmissibleData("inadmissible response data: " + v.reason);
    }

    ControlFamily fam;
    fam.system = k.system;
    fam.target = target;
    fam.step = k.step();
    fam.readouts = Vec::Zero(j_max + 1);
    fam.residuals = Vec::Zero(j_max + 1);

    Vec aux;
    if (k.system == System::Dirichlet) aux = cumtrapz(k.p.values, k.step());
    if (k.system == System::Neumann) aux = cumtrapz(k.r.values, k.step());
    const int n2a = scat ? k.support_index() : 0;

    for (int j = 0; j <= j_max; ++j) {
        const int first = scat ? j : 0;
        const int last = scat ? std::max(j, n2a - j) : j;
        const Vec rhs = family_rhs(k, target, j, first, last, aux);
        Vec sol;
        if (last == first) {
            // zero-length control interval: the integral terms vanish
            const double diag = k.system == System::Dirichlet ? k.alpha
                                : k.system == System::Neumann ? -k.r[0]
                                                              : 1.0;
            sol = rhs / diag;
        } else {
            const ConnectingOperator C = assemble_connecting_at(k, j);
            sol = solve_fredholm2(C.op, rhs, opt);
            const Vec res = C.op.apply(sol) + opt.ridge * sol - rhs;
            fam.residuals[j] = res.lpNorm<Eigen::Infinity>() / std::max(rhs.lpNorm<Eigen::Infinity>(), 1e-300);
        }
        fam.readouts[j] = sol[0];
        fam.solutions.push_back(std::move(sol));
        fam.first.push_back(first);
        fam.last.push_back(last);
    }
    return fam;
}

SampledFunction solve_eigen_target(const ResponseKernel& k, double lambda, double T, const FredholmOptions& opt) {
    if (k.system != System::Dirichlet) throw DomainError("eigen-target controls use the Dirichlet system");
    const ConnectingOperator C = assemble_connecting(k, T);
    const int N = C.size();
    const double h = k.step();
    const double s = std::sqrt(std::abs(lambda));
    Vec rhs(N);
    for (int i = 0; i < N; ++i) {
        const double v = T - i * h;
        if (lambda > 0.0) rhs[i] = std::sin(s * v) / s;
        else if (lambda < 0.0) rhs[i] = std::sinh(s * v) / s;
        else rhs[i] = v;
    }
    const AdmissibilityVerdict verdict = check_admissibility(C);
    if (!verdict.admissible) throw InadmissibleData("inadmissible response data: " + verdict.reason);
    return SampledFunction(TimeGrid(C.last * h, C.last), solve_fredholm2(C.op, rhs, opt));
}

std::string to_string(ClassicalKind kind) {
    switch (kind) {
        case ClassicalKind::GL: return "gl";
        case ClassicalKind::Krein: return "krein";
        case ClassicalKind::Pariiskii: return "pariiskii";
        case ClassicalKind::Marchenko: return "marchenko";
    }
    return "?";
}

ClassicalKind classical_from_string(const std::string& s) {
    if (s == "gl") return ClassicalKind::GL;
    if (s == "krein") return ClassicalKind::Krein;
    if (s == "pariiskii") return ClassicalKind::Pariiskii;
    if (s == "marchenko") return ClassicalKind::Marchenko;
    throw ParseError("unknown classical equation '" + s + "'");
}

int ClassicalKernel::row_of(int j) const {
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r] == j) return static_cast<int>(r);
    return -1;
}

double ClassicalKernel::at(int j, int i) const {
    const int r = row_of(j);
    if (r < 0) throw GridError("kernel row " + std::to_string(j) + " not available");
    const int idx = i - row_first[r];
    if (idx < 0 || idx >= values[r].size()) throw GridError("kernel column outside the row");
    return values[r][idx];
}

double ClassicalKernel::max_abs() const {
    double m = 0.0;
    for (const Vec& v : values) m = std::max(m, v.cwiseAbs().maxCoeff());
    return m;
}

namespace {

void require_normaliser(double v, int j, double step) {
    if (std::abs(v) < 1e-6) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "normaliser vanishes at xi = %.6g", j * step);
        throw DegenerateKernel(buf);
    }
}

// d/dxi of F(xi_j, s_i) = f^{xi_j}(xi_j - s_i) on the triangle 0 <= i <= j <= J.
// Returns rows j = 1..J with entries i = 0..j.
std::vector<Vec> boundary_xi_derivative(const ControlFamily& fam) {
    const int J = fam.count() - 1;
    if (J < 4) throw GridError("family too short for differentiation in xi");
    const double h = fam.step;
    auto F = [&](int j, int i) { return fam.solutions[j][j - i]; };
    std::vector<Vec> out(J + 1);
    for (int j = 1; j <= J; ++j) {
        Vec row = Vec::Zero(j + 1);
        for (int i = 0; i <= j; ++i) {
            if (i < j && j < J) row[i] = (F(j + 1, i) - F(j - 1, i)) / (2.0 * h);
            else if (i == j && j + 2 <= J) row[i] = (-3.0 * F(j, i) + 4.0 * F(j + 1, i) - F(j + 2, i)) / (2.0 * h);
            else if (j == J && i <= J - 2) row[i] = (3.0 * F(j, i) - 4.0 * F(j - 1, i) + F(j - 2, i)) / (2.0 * h);
            else row[i] = std::numeric_limits<double>::quiet_NaN();
        }
        out[j] = row;
    }
    // corners (J,J), (J,J-1), (J-1,J-1): quadratic extrapolation along t
    for (int j : {J - 1, J}) {
        Vec& row = out[j];
        for (int i = 0; i <= j; ++i)
            if (std::isnan(row[i])) row[i] = 3.0 * row[i - 1] - 3.0 * row[i - 2] + row[i - 3];
    }
    return out;
}

}  // namespace

ClassicalKernel classical_kernel_from_family(const ControlFamily& fam, ClassicalKind kind) {
    ClassicalKernel K;
    K.kind = kind;
    K.step = fam.step;
    const int J = fam.count() - 1;
    const double h = fam.step;

    switch (kind) {
        case ClassicalKind::GL:
        case ClassicalKind::Pariiskii: {
            if (fam.system != System::Dirichlet && kind == ClassicalKind::GL)
                throw DomainError("GL kernel needs a Dirichlet family");
            if (fam.system != System::Neumann && kind == ClassicalKind::Pariiskii)
                throw DomainError("Pariiskii kernel needs a Neumann family");
            const std::vector<Vec> d = boundary_xi_derivative(fam);
            for (int j = 1; j <= J; ++j) {
                const double norm = fam.readouts[j];
                require_normaliser(norm, j, h);
                const Vec L = d[j] / norm;
                K.rows.push_back(j);
                if (kind == ClassicalKind::GL) {
                    K.row_first.push_back(0);
                    K.values.push_back(L);
                } else {
                    // even extension to [-xi, xi]
                    Vec G(2 * j + 1);
                    for (int i = -j; i <= j; ++i) G[i + j] = L[std::abs(i)];
                    K.row_first.push_back(-j);
                    K.values.push_back(G);
                }
            }
            break;
        }
        case ClassicalKind::Krein: {
            if (fam.system != System::Neumann) throw DomainError("Krein kernel needs a Neumann family");
            for (int j = 0; j <= J; ++j) {
                Vec g(2 * j + 1);
                for (int i = -j; i <= j; ++i) g[i + j] = fam.solutions[j][j - std::abs(i)];
                K.rows.push_back(j);
                K.row_first.push_back(-j);
                K.values.push_back(g);
            }
            break;
        }
        case ClassicalKind::Marchenko: {
            if (fam.system != System::Scattering) throw DomainError("Marchenko kernel needs a scattering family");
            if (J < 4) throw GridError("family too short for differentiation in xi");
            for (int j = 0; j <= J; ++j) {
                const double norm = fam.readouts[j];
                require_normaliser(norm, j, h);
                const int last = fam.last[j];
                Vec row(last - j + 1);
                for (int i = j; i <= last; ++i) {
                    double d;
                    if (j >= 1 && j + 1 <= i && j + 1 <= J) d = (fam.value(j + 1, i) - fam.value(j - 1, i)) / (2.0 * h);
                    else if (j == i && j >= 2)
                        d = (3.0 * fam.value(j, i) - 4.0 * fam.value(j - 1, i) + fam.value(j - 2, i)) / (2.0 * h);
                    else if (j == 0 && i >= 2)
                        d = (-3.0 * fam.value(0, i) + 4.0 * fam.value(1, i) - fam.value(2, i)) / (2.0 * h);
                    else if (j + 1 > J && j >= 2 && i > j)
                        d = (3.0 * fam.value(j, i) - 4.0 * fam.value(j - 1, i) + fam.value(j - 2, i)) / (2.0 * h);
                    else d = std::numeric_limits<double>::quiet_NaN();
                    row[i - j] = d / norm;
                }
                K.rows.push_back(j);
                K.row_first.push_back(j);
                K.values.push_back(row);
            }
            // corners (0,0), (0,1), (1,1): quadratic extrapolation along tau
            for (int r : {0, 1}) {
                Vec& row = K.values[r];
                for (int idx = static_cast<int>(row.size()) - 1; idx >= 0; --idx)
                    if (std::isnan(row[idx])) row[idx] = 3.0 * row[idx + 1] - 3.0 * row[idx + 2] + row[idx + 3];
            }
            break;
        }
    }
    return K;
}

ClassicalKernel solve_classical(ClassicalKind kind, const ResponseKernel& k, double xi, const FredholmOptions& opt) {
    const double h = k.step();
    const int j = static_cast<int>(std::lround(xi / h));
    if (std::abs(xi / h - j) > 1e-6) throw GridError("xi must lie on the kernel grid");
    ClassicalKernel K;
    K.kind = kind;
    K.step = h;
    K.rows = {j};

    switch (kind) {
        case ClassicalKind::GL: {
            if (k.system != System::Dirichlet) throw DomainError("GL equation needs a Dirichlet kernel");
            if (j < 1 || 2 * j > k.r.size() - 1) throw GridError("xi outside (0, T]");
            const Vec& p = k.p.values;
            const int N = j + 1;
            const Vec w = trapezoid_weights(j, h);
            Mat A(N, N);
            Vec rhs(N);
            for (int i = 0; i < N; ++i) {
                for (int l = 0; l < N; ++l) A(i, l) = (p[i + l] - p[std::abs(i - l)]) * w[l];
                rhs[i] = -(p[i + j] - p[j - i]);
            }
            A.diagonal().array() += 1.0;
            K.row_first = {0};
            K.values = {solve_fredholm2(DenseOperator::from_nystrom(A, w, true), rhs, opt)};
            break;
        }
        case ClassicalKind::Krein:
        case ClassicalKind::Pariiskii: {
            if (k.system != System::Neumann) throw DomainError("Krein/Pariiskii equations need a Neumann kernel");
            if (j < 1 || 2 * j > k.r.size() - 1) throw GridError("xi outside (0, T]");
            const Vec rp = differentiate(k.r.values, h, 1);
            const int N = 2 * j + 1;
            const Vec w = trapezoid_weights(2 * j, h);
            Mat A(N, N);
            Vec rhs(N);
            for (int a = 0; a < N; ++a) {
                for (int b = 0; b < N; ++b) A(a, b) = -0.5 * rp[std::abs(a - b)] * w[b];
                const int i = a - j;  // t = i h
                rhs[a] = kind == ClassicalKind::Krein ? 1.0 : 0.5 * (rp[j + i] + rp[j - i]);
            }
            A.diagonal().array() -= k.r[0];
            K.row_first = {-j};
            K.values = {solve_fredholm2(DenseOperator::from_nystrom(A, w, true), rhs, opt)};
            break;
        }
        case ClassicalKind::Marchenko: {
            if (k.system != System::Scattering) throw DomainError("Marchenko equation needs a scattering kernel");
            const int n2a = k.support_index();
            if (j < 0 || j > n2a) throw GridError("xi outside [0, 2a]");
            const int last = std::max(j, n2a - j);
            const int N = last - j + 1;
            auto rv = [&](int idx) { return idx < k.r.size() ? k.r[idx] : 0.0; };
            Vec sol(N);
            if (N == 1) {
                sol[0] = rv(2 * j);
            } else {
                const Vec w = trapezoid_weights(N - 1, h);
                Mat A(N, N);
                Vec rhs(N);
                for (int a = 0; a < N; ++a) {
                    for (int b = 0; b < N; ++b) A(a, b) = rv(2 * j + a + b) * w[b];
                    rhs[a] = rv(2 * j + a);
                }
                A.diagonal().array() += 1.0;
                sol = solve_fredholm2(DenseOperator::from_nystrom(A, w, true), rhs, opt);
            }
            K.row_first = {j};
            K.values = {sol};
            break;
        }
    }
    return K;
}

SingularControl singular_control(const ControlFamily& fam, const ClassicalKernel& L, double xi) {
    if (fam.system != System::Dirichlet || L.kind != ClassicalKind::GL)
        throw DomainError("singular controls are built from the Dirichlet/GL pair");
    const double h = fam.step;
    const int n = fam.count() - 1;
    const int j = static_cast<int>(std::lround(xi / h));
    if (std::abs(xi / h - j) > 1e-6 || j < 1 || j > n) throw GridError("xi must be a grid node in (0, T]");
    SingularControl s;
    s.xi = j * h;
    s.T = n * h;
    s.amplitude = fam.readouts[j];
    s.delay_index = n - j;
    Vec g = Vec::Zero(n + 1);
    for (int i = n - j; i <= n; ++i) g[i] = L.at(j, n - i);
    s.regular = SampledFunction(TimeGrid(n * h, n), g);
    return s;
}

double visualize_wave(const ConnectingOperator& C, const SingularControl& s, const SampledFunction& f) {
    if (f.size() != C.size() || C.first != 0) throw GridError("control grid does not match the connecting operator");
    if (s.regular.size() != C.size()) throw GridError("singular control grid does not match");
    const Vec Cf = C.op.apply(f.values);
    const int i0 = s.delay_index;
    const int n = C.size() - 1;
    const double h = C.step;
    double acc = Cf[i0];
    for (int i = i0; i <= n; ++i) acc += ((i == i0 || i == n) ? 0.5 : 1.0) * h * s.regular[i] * Cf[i];
    return acc;
}

SampledFunction apply_inverse_control_operator(const ClassicalKernel& L, const SampledFunction& a) {
    if (L.kind != ClassicalKind::GL) throw DomainError("inverse control operator uses the GL kernel");
    const double h = L.step;
    const int n = a.grid.n_steps();
    if (std::abs(a.grid.step() - h) > 1e-9 * h) throw GridError("state must be sampled with the kernel step");
    // L(xi_0, 0) is not stored; extrapolate from the next two rows
    auto Lv = [&](int j, int i) {
        if (j == 0) return 2.0 * L.at(1, 0) - L.at(2, 0);
        return L.at(j, i);
    };
    Vec f(n + 1);
    for (int ti = 0; ti <= n; ++ti) {
        const int is = n - ti;
        double acc = 0.0;
        for (int j = is; j <= n; ++j) acc += ((j == is || j == n) ? 0.5 : 1.0) * h * Lv(j, is) * a[j];
        f[ti] = a[is] + acc;
    }
    return SampledFunction(a.grid, f);
}

double transformation_apply(const ClassicalKernel& L, double lambda, double x) {
    if (L.kind != ClassicalKind::GL) throw DomainError("transformation operator uses the GL kernel");
    const double h = L.step;
    const double sl = std::sqrt(std::abs(lambda));
    auto s = [&](double t) {
        if (lambda > 0.0) return std::sin(sl * t) / sl;
        if (lambda < 0.0) return std::sinh(sl * t) / sl;
        return t;
    };
    auto psi_at = [&](int j) {
        if (j == 0) return 0.0;
        double acc = s(j * h);
        for (int i = 0; i <= j; ++i) acc += ((i == 0 || i == j) ? 0.5 : 1.0) * h * L.at(j, i) * s(i * h);
        return acc;
    };
    const double u = x / h;
    const int j0 = static_cast<int>(std::floor(u + 1e-9));
    const int jmax = L.rows.back();
    if (x < 0.0 || j0 > jmax) throw GridError("x outside the kernel range");
    if (j0 == jmax || std::abs(u - j0) < 1e-9) return psi_at(j0);
    const double th = u - j0;
    return (1.0 - th) * psi_at(j0) + th * psi_at(j0 + 1);
}

}  // namespace bcm
