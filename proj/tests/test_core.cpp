#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "bcm/errors.hpp"
#include "bcm/grid.hpp"
#include "bcm/linalg.hpp"
#include "bcm/mollifier.hpp"
#include "bcm/numerics.hpp"

using namespace bcm;

namespace {

SampledFunction sample(double t_end, int n, double (*f)(double)) {
    return SampledFunction::sample(TimeGrid(t_end, n), f);
}

double sup_error(const SampledFunction& a, double (*f)(double)) {
    double e = 0.0;
    for (int j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[j] - f(a.grid.node(j))));
    return e;
}

}  // namespace

TEST_SUITE("grid") {
    TEST_CASE("nodes are uniform and end exactly at t_end") {
        TimeGrid g(0.3, 7);
        CHECK(g.size() == 8);
        CHECK(g.node(7) == 0.3);
        CHECK(g.node(3) == doctest::Approx(3 * 0.3 / 7));
        CHECK(g.prefix(4).t_end() == doctest::Approx(g.node(4)));
    }

    TEST_CASE("malformed grids are rejected") {
        CHECK_THROWS_AS(TimeGrid(-1.0, 4), GridError);
        CHECK_THROWS_AS(TimeGrid(1.0, 0), GridError);
    }

    TEST_CASE("cubic interpolation is exact on cubics and clamps outside") {
        auto f = sample(2.0, 20, [](double t) { return t * t * t - 2.0 * t + 1.0; });
        CHECK(f.at(0.537) == doctest::Approx(0.537 * 0.537 * 0.537 - 2 * 0.537 + 1).epsilon(1e-12));
        CHECK(f.at(1.999) == doctest::Approx(1.999 * 1.999 * 1.999 - 2 * 1.999 + 1).epsilon(1e-12));
        CHECK(f.at(-1.0) == f[0]);
        CHECK(f.at(5.0) == f[20]);
    }
}

TEST_SUITE("quadrature") {
    TEST_CASE("trapezoid inner products") {
        for (int n : {2, 3, 17}) {
            auto one = sample(1.0, n, [](double) { return 1.0; });
            auto lin = sample(1.0, n, [](double t) { return t; });
            CHECK(inner(one, one) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(inner(lin, one) == doctest::Approx(0.5).epsilon(1e-15));
        }
        auto s = SampledFunction::sample(TimeGrid(M_PI, 100), [](double t) { return std::sin(t); });
        CHECK(std::abs(inner(s, s) - M_PI / 2) < 1e-3);
    }

    TEST_CASE("inner product of quadratics converges at second order") {
        auto err = [](int n) {
            auto f = sample(1.0, n, [](double t) { return t * t; });
            auto g = sample(1.0, n, [](double t) { return 1.0 - t + 2.0 * t * t; });
            return std::abs(inner(f, g) - (1.0 / 3 - 1.0 / 4 + 2.0 / 5));
        };
        const double ratio = err(20) / err(40);
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);
    }

    TEST_CASE("cumulative trapezoid") {
        Vec f = Vec::LinSpaced(11, 0.0, 1.0);
        Vec F = cumtrapz(f, 0.1);
        CHECK(F[0] == 0.0);
        CHECK(F[10] == doctest::Approx(0.5));
        CHECK(F[5] == doctest::Approx(0.125));
    }
}

TEST_SUITE("differentiation") {
    TEST_CASE("stencils are exact on quadratics at every node") {
        auto f = sample(1.0, 10, [](double t) { return t * t; });
        auto d = differentiate(f, 1);
        for (int j = 0; j <= 10; ++j) CHECK(d[j] == doctest::Approx(2.0 * f.grid.node(j)).epsilon(1e-12));
        auto d2 = differentiate(f, 2);
        for (int j = 0; j <= 10; ++j) CHECK(d2[j] == doctest::Approx(2.0).epsilon(1e-9));
    }

    TEST_CASE("constants differentiate to zero") {
        auto f = sample(1.0, 8, [](double) { return 3.5; });
        auto d = differentiate(f, 1);
        CHECK(d.values.cwiseAbs().maxCoeff() < 1e-12);
    }

    TEST_CASE("sine derivative converges at second order including the ends") {
        auto err = [](int n) {
            auto f = sample(1.0, n, [](double t) { return std::sin(t); });
            return sup_error(differentiate(f, 1), [](double t) { return std::cos(t); });
        };
        const double e1 = err(40), e2 = err(80), e3 = err(160);
        CHECK(std::log2(e1 / e2) >= 1.9);
        CHECK(std::log2(e2 / e3) >= 1.9);
        CHECK(observed_order(e2, e3, 80, 160) >= 1.9);
    }

    TEST_CASE("too few nodes") { CHECK_THROWS_AS(differentiate(Vec::Zero(4), 0.1, 1), GridError); }
}

TEST_SUITE("volterra") {
    TEST_CASE("zero kernel is the identity") {
        auto rhs = sample(1.0, 30, [](double t) { return std::cos(3 * t); });
        auto one = sample(1.0, 30, [](double) { return 1.0; });
        auto f = solve_volterra2([](double, double) { return 0.0; }, rhs, one);
        CHECK((f.values - rhs.values).cwiseAbs().maxCoeff() < 1e-15);
    }

    TEST_CASE("f + int f = 1 gives exp(-t)") {
        auto one = sample(1.0, 200, [](double) { return 1.0; });
        auto f = solve_volterra2([](double, double) { return 1.0; }, one, one);
        CHECK(std::abs(f[200] - std::exp(-1.0)) < 2e-3);
    }

    TEST_CASE("discrete residual is at round-off level") {
        const int n = 64;
        TimeGrid g(2.0, n);
        auto rhs = SampledFunction::sample(g, [](double t) { return 1.0 + std::sin(t); });
        auto diag = SampledFunction::sample(g, [](double t) { return 2.0 + t; });
        auto K = [](double t, double s) { return std::exp(-(t - s)) * std::cos(s); };
        auto f = solve_volterra2(K, rhs, diag);
        const double h = g.step();
        double worst = 0.0;
        for (int i = 0; i <= n; ++i) {
            double acc = diag[i] * f[i];
            for (int j = 0; j <= i; ++j) {
                const double w = (j == 0 || j == i) ? 0.5 * h : h;
                if (i > 0) acc += w * K(g.node(i), g.node(j)) * f[j];
            }
            worst = std::max(worst, std::abs(acc - rhs[i]));
        }
        CHECK(worst <= 1e-10 * rhs.values.norm());
    }

    TEST_CASE("vanishing diagonal coefficient") {
        auto one = sample(1.0, 10, [](double) { return 1.0; });
        auto diag = sample(1.0, 10, [](double t) { return t - 0.5; });
        CHECK_THROWS_AS(solve_volterra2([](double, double) { return 0.0; }, one, diag), SingularEquation);
    }
}

TEST_SUITE("fredholm") {
    TEST_CASE("identity operator returns the right-hand side") {
        const int n = 20;
        Vec w = trapezoid_weights(n, 0.05);
        auto op = DenseOperator::from_nystrom(Mat::Identity(n + 1, n + 1), w, true);
        Vec rhs = Vec::LinSpaced(n + 1, -1.0, 2.0);
        CHECK((solve_fredholm2(op, rhs) - rhs).cwiseAbs().maxCoeff() < 1e-14);
    }

    TEST_CASE("small symmetric perturbation recovers a known solution") {
        const int n = 40;
        const double h = 1.0 / n;
        Vec w = trapezoid_weights(n, h);
        Mat A = Mat::Identity(n + 1, n + 1);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) A(i, j) += 0.3 * std::exp(-std::abs(i - j) * h) * w[j];
        auto op = DenseOperator::from_nystrom(A, w, true);
        Vec f0(n + 1);
        for (int i = 0; i <= n; ++i) f0[i] = std::sin(5.0 * i * h);
        Vec rhs = op.apply(f0);
        CHECK((solve_fredholm2(op, rhs) - f0).cwiseAbs().maxCoeff() < 1e-10);
    }

    TEST_CASE("trivial special family: identity with rhs xi - t") {
        const int n = 16;
        const double xi = 0.8, h = xi / n;
        auto op = DenseOperator::from_nystrom(Mat::Identity(n + 1, n + 1), trapezoid_weights(n, h), true);
        Vec rhs(n + 1);
        for (int i = 0; i <= n; ++i) rhs[i] = xi - i * h;
        Vec f = solve_fredholm2(op, rhs);
        CHECK(f[0] == doctest::Approx(xi));
        CHECK(f[n] == doctest::Approx(0.0));
    }

    TEST_CASE("ridge shifts the operator") {
        const int n = 10;
        auto op = DenseOperator::from_nystrom(Mat::Identity(n + 1, n + 1), trapezoid_weights(n, 0.1), true);
        FredholmOptions opt;
        opt.ridge = 1.0;
        Vec rhs = Vec::Ones(n + 1);
        CHECK(solve_fredholm2(op, rhs, opt)[3] == doctest::Approx(0.5));
    }

    TEST_CASE("singular matrix reports its condition estimate") {
        const int n = 5;
        Mat A = Mat::Identity(n + 1, n + 1);
        A.row(2) = A.row(1);
        A.col(2) = A.col(1);
        auto op = DenseOperator::from_nystrom(A, Vec::Ones(n + 1), false);
        try {
            solve_fredholm2(op, Vec::Ones(n + 1));
            FAIL("expected NonInvertible");
        } catch (const NonInvertible& e) {
            CHECK(e.condition() > 1e14);
        }
    }

    TEST_CASE("adjoint with respect to the trapezoid product") {
        const int n = 12;
        const double h = 1.0 / n;
        Vec w = trapezoid_weights(n, h);
        std::mt19937_64 eng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Mat A(n + 1, n + 1);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) A(i, j) = u(eng);
        auto op = DenseOperator::from_nystrom(A, w, false);
        Vec f(n + 1), g(n + 1);
        for (int i = 0; i <= n; ++i) f[i] = u(eng), g[i] = u(eng);
        const double lhs = (op.apply(f).array() * g.array() * w.array()).sum();
        const double rhs = (f.array() * op.adjoint().apply(g).array() * w.array()).sum();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_SUITE("cholesky") {
    TEST_CASE("identity succeeds") { CHECK(cholesky_posdef(Mat::Identity(4, 4)).success); }

    TEST_CASE("diag(1, -1) fails at pivot 2") {
        Mat A = Mat::Zero(2, 2);
        A(0, 0) = 1.0;
        A(1, 1) = -1.0;
        auto r = cholesky_posdef(A);
        CHECK_FALSE(r.success);
        CHECK(r.failed_pivot == 2);
        CHECK(r.failed_value == doctest::Approx(-1.0));
    }

    TEST_CASE("asymmetric input is rejected") {
        Mat A = Mat::Identity(3, 3);
        A(0, 2) = 0.5;
        CHECK_THROWS_AS(cholesky_posdef(A), DomainError);
    }

    TEST_CASE("success iff all eigenvalues are positive") {
        std::mt19937_64 eng(11);
        std::normal_distribution<double> nd;
        int positive = 0, indefinite = 0;
        for (int trial = 0; trial < 60; ++trial) {
            const int n = 2 + trial % 49;
            Mat B(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) B(i, j) = nd(eng);
            Mat A = B * B.transpose() / n;
            A.diagonal().array() += (trial % 2 == 0 ? 0.05 : -0.3);
            Eigen::SelfAdjointEigenSolver<Mat> es(A);
            const bool pd = es.eigenvalues().minCoeff() > 1e-12 * A.diagonal().maxCoeff();
            CHECK(cholesky_posdef(A).success == pd);
            (pd ? positive : indefinite)++;
        }
        CHECK(positive > 10);
        CHECK(indefinite > 10);
    }
}

TEST_SUITE("misc") {
    TEST_CASE("time reversal") {
        auto c = sample(1.0, 9, [](double) { return 2.0; });
        CHECK((time_reverse(c).values - c.values).cwiseAbs().maxCoeff() == 0.0);
        auto t = sample(1.0, 9, [](double t) { return t; });
        auto r = time_reverse(t);
        for (int j = 0; j <= 9; ++j) CHECK(r[j] == doctest::Approx(1.0 - t.grid.node(j)));
        auto s = sample(1.0, 9, [](double t) { return std::exp(t) - t * t; });
        CHECK(inner(time_reverse(s), time_reverse(s)) == inner(s, s));
    }

    TEST_CASE("seeded smooth controls are reproducible and start flat") {
        TimeGrid g(1.0, 64);
        auto a = random_smooth_controls(g, 3, 42);
        auto b = random_smooth_controls(g, 3, 42);
        auto c = random_smooth_controls(g, 3, 43);
        REQUIRE(a.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(a[i].values == b[i].values);
            CHECK(a[i][0] == 0.0);
            CHECK(std::abs(differentiate(a[i], 1)[0]) < 5e-2);
        }
        CHECK(a[0].values != c[0].values);
    }

    TEST_CASE("polynomial fit and interpolation helpers") {
        std::vector<double> xs{0, 1, 2, 3, 4}, ys;
        for (double x : xs) ys.push_back(1 + 2 * x - x * x);
        CHECK(poly_fit_eval(xs, ys, 2, 5.0) == doctest::Approx(1 + 10 - 25));
        Vec X = Vec::LinSpaced(5, 0, 4), Y = X.array().square();
        CHECK(interp_linear(X, Y, 2.5) == doctest::Approx(6.5));
        CHECK(interp_linear(X, Y, -1.0) == 0.0);
        Vec dY = 2.0 * X;
        CHECK(interp_hermite(X, Y, dY, 2.5) == doctest::Approx(6.25));
    }

    TEST_CASE("mollifier has unit mass and reproduces linears") {
        Mollifier b(0.2, 0.1);
        const int n = 2000;
        double mass = 0.0, first = 0.0, second = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = 0.1 + 0.2 * i / n;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            const double d = b.density(t) * w * 0.2 / n;
            mass += d;
            first += d * (t - b.centre());
            second += d * (t - b.centre()) * (t - b.centre());
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(first) < 1e-12);
        CHECK(std::abs(second) < 1e-12);
        CHECK(b.step(0.0) == 0.0);
        CHECK(b.step(0.35) == doctest::Approx(1.0));
        CHECK(b.ramp(0.7) == doctest::Approx(0.7 - b.centre()));
    }
}
