#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "bcm/bcp.hpp"
#include "bcm/errors.hpp"
#include "bcm/media.hpp"
#include "bcm/numerics.hpp"

using namespace bcm;

namespace {

ResponseKernel zero_dirichlet(int n) { return ResponseKernel::dirichlet(1.0, Vec::Zero(2 * n + 1)); }
ResponseKernel unit_neumann(int n) { return ResponseKernel::neumann(1.0, -Vec::Ones(2 * n + 1)); }
ResponseKernel zero_scattering(int n) { return ResponseKernel::scattering(1.0, n, Vec::Zero(n + 9)); }

const ResponseKernel& kernel(System sys, const char* name, int n) {
    static std::map<std::string, ResponseKernel> cache;
    const std::string key = to_string(sys) + name + std::to_string(n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, extract_response_kernel(sys, make_test_medium(name), 1.0, n)).first;
    return it->second;
}

double max_diff_row(const ClassicalKernel& a, const ClassicalKernel& direct) {
    const int j = direct.rows[0];
    double d = 0.0;
    for (int i = 0; i < direct.values[0].size(); ++i)
        d = std::max(d, std::abs(a.at(j, direct.row_first[0] + i) - direct.values[0][i]));
    return d;
}

}  // namespace

TEST_SUITE("special families") {
    TEST_CASE("trivial Dirichlet family: f^xi(t) = xi - t") {
        const int n = 64;
        auto fam = solve_special_family(zero_dirichlet(n), FamilyTarget::gl());
        REQUIRE(fam.count() == n + 1);
        for (int j : {1, 17, 64}) {
            CHECK(fam.first[j] == 0);
            CHECK(fam.last[j] == j);
            for (int i = 0; i <= j; ++i) CHECK(fam.value(j, i) == doctest::Approx(fam.xi(j) - fam.xi(i)).epsilon(1e-12));
            CHECK(fam.readouts[j] == doctest::Approx(fam.xi(j)));
        }
    }

    TEST_CASE("trivial Neumann family: f = 1, readout +1") {
        auto fam = solve_special_family(unit_neumann(64), FamilyTarget::krein());
        CHECK((fam.readouts.array() - 1.0).abs().maxCoeff() < 1e-12);
    }

    TEST_CASE("trivial scattering family: f = e^{-k tau}") {
        auto fam = solve_special_family(zero_scattering(64), FamilyTarget::scattering(2.0));
        for (int j : {0, 10, 40})
            CHECK(fam.readouts[j] == doctest::Approx(std::exp(-2.0 * fam.xi(j))).epsilon(1e-12));
    }

    TEST_CASE("every solve has a small residual") {
        auto fam = solve_special_family(kernel(System::Dirichlet, "gl_rational", 128), FamilyTarget::gl());
        CHECK(fam.residuals.maxCoeff() <= 1e-9);
    }

    TEST_CASE("Dirichlet readout equals y(xi) on gl_rational") {
        auto fam = solve_special_family(kernel(System::Dirichlet, "gl_rational", 512), FamilyTarget::gl());
        CHECK(fam.readouts[256] == doctest::Approx(0.625).epsilon(0.02));
        for (int j = 32; j <= 512; j += 32) {
            const double x = fam.xi(j);
            CHECK(fam.readouts[j] == doctest::Approx(x + x * x * x).epsilon(0.02));
        }
    }

    TEST_CASE("Neumann readout |f(0)| = (rho(0) rho(x(xi)))^{1/4} on krein_exp") {
        auto m = make_test_medium("krein_exp");
        auto fam = solve_special_family(kernel(System::Neumann, "krein_exp", 256), FamilyTarget::krein());
        for (int j = 16; j <= 256; j += 16) {
            const double x = depth_at_time(m, fam.xi(j));
            CHECK(std::abs(fam.readouts[j]) == doctest::Approx(std::pow(4.0 * m.rho_at(x), 0.25)).epsilon(0.02));
        }
    }

    TEST_CASE("scattering readout equals the Jost-type solution") {
        auto m = make_test_medium("scatter_bump");
        const double k = 1.0, x0 = 4.0;
        auto K = extract_response_kernel(System::Scattering, m, 0.0, 256);
        auto fam = solve_special_family(K, FamilyTarget::scattering(k));
        const int steps = 2000;
        Vec y = rk4_sturm_liouville(scatter_bump_q, -k * k, x0, 0.0, steps, std::exp(-k * x0), -k * std::exp(-k * x0));
        for (int j = 0; j < fam.count(); j += 16) {
            const double xi = fam.xi(j);
            if (xi > x0) break;
            const double oracle = y[static_cast<int>(std::lround((x0 - xi) / x0 * steps))];
            CHECK(fam.readouts[j] == doctest::Approx(oracle).epsilon(0.02));
        }
    }

    TEST_CASE("inadmissible data aborts the family") {
        auto bad = ResponseKernel::dirichlet(1.0, Vec::Constant(129, -40.0));
        CHECK_THROWS_AS(solve_special_family(bad, FamilyTarget::gl()), InadmissibleData);
    }
}

TEST_SUITE("eigen targets") {
    TEST_CASE("zero kernel: f(t) = sin(2(T - t))/2 for lambda = 4") {
        auto f = solve_eigen_target(zero_dirichlet(64), 4.0, 1.0);
        for (int j = 0; j <= 64; ++j)
            CHECK(f[j] == doctest::Approx(std::sin(2.0 * (1.0 - f.grid.node(j))) / 2.0).epsilon(1e-12));
    }

    TEST_CASE("lambda = 0 coincides with the GL family at xi = T") {
        const auto& k = kernel(System::Dirichlet, "gl_rational", 128);
        auto f = solve_eigen_target(k, 0.0, 1.0);
        auto fam = solve_special_family(k, FamilyTarget::gl());
        for (int i = 0; i <= 128; ++i) CHECK(f[i] == doctest::Approx(fam.value(128, i)).epsilon(1e-12));
    }

    TEST_CASE("Neumann kernels are refused") {
        CHECK_THROWS_AS(solve_eigen_target(unit_neumann(64), 1.0, 1.0), DomainError);
    }
}

TEST_SUITE("classical kernels") {
    TEST_CASE("trivial kernels: zero, or g = 1 for Krein") {
        const double xi = 0.5;
        CHECK(solve_classical(ClassicalKind::GL, zero_dirichlet(64), xi).max_abs() < 1e-14);
        CHECK(solve_classical(ClassicalKind::Pariiskii, unit_neumann(64), xi).max_abs() < 1e-12);
        CHECK(solve_classical(ClassicalKind::Marchenko, zero_scattering(64), xi).max_abs() < 1e-14);
        auto g = solve_classical(ClassicalKind::Krein, unit_neumann(64), xi);
        CHECK((g.values[0].array() - 1.0).abs().maxCoeff() < 1e-12);
        CHECK(g.values[0].size() == 65);
    }

    TEST_CASE("family-derived kernels of trivial data") {
        auto L = classical_kernel_from_family(solve_special_family(zero_dirichlet(64), FamilyTarget::gl()),
                                              ClassicalKind::GL);
        CHECK(L.max_abs() < 1e-12);
        CHECK(L.row_of(0) == -1);
        auto g = classical_kernel_from_family(solve_special_family(zero_scattering(64), FamilyTarget::scattering(1.0)),
                                              ClassicalKind::Marchenko);
        CHECK(g.max_abs() < 1e-12);
        auto gk = classical_kernel_from_family(solve_special_family(unit_neumann(64), FamilyTarget::krein()),
                                               ClassicalKind::Krein);
        for (int j = 1; j <= 64; j += 7) CHECK(gk.at(j, -j) == doctest::Approx(1.0));
    }

    TEST_CASE("Krein kernel is even in t") {
        const auto& k = kernel(System::Neumann, "krein_exp", 128);
        auto g = classical_kernel_from_family(solve_special_family(k, FamilyTarget::krein()), ClassicalKind::Krein);
        for (int j : {10, 64, 128})
            for (int i = 0; i <= j; i += 3) CHECK(g.at(j, i) == g.at(j, -i));
        auto G = solve_classical(ClassicalKind::Pariiskii, k, 0.5);
        const Vec& v = G.values[0];
        for (int i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(v[v.size() - 1 - i]).epsilon(1e-12));
    }

    TEST_CASE("family-derived and direct kernels agree") {
        const auto& kd = kernel(System::Dirichlet, "gl_rational", 256);
        auto L = classical_kernel_from_family(solve_special_family(kd, FamilyTarget::gl()), ClassicalKind::GL);
        for (double xi : {0.25, 0.5, 1.0}) {
            auto direct = solve_classical(ClassicalKind::GL, kd, xi);
            CHECK(max_diff_row(L, direct) <= 0.02 * direct.max_abs());
        }
        const auto& kn = kernel(System::Neumann, "krein_exp", 256);
        auto g = classical_kernel_from_family(solve_special_family(kn, FamilyTarget::krein()), ClassicalKind::Krein);
        auto G = classical_kernel_from_family(solve_special_family(kn, FamilyTarget::pariiskii()),
                                              ClassicalKind::Pariiskii);
        for (double xi : {0.25, 0.75}) {
            auto dg = solve_classical(ClassicalKind::Krein, kn, xi);
            CHECK(max_diff_row(g, dg) <= 0.02 * dg.max_abs());
            auto dG = solve_classical(ClassicalKind::Pariiskii, kn, xi);
            CHECK(max_diff_row(G, dG) <= 0.02 * dG.max_abs());
        }
    }

    TEST_CASE("vanishing normaliser is reported") {
        auto fam = solve_special_family(zero_dirichlet(64), FamilyTarget::gl());
        fam.readouts[10] = 0.0;
        CHECK_THROWS_AS(classical_kernel_from_family(fam, ClassicalKind::GL), DegenerateKernel);
    }

    TEST_CASE("kind names round trip") {
        for (auto kind : {ClassicalKind::GL, ClassicalKind::Krein, ClassicalKind::Pariiskii, ClassicalKind::Marchenko})
            CHECK(classical_from_string(to_string(kind)) == kind);
        CHECK_THROWS_AS(classical_from_string("abel"), ParseError);
    }
}

TEST_SUITE("singular controls and visualisation") {
    TEST_CASE("trivial medium: amplitude xi, no regular part") {
        auto fam = solve_special_family(zero_dirichlet(64), FamilyTarget::gl());
        auto L = classical_kernel_from_family(fam, ClassicalKind::GL);
        auto sc = singular_control(fam, L, 0.25);
        CHECK(sc.amplitude == doctest::Approx(0.25));
        CHECK(sc.regular.values.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(sc.T - sc.xi == doctest::Approx(0.75));
    }

    TEST_CASE("amplitude equals y(xi) on gl_rational") {
        const auto& k = kernel(System::Dirichlet, "gl_rational", 256);
        auto fam = solve_special_family(k, FamilyTarget::gl());
        auto L = classical_kernel_from_family(fam, ClassicalKind::GL);
        for (double xi : {0.25, 0.5, 0.75}) CHECK(singular_control(fam, L, xi).amplitude == doctest::Approx(xi + xi * xi * xi).epsilon(0.02));
    }

    TEST_CASE("visualising functional") {
        auto k = zero_dirichlet(128);
        auto fam = solve_special_family(k, FamilyTarget::gl());
        auto L = classical_kernel_from_family(fam, ClassicalKind::GL);
        auto C = assemble_connecting(k, 1.0);
        auto sc = singular_control(fam, L, 0.5);
        TimeGrid g(1.0, 128);
        auto zero = SampledFunction::sample(g, [](double) { return 0.0; });
        CHECK(visualize_wave(C, sc, zero) == 0.0);
        auto f = SampledFunction::sample(g, [](double t) { return std::sin(3.0 * t) * t; });
        CHECK(visualize_wave(C, sc, f) == doctest::Approx(std::sin(1.5) * 0.5).epsilon(1e-9));
    }

    TEST_CASE("visualising functional matches the wave on gl_rational") {
        auto m = make_test_medium("gl_rational");
        const auto& k = kernel(System::Dirichlet, "gl_rational", 256);
        auto fam = solve_special_family(k, FamilyTarget::gl());
        auto L = classical_kernel_from_family(fam, ClassicalKind::GL);
        auto C = assemble_connecting(k, 1.0);
        auto f = random_smooth_controls(TimeGrid(1.0, 256), 1, 42)[0];
        auto state = apply_control_operator(System::Dirichlet, m, f, 1.0);
        for (double xi : {0.25, 0.625}) {
            const double v = visualize_wave(C, singular_control(fam, L, xi), f);
            CHECK(std::abs(v - state.at(xi)) <= 0.02 * state.values.cwiseAbs().maxCoeff());
        }
    }
}

TEST_SUITE("transformation operator") {
    TEST_CASE("zero kernel maps to the free solutions") {
        auto L = classical_kernel_from_family(solve_special_family(zero_dirichlet(64), FamilyTarget::gl()),
                                              ClassicalKind::GL);
        CHECK(transformation_apply(L, 4.0, 0.75) == doctest::Approx(std::sin(1.5) / 2.0));
        CHECK(transformation_apply(L, 0.0, 0.75) == doctest::Approx(0.75));
    }

    TEST_CASE("inverse control operator") {
        auto L = classical_kernel_from_family(solve_special_family(zero_dirichlet(64), FamilyTarget::gl()),
                                              ClassicalKind::GL);
        TimeGrid g(1.0, 64);
        auto zero = SampledFunction::sample(g, [](double) { return 0.0; });
        CHECK(apply_inverse_control_operator(L, zero).values.cwiseAbs().maxCoeff() == 0.0);
        auto a = SampledFunction::sample(g, [](double x) { return x * (1.0 - x); });
        auto f = apply_inverse_control_operator(L, a);
        for (int j = 0; j <= 64; ++j) CHECK(f[j] == doctest::Approx(a.at(1.0 - g.node(j))).epsilon(1e-12));
    }

    TEST_CASE("control built by the inverse operator reaches its target") {
        auto m = make_test_medium("gl_rational");
        const auto& k = kernel(System::Dirichlet, "gl_rational", 256);
        auto L = classical_kernel_from_family(solve_special_family(k, FamilyTarget::gl()), ClassicalKind::GL);
        TimeGrid g(1.0, 256);
        auto a = SampledFunction::sample(g, [](double x) { return std::pow(std::sin(M_PI * x), 2); });
        auto f = apply_inverse_control_operator(L, a);
        auto state = apply_control_operator(System::Dirichlet, m, f, 1.0);
        double err = 0.0;
        for (int i = 0; i < state.size(); ++i) err = std::max(err, std::abs(state[i] - a.at(state.grid.node(i))));
        CHECK(err <= 0.02);
    }
}
