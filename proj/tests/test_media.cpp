#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bcm/errors.hpp"
#include "bcm/media.hpp"
#include "bcm/numerics.hpp"

using namespace bcm;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("bcm_media_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

}  // namespace

TEST_CASE("catalog media") {
    auto unit = make_test_medium("unit");
    CHECK(unit.rho_at(0.7) == 1.0);
    CHECK(unit.q_at(0.7) == 0.0);
    CHECK(make_test_medium("gl_rational").q_at(1.0) == doctest::Approx(3.0));
    CHECK(make_test_medium("krein_exp").rho_at(0.0) == doctest::Approx(4.0));
    CHECK(make_test_medium("krein_exp_unit").rho_at(0.0) == doctest::Approx(1.0));
    auto bump = make_test_medium("scatter_bump");
    REQUIRE(bump.support_bound);
    CHECK(*bump.support_bound == 1.5);
    CHECK(bump.q_at(1.0) == doctest::Approx(1.0));
    CHECK(bump.q_at(0.4) == 0.0);
    CHECK(bump.q_at(1.6) == 0.0);
    CHECK_THROWS_AS(make_test_medium("nonsense"), DomainError);
}

TEST_CASE("samples agree with the analytic forms") {
    auto m = make_test_medium("gl_rational");
    for (int i = 0; i <= m.n_cells; i += 500) CHECK(m.q[i] == doctest::Approx(6.0 / (1.0 + std::pow(i * m.x_end / m.n_cells, 2))));
}

TEST_SUITE("eikonal") {
    TEST_CASE("unit density: tau(x) = x") {
        auto e = build_eikonal(make_test_medium("unit", 2.0, 200));
        CHECK(e.tau_at(1.3) == doctest::Approx(1.3).epsilon(1e-12));
        CHECK(e.x_at(0.7) == doctest::Approx(0.7).epsilon(1e-12));
    }

    TEST_CASE("rho = e^{2x}: tau(1) = e - 1") {
        auto e = build_eikonal(make_test_medium("krein_exp_unit", 2.0, 800));
        CHECK(std::abs(e.tau_at(1.0) - (std::exp(1.0) - 1.0)) < 1e-4);
    }

    TEST_CASE("rho = 4 e^{2x}: x(2(e - 1)) = 1") {
        auto m = make_test_medium("krein_exp", 2.0, 800);
        auto e = build_eikonal(m);
        CHECK(std::abs(e.x_at(2.0 * (std::exp(1.0) - 1.0)) - 1.0) < 2.0 * m.x_end / m.n_cells);
    }

    TEST_CASE("differentiated travel time returns rho^{1/2} at second order") {
        auto err = [](int n) {
            auto m = make_test_medium("krein_exp", 1.0, n);
            auto e = build_eikonal(m);
            auto d = differentiate(e.tau_of_x, 1);
            double worst = 0.0;
            for (int i = 0; i < d.size(); ++i)
                worst = std::max(worst, std::abs(d[i] - 2.0 * std::exp(d.grid.node(i))));
            return worst;
        };
        const double ratio = err(200) / err(400);
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);
    }

    TEST_CASE("travel time and depth extend past the profile") {
        auto m = make_test_medium("krein_exp", 1.0, 400);
        const double tau1 = travel_time(m, 1.0);
        CHECK(travel_time(m, 1.5) == doctest::Approx(tau1 + 0.5 * 2.0 * std::exp(1.0)).epsilon(1e-4));
        CHECK(depth_at_time(m, travel_time(m, 1.3)) == doctest::Approx(1.3).epsilon(1e-6));
        CHECK(depth_at_time(m, travel_time(m, 0.4)) == doctest::Approx(0.4).epsilon(1e-6));
    }
}

TEST_SUITE("sturm-liouville oracle") {
    TEST_CASE("q = 0 gives y = x") {
        auto y = sl_solution(make_test_medium("unit", 2.0, 200), 0.0, 1.0);
        CHECK(y.at(1.7) == doctest::Approx(1.7).epsilon(1e-12));
    }

    TEST_CASE("q = 6/(1+x^2) gives y = x + x^3") {
        auto y = sl_solution(make_test_medium("gl_rational"), 0.0, 1.0);
        CHECK(std::abs(y.at(0.5) - 0.625) < 1e-8);
        CHECK(std::abs(y.at(1.0) - 2.0) < 1e-7);
    }

    TEST_CASE("q = 1 gives cosh") {
        auto m = MediumProfile::from_functions("one", 2.0, 400, [](double) { return 1.0; },
                                               [](double) { return 1.0; });
        auto y = sl_solution(m, 1.0, 0.0);
        CHECK(y.at(1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-9));
    }

    TEST_CASE("spectral parameter") {
        Vec y = rk4_sturm_liouville([](double) { return 0.0; }, 4.0, 0.0, 1.0, 200, 0.0, 1.0);
        CHECK(y[200] == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-9));
        Vec z = rk4_sturm_liouville([](double) { return 0.0; }, -1.0, 1.0, 0.0, 200, std::exp(-1.0), -std::exp(-1.0));
        CHECK(z[200] == doctest::Approx(1.0).epsilon(1e-9));
    }

    TEST_CASE("discrete residual on catalog media") {
        for (const char* name : {"unit", "gl_rational", "scatter_bump"}) {
            auto m = make_test_medium(name, 2.0, 400);
            auto y = sl_solution(m, 0.0, 1.0);
            auto d2 = differentiate(y, 2);
            const double h = m.x_end / m.n_cells;
            double res = 0.0;
            for (int i = 0; i < y.size(); ++i) res = std::max(res, std::abs(-d2[i] + m.q[i] * y[i]));
            CHECK(res <= 10.0 * h * h * y.values.cwiseAbs().maxCoeff());
        }
    }
}

TEST_SUITE("medium files") {
    TEST_CASE("round trip through CSV") {
        auto m = make_test_medium("gl_rational", 1.0, 50);
        const std::string path = temp_path("roundtrip.csv");
        write_medium_csv(path, m);
        auto r = read_medium_csv(path);
        CHECK(r.n_cells == 50);
        CHECK(r.x_end == doctest::Approx(1.0));
        CHECK((r.q - m.q).cwiseAbs().maxCoeff() == 0.0);
        CHECK((r.rho - m.rho).cwiseAbs().maxCoeff() == 0.0);
        CHECK(make_test_medium(path).q_at(0.5) == doctest::Approx(4.8).epsilon(1e-6));
        std::remove(path.c_str());
    }

    TEST_CASE("malformed files are rejected") {
        const std::string path = temp_path("bad.csv");
        write_text(path, "x,rho\n0,1\n");
        CHECK_THROWS_AS(read_medium_csv(path), ParseError);
        write_text(path, "x,rho,q\n0,1,0\n0.1,1,0\n0.3,1,0\n0.4,1,0\n0.5,1,0\n");
        CHECK_THROWS_AS(read_medium_csv(path), ParseError);
        write_text(path, "x,rho,q\n0,1,0\n0.1,1,abc\n0.2,1,0\n0.3,1,0\n");
        CHECK_THROWS_AS(read_medium_csv(path), ParseError);
        write_text(path, "x,rho,q\n0,1,0\n0.1,-1,0\n0.2,1,0\n0.3,1,0\n0.4,1,0\n");
        CHECK_THROWS_AS(read_medium_csv(path), Error);
        CHECK_THROWS_AS(read_medium_csv(temp_path("missing.csv")), ParseError);
        std::remove(path.c_str());
    }

    TEST_CASE("potential support of sampled media") {
        CHECK_FALSE(potential_support(make_test_medium("unit", 2.0, 200)));
        auto s = potential_support(make_test_medium("scatter_bump", 2.0, 200));
        REQUIRE(s);
        CHECK(*s == doctest::Approx(1.5).epsilon(0.01));
    }
}

TEST_CASE("validation") {
    Vec rho = Vec::Ones(5), q = Vec::Zero(5);
    rho[2] = 0.0;
    CHECK_THROWS_AS(MediumProfile::from_samples("bad", 1.0, rho, q), DomainError);
    CHECK_THROWS_AS(MediumProfile::from_samples("short", 1.0, Vec::Ones(2), Vec::Zero(2)), Error);
}
