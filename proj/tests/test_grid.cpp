#include <doctest.h>

#include <cmath>

#include "zk/common.hpp"
#include "zk/grid.hpp"
#include "zk/operators.hpp"

using namespace zk;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("make_grid produces uniform x nodes") {
    GridSpec spec{1, 8, 4, 0, TransverseBc::dirichlet};
    auto g = make_grid(spec);
    REQUIRE(g->x.size() == 9);
    for (int k = 0; k <= 8; ++k) CHECK(g->x[k] == k / 8.0);
    // spacing ratio exactly 1 on dyadic grids
    double smin = 1.0, smax = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double s = g->x[k + 1] - g->x[k];
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    CHECK(smax / smin == 1.0);
}

TEST_CASE("make_grid rejects degenerate resolutions") {
    CHECK_THROWS_WITH_AS(make_grid({1, 4, 16, 0, TransverseBc::dirichlet}),
                         doctest::Contains("too coarse"), std::invalid_argument);
    CHECK_THROWS_AS(make_grid({1, 64, 2, 0, TransverseBc::dirichlet}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid({2, 64, 8, 2, TransverseBc::dirichlet}), std::invalid_argument);
}

TEST_CASE("periodic transverse wavenumbers are integers") {
    auto g = make_grid({2, 16, 8, 8, TransverseBc::periodic});
    for (double k : g->by.kappa) {
        CHECK(k == std::floor(k));
        CHECK(k <= 8.0);
    }
    CHECK(g->by.kappa[0] == 0.0);
}

TEST_CASE("transverse analysis inverts synthesis") {
    for (auto bc : {TransverseBc::dirichlet, TransverseBc::periodic}) {
        auto g = make_grid({1, 8, 12, 0, bc});
        const int n = g->by.n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += g->by.analysis[i * n + k] * g->by.synth[k * n + j];
                CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
            }
    }
}

TEST_CASE("dirichlet basis functions and their second derivatives vanish at walls") {
    auto g = make_grid({1, 8, 8, 0, TransverseBc::dirichlet});
    for (int m = 0; m < g->by.n; ++m) {
        const double kap = g->by.kappa[m];
        for (double theta : {0.0, kPi}) {
            CHECK(std::abs(std::sin(kap * theta)) < 1e-12);               // phi(wall)
            CHECK(std::abs(kap * kap * std::sin(kap * theta)) < 1e-9);    // phi''(wall)
        }
    }
}

TEST_CASE("transverse second derivative is diagonal and exact on the basis") {
    auto g = make_grid({1, 8, 10, 0, TransverseBc::dirichlet});
    for (int m : {1, 3}) {
        Field u = sample(g, [&](double, double y, double) {
            return std::sin(m * (y + kPi / 2.0));
        });
        Field uyy = derivative(u, Axis::y, 2);
        for (int t = 0; t < g->nt(); ++t)
            CHECK(uyy.at(3, t) == doctest::Approx(-double(m) * m * u.at(3, t)).epsilon(1e-12));
    }
}

TEST_CASE("sample evaluates pointwise and zero stays exactly zero") {
    auto g = make_grid({1, 16, 8, 0, TransverseBc::dirichlet});
    Field z = sample(g, [](double, double, double) { return 0.0; });
    for (double v : z.values) CHECK(v == 0.0);

    Field f = sample(g, [](double x, double y, double) {
        return x * x * x * (1 - x) * (1 - x) * std::cos(y);
    });
    for (int t = 0; t < g->nt(); ++t) {
        CHECK(f.at(0, t) == 0.0);
        CHECK(f.at(16, t) == 0.0);
    }
    // wall values of the spectral representation vanish identically: the
    // synthesis of any coefficient vector is a sine series in y + pi/2
    CHECK(f.finite());
}

TEST_CASE("sample rejects non-finite values naming the point") {
    auto g = make_grid({1, 8, 4, 0, TransverseBc::dirichlet});
    CHECK_THROWS_WITH_AS(sample(g, [](double x, double, double) { return 1.0 / x; }),
                         doctest::Contains("x=0"), numerical_error);
}

TEST_CASE("quadrature weights are positive and integrate 1 to the domain volume") {
    for (auto bc : {TransverseBc::dirichlet, TransverseBc::periodic}) {
        auto g1 = make_grid({1, 32, 12, 0, bc});
        Field one1 = sample(g1, [](double, double, double) { return 1.0; });
        CHECK(integrate(one1) == doctest::Approx(kPi).epsilon(1e-14));
        auto g2 = make_grid({2, 16, 8, 6, bc});
        Field one2 = sample(g2, [](double, double, double) { return 1.0; });
        CHECK(integrate(one2) == doctest::Approx(kPi * kPi).epsilon(1e-14));
        for (int t = 0; t < g2->nt(); ++t) CHECK(g2->wt(t) > 0.0);
    }
}
