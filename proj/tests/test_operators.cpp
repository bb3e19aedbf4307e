#include <doctest.h>

#include <cmath>
#include <random>

#include "zk/grid.hpp"
#include "zk/operators.hpp"

using namespace zk;

namespace {

constexpr double kPi = 3.14159265358979323846;

// X = x^3 (1-x)^2 and derivatives
double X(double x, int k) {
    const double c[6] = {0, 0, 0, 1, -2, 1};
    double v = 0.0;
    for (int p = 0; p <= 5; ++p) {
        if (p < k) continue;
        double f = 1.0;
        for (int j = 0; j < k; ++j) f *= (p - j);
        v += c[p] * f * std::pow(x, p - k);
    }
    return v;
}

GridPtr grid_1d_periodic(int nx, int ny = 8) {
    return make_grid({1, nx, ny, 0, TransverseBc::periodic});
}

GridPtr grid_1d_dirichlet(int nx, int ny = 8) {
    return make_grid({1, nx, ny, 0, TransverseBc::dirichlet});
}

// field constant in y (exact on the periodic basis: mode 0)
Field xprofile(const GridPtr& g, BcTag tag = BcTag::zk_regularized) {
    Field f = sample(g, [](double x, double, double) { return X(x, 0); });
    f.bc_tag = tag;
    return f;
}

}  // namespace

TEST_CASE("x derivative of the cubic-bump profile matches the analytic form") {
    // u_xxx = 6 - 48 x + 60 x^2
    auto err = [](int nx) {
        auto g = grid_1d_periodic(nx);
        Field u = xprofile(g);
        Field d = derivative(u, Axis::x, 3, XClosure::regularized_bcs);
        double e = 0.0;
        for (int i = 0; i <= nx; ++i)
            e = std::max(e, std::abs(d.at(i, 0) - X(i * 1.0 / nx, 3)));
        return e;
    };
    const double e1 = err(64), e2 = err(128);
    CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("derivative rejects invalid axis and order") {
    auto g = grid_1d_dirichlet(16);
    Field u(g);
    CHECK_THROWS_AS(derivative(u, Axis::z, 1), std::invalid_argument);
    CHECK_THROWS_AS(derivative(u, Axis::x, 5), std::invalid_argument);
    CHECK_THROWS_AS(derivative(u, Axis::x, 3, XClosure::regularized_bcs),
                    std::invalid_argument);  // unconstrained tag
}

TEST_CASE("cos(y) is an eigenfunction of the transverse derivatives") {
    auto g = grid_1d_dirichlet(16, 12);
    Field u = sample(g, [](double, double y, double) { return std::cos(y); });
    Field uyy = derivative(u, Axis::y, 2);
    Field uy4 = derivative(u, Axis::y, 4);
    // no truncation error; rounding is amplified by kappa_max^order
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        CHECK(uyy.values[k] == doctest::Approx(-u.values[k]).epsilon(1e-11));
        CHECK(uy4.values[k] == doctest::Approx(u.values[k]).epsilon(1e-9));
    }
}

TEST_CASE("op_A reduces to u_xxx + c u_x on transversally constant fields") {
    auto err = [](int nx) {
        auto g = grid_1d_periodic(nx);
        Field u = xprofile(g);
        Field a = op_A(u, 1.0);
        double e = 0.0;
        for (int i = 2; i <= nx - 2; ++i) {
            const double x = double(i) / nx;
            e = std::max(e, std::abs(a.at(i, 0) - (X(x, 3) + X(x, 1))));
        }
        return e;
    };
    CHECK(err(64) / err(128) >= 3.5);

    // with transverse structure: u = X(x) cos(y), c = 0:
    // A u = (X''' - X') cos(y)
    auto errd = [](int nx) {
        auto gd = make_grid({1, nx, 8, 0, TransverseBc::dirichlet});
        Field v = sample(gd, [](double x, double y, double) { return X(x, 0) * std::cos(y); });
        v.bc_tag = BcTag::zk_regularized;
        Field av = op_A(v, 0.0);
        double e = 0.0;
        for (int i = 2; i <= nx - 2; ++i)
            for (int t = 0; t < gd->nt(); ++t) {
                const double x = double(i) / nx;
                const double want = (X(x, 3) - X(x, 1)) * std::cos(gd->ypoint(t));
                e = std::max(e, std::abs(av.at(i, t) - want));
            }
        return e;
    };
    CHECK(errd(64) / errd(128) >= 3.5);
}

TEST_CASE("op_L on cos(y) returns cos(y) exactly and 24 on x^4 interior") {
    auto g = grid_1d_dirichlet(16, 8);
    Field u = sample(g, [](double, double y, double) { return std::cos(y); });
    u.bc_tag = BcTag::zk_regularized;
    Field l = op_L(u);
    // the x part contributes only rounding (one-sided rows carry 1/h^4)
    for (std::size_t k = 0; k < u.values.size(); ++k)
        CHECK(l.values[k] == doctest::Approx(u.values[k]).epsilon(1e-7));

    Field q = sample(g, [](double x, double, double) { return x * x * x * x; });
    Field lq = derivative(q, Axis::x, 4, XClosure::interior_only);
    for (int i = 2; i <= 14; ++i) CHECK(lq.at(i, 0) == doctest::Approx(24.0).epsilon(1e-6));
}

TEST_CASE("nonlinear_split vanishes on constants") {
    auto g = grid_1d_periodic(32);
    Field u = sample(g, [](double, double, double) { return 3.0; });
    Field n = nonlinear_split(u);
    for (double v : n.values) CHECK(v == 0.0);
}

TEST_CASE("split-form work telescopes to zero for fields vanishing at x=0,1") {
    auto g = grid_1d_dirichlet(48, 8);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field u(g);
    for (int i = 1; i < 48; ++i)
        for (int t = 0; t < g->nt(); ++t) u.at(i, t) = dist(rng);
    Field n = nonlinear_split(u);
    const double work = inner(u, n);
    CHECK(std::abs(work) < 1e-14 * (1.0 + norm_l2(u)));
}

TEST_CASE("split-form skew symmetry on a periodic-in-x test ring") {
    // test-only periodic centered differences on a ring of m points
    const int m = 64;
    const double h = 2.0 * kPi / m;
    std::vector<double> u(m), du(m), usq(m), dusq(m);
    for (int i = 0; i < m; ++i) u[i] = std::sin(i * h) + 0.3 * std::cos(2 * i * h);
    for (int i = 0; i < m; ++i) usq[i] = u[i] * u[i];
    auto dper = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (int i = 0; i < m; ++i)
            out[i] = (in[(i + 1) % m] - in[(i + m - 1) % m]) / (2.0 * h);
    };
    dper(u, du);
    dper(usq, dusq);
    double work = 0.0;
    for (int i = 0; i < m; ++i) work += h * u[i] * (u[i] * du[i] + dusq[i]) / 3.0;
    CHECK(std::abs(work) < 1e-13);
}

TEST_CASE("nonlinear_split approximates u u_x to second order") {
    auto err = [](int nx) {
        auto g = grid_1d_periodic(nx);
        Field u = xprofile(g);
        Field n = nonlinear_split(u);
        double e = 0.0;
        for (int i = 0; i <= nx; ++i) {
            const double x = i * 1.0 / nx;
            e = std::max(e, std::abs(n.at(i, 0) - X(x, 0) * X(x, 1)));
        }
        return e;
    };
    CHECK(err(64) / err(128) >= 3.4);
}

TEST_CASE("integrate matches closed-form integrals") {
    auto g = grid_1d_periodic(64);
    Field one = sample(g, [](double, double, double) { return 1.0; });
    CHECK(integrate(one, Weight::one) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(integrate(one, Weight::x) == doctest::Approx(kPi / 2.0).epsilon(1e-14));

    // int_0^1 x^3 (1-x)^2 dx = 1/60; endpoint derivatives vanish so the
    // trapezoidal error is O(h^4)
    Field u = xprofile(g);
    CHECK(integrate(u, Weight::one) == doctest::Approx(kPi / 60.0).epsilon(1e-8));

    // additivity of the 1+x weight holds bitwise by construction
    const double lhs = integrate(u, Weight::one_plus_x);
    const double rhs = integrate(u, Weight::one) + integrate(u, Weight::x);
    CHECK(lhs == rhs);
}

TEST_CASE("integration by parts: v D4 v vs (D2 v)^2 shrinks under refinement") {
    // v = x^3 (1-x)^2 (1+x) satisfies all four regularized conditions
    auto resid = [](int nx) {
        auto g = grid_1d_periodic(nx);
        Field v = sample(g, [](double x, double, double) { return X(x, 0) * (1.0 + x); });
        v.bc_tag = BcTag::zk_regularized;
        Field d4 = derivative(v, Axis::x, 4, XClosure::regularized_bcs);
        Field d2 = derivative(v, Axis::x, 2, XClosure::interior_only);
        return std::abs(inner(v, d4) - inner(d2, d2));
    };
    const double r1 = resid(64), r2 = resid(128);
    CHECK(r1 / r2 >= 2.0);
}

TEST_CASE("x and transverse derivatives commute to rounding") {
    auto g = grid_1d_dirichlet(32, 10);
    Field u = sample(g, [](double x, double y, double) {
        return std::sin(3.0 * x) * std::cos(y) + x * std::sin(2.0 * (y + kPi / 2));
    });
    Field a = derivative(derivative(u, Axis::x, 1), Axis::y, 2);
    Field b = derivative(derivative(u, Axis::y, 2), Axis::x, 1);
    for (std::size_t k = 0; k < a.values.size(); ++k)
        CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-11));
}

TEST_CASE("boundary traces use one-sided closures") {
    auto g = grid_1d_periodic(32);
    Field u = sample(g, [](double x, double, double) { return x * (1.0 - x); });
    auto ux1 = boundary_derivative(u, true, 1);
    for (double v : ux1) CHECK(v == doctest::Approx(-1.0).epsilon(1e-11));
    auto u0 = boundary_derivative(u, false, 0);
    for (double v : u0) CHECK(v == 0.0);
    CHECK(boundary_trace_l2(u, true, 1) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
}
