#include <doctest.h>

#include <cmath>
#include <vector>

#include "zk/stencils.hpp"

using namespace zk;

namespace {

double apply_row_to(const StencilRow& row, const std::vector<double>& u) {
    return row.apply(u.data(), 1);
}

std::vector<double> sample_poly(int nx, double h, const std::vector<double>& coeff) {
    std::vector<double> u(nx + 1);
    for (int i = 0; i <= nx; ++i) {
        double x = i * h, v = 0.0, p = 1.0;
        for (double c : coeff) {
            v += c * p;
            p *= x;
        }
        u[i] = v;
    }
    return u;
}

}  // namespace

TEST_CASE("fd_weights reproduces classical stencils") {
    const std::vector<double> nodes = {-1.0, 0.0, 1.0};
    auto w = fd_weights(0.0, nodes, 2);
    CHECK(w[1][0] == doctest::Approx(-0.5));
    CHECK(w[1][1] == doctest::Approx(0.0));
    CHECK(w[1][2] == doctest::Approx(0.5));
    CHECK(w[2][0] == doctest::Approx(1.0));
    CHECK(w[2][1] == doctest::Approx(-2.0));
    CHECK(w[2][2] == doctest::Approx(1.0));

    const std::vector<double> nodes5 = {-2.0, -1.0, 0.0, 1.0, 2.0};
    auto w5 = fd_weights(0.0, nodes5, 4);
    CHECK(w5[3][0] == doctest::Approx(-0.5));
    CHECK(w5[3][1] == doctest::Approx(1.0));
    CHECK(w5[3][2] == doctest::Approx(0.0));
    CHECK(w5[3][3] == doctest::Approx(-1.0));
    CHECK(w5[3][4] == doctest::Approx(0.5));
    CHECK(w5[4][0] == doctest::Approx(1.0));
    CHECK(w5[4][2] == doctest::Approx(6.0));
}

TEST_CASE("XDeriv is exact on low-degree polynomials everywhere") {
    const int nx = 16;
    const double h = 1.0 / nx;
    // centered 3-point first differences are exact up to degree 2
    auto uq = sample_poly(nx, h, {2.0, 3.0, -1.0});
    XDeriv d1(nx, h, 1, XClosure::interior_only);
    XDeriv d2(nx, h, 2, XClosure::interior_only);
    XDeriv d3(nx, h, 3, XClosure::interior_only);
    std::vector<double> out(nx + 1);
    d1.apply_line(uq.data(), 1, out.data(), 1);
    for (int i = 0; i <= nx; ++i)
        CHECK(out[i] == doctest::Approx(3.0 - 2.0 * i * h).epsilon(1e-11));
    // second/third differences are exact on cubics
    auto uc = sample_poly(nx, h, {2.0, 3.0, -1.0, 0.5});
    d2.apply_line(uc.data(), 1, out.data(), 1);
    for (int i = 0; i <= nx; ++i)
        CHECK(out[i] == doctest::Approx(-2.0 + 3.0 * i * h).epsilon(1e-9));
    d3.apply_line(uc.data(), 1, out.data(), 1);
    for (int i = 0; i <= nx; ++i) CHECK(out[i] == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("XDeriv interior accuracy is second order") {
    auto err3 = [](int nx) {
        const double h = 1.0 / nx;
        std::vector<double> u(nx + 1), out(nx + 1);
        for (int i = 0; i <= nx; ++i) u[i] = std::sin(2.0 * i * h);
        XDeriv d3(nx, h, 3, XClosure::interior_only);
        d3.apply_line(u.data(), 1, out.data(), 1);
        double e = 0.0;
        for (int i = 2; i <= nx - 2; ++i)
            e = std::max(e, std::abs(out[i] + 8.0 * std::cos(2.0 * i * h)));
        return e;
    };
    const double e1 = err3(64), e2 = err3(128);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("ghost closures keep near-boundary rows second order") {
    // u = x^3 (1-x)^2 (1+x) = x^3 - x^4 - x^5 + x^6 satisfies
    // u(0)=u(1)=u_x(1)=u_xx(0)=0
    auto exact = [](double x, int k) {
        const double c[7] = {0, 0, 0, 1, -1, -1, 1};
        double v = 0.0;
        for (int p = 0; p <= 6; ++p) {
            if (p < k) continue;
            double f = 1.0;
            for (int j = 0; j < k; ++j) f *= (p - j);
            v += c[p] * f * std::pow(x, p - k);
        }
        return v;
    };
    auto row_errors = [&](int nx, int order) {
        const double h = 1.0 / nx;
        std::vector<double> u(nx + 1), out(nx + 1);
        for (int i = 0; i <= nx; ++i) u[i] = exact(i * h, 0);
        XDeriv d(nx, h, order, XClosure::regularized_bcs);
        d.apply_line(u.data(), 1, out.data(), 1);
        return std::pair<double, double>{std::abs(out[1] - exact(h, order)),
                                         std::abs(out[nx - 1] - exact(1.0 - h, order))};
    };
    for (int order : {3, 4}) {
        auto [l1, r1] = row_errors(32, order);
        auto [l2, r2] = row_errors(64, order);
        CHECK(l1 / std::max(l2, 1e-14) > 3.0);
        CHECK(r1 / std::max(r2, 1e-14) > 3.0);
    }
}

TEST_CASE("boundary-condition rows are exact on matching polynomials") {
    const int nx = 32;
    const double h = 1.0 / nx;
    // u_x(1) row on u = (1-x)^2 (u_x(1) = 0)
    auto u = sample_poly(nx, h, {1.0, -2.0, 1.0});
    auto rows = bc_rows(nx, h, true);
    REQUIRE(rows.size() == 4);
    // rows: u(0), u(1), u_x(1), u_xx(0)
    CHECK(std::abs(apply_row_to(rows[2].second, u)) < 1e-12);
    // u_xx(0) row on u = x^3 (u_xx(0) = 0)
    auto ucube = sample_poly(nx, h, {0.0, 0.0, 0.0, 1.0});
    CHECK(std::abs(apply_row_to(rows[3].second, ucube)) < 1e-10);
    CHECK(rows[0].first == 0);
    CHECK(rows[1].first == nx);
    CHECK(rows[2].first == nx - 1);
    CHECK(rows[3].first == 1);

    auto idx = bc_row_indices(nx, false);
    CHECK(idx.size() == 3);
}

TEST_CASE("boundary_stencil evaluates one-sided derivatives to third order") {
    auto err = [](int nx) {
        const double h = 1.0 / nx;
        std::vector<double> u(nx + 1);
        for (int i = 0; i <= nx; ++i) u[i] = std::exp(i * h);
        const double d1 = boundary_stencil(nx, h, 1, true, 4).apply(u.data(), 1);
        return std::abs(d1 - std::exp(1.0));
    };
    CHECK(err(32) / err(64) > 6.0);  // third order: factor ~8
}
