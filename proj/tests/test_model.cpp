#include <doctest.h>

#include <cmath>
#include <random>

#include "zk/model.hpp"
#include "zk/operators.hpp"

using namespace zk;

namespace {

GridPtr dgrid(int nx, int ny = 8) { return make_grid({1, nx, ny, 0, TransverseBc::dirichlet}); }

ModelParams params_with_ms(double c, double eps, std::shared_ptr<const ManufacturedSolution> ms) {
    ModelParams p;
    p.c = c;
    p.epsilon = eps;
    p.forcing = manufactured_forcing(ms, [&] {
        ModelParams q;
        q.c = c;
        q.epsilon = eps;
        return q;
    }());
    return p;
}

}  // namespace

TEST_CASE("rhs of the zero state with zero forcing is exactly zero") {
    auto g = dgrid(16);
    Field u(g, BcTag::zk_regularized);
    ModelParams p;
    p.epsilon = 0.01;
    Field r = rhs(u, 0.0, p);
    for (double v : r.values) CHECK(v == 0.0);
}

TEST_CASE("manufactured forcing satisfies the equation identically") {
    GridSpec spec{1, 32, 8, 0, TransverseBc::dirichlet};
    auto ms = ms_poly_cos(1.0, -1.0, spec);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uy(-1.5, 1.5), ut(0.0, 0.4);
    for (double eps : {0.0, 0.01}) {
        const double c = 1.0;
        for (int k = 0; k < 40; ++k) {
            const double x = ux(rng), y = uy(rng), t = ut(rng);
            // independent assembly of every term from the closed forms
            const double lhs = ms->time_derivative(x, y, 0, t) +
                               (ms->dx(3, x, y, 0, t) /* u_xxx */) +
                               [&] {  // u_xyy: X' Ty'' e^(sigma t)
                                   return ms->amplitude * std::exp(ms->sigma * t) *
                                          ms->xpoly(x, 1) * ms->trig(ms->kappa_y, y, 2);
                               }() +
                               c * ms->dx(1, x, y, 0, t) +
                               ms->value(x, y, 0, t) * ms->dx(1, x, y, 0, t) +
                               eps * (ms->dx(4, x, y, 0, t) + ms->dy4(x, y, 0, t));
            const double f = ms->forcing(x, y, 0, t, c, eps);
            CHECK(std::abs(lhs - f) <= 1e-12 * (1.0 + std::abs(f)));
        }
    }
}

TEST_CASE("manufactured forcing is linear in epsilon") {
    GridSpec spec{1, 32, 8, 0, TransverseBc::dirichlet};
    auto ms = ms_poly_cos(1.0, -1.0, spec);
    const double x = 0.37, y = 0.21, t = 0.05, c = 1.0;
    const double f0 = ms->forcing(x, y, 0, t, c, 0.0);
    const double f1 = ms->forcing(x, y, 0, t, c, 0.01);
    const double extra = 0.01 * (ms->dx(4, x, y, 0, t) + ms->dy4(x, y, 0, t));
    CHECK(f1 - f0 == doctest::Approx(extra).epsilon(1e-12));
}

TEST_CASE("rhs approximates the exact time derivative to second order") {
    GridSpec base{1, 32, 8, 0, TransverseBc::dirichlet};
    auto err = [&](int nx, double eps) {
        GridSpec spec = base;
        spec.nx = nx;
        auto g = make_grid(spec);
        auto ms = ms_poly_cos(1.0, -1.0, spec);
        ModelParams p = params_with_ms(1.0, eps, ms);
        Field u = ms_sample(*ms, g, 0.2);
        if (eps == 0.0) u.bc_tag = BcTag::zk_limit;
        Field r = rhs(u, 0.2, p);
        Field want = sample(g, [&](double x, double y, double z) {
            return ms->time_derivative(x, y, z, 0.2);
        });
        Field diff = lincomb(1.0, r, -1.0, want);
        return norm_l2(diff);
    };
    for (double eps : {0.0, 0.01}) {
        const double e1 = err(32, eps), e2 = err(64, eps);
        CHECK(e1 / e2 >= 3.0);
    }
}

TEST_CASE("rhs at eps > 0 equals rhs at eps = 0 minus eps L u exactly") {
    GridSpec spec{1, 24, 8, 0, TransverseBc::dirichlet};
    auto g = make_grid(spec);
    auto ms = ms_poly_cos(1.0, -1.0, spec);
    Field u = ms_sample(*ms, g, 0.0);
    ModelParams p0 = params_with_ms(1.0, 0.0, ms);
    ModelParams p1 = p0;
    p1.epsilon = 0.02;
    Field r0 = rhs(u, 0.1, p0);
    Field r1 = rhs(u, 0.1, p1);
    Field l = op_L(u);
    Field expect = r0;
    axpy(-0.02, l, expect);
    for (std::size_t k = 0; k < r1.values.size(); ++k)
        CHECK(r1.values[k] == expect.values[k]);
}

TEST_CASE("rhs is affine in the forcing slot") {
    auto g = dgrid(24);
    Field u = make_initial(InitialPreset::poly_bump, 1.0, g);
    ModelParams pz;  // zero forcing
    ModelParams pf;
    pf.forcing.kind = ForcingKind::analytic;
    pf.forcing.name = "decay-bump";
    pf.forcing.amplitude = 1.5;
    Field f = forcing_eval(pf.forcing, g, 0.3);
    Field r1 = rhs(u, 0.3, pf);
    Field r0 = rhs(u, 0.3, pz);
    for (std::size_t k = 0; k < r1.values.size(); ++k)
        CHECK(r1.values[k] - r0.values[k] ==
              doctest::Approx(f.values[k]).epsilon(1e-13));
}

TEST_CASE("decay-bump analytic forcing has f_t = -f") {
    auto g = dgrid(16);
    ForcingSpec spec;
    spec.kind = ForcingKind::analytic;
    spec.name = "decay-bump";
    spec.amplitude = 2.0;
    Field f = forcing_eval(spec, g, 0.7, ForcingDerivative::f);
    Field ft = forcing_eval(spec, g, 0.7, ForcingDerivative::f_t);
    for (std::size_t k = 0; k < f.values.size(); ++k) CHECK(ft.values[k] == -f.values[k]);
}

TEST_CASE("zero forcing evaluates to zero fields") {
    auto g = dgrid(16);
    ForcingSpec spec;
    for (auto which : {ForcingDerivative::f, ForcingDerivative::f_t}) {
        Field f = forcing_eval(spec, g, 1.0, which);
        for (double v : f.values) CHECK(v == 0.0);
    }
}

TEST_CASE("unknown forcing preset is rejected") {
    auto g = dgrid(16);
    ForcingSpec spec;
    spec.kind = ForcingKind::analytic;
    spec.name = "mystery";
    CHECK_THROWS_AS(forcing_eval(spec, g, 0.0), std::invalid_argument);
}

TEST_CASE("initial presets satisfy the regularized boundary conditions") {
    auto g = dgrid(64);
    for (auto preset : {InitialPreset::poly_bump, InitialPreset::two_bump}) {
        Field u = make_initial(preset, 1.0, g);
        CHECK(u.bc_tag == BcTag::zk_regularized);
        for (int t = 0; t < g->nt(); ++t) {
            CHECK(u.at(0, t) == 0.0);
            CHECK(u.at(64, t) == 0.0);
        }
        auto ux1 = boundary_derivative(u, true, 1);
        auto uxx0 = boundary_derivative(u, false, 2);
        for (int t = 0; t < g->nt(); ++t) {
            CHECK(std::abs(ux1[t]) < 1e-3);
            CHECK(std::abs(uxx0[t]) < 1e-2);
        }
    }
    Field z = make_initial(InitialPreset::zero, 3.0, g);
    CHECK(norm_l2(z) == 0.0);
}
