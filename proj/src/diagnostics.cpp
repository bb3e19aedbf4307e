#include "zk/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "zk/common.hpp"
#include "zk/operators.hpp"
#include "zk/stencils.hpp"

namespace zk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Field difference_ut(const Field& u, const Field& u_prev, double dt) {
    return lincomb(1.0 / dt, u, -1.0 / dt, u_prev);
}

double grad_norm(const Field& u) {
    Field ux = derivative(u, Axis::x, 1, XClosure::interior_only);
    Field uy = derivative(u, Axis::y, 1);
    double s = inner(ux, ux) + inner(uy, uy);
    if (u.grid->spec.d == 2) {
        Field uz = derivative(u, Axis::z, 1);
        s += inner(uz, uz);
    }
    return std::sqrt(std::max(0.0, s));
}

// per-transverse-point integral over x with trapezoidal weights,
// optionally weighted by x
std::vector<double> xline_integral(const Field& u, bool weight_x) {
    const Grid& g = *u.grid;
    std::vector<double> out(g.nt(), 0.0);
    for (int i = 0; i < g.nxp(); ++i) {
        const double w = weight_x ? g.wx[i] * g.x[i] : g.wx[i];
        for (int t = 0; t < g.nt(); ++t) out[t] += w * u.at(i, t);
    }
    return out;
}

}  // namespace

const std::array<const char*, DiagnosticsRecord::ncolumns>& DiagnosticsRecord::column_names() {
    static const std::array<const char*, ncolumns> names = {
        "t",          "l2",        "l2_weighted_x", "l2_weighted_1px", "ux_l2",
        "uxx_l2",     "grad_l2",   "uyy_l2",        "uzz_l2",          "xi_norm",
        "trace_ux0",  "trace_uxx1", "ut_l2",        "ut_weighted",     "grad_ut_l2",
        "sigma",      "nonlin_l2", "f_l2",          "ft_l2"};
    return names;
}

std::array<double, DiagnosticsRecord::ncolumns> DiagnosticsRecord::as_row() const {
    return {t,          l2,        l2_weighted_x, l2_weighted_1px, ux_l2,
            uxx_l2,     grad_l2,   uyy_l2,        uzz_l2,          xi_norm,
            trace_ux0,  trace_uxx1, ut_l2,        ut_weighted,     grad_ut_l2,
            sigma,      nonlin_l2, f_l2,          ft_l2};
}

DiagnosticsRecord DiagnosticsRecord::from_row(const std::array<double, ncolumns>& r) {
    DiagnosticsRecord d;
    d.t = r[0];
    d.l2 = r[1];
    d.l2_weighted_x = r[2];
    d.l2_weighted_1px = r[3];
    d.ux_l2 = r[4];
    d.uxx_l2 = r[5];
    d.grad_l2 = r[6];
    d.uyy_l2 = r[7];
    d.uzz_l2 = r[8];
    d.xi_norm = r[9];
    d.trace_ux0 = r[10];
    d.trace_uxx1 = r[11];
    d.ut_l2 = r[12];
    d.ut_weighted = r[13];
    d.grad_ut_l2 = r[14];
    d.sigma = r[15];
    d.nonlin_l2 = r[16];
    d.f_l2 = r[17];
    d.ft_l2 = r[18];
    return d;
}

DiagnosticsRecord record(const SolverState& state, const ModelParams& params) {
    const Field& u = state.u;
    DiagnosticsRecord r;
    r.t = state.t;
    r.l2 = norm_l2(u);
    r.l2_weighted_x = weighted_norm(u, Weight::x);
    r.l2_weighted_1px = weighted_norm(u, Weight::one_plus_x);

    Field ux = derivative(u, Axis::x, 1, XClosure::interior_only);
    Field uxx = derivative(u, Axis::x, 2, XClosure::interior_only);
    Field uyy = derivative(u, Axis::y, 2);
    r.ux_l2 = norm_l2(ux);
    r.uxx_l2 = norm_l2(uxx);
    r.uyy_l2 = norm_l2(uyy);
    if (u.grid->spec.d == 2) {
        Field uzz = derivative(u, Axis::z, 2);
        r.uzz_l2 = norm_l2(uzz);
    }
    r.grad_l2 = grad_norm(u);
    r.xi_norm = std::sqrt(r.uxx_l2 * r.uxx_l2 + r.uyy_l2 * r.uyy_l2 + r.uzz_l2 * r.uzz_l2);
    r.trace_ux0 = boundary_trace_l2(u, false, 1);
    r.trace_uxx1 = boundary_trace_l2(u, true, 2);

    Field ut = state.has_prev && state.dt > 0.0
                   ? difference_ut(u, state.u_prev, state.dt)
                   : initial_time_derivative(u, params).field;
    r.ut_l2 = norm_l2(ut);
    r.ut_weighted = weighted_norm(ut, Weight::one_plus_x);
    r.grad_ut_l2 = grad_norm(ut);

    r.sigma = r.ux_l2 + r.l2;
    r.nonlin_l2 = norm_l2(pointwise_mul(u, ux));
    r.f_l2 = norm_l2(forcing_eval(params.forcing, u.grid, state.t, ForcingDerivative::f));
    r.ft_l2 = norm_l2(forcing_eval(params.forcing, u.grid, state.t, ForcingDerivative::f_t));
    return r;
}

double kappa(double nu, double f_sup_l2, double u0x_l2, double c_prime) {
    if (nu < 0.0 || f_sup_l2 < 0.0 || u0x_l2 < 0.0 || c_prime < 0.0)
        throw std::invalid_argument("kappa: inputs must be non-negative");
    const double nu2 = nu * nu;
    return f_sup_l2 * f_sup_l2 + c_prime * nu2 + c_prime * nu2 * nu2 * nu2 +
           u0x_l2 * u0x_l2;
}

InitialDerivative initial_time_derivative(const Field& u0, const ModelParams& params) {
    InitialDerivative out{rhs(u0, 0.0, params), 0.0, 0.0};
    out.l2 = norm_l2(out.field);

    const XClosure cl = u0.bc_tag == BcTag::zk_regularized ? XClosure::regularized_bcs
                                                           : XClosure::interior_only;
    Field lu = op_L(u0, cl);
    Field g = op_A(u0, params.c, closure_from_tag(u0.bc_tag));
    if (params.nonlinearity) {
        Field n = nonlinear_split(u0);
        axpy(1.0, n, g);
    }
    Field f0 = forcing_eval(params.forcing, u0.grid, 0.0, ForcingDerivative::f);
    axpy(-1.0, f0, g);
    out.eps_free_bound = norm_l2(lu) + norm_l2(g);
    return out;
}

double existence_time(double mu, double c3) {
    if (!(mu > 0.0)) throw std::invalid_argument("existence_time: mu must be positive");
    if (!(c3 > 0.0)) throw std::invalid_argument("existence_time: c3 must be positive");
    const double mu2 = mu * mu;
    return c3 / (mu2 * mu2);
}

double run_horizon(double T, double T1) { return std::min(T, T1); }

GronwallReport gronwall_check(const std::vector<double>& t, const std::vector<double>& y,
                              double c2, double mu0, double slack_rel, double slack_abs) {
    if (t.size() != y.size()) throw std::invalid_argument("gronwall_check: size mismatch");
    if (t.size() < 2) throw std::invalid_argument("gronwall_check: empty series");
    const double mu02 = mu0 * mu0;
    if (y[0] > mu02 * (1.0 + 1e-9))
        throw std::invalid_argument("gronwall_check: Y(0) exceeds mu0^2");

    GronwallReport rep;
    rep.first_violation_time = kNaN;
    rep.horizon = 3.0 / (8.0 * c2 * mu02 * mu02);
    const double bound = 2.0 * mu02;
    const double bound_tol = std::max(slack_abs, 1e-6 * bound);

    double first_t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double dt = t[i + 1] - t[i];
        if (!(dt > 0.0)) throw std::invalid_argument("gronwall_check: times must increase");
        const double dy = (y[i + 1] - y[i]) / dt;
        const double ymid = 0.5 * (y[i] + y[i + 1]);
        const double limit = c2 * ymid * ymid * ymid;
        const double excess = dy - limit;
        rep.max_derivative_excess = std::max(rep.max_derivative_excess, excess);
        if (excess > slack_rel * std::abs(limit) + slack_abs) {
            rep.derivative_ok = false;
            first_t = std::min(first_t, t[i + 1]);
        }
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] > rep.horizon * (1.0 + 1e-12)) break;
        const double excess = y[i] - bound;
        rep.max_bound_excess = std::max(rep.max_bound_excess, excess);
        if (excess > bound_tol) {
            rep.bound_ok = false;
            first_t = std::min(first_t, t[i]);
        }
    }
    if (!rep.derivative_ok || !rep.bound_ok) rep.first_violation_time = first_t;
    return rep;
}

double BalanceSeries::max_abs() const {
    double m = 0.0;
    for (double v : residual) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// weighted inner product restricted to PDE rows (BC rows excluded)
double inner_pde_rows(const Field& a, const Field& b, bool regularized) {
    const Grid& g = *a.grid;
    const auto bc = bc_row_indices(g.spec.nx, regularized);
    auto is_bc = [&](int i) {
        for (int idx : bc)
            if (idx == i) return true;
        return false;
    };
    double total = 0.0;
    for (int i = 0; i < g.nxp(); ++i) {
        if (is_bc(i)) continue;
        double row = 0.0;
        for (int t = 0; t < g.nt(); ++t) row += g.wt(t) * a.at(i, t) * b.at(i, t);
        total += g.wx[i] * row;
    }
    return total;
}

double bc_row_kinetic(const Field& ubar, const Field& du_over_dt, bool regularized) {
    const Grid& g = *ubar.grid;
    double total = 0.0;
    std::vector<int> nodes = {g.spec.nx - 1};
    if (regularized) nodes.push_back(1);
    for (int i : nodes) {
        double row = 0.0;
        for (int t = 0; t < g.nt(); ++t)
            row += g.wt(t) * ubar.at(i, t) * du_over_dt.at(i, t);
        total += g.wx[i] * row;
    }
    return total;
}

double residual_scheme_u(const Field& un, const Field& unp1, double tn, double dt,
                         const ModelParams& params, const StepConfig& step) {
    const bool reg = params.epsilon > 0.0;
    const double theta = step.theta;
    Field ubar = lincomb(0.5, unp1, 0.5, un);
    Field utheta = lincomb(theta, unp1, 1.0 - theta, un);
    Field du = lincomb(1.0 / dt, unp1, -1.0 / dt, un);

    const double kinetic = (inner(unp1, unp1) - inner(un, un)) / (2.0 * dt);
    const double bckin = bc_row_kinetic(ubar, du, reg);

    Field m = op_A(utheta, params.c);
    if (reg) {
        Field l = op_L(utheta);
        axpy(params.epsilon, l, m);
    }
    const double quad = inner_pde_rows(ubar, m, reg);

    Field f = forcing_eval(params.forcing, un.grid, tn + theta * dt, ForcingDerivative::f);
    const double fw = inner_pde_rows(ubar, f, reg);

    return kinetic - bckin + quad - fw;
}

// terms of the xu multiplier identity at the interval midpoint
double residual_xu(const Field& un, const Field& unp1, double tn, double dt,
                   const ModelParams& params) {
    const double eps = params.epsilon;
    Field ubar = lincomb(0.5, unp1, 0.5, un);
    const double x_n = 0.5 * inner(un, un, Weight::x);
    const double x_np1 = 0.5 * inner(unp1, unp1, Weight::x);
    const double t_ut = (x_np1 - x_n) / dt;

    Field ux = derivative(ubar, Axis::x, 1, XClosure::interior_only);
    Field uy = derivative(ubar, Axis::y, 1);
    double perp = inner(uy, uy);
    if (ubar.grid->spec.d == 2) {
        Field uz = derivative(ubar, Axis::z, 1);
        perp += inner(uz, uz);
    }
    const double t_xxx = 1.5 * inner(ux, ux);
    const double t_perp = 0.5 * perp;
    const double t_c = -0.5 * params.c * inner(ubar, ubar);
    Field u3 = pointwise_mul(pointwise_mul(ubar, ubar), ubar);
    const double t_n = params.nonlinearity ? -integrate(u3) / 3.0 : 0.0;

    double t_eps = 0.0;
    if (eps > 0.0) {
        Field uxx = derivative(ubar, Axis::x, 2, XClosure::interior_only);
        Field uyy = derivative(ubar, Axis::y, 2);
        double tr = boundary_trace_l2(ubar, false, 1);
        double s = -tr * tr + inner(uxx, uxx, Weight::x) + inner(uyy, uyy, Weight::x);
        if (ubar.grid->spec.d == 2) {
            Field uzz = derivative(ubar, Axis::z, 2);
            s += inner(uzz, uzz, Weight::x);
        }
        t_eps = eps * s;
    }
    Field f = forcing_eval(params.forcing, un.grid, tn + 0.5 * dt, ForcingDerivative::f);
    const double t_f = -inner(f, ubar, Weight::x);
    return t_ut + t_xxx + t_perp + t_c + t_n + t_eps + t_f;
}

// (1+x) u_t multiplier: identity for the time-differentiated equation over a
// state triple; v sampled at half steps.
double residual_1px_ut(const Field& um, const Field& u0, const Field& up, double t0,
                       double dtm, double dtp, const ModelParams& params) {
    const double eps = params.epsilon;
    Field v1 = lincomb(1.0 / dtm, u0, -1.0 / dtm, um);
    Field v2 = lincomb(1.0 / dtp, up, -1.0 / dtp, u0);
    Field vbar = lincomb(0.5, v1, 0.5, v2);
    const double w1 = inner(v1, v1, Weight::one_plus_x);
    const double w2 = inner(v2, v2, Weight::one_plus_x);
    const double dt_mid = 0.5 * (dtm + dtp);
    const double t_vt = 0.5 * (w2 - w1) / dt_mid;

    Field vx = derivative(vbar, Axis::x, 1, XClosure::interior_only);
    Field vy = derivative(vbar, Axis::y, 1);
    double perp = inner(vy, vy);
    if (u0.grid->spec.d == 2) {
        Field vz = derivative(vbar, Axis::z, 1);
        perp += inner(vz, vz);
    }
    const double tr0 = boundary_trace_l2(vbar, false, 1);
    const double t_delta = 0.5 * tr0 * tr0 + 1.5 * inner(vx, vx) + 0.5 * perp;
    const double t_c = -0.5 * params.c * inner(vbar, vbar);

    Field ux = derivative(u0, Axis::x, 1, XClosure::interior_only);
    Field v2f = pointwise_mul(vbar, vbar);
    double t_nl = 0.0;
    if (params.nonlinearity) {
        const double a = inner(ux, v2f, Weight::one_plus_x);
        const double b = inner(u0, v2f, Weight::one);
        t_nl = -0.5 * a - 0.5 * b + a;
    }

    double t_eps = 0.0;
    if (eps > 0.0) {
        Field vxx = derivative(vbar, Axis::x, 2, XClosure::interior_only);
        Field vyy = derivative(vbar, Axis::y, 2);
        double s = inner(vxx, vxx, Weight::one_plus_x) - tr0 * tr0 +
                   inner(vyy, vyy, Weight::one_plus_x);
        if (u0.grid->spec.d == 2) {
            Field vzz = derivative(vbar, Axis::z, 2);
            s += inner(vzz, vzz, Weight::one_plus_x);
        }
        t_eps = eps * s;
    }
    Field ft = forcing_eval(params.forcing, u0.grid, t0, ForcingDerivative::f_t);
    const double t_f = -inner(ft, vbar, Weight::one_plus_x);
    return t_vt + t_delta + t_c + t_nl + t_eps + t_f;
}

double transverse_trace_sq(const Field& w, bool at_right) {
    // ||w(x=0 or 1, .)||^2 over the transverse quadrature
    const Grid& g = *w.grid;
    const int i = at_right ? g.spec.nx : 0;
    double s = 0.0;
    for (int t = 0; t < g.nt(); ++t) s += g.wt(t) * w.at(i, t) * w.at(i, t);
    return s;
}

// (1+x) u_yy multiplier identity
double residual_1px_uyy(const Field& un, const Field& unp1, double tn, double dt,
                        const ModelParams& params) {
    const double eps = params.epsilon;
    const int d = un.grid->spec.d;
    Field ubar = lincomb(0.5, unp1, 0.5, un);

    auto wnorm_uy = [&](const Field& u) {
        Field uy = derivative(u, Axis::y, 1);
        return inner(uy, uy, Weight::one_plus_x);
    };
    const double t_ut = -0.5 * (wnorm_uy(unp1) - wnorm_uy(un)) / dt;

    Field uy = derivative(ubar, Axis::y, 1);
    Field uxy = derivative(uy, Axis::x, 1, XClosure::interior_only);
    Field uyy = derivative(ubar, Axis::y, 2);
    const double t_xxx = -1.5 * inner(uxy, uxy) - 0.5 * transverse_trace_sq(uxy, false);
    const double t_xyy = -0.5 * inner(uyy, uyy);
    double t_xzz = 0.0;
    if (d == 2) {
        Field uzy = derivative(uy, Axis::z, 1);
        t_xzz = -0.5 * inner(uzy, uzy);
    }
    const double t_c = 0.5 * params.c * inner(uy, uy);

    double t_nl = 0.0;
    if (params.nonlinearity) {
        Field ux = derivative(ubar, Axis::x, 1, XClosure::interior_only);
        Field uy2 = pointwise_mul(uy, uy);
        t_nl = 0.5 * (inner(ubar, uy2, Weight::one) - inner(ux, uy2, Weight::one_plus_x));
    }

    double t_eps = 0.0;
    if (eps > 0.0) {
        Field uxxy = derivative(uxy, Axis::x, 1, XClosure::interior_only);
        Field uyyy = derivative(ubar, Axis::y, 3);
        double s = transverse_trace_sq(uxy, false) - inner(uxxy, uxxy, Weight::one_plus_x) -
                   inner(uyyy, uyyy, Weight::one_plus_x);
        if (d == 2) {
            Field uyzz = derivative(uy, Axis::z, 2);
            s -= inner(uyzz, uyzz, Weight::one_plus_x);
        }
        t_eps = eps * s;
    }
    Field f = forcing_eval(params.forcing, un.grid, tn + 0.5 * dt, ForcingDerivative::f);
    const double t_f = -inner(f, uyy, Weight::one_plus_x);
    return t_ut + t_xxx + t_xyy + t_xzz + t_c + t_nl + t_eps + t_f;
}

// (1+x) u_yyyy multiplier identity
double residual_1px_uyyyy(const Field& un, const Field& unp1, double tn, double dt,
                          const ModelParams& params) {
    const double eps = params.epsilon;
    const int d = un.grid->spec.d;
    Field ubar = lincomb(0.5, unp1, 0.5, un);

    auto wnorm_uyy = [&](const Field& u) {
        Field uyy = derivative(u, Axis::y, 2);
        return inner(uyy, uyy, Weight::one_plus_x);
    };
    const double t_ut = 0.5 * (wnorm_uyy(unp1) - wnorm_uyy(un)) / dt;

    Field uyy = derivative(ubar, Axis::y, 2);
    Field uxyy = derivative(uyy, Axis::x, 1, XClosure::interior_only);
    Field uyyy = derivative(ubar, Axis::y, 3);
    const double t_xxx = 1.5 * inner(uxyy, uxyy) + 0.5 * transverse_trace_sq(uxyy, false);
    const double t_xyy = 0.5 * inner(uyyy, uyyy);
    double t_xzz = 0.0;
    if (d == 2) {
        Field uzyy = derivative(uyy, Axis::z, 1);
        t_xzz = 0.5 * inner(uzyy, uzyy);
    }
    const double t_c = -0.5 * params.c * inner(uyy, uyy);

    double t_nl = 0.0;
    if (params.nonlinearity) {
        Field ux = derivative(ubar, Axis::x, 1, XClosure::interior_only);
        Field uy = derivative(ubar, Axis::y, 1);
        Field uyy2 = pointwise_mul(uyy, uyy);
        Field uy2 = pointwise_mul(uy, uy);
        t_nl = 0.5 * (inner(ux, uyy2, Weight::one_plus_x) - inner(ubar, uyy2, Weight::one)) -
               inner(uy2, uyy, Weight::one) - inner(uy2, uxyy, Weight::one_plus_x);
    }

    double t_eps = 0.0;
    if (eps > 0.0) {
        Field uxxyy = derivative(uxyy, Axis::x, 1, XClosure::interior_only);
        Field uyyyy = derivative(ubar, Axis::y, 4);
        double s = -transverse_trace_sq(uxyy, false) +
                   inner(uxxyy, uxxyy, Weight::one_plus_x) +
                   inner(uyyyy, uyyyy, Weight::one_plus_x);
        if (d == 2) {
            Field uzzyy = derivative(uyy, Axis::z, 2);
            s += inner(uzzyy, uzzyy, Weight::one_plus_x);
        }
        t_eps = eps * s;
    }
    Field f = forcing_eval(params.forcing, un.grid, tn + 0.5 * dt, ForcingDerivative::f);
    Field uyyyybar = derivative(ubar, Axis::y, 4);
    const double t_f = -inner(f, uyyyybar, Weight::one_plus_x);
    return t_ut + t_xxx + t_xyy + t_xzz + t_c + t_nl + t_eps + t_f;
}

}  // namespace

BalanceSeries energy_balance_residual(const Trajectory& traj, const ModelParams& params,
                                      const StepConfig& step, BalanceKind kind) {
    if (traj.states.size() < 2)
        throw std::invalid_argument("energy_balance_residual: trajectory shorter than 2 states");
    BalanceSeries out;
    const std::size_t nsteps = traj.states.size() - 1;
    for (std::size_t n = 0; n < nsteps; ++n) {
        const Field& un = traj.states[n];
        const Field& unp1 = traj.states[n + 1];
        const double dt = traj.frames[n + 1].dt;
        const double tn = traj.frames[n].t;
        double r = 0.0;
        switch (kind) {
            case BalanceKind::u:
                r = residual_scheme_u(un, unp1, tn, dt, params, step);
                break;
            case BalanceKind::xu:
                r = residual_xu(un, unp1, tn, dt, params);
                break;
            case BalanceKind::one_px_uyy:
                r = residual_1px_uyy(un, unp1, tn, dt, params);
                break;
            case BalanceKind::one_px_uyyyy:
                r = residual_1px_uyyyy(un, unp1, tn, dt, params);
                break;
            case BalanceKind::one_px_ut: {
                if (n + 2 > nsteps) continue;  // needs a state triple
                const Field& up = traj.states[n + 2];
                const double dtp = traj.frames[n + 2].dt;
                r = residual_1px_ut(un, unp1, up, traj.frames[n + 1].t, dt, dtp, params);
                break;
            }
        }
        out.t.push_back(tn + 0.5 * dt);
        out.residual.push_back(std::abs(r));
    }
    return out;
}

std::vector<IdentityReport> identity_residuals(const Field& u, const ModelParams& params,
                                               const Field& f, double xtilde, const Field* u_t,
                                               double c_prime, double tol) {
    if (!(xtilde > 0.0) || xtilde > 1.0)
        throw std::invalid_argument("identity_residuals: xtilde must lie in (0, 1]");
    const Grid& g = *u.grid;
    const int nx = g.spec.nx;
    const int nt = g.nt();
    const double eps = params.epsilon;

    // g_eps = -u_t - Dperp u_x - c u_x - eps u_yyyy - eps u_zzzz + f
    Field ux = derivative(u, Axis::x, 1, XClosure::interior_only);
    Field gfield = f;
    if (u_t) axpy(-1.0, *u_t, gfield);
    Field uxyy = derivative(ux, Axis::y, 2);
    axpy(-1.0, uxyy, gfield);
    if (g.spec.d == 2) {
        Field uxzz = derivative(ux, Axis::z, 2);
        axpy(-1.0, uxzz, gfield);
    }
    axpy(-params.c, ux, gfield);
    if (eps > 0.0) {
        Field uy4 = derivative(u, Axis::y, 4);
        axpy(-eps, uy4, gfield);
        if (g.spec.d == 2) {
            Field uz4 = derivative(u, Axis::z, 4);
            axpy(-eps, uz4, gfield);
        }
    }

    std::vector<double> ux0 = boundary_derivative(u, false, 1);
    std::vector<double> uxx1 = boundary_derivative(u, true, 2);
    std::vector<double> uxxx1 = boundary_derivative(u, true, 3);
    Field usq = pointwise_mul(u, u);
    std::vector<double> int_u2 = xline_integral(usq, false);
    std::vector<double> int_gx = xline_integral(gfield, true);

    // suffix trapezoid integral of g from x_i to 1, per transverse point
    std::vector<double> suffix((nx + 1) * std::size_t(nt), 0.0);
    for (int i = nx - 1; i >= 0; --i)
        for (int t = 0; t < nt; ++t)
            suffix[std::size_t(i) * nt + t] =
                suffix[std::size_t(i + 1) * nt + t] +
                0.5 * g.hx * (gfield.at(i, t) + gfield.at(i + 1, t));

    Field uxx = derivative(u, Axis::x, 2, XClosure::interior_only);
    Field uxxx = derivative(u, Axis::x, 3, XClosure::interior_only);

    std::vector<IdentityReport> reports;

    {  // x-moment identity
        double rmax = 0.0;
        for (int t = 0; t < nt; ++t) {
            const double lhs = ux0[t] + uxx1[t] - 0.5 * int_u2[t] - eps * uxx1[t] +
                               eps * uxxx1[t];
            rmax = std::max(rmax, std::abs(lhs - int_gx[t]));
        }
        reports.push_back({IdentityReport::Id::eq_x_moment, rmax, nx, rmax <= tol, tol, 0.0});
    }

    {  // partial-integral identity at xtilde (snapped to the nearest node)
        const int ix = std::min(nx, std::max(1, static_cast<int>(std::lround(xtilde * nx))));
        double rmax = 0.0;
        for (int t = 0; t < nt; ++t) {
            const double lhs = uxx1[t] - uxx.at(ix, t) - 0.5 * usq.at(ix, t) +
                               eps * uxxx1[t] - eps * uxxx.at(ix, t);
            rmax = std::max(rmax, std::abs(lhs - suffix[std::size_t(ix) * nt + t]));
        }
        reports.push_back(
            {IdentityReport::Id::eq_partial_integral, rmax, nx, rmax <= tol, tol, 0.0});
    }

    {  // u_xx inequality with configured c' and the smallest admissible c'
        double worst_gap = 0.0;
        double min_cp = 0.0;
        for (int t = 0; t < nt; ++t) {
            // h(x) = -ux0 + 1/2 int u^2 - 1/2 u^2 + int g x - int_x^1 g
            double int_h2 = 0.0;
            for (int i = 0; i <= nx; ++i) {
                const double h = -ux0[t] + 0.5 * int_u2[t] - 0.5 * usq.at(i, t) + int_gx[t] -
                                 suffix[std::size_t(i) * nt + t];
                int_h2 += g.wx[i] * h * h;
            }
            double int_uxx2 = 0.0;
            for (int i = 0; i <= nx; ++i) int_uxx2 += g.wx[i] * uxx.at(i, t) * uxx.at(i, t);
            const double lhs = 0.5 * int_uxx2 + 0.25 * eps * uxx1[t] * uxx1[t];
            const double rhs = c_prime * eps * ux0[t] * ux0[t] + 0.5 * int_h2;
            worst_gap = std::max(worst_gap, lhs - rhs);
            const double numer = lhs - 0.5 * int_h2;
            const double denom = eps * ux0[t] * ux0[t];
            if (numer > 0.0)
                min_cp = std::max(min_cp, denom > 0.0
                                              ? numer / denom
                                              : std::numeric_limits<double>::infinity());
        }
        IdentityReport rep{IdentityReport::Id::uxx_inequality, std::max(0.0, worst_gap), nx,
                           worst_gap <= tol, tol, min_cp};
        reports.push_back(rep);
    }
    return reports;
}

EstimateConstants estimate_constants(const std::vector<DiagnosticsRecord>& records,
                                     double c_prime) {
    if (records.empty()) throw std::invalid_argument("estimate_constants: no records");
    EstimateConstants ec;
    ec.c_prime = c_prime;
    double fsup = 0.0, ftsup = 0.0;
    for (const auto& r : records) {
        ec.nu = std::max(ec.nu, r.l2);
        fsup = std::max(fsup, r.f_l2);
        ftsup = std::max(ftsup, r.ft_l2);
    }
    const double u0x = records.front().ux_l2;
    ec.kappa = kappa(ec.nu, fsup, u0x, c_prime);

    // Y = |sqrt(1+x) u_t|^2 + 1; fit log(dY/dt) = log c2 + 3 log(Ymid) over
    // increasing intervals
    double logsum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const double y0 = records[i].ut_weighted * records[i].ut_weighted + 1.0;
        const double y1 = records[i + 1].ut_weighted * records[i + 1].ut_weighted + 1.0;
        const double dt = records[i + 1].t - records[i].t;
        if (!(dt > 0.0) || y1 <= y0) continue;
        const double ymid = 0.5 * (y0 + y1);
        logsum += std::log((y1 - y0) / dt) - 3.0 * std::log(ymid);
        ++count;
    }
    ec.c2 = count > 0 ? std::exp(logsum / count) : kNaN;
    ec.c1 = std::isnan(ec.c2) ? kNaN : std::max(0.0, ec.c2 - ftsup * ftsup);
    ec.mu0 = std::sqrt(records.front().ut_weighted * records.front().ut_weighted + 1.0);
    ec.mu = ec.mu0 + std::sqrt(ec.kappa);
    if (!std::isnan(ec.c2) && ec.c2 > 0.0) {
        const double mu4 = ec.mu * ec.mu * ec.mu * ec.mu;
        const double mu04 = ec.mu0 * ec.mu0 * ec.mu0 * ec.mu0;
        ec.c3 = 3.0 * mu4 / (8.0 * ec.c2 * mu04);
        ec.T1 = existence_time(ec.mu, ec.c3);
    } else {
        ec.c3 = kNaN;
        ec.T1 = kNaN;
    }
    return ec;
}

Lemma32Report lemma32_check(const std::vector<DiagnosticsRecord>& records, double c_prime) {
    Lemma32Report rep;
    if (records.empty()) return rep;
    const double u0x = records.front().ux_l2;
    double nu_run = 0.0, fsup_run = 0.0;
    for (const auto& r : records) {
        nu_run = std::max(nu_run, r.l2);
        fsup_run = std::max(fsup_run, r.f_l2);
        const double lhs = r.ux_l2 * r.ux_l2;
        const double rhs = r.ut_l2 * r.ut_l2 + kappa(nu_run, fsup_run, u0x, c_prime);
        rep.max_ratio = std::max(rep.max_ratio, rhs > 0.0 ? lhs / rhs : 0.0);
        if (lhs > rhs) rep.violations.push_back({r.t, lhs, rhs});
        ++rep.checked;
    }
    return rep;
}

}  // namespace zk
