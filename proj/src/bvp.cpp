#include "zk/bvp.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "zk/banded.hpp"
#include "zk/common.hpp"
#include "zk/stencils.hpp"

namespace zk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void fill_solution_derivatives(BVPSolution& s) {
    const int n = s.n;
    const double h = s.h;
    const XDeriv d2(n, h, 2, XClosure::interior_only);
    s.uxx.resize(n + 1);
    d2.apply_line(s.u.data(), 1, s.uxx.data(), 1);
    s.ux0 = boundary_stencil(n, h, 1, false, 4).apply(s.u.data(), 1);
    s.ux1 = boundary_stencil(n, h, 1, true, 4).apply(s.u.data(), 1);
    s.uxx0 = s.uxx[0];
    s.uxx1 = s.uxx[n];
    s.uxxx1 = boundary_stencil(n, h, 3, true, 6).apply(s.u.data(), 1);
    s.sup_uxx = 0.0;
    for (int i = 1; i < n; ++i) s.sup_uxx = std::max(s.sup_uxx, std::abs(s.uxx[i]));
}

std::vector<double> solve_linear_bvp(const std::vector<double>& rhs, int n, double h,
                                     double eps) {
    const bool reg = eps > 0.0;
    BandedMatrix m(n + 1, 2, 3);
    const XDeriv d3(n, h, 3, XClosure::interior_only);
    std::optional<XDeriv> d4;
    if (reg) d4.emplace(n, h, 4, XClosure::interior_only);

    const auto bcidx = bc_row_indices(n, reg);
    auto is_bc = [&](int i) {
        for (int b : bcidx)
            if (b == i) return true;
        return false;
    };
    for (int i = 0; i <= n; ++i) {
        if (is_bc(i)) continue;
        for (std::size_t j = 0; j < d3.row(i).coeff.size(); ++j)
            m.at(i, d3.row(i).first + static_cast<int>(j)) += d3.row(i).coeff[j];
        if (reg)
            for (std::size_t j = 0; j < d4->row(i).coeff.size(); ++j)
                m.at(i, d4->row(i).first + static_cast<int>(j)) += eps * d4->row(i).coeff[j];
    }
    for (const auto& [idx, row] : bc_rows(n, h, reg))
        for (std::size_t j = 0; j < row.coeff.size(); ++j)
            m.at(idx, row.first + static_cast<int>(j)) = row.coeff[j];
    m.factor();

    std::vector<double> b = rhs;
    for (int idx : bcidx) b[idx] = 0.0;
    m.solve_refined(b);
    return b;
}

}  // namespace

BVPSolution solve_bvp(const BVPProblem& p) {
    if (p.n < 16) throw std::invalid_argument("solve_bvp: n must be >= 16");
    if (static_cast<int>(p.g.size()) != p.n + 1)
        throw std::invalid_argument("solve_bvp: g must hold n+1 samples");
    for (double v : p.g)
        if (!std::isfinite(v)) throw numerical_error("solve_bvp: non-finite right-hand side");
    const double h = 1.0 / p.n;

    BVPSolution s;
    s.n = p.n;
    s.h = h;
    s.epsilon = p.epsilon;

    if (!p.nonlinear) {
        s.u = solve_linear_bvp(p.g, p.n, h, p.epsilon);
    } else {
        // Picard with relaxation 0.5 on u_xxx + eps u_xxxx = g - u u_x
        std::vector<double> u(p.n + 1, 0.0), rhs(p.n + 1), ux(p.n + 1);
        const XDeriv d1(p.n, h, 1, XClosure::interior_only);
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            d1.apply_line(u.data(), 1, ux.data(), 1);
            for (int i = 0; i <= p.n; ++i) rhs[i] = p.g[i] - u[i] * ux[i];
            std::vector<double> unew = solve_linear_bvp(rhs, p.n, h, p.epsilon);
            double delta = 0.0;
            for (int i = 0; i <= p.n; ++i) {
                const double v = 0.5 * unew[i] + 0.5 * u[i];
                delta = std::max(delta, std::abs(v - u[i]));
                u[i] = v;
            }
            if (delta < 1e-12) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw numerical_error("solve_bvp: Picard iteration did not converge in 200 sweeps");
        s.u = std::move(u);
    }
    fill_solution_derivatives(s);
    return s;
}

std::vector<double> cumint4(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 3) throw std::invalid_argument("cumint4: need at least 4 samples");
    std::vector<double> out(n + 1, 0.0);
    // first interval: cubic end-rule; interior: centered 4-point rule;
    // last interval: mirrored end-rule.  All exact for cubics.
    out[1] = out[0] + h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    for (int i = 1; i < n - 1; ++i)
        out[i + 1] = out[i] + h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    out[n] = out[n - 1] + h / 24.0 * (f[n - 3] - 5.0 * f[n - 2] + 19.0 * f[n - 1] + 9.0 * f[n]);
    return out;
}

BVPSolution limit_solution(const std::vector<double>& g, int n) {
    if (static_cast<int>(g.size()) != n + 1)
        throw std::invalid_argument("limit_solution: g must hold n+1 samples");
    const double h = 1.0 / n;
    // triple cumulative integration: P with P(0)=P'(0)=P''(0)=0, P'''=g
    std::vector<double> g1 = cumint4(g, h);
    std::vector<double> g2 = cumint4(g1, h);
    std::vector<double> g3 = cumint4(g2, h);
    // u = P + a x^2 + b x, a and b from u(1) = u_x(1) = 0
    const double a = g3[n] - g2[n];
    const double b = g2[n] - 2.0 * g3[n];

    BVPSolution s;
    s.n = n;
    s.h = h;
    s.epsilon = 0.0;
    s.u.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = i * h;
        s.u[i] = g3[i] + a * x * x + b * x;
    }
    fill_solution_derivatives(s);
    // exact values available from the integration chain
    s.ux0 = b;
    s.ux1 = g2[n] + 2.0 * a + b;
    s.uxx0 = 2.0 * a;
    s.uxx1 = g1[n] + 2.0 * a;
    return s;
}

SweepResult trace_sweep(const std::vector<double>& g, const std::vector<double>& eps_list,
                        int n, bool nonlinear) {
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0))
            throw std::invalid_argument("trace_sweep: eps values must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("trace_sweep: eps list must be strictly decreasing");
    }
    BVPProblem base;
    base.g = g;
    base.n = n;
    base.nonlinear = nonlinear;

    BVPSolution limit;
    if (nonlinear) {
        BVPProblem p0 = base;
        p0.epsilon = 0.0;
        limit = solve_bvp(p0);
    } else {
        limit = limit_solution(g, n);
    }

    SweepResult out;
    double sup_max = 0.0, sup_min = std::numeric_limits<double>::infinity();
    const double h = 1.0 / n;
    for (double eps : eps_list) {
        BVPProblem p = base;
        p.epsilon = eps;
        BVPSolution s = solve_bvp(p);

        SweepRecord rec;
        rec.epsilon = eps;
        rec.sup_uxx = s.sup_uxx;
        rec.ux0 = s.ux0;
        rec.uxx1 = s.uxx1;
        rec.uxxx1 = s.uxxx1;

        double err = 0.0;
        for (int i = 0; i <= n; ++i)
            if (i * h >= 0.1) err = std::max(err, std::abs(s.u[i] - limit.u[i]));
        rec.err_outside_layer = err;

        // layer width: slope of log|u_xx - u0_xx| over the first nodes where
        // the layer is resolved (difference decaying and above rounding)
        rec.layer_width = kNaN;
        {
            std::vector<double> xs, ls;
            const double scale = std::max(1.0, s.sup_uxx);
            for (int i = 1; i <= n; ++i) {
                const double x = i * h;
                if (x > std::min(0.5, 6.0 * eps)) break;
                const double diff = std::abs(s.uxx[i] - limit.uxx[i]);
                if (diff < 1e-10 * scale) break;
                xs.push_back(x);
                ls.push_back(std::log(diff));
            }
            if (xs.size() >= 3) {
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (std::size_t k = 0; k < xs.size(); ++k) {
                    sx += xs[k];
                    sy += ls[k];
                    sxx += xs[k] * xs[k];
                    sxy += xs[k] * ls[k];
                }
                const double m = static_cast<double>(xs.size());
                const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
                if (slope < 0.0) rec.layer_width = -1.0 / slope;
            }
        }
        sup_max = std::max(sup_max, rec.sup_uxx);
        sup_min = std::min(sup_min, rec.sup_uxx);
        out.records.push_back(rec);
    }
    out.sup_ratio = sup_min > 0.0 ? sup_max / sup_min : kNaN;
    return out;
}

}  // namespace zk
