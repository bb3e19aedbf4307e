#include "zk/operators.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace zk {

XClosure closure_from_tag(BcTag tag) {
    switch (tag) {
        case BcTag::zk_regularized: return XClosure::regularized_bcs;
        case BcTag::zk_limit: return XClosure::limit_bcs;
        default: return XClosure::interior_only;
    }
}

const XDeriv& cached_xderiv(int nx, int order, XClosure closure) {
    static std::map<std::tuple<int, int, int>, XDeriv> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(nx, order, static_cast<int>(closure));
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, XDeriv(nx, 1.0 / nx, order, closure)).first;
    return it->second;
}

namespace {

void check_x_closure(const Field& u, XClosure closure) {
    if (closure == XClosure::interior_only) return;
    if (closure == XClosure::regularized_bcs && u.bc_tag != BcTag::zk_regularized)
        throw std::invalid_argument("derivative: regularized closure on a field not tagged zk_regularized");
    if (closure == XClosure::limit_bcs && u.bc_tag == BcTag::unconstrained)
        throw std::invalid_argument("derivative: limit closure on an unconstrained field");
}

Field apply_x(const Field& u, const XDeriv& d) {
    Field out = zeros_like(u);
    const int nt = u.grid->nt();
    for (int t = 0; t < nt; ++t)
        d.apply_line(u.values.data() + t, nt, out.values.data() + t, nt);
    return out;
}

}  // namespace

Field apply_transverse_matrix(const Field& u, Axis axis, const std::vector<double>& m) {
    const Grid& g = *u.grid;
    Field out = zeros_like(u);
    if (axis == Axis::y) {
        const int n = g.by.n;
        const int nz = g.nzeff();
        for (int i = 0; i < g.nxp(); ++i)
            for (int jz = 0; jz < nz; ++jz)
                for (int jy = 0; jy < n; ++jy) {
                    double s = 0.0;
                    for (int k = 0; k < n; ++k)
                        s += m[std::size_t(jy) * n + k] * u.at(i, k * nz + jz);
                    out.at(i, jy * nz + jz) = s;
                }
    } else {
        const int n = g.bz.n;
        const int nz = g.spec.nz;
        for (int i = 0; i < g.nxp(); ++i)
            for (int jy = 0; jy < g.spec.ny; ++jy)
                for (int jz = 0; jz < n; ++jz) {
                    double s = 0.0;
                    for (int k = 0; k < n; ++k)
                        s += m[std::size_t(jz) * n + k] * u.at(i, jy * nz + k);
                    out.at(i, jy * nz + jz) = s;
                }
    }
    return out;
}

Field derivative(const Field& u, Axis axis, int order, XClosure closure) {
    if (order < 1 || order > 4) throw std::invalid_argument("derivative: order must be 1..4");
    const Grid& g = *u.grid;
    if (axis == Axis::z && g.spec.d == 1)
        throw std::invalid_argument("derivative: no z axis on a d=1 grid");
    if (axis == Axis::x) {
        check_x_closure(u, closure);
        return apply_x(u, cached_xderiv(g.spec.nx, order, closure));
    }
    const Basis& b = (axis == Axis::y) ? g.by : g.bz;
    const std::vector<double>* m = nullptr;
    switch (order) {
        case 1: m = &b.d1; break;
        case 2: m = &b.d2; break;
        case 3: m = &b.d3; break;
        default: m = &b.d4; break;
    }
    return apply_transverse_matrix(u, axis, *m);
}

Field op_A(const Field& u, double c) { return op_A(u, c, closure_from_tag(u.bc_tag)); }

Field op_A(const Field& u, double c, XClosure closure) {
    Field ux = derivative(u, Axis::x, 1, closure);
    Field out = derivative(u, Axis::x, 3, closure);
    Field uxyy = derivative(ux, Axis::y, 2);
    axpy(1.0, uxyy, out);
    if (u.grid->spec.d == 2) {
        Field uxzz = derivative(ux, Axis::z, 2);
        axpy(1.0, uxzz, out);
    }
    axpy(c, ux, out);
    return out;
}

Field op_L(const Field& u) { return op_L(u, closure_from_tag(u.bc_tag)); }

Field op_L(const Field& u, XClosure closure) {
    Field out = derivative(u, Axis::x, 4, closure);
    Field uy4 = derivative(u, Axis::y, 4);
    axpy(1.0, uy4, out);
    if (u.grid->spec.d == 2) {
        Field uz4 = derivative(u, Axis::z, 4);
        axpy(1.0, uz4, out);
    }
    return out;
}

Field nonlinear_split(const Field& u) {
    Field ux = derivative(u, Axis::x, 1, XClosure::interior_only);
    Field usq = pointwise_mul(u, u);
    Field dusq = derivative(usq, Axis::x, 1, XClosure::interior_only);
    Field out = pointwise_mul(u, ux);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = (out.values[k] + dusq.values[k]) / 3.0;
    return out;
}

namespace {

double integrate_weighted(const Field& u, bool weight_x) {
    const Grid& g = *u.grid;
    const int nt = g.nt();
    double total = 0.0;
    for (int i = 0; i < g.nxp(); ++i) {
        double row = 0.0;
        for (int t = 0; t < nt; ++t) row += g.wt(t) * u.at(i, t);
        total += (weight_x ? g.wx[i] * g.x[i] : g.wx[i]) * row;
    }
    return total;
}

}  // namespace

double integrate(const Field& u, Weight weight) {
    switch (weight) {
        case Weight::one: return integrate_weighted(u, false);
        case Weight::x: return integrate_weighted(u, true);
        default: return integrate_weighted(u, false) + integrate_weighted(u, true);
    }
}

double inner(const Field& a, const Field& b, Weight weight) {
    const Grid& g = *a.grid;
    const int nt = g.nt();
    auto xw = [&](int i) {
        switch (weight) {
            case Weight::one: return g.wx[i];
            case Weight::x: return g.wx[i] * g.x[i];
            default: return g.wx[i] * (1.0 + g.x[i]);
        }
    };
    double total = 0.0;
    for (int i = 0; i < g.nxp(); ++i) {
        double row = 0.0;
        for (int t = 0; t < nt; ++t) row += g.wt(t) * a.at(i, t) * b.at(i, t);
        total += xw(i) * row;
    }
    return total;
}

double norm_l2(const Field& u) { return std::sqrt(std::max(0.0, inner(u, u, Weight::one))); }

double weighted_norm(const Field& u, Weight weight) {
    return std::sqrt(std::max(0.0, inner(u, u, weight)));
}

Field pointwise_mul(const Field& a, const Field& b) {
    Field out = zeros_like(a);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = a.values[k] * b.values[k];
    return out;
}

std::vector<double> boundary_derivative(const Field& u, bool at_right, int order) {
    const Grid& g = *u.grid;
    const int nt = g.nt();
    std::vector<double> out(nt);
    if (order == 0) {
        const int i = at_right ? g.spec.nx : 0;
        for (int t = 0; t < nt; ++t) out[t] = u.at(i, t);
        return out;
    }
    StencilRow row = boundary_stencil(g.spec.nx, g.hx, order, at_right, order + 3);
    for (int t = 0; t < nt; ++t) out[t] = row.apply(u.values.data() + t, nt);
    return out;
}

double boundary_trace_l2(const Field& u, bool at_right, int order) {
    const Grid& g = *u.grid;
    std::vector<double> tr = boundary_derivative(u, at_right, order);
    double s = 0.0;
    for (int t = 0; t < g.nt(); ++t) s += g.wt(t) * tr[t] * tr[t];
    return std::sqrt(std::max(0.0, s));
}

}  // namespace zk
