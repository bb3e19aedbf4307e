#include "zk/stencils.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace zk {

std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& nodes,
                                            int max_order) {
    const int n = static_cast<int>(nodes.size());
    if (n <= max_order) throw std::invalid_argument("fd_weights: need more nodes than order");
    std::vector<std::vector<double>> c(n, std::vector<double>(max_order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    // transpose to [order][node]
    std::vector<std::vector<double>> w(max_order + 1, std::vector<double>(n));
    for (int k = 0; k <= max_order; ++k)
        for (int j = 0; j < n; ++j) w[k][j] = c[j][k];
    return w;
}

namespace {

// Dense solve with partial pivoting; a is n x n row-major, overwritten.
void solve_dense(int n, std::vector<double>& a, std::vector<double>& b) {
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
        if (a[p * n + k] == 0.0) throw std::runtime_error("solve_dense: singular");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = a[i * n + k] / a[k * n + k];
            a[i * n + k] = 0.0;
            for (int j = k + 1; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
            b[i] -= m * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
        b[i] = s / a[i * n + i];
    }
}

// Ghost value left of x=0 from the six nodes 0..5h, exact on polynomials of
// degree <= 6 with vanishing second derivative at 0.  Returns weights w such
// that u(-h) ~ sum w[j] u(j h).
std::vector<double> ghost_weights_left_uxx0() {
    const int npts = 6;
    // basis {1, xi, xi^3, xi^4, xi^5, xi^6}, xi = x/h
    const int pows[6] = {0, 1, 3, 4, 5, 6};
    std::vector<double> a(npts * npts), b(npts);
    for (int k = 0; k < npts; ++k) {
        for (int j = 0; j < npts; ++j) a[k * npts + j] = std::pow(double(j), pows[k]);
        b[k] = std::pow(-1.0, pows[k]);
    }
    solve_dense(npts, a, b);
    return b;
}

// Ghost value right of x=1 from the six nodes 1, 1-h, ..., 1-5h, exact on
// polynomials of degree <= 6 with vanishing first derivative at 1.
// w[j] multiplies u(1 - j h).
std::vector<double> ghost_weights_right_ux1() {
    const int npts = 6;
    // basis {1, eta^2, ..., eta^6}, eta = (x-1)/h; nodes eta = 0,-1,...,-5
    const int pows[6] = {0, 2, 3, 4, 5, 6};
    std::vector<double> a(npts * npts), b(npts);
    for (int k = 0; k < npts; ++k) {
        for (int j = 0; j < npts; ++j) a[k * npts + j] = std::pow(double(-j), pows[k]);
        b[k] = std::pow(1.0, pows[k]);
    }
    solve_dense(npts, a, b);
    return b;
}

StencilRow window_row(double z, int first, int npts, double h, int order) {
    std::vector<double> nodes(npts);
    for (int j = 0; j < npts; ++j) nodes[j] = (first + j) * h;
    auto w = fd_weights(z, nodes, order);
    StencilRow r;
    r.first = first;
    r.coeff = std::move(w[order]);
    return r;
}

// Centered row at node i with a ghost at one end replaced by an interpolation
// through interior nodes.  ghost_w are the ghost weights, ghost_nodes the node
// indices they multiply.
StencilRow ghost_row(int i, int nx, double h, int order, bool left_ghost,
                     const std::vector<double>& ghost_w) {
    StencilRow r;
    const int width = 5;  // centered 5-point for orders 3 and 4
    std::vector<double> cw;
    {
        std::vector<double> nodes(width);
        for (int j = 0; j < width; ++j) nodes[j] = (i - 2 + j) * h;
        cw = fd_weights(i * h, nodes, order)[order];
    }
    if (left_ghost) {
        // window after elimination: nodes 0..5
        r.first = 0;
        r.coeff.assign(6, 0.0);
        for (int j = 1; j < width; ++j) r.coeff[i - 2 + j] += cw[j];
        for (int j = 0; j < 6; ++j) r.coeff[j] += cw[0] * ghost_w[j];
    } else {
        // window after elimination: nodes nx-5..nx
        r.first = nx - 5;
        r.coeff.assign(6, 0.0);
        for (int j = 0; j < width - 1; ++j) r.coeff[(i - 2 + j) - (nx - 5)] += cw[j];
        for (int j = 0; j < 6; ++j) r.coeff[5 - j] += cw[width - 1] * ghost_w[j];
    }
    return r;
}

}  // namespace

XDeriv::XDeriv(int nx, double h, int order, XClosure closure)
    : nx_(nx), order_(order), closure_(closure) {
    if (order < 1 || order > 4) throw std::invalid_argument("XDeriv: order must be 1..4");
    if (nx < 8) throw std::invalid_argument("XDeriv: nx too small");
    rows_.resize(nx + 1);

    const int bpts = order + 3;  // boundary-node evaluation, third order
    rows_[0] = window_row(0.0, 0, bpts, h, order);
    rows_[nx] = window_row(nx * h, nx - bpts + 1, bpts, h, order);

    const int r = (order <= 2) ? 1 : 2;  // centered half-width
    static const std::vector<double> gl = ghost_weights_left_uxx0();
    static const std::vector<double> gr = ghost_weights_right_ux1();

    for (int i = 1; i < nx; ++i) {
        if (i - r >= 0 && i + r <= nx) {
            std::vector<double> nodes(2 * r + 1);
            for (int j = 0; j <= 2 * r; ++j) nodes[j] = (i - r + j) * h;
            StencilRow row;
            row.first = i - r;
            row.coeff = fd_weights(i * h, nodes, order)[order];
            rows_[i] = std::move(row);
            continue;
        }
        // near-boundary rows for orders 3 and 4 (i == 1 or i == nx-1)
        const bool at_left = (i == 1);
        const bool use_ghost =
            (closure == XClosure::regularized_bcs && at_left) ||
            (closure != XClosure::interior_only && !at_left);
        if (use_ghost) {
            rows_[i] = ghost_row(i, nx, h, order, at_left, at_left ? gl : gr);
        } else {
            const int npts = order + 2;  // biased window, second order
            const int first = at_left ? 0 : nx - npts + 1;
            rows_[i] = window_row(i * h, first, npts, h, order);
        }
    }
}

void XDeriv::apply_line(const double* u, int stride, double* out, int out_stride) const {
    for (int i = 0; i <= nx_; ++i) out[i * out_stride] = rows_[i].apply(u, stride);
}

StencilRow boundary_stencil(int nx, double h, int order, bool at_right, int npts) {
    if (npts > nx + 1) throw std::invalid_argument("boundary_stencil: window larger than grid");
    const int first = at_right ? nx - npts + 1 : 0;
    return window_row(at_right ? nx * h : 0.0, first, npts, h, order);
}

std::vector<std::pair<int, StencilRow>> bc_rows(int nx, double h, bool regularized) {
    std::vector<std::pair<int, StencilRow>> out;
    StencilRow dir0;
    dir0.first = 0;
    dir0.coeff = {1.0};
    StencilRow dir1;
    dir1.first = nx;
    dir1.coeff = {1.0};
    out.emplace_back(0, dir0);
    out.emplace_back(nx, dir1);
    out.emplace_back(nx - 1, boundary_stencil(nx, h, 1, true, 4));  // u_x(1) = 0
    if (regularized)
        out.emplace_back(1, boundary_stencil(nx, h, 2, false, 5));  // u_xx(0) = 0
    return out;
}

std::vector<int> bc_row_indices(int nx, bool regularized) {
    std::vector<int> idx = {0, nx, nx - 1};
    if (regularized) idx.push_back(1);
    return idx;
}

}  // namespace zk
