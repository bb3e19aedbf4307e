#pragma once

#include <vector>

namespace zk {

/// Finite-difference weights on arbitrary nodes (Fornberg's recurrence).
/// Returns w with w[k][j] = weight of f(nodes[j]) in the k-th derivative
/// at z, for k = 0..max_order.  Requires nodes.size() > max_order.
std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& nodes,
                                            int max_order);

/// One row of an x-direction difference operator: coefficients over a
/// contiguous window of node indices starting at `first`.
struct StencilRow {
    int first = 0;
    std::vector<double> coeff;
    int last() const { return first + static_cast<int>(coeff.size()) - 1; }
    double apply(const double* line, int stride) const {
        double s = 0.0;
        for (std::size_t j = 0; j < coeff.size(); ++j)
            s += coeff[j] * line[(first + static_cast<int>(j)) * stride];
        return s;
    }
};

/// Which x-boundary conditions the near-boundary stencil closures encode.
///   limit_bcs:       u(0)=u(1)=0, u_x(1)=0          (three conditions)
///   regularized_bcs: additionally u_xx(0)=0          (four conditions)
///   interior_only:   no boundary information; one-sided interpolation rows
enum class XClosure { limit_bcs, regularized_bcs, interior_only };

/// Difference operator d^order/dx^order on the uniform grid {0, h, ..., nx*h}.
/// Interior rows are centered and formally second order.  Rows at and next to
/// the boundary are closed per `closure`: either pure one-sided interpolation
/// stencils, or centered stencils whose ghost value is eliminated through a
/// polynomial fit constrained by the selected boundary conditions.
class XDeriv {
public:
    XDeriv(int nx, double h, int order, XClosure closure);

    const StencilRow& row(int i) const { return rows_[i]; }
    int nx() const { return nx_; }
    int order() const { return order_; }
    XClosure closure() const { return closure_; }

    /// Apply along one x-line: out[i*out_stride] = row(i) . u.
    void apply_line(const double* u, int stride, double* out, int out_stride) const;

private:
    int nx_;
    int order_;
    XClosure closure_;
    std::vector<StencilRow> rows_;
};

/// One-sided stencil for the order-th derivative evaluated at x=0 or x=1,
/// using npts nodes counted from that boundary.  Used for traces and for
/// boundary-condition rows in implicit matrices.
StencilRow boundary_stencil(int nx, double h, int order, bool at_right, int npts);

/// Boundary-condition rows used when assembling implicit x-operators:
/// always u(0)=0, u(1)=0 and the one-sided u_x(1)=0 row; with
/// regularized closures additionally the one-sided u_xx(0)=0 row.
/// Returned as (row index, stencil) pairs; right-hand sides are zero.
std::vector<std::pair<int, StencilRow>> bc_rows(int nx, double h, bool regularized);

/// Row indices that bc_rows occupies (the complement are PDE rows).
std::vector<int> bc_row_indices(int nx, bool regularized);

}  // namespace zk
