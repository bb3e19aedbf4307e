#pragma once

#include <functional>
#include <vector>

namespace zk {

/// Two-point boundary-value problem on (0,1):
///   u_xxx + eps u_xxxx = g            (linear form)
///   u_xxx + u u_x + eps u_xxxx = g    (nonlinear option, Picard iteration)
/// with u(0) = u(1) = u_x(1) = 0 and, for eps > 0, u_xx(0) = 0.
struct BVPProblem {
    std::vector<double> g;  // n+1 samples at nodes i/n
    double epsilon = 0.0;
    int n = 0;  // cell count, >= 16
    bool nonlinear = false;
};

struct BVPSolution {
    int n = 0;
    double h = 0.0;
    double epsilon = 0.0;
    std::vector<double> u;    // n+1 node values
    std::vector<double> uxx;  // centered/one-sided second differences
    double ux0 = 0.0, ux1 = 0.0, uxx0 = 0.0, uxx1 = 0.0, uxxx1 = 0.0;
    double sup_uxx = 0.0;  // sup over interior nodes (open interval)
};

/// Direct banded solve of the discretized operator with the boundary rows
/// substituted (three rows when eps = 0, four when eps > 0).  The nonlinear
/// variant iterates Picard with relaxation 0.5 until the update is below
/// 1e-12 (at most 200 sweeps).
BVPSolution solve_bvp(const BVPProblem& p);

/// eps = 0 limit: solves u_xxx = g by fourth-order cumulative integration
/// and a two-parameter fit of the x=1 boundary rows.
BVPSolution limit_solution(const std::vector<double>& g, int n);

/// One row of the eps sweep exhibiting the uniform trace bounds.
struct SweepRecord {
    double epsilon = 0.0;
    double sup_uxx = 0.0;
    double err_outside_layer = 0.0;  // max over [0.1, 1] of |u_eps - u_0|
    double layer_width = 0.0;        // log-slope fit near x=0 (NaN if unresolved)
    double ux0 = 0.0, uxx1 = 0.0, uxxx1 = 0.0;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    double sup_ratio = 0.0;  // max_eps sup|u_xx| / min_eps sup|u_xx|
};

/// Solve for every epsilon in a strictly decreasing positive list and compare
/// against the eps = 0 limit.
SweepResult trace_sweep(const std::vector<double>& g, const std::vector<double>& eps_list,
                        int n, bool nonlinear = false);

/// Fourth-order cumulative integral of uniform samples: out[i] ~ int_0^{x_i} f.
/// Exact for cubics.
std::vector<double> cumint4(const std::vector<double>& f, double h);

}  // namespace zk
