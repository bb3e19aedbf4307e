#pragma once

#include <functional>

#include "zk/banded.hpp"
#include "zk/state.hpp"

namespace zk {

/// Per-transverse-mode banded factorizations of
///   [I + dt theta (A_mode + eps L_mode)]
/// with the boundary-condition rows substituted.  Valid only for the exact
/// (grid, c, eps, dt, theta) it was built for; imex_step checks.
class LinearSystemCache {
public:
    GridPtr grid;
    double dt = 0.0;
    double theta = 0.5;
    double c = 1.0;
    double eps = 0.0;
    std::vector<BandedMatrix> modes;
    std::vector<double> lam2;  // transverse -Dperp symbol per mode
    std::vector<double> lam4;  // transverse fourth-derivative symbol per mode

    bool matches(const GridPtr& g, const ModelParams& p, double dt_, double theta_) const;
};

/// Assemble and factor the implicit operator for every transverse mode.
/// Throws numerical_error naming the mode if a factorization is singular.
LinearSystemCache build_implicit_operator(const ModelParams& params, const GridPtr& grid,
                                          double dt, double theta);

/// One IMEX step: stiff linear part implicit (theta-weighted), split-form
/// nonlinearity explicit (AB2 extrapolation, explicit Euler on the first
/// step).  Verifies the per-mode linear-solve residual and re-enforces the
/// Dirichlet rows exactly.
SolverState imex_step(const SolverState& state, const LinearSystemCache& cache,
                      const ModelParams& params, const StepConfig& cfg);

/// dt = clamp(cfl * hx / (1 + max|u|), dt_min, dt_max); deterministic.
double select_dt(const Field& u, const Grid& grid, const StepConfig& cfg);

/// Advance from t = 0 to t_end (or until the blowup guard or a numerical
/// fault stops the run).  Emits one DiagnosticsRecord per record interval,
/// keeps the full state history when asked, and calls the observer after
/// every accepted step.
Trajectory run(const RunSetup& setup,
               const std::function<void(const SolverState&)>& observer = {});

/// Norm used by the blowup guard.
double guard_norm_value(const Field& u, GuardNorm norm);

}  // namespace zk
