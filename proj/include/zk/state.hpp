#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zk/grid.hpp"
#include "zk/model.hpp"
#include "zk/records.hpp"

namespace zk {

enum class NonlinearExtrapolation { ab2, explicit_euler };

/// Time-integration knobs.  theta = 1/2 targets second order.
struct StepConfig {
    double theta = 0.5;  // implicit weighting in [1/2, 1]
    double cfl = 0.5;
    double dt_max = 1e-2;
    double dt_min = 1e-8;
    NonlinearExtrapolation extrapolation = NonlinearExtrapolation::ab2;
    double solve_tol = 1e-8;  // linear-solve residual guard (relative)
};

/// State advanced by the stepper.  u_prev backs the AB2 extrapolation and the
/// u_t differencing; it is empty before the first step.
struct SolverState {
    double t = 0.0;
    Field u;
    Field u_prev;
    bool has_prev = false;
    double dt = 0.0;
    long step_index = 0;
};

enum class RunOutcome { completed, blowup_suspected, numerical_fault };
enum class GuardNorm { grad_l2, l2, max_abs };

struct RunStatus {
    RunOutcome outcome = RunOutcome::completed;
    double t_reached = 0.0;
    std::string message;
};

/// Per-step frame retained when state history is kept.
struct StateFrame {
    double t = 0.0;
    double dt = 0.0;  // step size used to reach this state (0 for the first)
    long step = 0;
};

struct Trajectory {
    std::vector<DiagnosticsRecord> records;
    std::vector<Field> states;       // every step, when keep_states
    std::vector<StateFrame> frames;  // aligned with states
    RunStatus status;
};

enum class CompatibilityMode { off, warn, enforce };

/// Everything a single simulation needs, independent of the config-file
/// front end.
struct RunSetup {
    GridSpec grid;
    ModelParams params;
    StepConfig step;
    double t_end = 1.0;
    double record_interval = 0.0;  // 0: every step
    int snapshot_every = 0;        // steps; 0 = off
    bool keep_states = false;
    double guard_factor = 0.0;  // 0: guard off
    GuardNorm guard_norm = GuardNorm::grad_l2;
    InitialPreset initial = InitialPreset::zero;
    double initial_amplitude = 1.0;
    std::shared_ptr<const ManufacturedSolution> ms;  // for manufactured runs
    CompatibilityMode compat = CompatibilityMode::warn;
    double compat_tol = 1e-6;
    double c_prime = 1.0;
};

}  // namespace zk
