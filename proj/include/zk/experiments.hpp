#pragma once

#include <string>

#include "zk/config.hpp"
#include "zk/state.hpp"

namespace zk {

/// Exit codes shared by the CLI: 0 success, 2 config error, 3 numerical
/// fault, 4 blowup-guard stop (an expected experimental outcome).
enum ExitCode { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_blowup = 4 };

int execute_run(const RunConfig& cfg, const std::string& out_dir);
int execute_sweep_eps(const RunConfig& cfg, const std::string& out_dir, int threads);
int execute_bvp(const RunConfig& cfg, const std::string& out_dir);
int execute_verify(const RunConfig& cfg, const std::string& run_dir);
int execute_mms(const RunConfig& cfg, const std::string& out_dir);

/// Per-member results of the epsilon sweep (also used by the acceptance
/// suite): sup_t |u|, the time integral of |grad u|^2, and the final state.
struct SweepMember {
    double epsilon = 0.0;
    double sup_l2 = 0.0;
    double int_grad2_dt = 0.0;
    Field final_state;
    Trajectory trajectory;
};
std::vector<SweepMember> run_eps_sweep(const RunConfig& cfg, int threads);

/// One rung of the manufactured-solution ladder.
struct MmsPoint {
    double epsilon = 0.0;
    int nx = 0;
    double dt = 0.0;
    double l2_error = 0.0;
};
std::vector<MmsPoint> run_mms_ladder(const RunConfig& cfg);

}  // namespace zk
