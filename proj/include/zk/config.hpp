#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zk/state.hpp"

namespace zk {

/// Parsed experiment description.  One flat key = value grammar covers every
/// subcommand; keys outside a subcommand's group are simply unused by it.
struct RunConfig {
    std::string mode = "simulate";  // "estimate" enforces epsilon <= 1/4
    GridSpec grid;

    double c = 1.0;
    double epsilon = 0.0;
    bool nonlinearity = true;

    std::string forcing_kind = "zero";
    double forcing_amplitude = 1.0;

    std::string initial = "zero";
    double amplitude = 1.0;
    double ms_sigma = -1.0;

    StepConfig step;

    double t_end = 1.0;
    double record_interval = 0.0;
    int snapshot_every = 0;
    bool keep_states = false;
    std::string compatibility = "warn";
    double compat_tol = 1e-6;

    double guard_factor = 0.0;
    std::string guard_norm = "grad_l2";

    double c_prime = 1.0;
    double xtilde = 0.5;

    std::string out_dir;

    std::vector<double> eps_list;  // sweep-eps

    int bvp_n = 2048;
    std::string bvp_g = "const6";
    std::vector<double> bvp_eps_list;
    bool bvp_nonlinear = false;

    std::vector<int> mms_nx = {32, 64, 128};
    std::vector<double> mms_eps = {0.0, 0.01};
    double mms_t_end = 0.1;
    double mms_dt_over_h = 0.4;

    std::uint64_t seed = 0;

    std::string echo;  // raw config text, echoed into the manifest
};

/// Parse the documented key = value grammar.  Unknown keys, syntax errors and
/// semantic violations raise config_error with the offending line number.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

/// Translate to the in-memory run description (builds the manufactured
/// solution and forcing spec when the presets ask for them).
RunSetup to_setup(const RunConfig& cfg);

}  // namespace zk
