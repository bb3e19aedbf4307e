#include "zk/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "zk/bvp.hpp"
#include "zk/common.hpp"
#include "zk/diagnostics.hpp"
#include "zk/io.hpp"
#include "zk/operators.hpp"
#include "zk/stepper.hpp"

namespace fs = std::filesystem;

namespace zk {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string eps_dir_name(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "eps_%.0e", eps);
    return buf;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::mutex err_mtx;
    std::exception_ptr first_error;
    const int nworkers = std::min(threads, n);
    for (int w = 0; w < nworkers; ++w)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mtx);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

int execute_run(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    write_manifest(out_dir, cfg.echo, {});

    RunSetup setup = to_setup(cfg);
    std::map<std::string, std::string> files;

    std::ofstream snap_index;
    if (setup.snapshot_every > 0) {
        snap_index.open(fs::path(out_dir) / "snapshots.csv");
        snap_index << "step,t,dt,file\n";
    }
    auto observer = [&](const SolverState& s) {
        if (setup.snapshot_every <= 0) return;
        if (s.step_index % setup.snapshot_every != 0) return;
        char name[64];
        std::snprintf(name, sizeof(name), "u_%08ld.zkf", s.step_index);
        write_snapshot((fs::path(out_dir) / name).string(), s.u);
        snap_index << s.step_index << "," << g17(s.t) << "," << g17(s.dt) << "," << name << "\n";
        files[name] = "";
    };

    Trajectory traj;
    try {
        // write the t=0 snapshot before stepping
        if (setup.snapshot_every > 0) {
            GridPtr grid = make_grid(setup.grid);
            Field u0 = make_initial(setup.initial, setup.initial_amplitude, grid, setup.ms);
            u0.bc_tag = setup.params.epsilon > 0.0 ? BcTag::zk_regularized : BcTag::zk_limit;
            write_snapshot((fs::path(out_dir) / "u_00000000.zkf").string(), u0);
            snap_index << 0 << "," << g17(0.0) << "," << g17(0.0) << ",u_00000000.zkf\n";
            files["u_00000000.zkf"] = "";
        }
        traj = run(setup, observer);
    } catch (const config_error& e) {
        std::cerr << e.what() << "\n";
        return exit_config;
    }
    if (snap_index.is_open()) snap_index.close();

    write_diagnostics_csv((fs::path(out_dir) / "diagnostics.csv").string(), traj.records);
    files["diagnostics.csv"] = "";
    if (setup.snapshot_every > 0) files["snapshots.csv"] = "";

    for (auto& [name, sum] : files)
        sum = file_checksum((fs::path(out_dir) / name).string());
    write_manifest(out_dir, cfg.echo, files);

    switch (traj.status.outcome) {
        case RunOutcome::completed:
            std::cout << "run completed: t = " << traj.status.t_reached << ", "
                      << traj.records.size() << " records -> " << out_dir << "\n";
            return exit_ok;
        case RunOutcome::blowup_suspected:
            std::cout << "run stopped by blowup guard at t = " << traj.status.t_reached
                      << " (expected experimental outcome)\n";
            return exit_blowup;
        default:
            std::cerr << "numerical fault at t = " << traj.status.t_reached << ": "
                      << traj.status.message << "\n";
            return exit_numerical;
    }
}

std::vector<SweepMember> run_eps_sweep(const RunConfig& cfg, int threads) {
    if (cfg.eps_list.empty())
        throw config_error("sweep-eps requires sweep.eps_list");
    for (std::size_t i = 0; i + 1 < cfg.eps_list.size(); ++i)
        if (!(cfg.eps_list[i + 1] < cfg.eps_list[i]))
            throw config_error("sweep.eps_list must be strictly decreasing");

    std::vector<SweepMember> members(cfg.eps_list.size());
    parallel_for(static_cast<int>(cfg.eps_list.size()), threads, [&](int i) {
        RunConfig member = cfg;
        member.epsilon = cfg.eps_list[i];
        member.keep_states = true;
        RunSetup setup = to_setup(member);
        Trajectory traj = run(setup);
        if (traj.status.outcome != RunOutcome::completed)
            throw numerical_error("sweep member eps=" + std::to_string(member.epsilon) +
                                  " did not complete: " + traj.status.message);
        SweepMember& m = members[i];
        m.epsilon = member.epsilon;
        for (const auto& r : traj.records) m.sup_l2 = std::max(m.sup_l2, r.l2);
        for (std::size_t k = 0; k + 1 < traj.records.size(); ++k) {
            const double dt = traj.records[k + 1].t - traj.records[k].t;
            m.int_grad2_dt += 0.5 * dt *
                              (traj.records[k].grad_l2 * traj.records[k].grad_l2 +
                               traj.records[k + 1].grad_l2 * traj.records[k + 1].grad_l2);
        }
        m.final_state = traj.states.back();
        m.trajectory = std::move(traj);
    });
    return members;
}

int execute_sweep_eps(const RunConfig& cfg, const std::string& out_dir, int threads) {
    fs::create_directories(out_dir);
    write_manifest(out_dir, cfg.echo, {});
    std::vector<SweepMember> members = run_eps_sweep(cfg, threads);

    std::map<std::string, std::string> files;
    for (const auto& m : members) {
        const std::string sub = (fs::path(out_dir) / eps_dir_name(m.epsilon)).string();
        fs::create_directories(sub);
        write_diagnostics_csv((fs::path(sub) / "diagnostics.csv").string(), m.trajectory.records);
    }

    std::ostringstream metrics;
    metrics << "epsilon,sup_l2,int_grad2_dt\n";
    for (const auto& m : members)
        metrics << g17(m.epsilon) << "," << g17(m.sup_l2) << "," << g17(m.int_grad2_dt) << "\n";
    write_text_file((fs::path(out_dir) / "sweep_metrics.csv").string(), metrics.str());
    files["sweep_metrics.csv"] = "";

    std::ostringstream table;
    table << "eps_hi,eps_lo,t,l2_diff\n";
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
        Field diff = lincomb(1.0, members[i].final_state, -1.0, members[i + 1].final_state);
        table << g17(members[i].epsilon) << "," << g17(members[i + 1].epsilon) << ","
              << g17(cfg.t_end) << "," << g17(norm_l2(diff)) << "\n";
    }
    write_text_file((fs::path(out_dir) / "sweep_pairs.csv").string(), table.str());
    files["sweep_pairs.csv"] = "";

    for (auto& [name, sum] : files) sum = file_checksum((fs::path(out_dir) / name).string());
    write_manifest(out_dir, cfg.echo, files);
    std::cout << "sweep-eps: " << members.size() << " members -> " << out_dir << "\n";
    return exit_ok;
}

int execute_bvp(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    write_manifest(out_dir, cfg.echo, {});

    const int n = cfg.bvp_n;
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = double(i) / n;
        if (cfg.bvp_g == "const6")
            g[i] = 6.0;
        else if (cfg.bvp_g == "linear24x")
            g[i] = 24.0 * x;
        else
            g[i] = std::cos(3.14159265358979323846 * x);
    }

    SweepResult sweep = trace_sweep(g, cfg.bvp_eps_list, n, cfg.bvp_nonlinear);
    BVPSolution limit = limit_solution(g, n);

    std::ostringstream out;
    out << "epsilon,sup_uxx,err_outside_layer,layer_width,ux0,uxx1,uxxx1\n";
    for (const auto& r : sweep.records)
        out << g17(r.epsilon) << "," << g17(r.sup_uxx) << "," << g17(r.err_outside_layer) << ","
            << g17(r.layer_width) << "," << g17(r.ux0) << "," << g17(r.uxx1) << ","
            << g17(r.uxxx1) << "\n";
    write_text_file((fs::path(out_dir) / "bvp_sweep.csv").string(), out.str());

    std::map<std::string, std::string> files;
    files["bvp_sweep.csv"] = file_checksum((fs::path(out_dir) / "bvp_sweep.csv").string());
    write_manifest(out_dir, cfg.echo, files);

    std::cout << "bvp sweep: sup|u_xx| ratio = " << sweep.sup_ratio
              << "; limit traces: u_x(0) = " << limit.ux0 << ", u_xx(1) = " << limit.uxx1
              << " -> " << out_dir << "\n";
    return exit_ok;
}

int execute_verify(const RunConfig& cfg, const std::string& run_dir) {
    const fs::path dir(run_dir);
    if (!fs::exists(dir / "snapshots.csv"))
        throw config_error("verify: no snapshots.csv in " + run_dir +
                           " (re-run with run.snapshot_every = 1)");

    RunSetup setup = to_setup(cfg);
    GridPtr grid = make_grid(setup.grid);
    const BcTag tag =
        setup.params.epsilon > 0.0 ? BcTag::zk_regularized : BcTag::zk_limit;

    Trajectory traj;
    {
        std::ifstream in(dir / "snapshots.csv");
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string step_s, t_s, dt_s, name;
            std::getline(ss, step_s, ',');
            std::getline(ss, t_s, ',');
            std::getline(ss, dt_s, ',');
            std::getline(ss, name, ',');
            Snapshot snap = read_snapshot((dir / name).string());
            traj.states.push_back(snapshot_to_field(snap, grid, tag));
            traj.frames.push_back(
                {std::strtod(t_s.c_str(), nullptr), std::strtod(dt_s.c_str(), nullptr),
                 std::strtol(step_s.c_str(), nullptr, 10)});
        }
    }
    if (traj.states.size() < 2) throw config_error("verify: trajectory shorter than 2 snapshots");
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k)
        if (traj.frames[k + 1].step != traj.frames[k].step + 1)
            throw config_error("verify: snapshot index has gaps; need run.snapshot_every = 1");

    BalanceSeries bu = energy_balance_residual(traj, setup.params, setup.step, BalanceKind::u);
    BalanceSeries bxu = energy_balance_residual(traj, setup.params, setup.step, BalanceKind::xu);

    std::ostringstream rep;
    rep << "t,residual_u,residual_xu\n";
    for (std::size_t i = 0; i < bu.t.size(); ++i)
        rep << g17(bu.t[i]) << "," << g17(bu.residual[i]) << "," << g17(bxu.residual[i]) << "\n";
    write_text_file((dir / "verify_report.csv").string(), rep.str());

    // identity residuals on the final state, u_t by differencing
    const Field& ulast = traj.states.back();
    const Field& uprev = traj.states[traj.states.size() - 2];
    Field ut = lincomb(1.0 / traj.frames.back().dt, ulast, -1.0 / traj.frames.back().dt, uprev);
    Field f = forcing_eval(setup.params.forcing, grid, traj.frames.back().t,
                           ForcingDerivative::f);
    auto idr = identity_residuals(ulast, setup.params, f, cfg.xtilde, &ut, cfg.c_prime);

    std::cout << "verify: max |balance_u| = " << bu.max_abs()
              << ", max |balance_xu| = " << bxu.max_abs() << "\n";
    for (const auto& r : idr) {
        const char* name = r.id == IdentityReport::Id::eq_x_moment
                               ? "x-moment"
                               : (r.id == IdentityReport::Id::eq_partial_integral
                                      ? "partial-integral"
                                      : "uxx-inequality");
        std::cout << "verify: " << name << " residual = " << r.residual
                  << (r.id == IdentityReport::Id::uxx_inequality
                          ? (", min c' = " + std::to_string(r.min_c_prime))
                          : std::string())
                  << "\n";
    }
    return exit_ok;
}

std::vector<MmsPoint> run_mms_ladder(const RunConfig& cfg) {
    std::vector<MmsPoint> points;
    for (double eps : cfg.mms_eps) {
        for (int nx : cfg.mms_nx) {
            RunConfig member = cfg;
            member.epsilon = eps;
            member.grid.nx = nx;
            member.initial = "manufactured";
            member.forcing_kind = "manufactured";
            member.t_end = cfg.mms_t_end;
            member.record_interval = cfg.mms_t_end;  // record start and end only
            const double h = 1.0 / nx;
            const int steps = std::max(1, static_cast<int>(std::lround(
                                              cfg.mms_t_end / (cfg.mms_dt_over_h * h))));
            const double dt = cfg.mms_t_end / steps;
            member.step.dt_max = dt;
            member.step.dt_min = dt;
            member.keep_states = true;

            RunSetup setup = to_setup(member);
            Trajectory traj = run(setup);
            if (traj.status.outcome != RunOutcome::completed)
                throw numerical_error("mms member did not complete: " + traj.status.message);

            GridPtr grid = traj.states.back().grid;
            Field exact = ms_sample(*setup.ms, grid, cfg.mms_t_end);
            Field err = lincomb(1.0, traj.states.back(), -1.0, exact);
            points.push_back({eps, nx, dt, norm_l2(err)});
        }
    }
    return points;
}

int execute_mms(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    write_manifest(out_dir, cfg.echo, {});
    std::vector<MmsPoint> pts = run_mms_ladder(cfg);

    std::ostringstream out;
    out << "epsilon,nx,dt,l2_error,observed_order\n";
    std::cout << "mms ladder (dt/h = " << cfg.mms_dt_over_h << ", T = " << cfg.mms_t_end
              << ")\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double order = 0.0;
        const bool has_prev =
            i > 0 && pts[i - 1].epsilon == pts[i].epsilon && pts[i].nx == 2 * pts[i - 1].nx;
        if (has_prev) order = std::log2(pts[i - 1].l2_error / pts[i].l2_error);
        out << g17(pts[i].epsilon) << "," << pts[i].nx << "," << g17(pts[i].dt) << ","
            << g17(pts[i].l2_error) << "," << (has_prev ? g17(order) : "") << "\n";
        std::cout << "  eps = " << pts[i].epsilon << " nx = " << pts[i].nx
                  << " err = " << pts[i].l2_error;
        if (has_prev) std::cout << " order = " << order;
        std::cout << "\n";
    }
    write_text_file((fs::path(out_dir) / "mms_results.csv").string(), out.str());
    std::map<std::string, std::string> files;
    files["mms_results.csv"] =
        file_checksum((fs::path(out_dir) / "mms_results.csv").string());
    write_manifest(out_dir, cfg.echo, files);
    return exit_ok;
}

}  // namespace zk
