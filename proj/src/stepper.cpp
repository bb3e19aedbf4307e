#include "zk/stepper.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "zk/common.hpp"
#include "zk/compatibility.hpp"
#include "zk/diagnostics.hpp"
#include "zk/operators.hpp"
#include "zk/stencils.hpp"

namespace zk {

namespace {

constexpr int kKl = 2;
constexpr int kKu = 3;

// Transverse symbols per flattened mode index (same layout as point indices).
void mode_symbols(const Grid& g, std::vector<double>& lam2, std::vector<double>& lam4) {
    const int nt = g.nt();
    lam2.resize(nt);
    lam4.resize(nt);
    if (g.spec.d == 1) {
        for (int m = 0; m < nt; ++m) {
            const double k2 = g.by.kappa[m] * g.by.kappa[m];
            lam2[m] = k2;
            lam4[m] = k2 * k2;
        }
    } else {
        for (int my = 0; my < g.spec.ny; ++my)
            for (int mz = 0; mz < g.spec.nz; ++mz) {
                const double ky2 = g.by.kappa[my] * g.by.kappa[my];
                const double kz2 = g.bz.kappa[mz] * g.bz.kappa[mz];
                lam2[my * g.spec.nz + mz] = ky2 + kz2;
                lam4[my * g.spec.nz + mz] = ky2 * ky2 + kz2 * kz2;
            }
    }
}

Field to_modes(const Field& u) {
    const Grid& g = *u.grid;
    Field m = apply_transverse_matrix(u, Axis::y, g.by.analysis);
    if (g.spec.d == 2) m = apply_transverse_matrix(m, Axis::z, g.bz.analysis);
    return m;
}

Field from_modes(const Field& m) {
    const Grid& g = *m.grid;
    Field u = apply_transverse_matrix(m, Axis::y, g.by.synth);
    if (g.spec.d == 2) u = apply_transverse_matrix(u, Axis::z, g.bz.synth);
    return u;
}

BandedMatrix assemble_mode_matrix(const Grid& g, double dt, double theta, double c, double eps,
                                  double lam2, double lam4) {
    const int nx = g.spec.nx;
    const bool reg = eps > 0.0;
    BandedMatrix m(nx + 1, kKl, kKu);

    const XDeriv& d1 = cached_xderiv(nx, 1, XClosure::interior_only);
    const XDeriv& d3 = cached_xderiv(nx, 3, XClosure::interior_only);
    const XDeriv* d4 = reg ? &cached_xderiv(nx, 4, XClosure::interior_only) : nullptr;

    const auto bcidx = bc_row_indices(nx, reg);
    auto is_bc = [&](int i) {
        for (int b : bcidx)
            if (b == i) return true;
        return false;
    };

    const double w = dt * theta;
    for (int i = 0; i <= nx; ++i) {
        if (is_bc(i)) continue;
        m.at(i, i) += 1.0;
        for (std::size_t j = 0; j < d3.row(i).coeff.size(); ++j)
            m.at(i, d3.row(i).first + static_cast<int>(j)) += w * d3.row(i).coeff[j];
        const double c1 = w * (c - lam2);
        for (std::size_t j = 0; j < d1.row(i).coeff.size(); ++j)
            m.at(i, d1.row(i).first + static_cast<int>(j)) += c1 * d1.row(i).coeff[j];
        if (reg) {
            for (std::size_t j = 0; j < d4->row(i).coeff.size(); ++j)
                m.at(i, d4->row(i).first + static_cast<int>(j)) += w * eps * d4->row(i).coeff[j];
            m.at(i, i) += w * eps * lam4;
        }
    }
    for (const auto& [idx, row] : bc_rows(nx, g.hx, reg))
        for (std::size_t j = 0; j < row.coeff.size(); ++j)
            m.at(idx, row.first + static_cast<int>(j)) = row.coeff[j];
    return m;
}

}  // namespace

bool LinearSystemCache::matches(const GridPtr& g, const ModelParams& p, double dt_,
                                double theta_) const {
    return grid.get() == g.get() && dt == dt_ && theta == theta_ && c == p.c && eps == p.epsilon;
}

LinearSystemCache build_implicit_operator(const ModelParams& params, const GridPtr& grid,
                                          double dt, double theta) {
    if (dt < 0.0) throw std::invalid_argument("build_implicit_operator: dt must be >= 0");
    LinearSystemCache cache;
    cache.grid = grid;
    cache.dt = dt;
    cache.theta = theta;
    cache.c = params.c;
    cache.eps = params.epsilon;
    mode_symbols(*grid, cache.lam2, cache.lam4);
    const int nt = grid->nt();
    cache.modes.reserve(nt);
    for (int m = 0; m < nt; ++m) {
        BandedMatrix mat = assemble_mode_matrix(*grid, dt, theta, params.c, params.epsilon,
                                                cache.lam2[m], cache.lam4[m]);
        try {
            mat.factor();
        } catch (const numerical_error& e) {
            throw numerical_error("implicit operator singular for transverse mode " +
                                  std::to_string(m) + ": " + e.what());
        }
        cache.modes.push_back(std::move(mat));
    }
    return cache;
}

double select_dt(const Field& u, const Grid& grid, const StepConfig& cfg) {
    const double dt = cfg.cfl * grid.hx / (1.0 + u.max_abs());
    return std::min(cfg.dt_max, std::max(cfg.dt_min, dt));
}

SolverState imex_step(const SolverState& state, const LinearSystemCache& cache,
                      const ModelParams& params, const StepConfig& cfg) {
    const GridPtr& grid = state.u.grid;
    if (!cache.matches(grid, params, state.dt, cfg.theta))
        throw std::logic_error("imex_step: cache does not match (grid, params, dt, theta)");

    const Grid& g = *grid;
    const int nx = g.spec.nx;
    const int nt = g.nt();
    const double dt = state.dt;
    const double theta = cfg.theta;
    const bool reg = params.epsilon > 0.0;

    // explicit side
    Field e = state.u;
    if (theta < 1.0) {
        Field au = op_A(state.u, params.c);
        axpy(-dt * (1.0 - theta), au, e);
        if (reg) {
            Field lu = op_L(state.u);
            axpy(-dt * (1.0 - theta) * params.epsilon, lu, e);
        }
    }
    if (params.nonlinearity) {
        Field nstar = nonlinear_split(state.u);
        if (cfg.extrapolation == NonlinearExtrapolation::ab2 && state.has_prev) {
            Field nprev = nonlinear_split(state.u_prev);
            scale(nstar, 1.5);
            axpy(-0.5, nprev, nstar);
        }
        axpy(-dt, nstar, e);
    }
    {
        Field f = forcing_eval(params.forcing, grid, state.t + theta * dt, ForcingDerivative::f);
        axpy(dt, f, e);
    }

    // implicit banded solve per transverse mode
    Field ehat = to_modes(e);
    Field uhat = zeros_like(ehat);
    const auto bcidx = bc_row_indices(nx, reg);
    std::vector<double> line(nx + 1), rhs_line(nx + 1);
    for (int m = 0; m < nt; ++m) {
        for (int i = 0; i <= nx; ++i) line[i] = ehat.at(i, m);
        for (int b : bcidx) line[b] = 0.0;
        rhs_line = line;
        cache.modes[m].solve(line);
        const double res = cache.modes[m].residual_inf(line, rhs_line);
        double scale_ref = 1.0;
        for (double v : rhs_line) scale_ref = std::max(scale_ref, std::abs(v));
        if (!(res <= cfg.solve_tol * scale_ref))
            throw numerical_error("linear solve residual " + std::to_string(res) +
                                  " exceeds tolerance for mode " + std::to_string(m));
        for (int i = 0; i <= nx; ++i) uhat.at(i, m) = line[i];
    }
    Field unew = from_modes(uhat);
    for (int t = 0; t < nt; ++t) {
        unew.at(0, t) = 0.0;
        unew.at(nx, t) = 0.0;
    }
    unew.bc_tag = reg ? BcTag::zk_regularized : BcTag::zk_limit;
    if (!unew.finite()) throw numerical_error("imex_step produced non-finite state");

    SolverState next;
    next.t = state.t + dt;
    next.u = std::move(unew);
    next.u_prev = state.u;
    next.has_prev = true;
    next.dt = dt;
    next.step_index = state.step_index + 1;
    return next;
}

double guard_norm_value(const Field& u, GuardNorm norm) {
    switch (norm) {
        case GuardNorm::l2: return norm_l2(u);
        case GuardNorm::max_abs: return u.max_abs();
        default: {
            Field ux = derivative(u, Axis::x, 1, XClosure::interior_only);
            Field uy = derivative(u, Axis::y, 1);
            double s = inner(ux, ux) + inner(uy, uy);
            if (u.grid->spec.d == 2) {
                Field uz = derivative(u, Axis::z, 1);
                s += inner(uz, uz);
            }
            return std::sqrt(std::max(0.0, s));
        }
    }
}

Trajectory run(const RunSetup& setup, const std::function<void(const SolverState&)>& observer) {
    setup.params.validate();
    GridPtr grid = make_grid(setup.grid);

    Field u0 = make_initial(setup.initial, setup.initial_amplitude, grid, setup.ms);
    u0.bc_tag = setup.params.epsilon > 0.0 ? BcTag::zk_regularized : BcTag::zk_limit;

    Trajectory traj;
    if (setup.compat != CompatibilityMode::off) {
        CompatibilityReport rep = check_compatibility(u0, setup.params, setup.compat_tol);
        if (!rep.passed) {
            if (setup.compat == CompatibilityMode::enforce)
                throw config_error("initial data fails compatibility check, max residual " +
                                   std::to_string(rep.max_residual()));
            std::cerr << "warning: compatibility residual " << rep.max_residual()
                      << " exceeds tolerance " << setup.compat_tol << "\n";
        }
    }

    SolverState state;
    state.t = 0.0;
    state.u = u0;
    state.has_prev = false;
    state.step_index = 0;
    state.dt = select_dt(u0, *grid, setup.step);

    LinearSystemCache cache =
        build_implicit_operator(setup.params, grid, state.dt, setup.step.theta);

    traj.records.push_back(record(state, setup.params));
    if (setup.keep_states) {
        traj.states.push_back(state.u);
        traj.frames.push_back({0.0, 0.0, 0});
    }

    const double guard_ref =
        setup.guard_factor > 0.0
            ? std::max(guard_norm_value(u0, setup.guard_norm), 1e-12)
            : 0.0;

    double next_record_t =
        setup.record_interval > 0.0 ? setup.record_interval : 0.0;
    const double t_tol = 1e-12 * std::max(1.0, setup.t_end);

    while (state.t < setup.t_end - t_tol) {
        double dt_target = select_dt(state.u, *grid, setup.step);
        const bool final_step = state.t + dt_target >= setup.t_end - t_tol;
        if (final_step) dt_target = setup.t_end - state.t;
        const double drift = std::abs(dt_target - cache.dt);
        if ((final_step && drift > 1e-15) || drift > 0.1 * cache.dt)
            cache = build_implicit_operator(setup.params, grid, dt_target, setup.step.theta);
        state.dt = cache.dt;

        try {
            state = imex_step(state, cache, setup.params, setup.step);
        } catch (const numerical_error& e) {
            traj.status = {RunOutcome::numerical_fault, state.t, e.what()};
            return traj;
        }

        if (setup.keep_states) {
            traj.states.push_back(state.u);
            traj.frames.push_back({state.t, state.dt, state.step_index});
        }
        if (observer) observer(state);

        if (guard_ref > 0.0) {
            const double gn = guard_norm_value(state.u, setup.guard_norm);
            if (gn > setup.guard_factor * guard_ref) {
                traj.records.push_back(record(state, setup.params));
                traj.status = {RunOutcome::blowup_suspected, state.t,
                               "guard norm grew past the configured factor"};
                return traj;
            }
        }

        if (setup.record_interval <= 0.0) {
            traj.records.push_back(record(state, setup.params));
        } else if (state.t >= next_record_t - t_tol) {
            traj.records.push_back(record(state, setup.params));
            while (next_record_t <= state.t + t_tol) next_record_t += setup.record_interval;
        }
    }

    if (setup.record_interval > 0.0 &&
        (traj.records.empty() || traj.records.back().t < state.t - t_tol))
        traj.records.push_back(record(state, setup.params));

    traj.status = {RunOutcome::completed, state.t, ""};
    return traj;
}

}  // namespace zk
