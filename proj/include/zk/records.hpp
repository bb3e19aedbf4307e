#pragma once

#include <array>
#include <string>

namespace zk {

/// One timestep's worth of every norm and trace tracked by the harness.
/// All entries are computed with the shared quadrature rule; the u_t entries
/// are backward differences centered at t - dt/2, except at t = 0 where the
/// analytic initial time derivative is used.
struct DiagnosticsRecord {
    double t = 0.0;
    double l2 = 0.0;               // |u|
    double l2_weighted_x = 0.0;    // |sqrt(x) u|
    double l2_weighted_1px = 0.0;  // |sqrt(1+x) u|
    double ux_l2 = 0.0;            // |u_x|
    double uxx_l2 = 0.0;           // |u_xx|
    double grad_l2 = 0.0;          // |grad u|
    double uyy_l2 = 0.0;           // |u_yy|
    double uzz_l2 = 0.0;           // |u_zz| (0 when d = 1)
    double xi_norm = 0.0;          // sqrt(|u_xx|^2 + |u_yy|^2 + |u_zz|^2)
    double trace_ux0 = 0.0;        // ||u_x(0,.)||_{L2(I_perp)}
    double trace_uxx1 = 0.0;       // ||u_xx(1,.)||_{L2(I_perp)}
    double ut_l2 = 0.0;            // |u_t|
    double ut_weighted = 0.0;      // |sqrt(1+x) u_t|
    double grad_ut_l2 = 0.0;       // |grad u_t|
    double sigma = 0.0;            // |u_x| + |u|
    double nonlin_l2 = 0.0;        // |u u_x|
    double f_l2 = 0.0;             // |f(t)|
    double ft_l2 = 0.0;            // |f_t(t)|

    static constexpr int ncolumns = 19;
    static const std::array<const char*, ncolumns>& column_names();
    std::array<double, ncolumns> as_row() const;
    static DiagnosticsRecord from_row(const std::array<double, ncolumns>& row);
};

}  // namespace zk
