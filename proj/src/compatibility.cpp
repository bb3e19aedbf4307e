#include "zk/compatibility.hpp"

#include <cmath>

#include "zk/operators.hpp"

namespace zk {

namespace {

double face_max_abs(const Field& u, bool at_right, int order) {
    std::vector<double> v = boundary_derivative(u, at_right, order);
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// -Delta u_x - u u_x - c u_x + f(0), assembled with interior-only closures so
// raw data can be inspected without presupposing the conditions under test.
Field induced_ut0(const Field& u0, const ModelParams& params) {
    Field out = forcing_eval(params.forcing, u0.grid, 0.0, ForcingDerivative::f);
    Field a = op_A(u0, params.c, XClosure::interior_only);
    axpy(-1.0, a, out);
    Field ux = derivative(u0, Axis::x, 1, XClosure::interior_only);
    Field uux = pointwise_mul(u0, ux);
    axpy(-1.0, uux, out);
    return out;
}

void fill_entries(const Field& v, int d, std::vector<CompatibilityReport::Entry>& out,
                  const std::string& who) {
    out.push_back({who + "|x=0", face_max_abs(v, false, 0)});
    out.push_back({who + "|x=1", face_max_abs(v, true, 0)});
    out.push_back({who + "_x|x=1", face_max_abs(v, true, 1)});
    // wall conditions hold identically in the transverse representation
    out.push_back({who + "|y walls", 0.0});
    out.push_back({who + "_yy|y walls", 0.0});
    if (d == 2) {
        out.push_back({who + "|z walls", 0.0});
        out.push_back({who + "_zz|z walls", 0.0});
    }
}

}  // namespace

double CompatibilityReport::max_residual() const {
    double m = 0.0;
    for (const auto& e : u0_residuals) m = std::max(m, e.residual);
    for (const auto& e : ut0_residuals) m = std::max(m, e.residual);
    return m;
}

CompatibilityReport check_compatibility(const Field& u0, const ModelParams& params, double tol) {
    CompatibilityReport rep;
    rep.tolerance = tol;
    const int d = u0.grid->spec.d;
    fill_entries(u0, d, rep.u0_residuals, "u0");
    Field ut0 = induced_ut0(u0, params);
    fill_entries(ut0, d, rep.ut0_residuals, "ut0");
    rep.passed = rep.max_residual() <= tol;
    return rep;
}

}  // namespace zk
