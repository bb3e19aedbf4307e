#pragma once

#include "zk/grid.hpp"
#include "zk/stencils.hpp"

namespace zk {

enum class Axis { x, y, z };
enum class Weight { one, x, one_plus_x };

/// Closure matching a field's boundary-condition tag (interior_only for
/// unconstrained fields).
XClosure closure_from_tag(BcTag tag);

/// Shared, cached difference operator for the x direction.
const XDeriv& cached_xderiv(int nx, int order, XClosure closure);

/// Discrete derivative along one axis.  x derivatives are finite differences
/// of formal order >= 2; transverse derivatives are exact on the spectral
/// basis.  Errors: order outside 1..4, axis z on a d=1 grid, or an x closure
/// inconsistent with the field's bc_tag.
Field derivative(const Field& u, Axis axis, int order,
                 XClosure closure = XClosure::interior_only);

/// A u = Delta u_x + c u_x, assembled as u_xxx + Dperp(u_x) + c u_x.
/// Closure is taken from u.bc_tag unless overridden.
Field op_A(const Field& u, double c);
Field op_A(const Field& u, double c, XClosure closure);

/// L u = u_xxxx + u_yyyy (+ u_zzzz); no mixed terms.
Field op_L(const Field& u);
Field op_L(const Field& u, XClosure closure);

/// Skew-split discretization of u u_x:
///   (1/3) u Dx(u) + (1/3) Dx(u^2),
/// whose discrete work <u, N(u)> telescopes to the boundary exactly when the
/// field vanishes at x=0 and x=1.
Field nonlinear_split(const Field& u);

/// Integral over M of w(x) u, with trapezoidal x-weights and basis-exact
/// transverse weights.  weight one_plus_x is computed as the sum of the one
/// and x integrals so the additivity identity holds exactly.
double integrate(const Field& u, Weight weight = Weight::one);

/// Weighted L2 inner product and norms.
double inner(const Field& a, const Field& b, Weight weight = Weight::one);
double norm_l2(const Field& u);
double weighted_norm(const Field& u, Weight weight);  // |sqrt(w(x)) u|

/// Pointwise product of two fields on the same grid.
Field pointwise_mul(const Field& a, const Field& b);

/// Derivative values on the x=0 or x=1 face, one value per transverse point.
/// order 0 returns the face values themselves; orders 1..4 use the one-sided
/// third-order closures shared with the diagnostics identities.
std::vector<double> boundary_derivative(const Field& u, bool at_right, int order);

/// L2(I_perp) norm of a boundary derivative trace.
double boundary_trace_l2(const Field& u, bool at_right, int order);

/// Apply an n x n transverse matrix (synthesis/derivative/...) along y or z.
Field apply_transverse_matrix(const Field& u, Axis axis, const std::vector<double>& m);

}  // namespace zk
