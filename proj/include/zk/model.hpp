#pragma once

#include <memory>
#include <string>

#include "zk/grid.hpp"

namespace zk {

/// Closed-form solution family used for verification: separable
///   u(x, y, z, t) = amplitude * e^{sigma t} * X(x) * Ty(y) * Tz(z)
/// with X a polynomial vanishing to the boundary-condition orders
/// (X(0)=X(1)=X'(1)=X''(0)=0) and Ty, Tz cosines that satisfy the transverse
/// wall (or periodicity) conditions.  All derivatives needed by the equation
/// are available in closed form.
struct ManufacturedSolution {
    double amplitude = 1.0;
    double sigma = -1.0;  // time decay rate
    int d = 1;
    std::vector<double> xcoeff;  // polynomial coefficients of X, ascending
    double kappa_y = 1.0;
    double kappa_z = 1.0;  // used only when d == 2

    double xpoly(double x, int deriv) const;
    double trig(double kappa, double y, int deriv) const;

    double value(double x, double y, double z, double t) const;
    double time_derivative(double x, double y, double z, double t) const;
    /// spatial factors: dx order 0..4, transverse orders 2 and 4
    double dx(int order, double x, double y, double z, double t) const;
    double dyy(double x, double y, double z, double t) const;
    double dy4(double x, double y, double z, double t) const;
    double dzz(double x, double y, double z, double t) const;
    double dz4(double x, double y, double z, double t) const;

    /// Forcing that makes u solve u_t + Delta u_x + c u_x + u u_x + eps L u = f,
    /// and its exact time derivative.
    double forcing(double x, double y, double z, double t, double c, double eps) const;
    double forcing_t(double x, double y, double z, double t, double c, double eps) const;
};

enum class ForcingKind { zero, analytic, manufactured };

/// Forcing description.  Analytic presets are named closed forms; the
/// manufactured kind captures the solution and equation coefficients it was
/// derived for.  Both f and f_t are evaluable for all t.
struct ForcingSpec {
    ForcingKind kind = ForcingKind::zero;
    std::string name;        // analytic preset name
    double amplitude = 1.0;  // analytic preset scale
    std::shared_ptr<const ManufacturedSolution> ms;
    double c = 1.0;
    double epsilon = 0.0;
};

/// Coefficients of the evolution equation plus the forcing slot.
struct ModelParams {
    double c = 1.0;        // sound velocity, > 0
    double epsilon = 0.0;  // regularization, >= 0 (<= 1/4 in estimate mode)
    ForcingSpec forcing;
    bool nonlinearity = true;  // experiment knob: disable for linear runs

    void validate() const;
};

enum class ForcingDerivative { f, f_t };

/// Pointwise values of f or f_t on the grid at time t.
Field forcing_eval(const ForcingSpec& spec, const GridPtr& grid, double t,
                   ForcingDerivative which = ForcingDerivative::f);

/// ForcingSpec whose forcing_eval satisfies the manufactured-solution identity
/// for the given equation coefficients.
ForcingSpec manufactured_forcing(const std::shared_ptr<const ManufacturedSolution>& exact,
                                 const ModelParams& params);

/// Right-hand side of the evolution written as u_t = rhs:
///   rhs = f(t) - A u - N(u) - eps L u.
/// The epsilon term is applied last, so rhs at eps=0 equals rhs at eps>0 plus
/// eps * L u exactly.  Throws numerical_error if the result is not finite.
Field rhs(const Field& u, double t, const ModelParams& params);

/// Initial-data presets.
enum class InitialPreset { zero, poly_bump, two_bump, manufactured };
InitialPreset initial_preset_from_name(const std::string& name);

/// e^{sigma t} X(x) cos(kappa y) [cos(kappa z)] with X = x^3 (1-x)^2 and the
/// wavenumber chosen to satisfy the grid's transverse condition family.
std::shared_ptr<const ManufacturedSolution> ms_poly_cos(double amplitude, double sigma,
                                                        const GridSpec& spec);

/// Sample a manufactured solution at time t; tags the field zk_regularized.
Field ms_sample(const ManufacturedSolution& ms, const GridPtr& grid, double t);

/// Build initial data for a preset; fields satisfy all regularized boundary
/// conditions analytically and are tagged zk_regularized.
Field make_initial(InitialPreset preset, double amplitude, const GridPtr& grid,
                   std::shared_ptr<const ManufacturedSolution> ms = nullptr);

}  // namespace zk
