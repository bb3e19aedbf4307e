#include "zk/model.hpp"

#include <cmath>
#include <stdexcept>

#include "zk/common.hpp"
#include "zk/operators.hpp"

namespace zk {

double ManufacturedSolution::xpoly(double x, int deriv) const {
    // deriv-th derivative of sum_k c_k x^k
    double s = 0.0;
    for (std::size_t k = xcoeff.size(); k-- > 0;) {
        const int ki = static_cast<int>(k);
        if (ki < deriv) continue;
        double fac = 1.0;
        for (int j = 0; j < deriv; ++j) fac *= (ki - j);
        s += fac * xcoeff[k] * std::pow(x, ki - deriv);
    }
    return s;
}

double ManufacturedSolution::trig(double kappa, double y, int deriv) const {
    // d^k/dy^k cos(kappa y) = kappa^k cos(kappa y + k pi/2)
    const double phase = kappa * y + deriv * (3.14159265358979323846 / 2.0);
    return std::pow(kappa, deriv) * std::cos(phase);
}

namespace {
struct Factors {
    double X[5];   // X, X', .., X''''
    double Ty[5];  // Ty and derivatives
    double Tz[5];
};
}  // namespace

static Factors eval_factors(const ManufacturedSolution& ms, double x, double y, double z) {
    Factors f{};
    for (int k = 0; k <= 4; ++k) f.X[k] = ms.xpoly(x, k);
    for (int k = 0; k <= 4; ++k) f.Ty[k] = ms.trig(ms.kappa_y, y, k);
    if (ms.d == 2)
        for (int k = 0; k <= 4; ++k) f.Tz[k] = ms.trig(ms.kappa_z, z, k);
    else {
        f.Tz[0] = 1.0;
        for (int k = 1; k <= 4; ++k) f.Tz[k] = 0.0;
    }
    return f;
}

double ManufacturedSolution::value(double x, double y, double z, double t) const {
    return amplitude * std::exp(sigma * t) * xpoly(x, 0) * trig(kappa_y, y, 0) *
           (d == 2 ? trig(kappa_z, z, 0) : 1.0);
}

double ManufacturedSolution::time_derivative(double x, double y, double z, double t) const {
    return sigma * value(x, y, z, t);
}

double ManufacturedSolution::dx(int order, double x, double y, double z, double t) const {
    return amplitude * std::exp(sigma * t) * xpoly(x, order) * trig(kappa_y, y, 0) *
           (d == 2 ? trig(kappa_z, z, 0) : 1.0);
}

double ManufacturedSolution::dyy(double x, double y, double z, double t) const {
    return amplitude * std::exp(sigma * t) * xpoly(x, 0) * trig(kappa_y, y, 2) *
           (d == 2 ? trig(kappa_z, z, 0) : 1.0);
}

double ManufacturedSolution::dy4(double x, double y, double z, double t) const {
    return amplitude * std::exp(sigma * t) * xpoly(x, 0) * trig(kappa_y, y, 4) *
           (d == 2 ? trig(kappa_z, z, 0) : 1.0);
}

double ManufacturedSolution::dzz(double x, double y, double z, double t) const {
    if (d != 2) return 0.0;
    return amplitude * std::exp(sigma * t) * xpoly(x, 0) * trig(kappa_y, y, 0) *
           trig(kappa_z, z, 2);
}

double ManufacturedSolution::dz4(double x, double y, double z, double t) const {
    if (d != 2) return 0.0;
    return amplitude * std::exp(sigma * t) * xpoly(x, 0) * trig(kappa_y, y, 0) *
           trig(kappa_z, z, 4);
}

namespace {

// f = linear(x,..) e^{sigma t} + quad(x,..) e^{2 sigma t}
double ms_linear_part(const ManufacturedSolution& ms, const Factors& f, double c, double eps) {
    const double TT = f.Ty[0] * f.Tz[0];
    double lin = ms.sigma * f.X[0] * TT;                    // u_t
    lin += f.X[3] * TT;                                     // u_xxx
    lin += f.X[1] * (f.Ty[2] * f.Tz[0] + f.Ty[0] * f.Tz[2]);  // Dperp u_x
    lin += c * f.X[1] * TT;                                 // c u_x
    if (eps > 0.0)
        lin += eps * (f.X[4] * TT + f.X[0] * (f.Ty[4] * f.Tz[0] + f.Ty[0] * f.Tz[4]));
    return ms.amplitude * lin;
}

double ms_quad_part(const ManufacturedSolution& ms, const Factors& f) {
    const double TT = f.Ty[0] * f.Tz[0];
    return ms.amplitude * ms.amplitude * f.X[0] * f.X[1] * TT * TT;
}

}  // namespace

double ManufacturedSolution::forcing(double x, double y, double z, double t, double c,
                                     double eps) const {
    const Factors f = eval_factors(*this, x, y, z);
    return ms_linear_part(*this, f, c, eps) * std::exp(sigma * t) +
           ms_quad_part(*this, f) * std::exp(2.0 * sigma * t);
}

double ManufacturedSolution::forcing_t(double x, double y, double z, double t, double c,
                                       double eps) const {
    const Factors f = eval_factors(*this, x, y, z);
    return sigma * ms_linear_part(*this, f, c, eps) * std::exp(sigma * t) +
           2.0 * sigma * ms_quad_part(*this, f) * std::exp(2.0 * sigma * t);
}

void ModelParams::validate() const {
    if (!(c > 0.0)) throw config_error("model requires c > 0");
    if (!(epsilon >= 0.0)) throw config_error("model requires epsilon >= 0");
}

Field forcing_eval(const ForcingSpec& spec, const GridPtr& grid, double t,
                   ForcingDerivative which) {
    const bool want_t = (which == ForcingDerivative::f_t);
    switch (spec.kind) {
        case ForcingKind::zero: {
            Field f(grid);
            return f;
        }
        case ForcingKind::analytic: {
            if (spec.name == "decay-bump") {
                const double kap = grid->spec.transverse_bc == TransverseBc::dirichlet ? 1.0 : 2.0;
                const double amp = spec.amplitude;
                const int d = grid->spec.d;
                auto base = [=](double x, double y, double z) {
                    return amp * x * (1.0 - x) * std::cos(kap * y) *
                           (d == 2 ? std::cos(kap * z) : 1.0);
                };
                Field f = sample(grid, [&](double x, double y, double z) {
                    const double v = std::exp(-t) * base(x, y, z);
                    return want_t ? -v : v;
                });
                f.bc_tag = BcTag::unconstrained;
                return f;
            }
            throw std::invalid_argument("unknown analytic forcing preset: " + spec.name);
        }
        case ForcingKind::manufactured: {
            if (!spec.ms) throw std::invalid_argument("manufactured forcing without a solution");
            if (spec.ms->d != grid->spec.d)
                throw std::invalid_argument("manufactured forcing dimension mismatch with grid");
            const ManufacturedSolution& ms = *spec.ms;
            return sample(grid, [&](double x, double y, double z) {
                return want_t ? ms.forcing_t(x, y, z, t, spec.c, spec.epsilon)
                              : ms.forcing(x, y, z, t, spec.c, spec.epsilon);
            });
        }
    }
    throw std::logic_error("unreachable forcing kind");
}

ForcingSpec manufactured_forcing(const std::shared_ptr<const ManufacturedSolution>& exact,
                                 const ModelParams& params) {
    ForcingSpec spec;
    spec.kind = ForcingKind::manufactured;
    spec.ms = exact;
    spec.c = params.c;
    spec.epsilon = params.epsilon;
    return spec;
}

Field rhs(const Field& u, double t, const ModelParams& params) {
    Field out = forcing_eval(params.forcing, u.grid, t, ForcingDerivative::f);
    Field a = op_A(u, params.c);
    axpy(-1.0, a, out);
    if (params.nonlinearity) {
        Field n = nonlinear_split(u);
        axpy(-1.0, n, out);
    }
    if (params.epsilon > 0.0) {
        Field l = op_L(u);
        axpy(-params.epsilon, l, out);
    }
    if (!out.finite())
        throw numerical_error("rhs produced non-finite values; see run fault snapshot");
    return out;
}

InitialPreset initial_preset_from_name(const std::string& name) {
    if (name == "zero") return InitialPreset::zero;
    if (name == "poly-bump") return InitialPreset::poly_bump;
    if (name == "two-bump") return InitialPreset::two_bump;
    if (name == "manufactured") return InitialPreset::manufactured;
    throw config_error("unknown initial-data preset: " + name);
}

std::shared_ptr<const ManufacturedSolution> ms_poly_cos(double amplitude, double sigma,
                                                        const GridSpec& spec) {
    auto ms = std::make_shared<ManufacturedSolution>();
    ms->amplitude = amplitude;
    ms->sigma = sigma;
    ms->d = spec.d;
    ms->xcoeff = {0.0, 0.0, 0.0, 1.0, -2.0, 1.0};  // x^3 (1-x)^2
    const double kap = spec.transverse_bc == TransverseBc::dirichlet ? 1.0 : 2.0;
    ms->kappa_y = kap;
    ms->kappa_z = kap;
    return ms;
}

Field ms_sample(const ManufacturedSolution& ms, const GridPtr& grid, double t) {
    Field f = sample(grid, [&](double x, double y, double z) { return ms.value(x, y, z, t); });
    f.bc_tag = BcTag::zk_regularized;
    return f;
}

Field make_initial(InitialPreset preset, double amplitude, const GridPtr& grid,
                   std::shared_ptr<const ManufacturedSolution> ms) {
    switch (preset) {
        case InitialPreset::zero: {
            Field f(grid, BcTag::zk_regularized);
            return f;
        }
        case InitialPreset::poly_bump: {
            auto m = ms_poly_cos(amplitude, -1.0, grid->spec);
            return ms_sample(*m, grid, 0.0);
        }
        case InitialPreset::two_bump: {
            ManufacturedSolution m = *ms_poly_cos(amplitude, -1.0, grid->spec);
            // x^3 (1-x)^2 (x - 1/2): sign change at x = 1/2 gives two lobes
            m.xcoeff = {0.0, 0.0, 0.0, -0.5, 2.0, -2.5, 1.0};
            return ms_sample(m, grid, 0.0);
        }
        case InitialPreset::manufactured: {
            if (!ms) throw std::invalid_argument("manufactured initial data without a solution");
            return ms_sample(*ms, grid, 0.0);
        }
    }
    throw std::logic_error("unreachable initial preset");
}

}  // namespace zk
