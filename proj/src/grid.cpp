#include "zk/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "zk/banded.hpp"
#include "zk/common.hpp"

namespace zk {

namespace {

constexpr double kPi = 3.14159265358979323846;

Basis make_dirichlet_basis(int n) {
    Basis b;
    b.kind = TransverseBc::dirichlet;
    b.n = n;
    b.points.resize(n);
    b.weights.assign(n, kPi / n);
    b.kappa.resize(n);
    // theta_j = (j+1/2) pi / n on (0, pi); y = theta - pi/2
    std::vector<double> theta(n);
    for (int j = 0; j < n; ++j) {
        theta[j] = (j + 0.5) * kPi / n;
        b.points[j] = theta[j] - kPi / 2.0;
    }
    for (int m = 0; m < n; ++m) b.kappa[m] = m + 1.0;

    b.synth.resize(std::size_t(n) * n);
    std::vector<double> cosm(std::size_t(n) * n);
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) {
            b.synth[std::size_t(j) * n + m] = std::sin(b.kappa[m] * theta[j]);
            cosm[std::size_t(j) * n + m] = std::cos(b.kappa[m] * theta[j]);
        }
    b.analysis = invert_dense(n, b.synth);

    auto diag_product = [&](const std::vector<double>& left, const std::vector<double>& diag) {
        // left * diag(diag) * analysis, all n x n row-major
        std::vector<double> out(std::size_t(n) * n, 0.0);
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m) {
                const double lm = left[std::size_t(j) * n + m] * diag[m];
                if (lm == 0.0) continue;
                for (int k = 0; k < n; ++k)
                    out[std::size_t(j) * n + k] += lm * b.analysis[std::size_t(m) * n + k];
            }
        return out;
    };

    std::vector<double> lam1(n), lam2(n), lam3(n), lam4(n);
    for (int m = 0; m < n; ++m) {
        const double k = b.kappa[m];
        lam1[m] = k;
        lam2[m] = -k * k;
        lam3[m] = -k * k * k;
        lam4[m] = k * k * k * k;
    }
    b.d1 = diag_product(cosm, lam1);
    b.d2 = diag_product(b.synth, lam2);
    b.d3 = diag_product(cosm, lam3);
    b.d4 = diag_product(b.synth, lam4);
    return b;
}

Basis make_periodic_basis(int n) {
    if (n % 2 != 0)
        throw std::invalid_argument("periodic transverse basis requires an even point count");
    Basis b;
    b.kind = TransverseBc::periodic;
    b.n = n;
    b.points.resize(n);
    b.weights.assign(n, kPi / n);
    for (int j = 0; j < n; ++j) b.points[j] = -kPi / 2.0 + j * kPi / n;

    // mode layout: [1, cos(2y), sin(2y), cos(4y), sin(4y), ..., cos(n y)]
    b.kappa.assign(n, 0.0);
    b.synth.assign(std::size_t(n) * n, 0.0);
    std::vector<double> dsynth(std::size_t(n) * n, 0.0);  // first derivative of each mode
    for (int j = 0; j < n; ++j) {
        const double y = b.points[j];
        int m = 0;
        b.synth[std::size_t(j) * n + m] = 1.0;
        ++m;
        for (int k = 1; k <= n / 2; ++k) {
            const double kap = 2.0 * k;
            b.synth[std::size_t(j) * n + m] = std::cos(kap * y);
            dsynth[std::size_t(j) * n + m] = -kap * std::sin(kap * y);
            b.kappa[m] = kap;
            ++m;
            if (k < n / 2) {
                b.synth[std::size_t(j) * n + m] = std::sin(kap * y);
                dsynth[std::size_t(j) * n + m] = kap * std::cos(kap * y);
                b.kappa[m] = kap;
                ++m;
            }
        }
    }
    // derivative of the unpaired top cosine mode is not representable; the
    // standard convention drops it (see dsynth: it is set, but its projection
    // is handled through the analysis matrix like every other column).
    b.analysis = invert_dense(n, b.synth);

    auto product = [&](const std::vector<double>& left) {
        std::vector<double> out(std::size_t(n) * n, 0.0);
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m) {
                const double lm = left[std::size_t(j) * n + m];
                if (lm == 0.0) continue;
                for (int k = 0; k < n; ++k)
                    out[std::size_t(j) * n + k] += lm * b.analysis[std::size_t(m) * n + k];
            }
        return out;
    };
    auto scale_cols = [&](const std::vector<double>& mat, auto f) {
        std::vector<double> out = mat;
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m) out[std::size_t(j) * n + m] *= f(m);
        return out;
    };

    // Nyquist first derivative: set to zero (its sine partner is absent)
    std::vector<double> d1cols = dsynth;
    for (int j = 0; j < n; ++j) d1cols[std::size_t(j) * n + (n - 1)] = 0.0;

    b.d1 = product(d1cols);
    b.d2 = product(scale_cols(b.synth, [&](int m) { return -b.kappa[m] * b.kappa[m]; }));
    b.d3 = product(scale_cols(d1cols, [&](int m) { return -b.kappa[m] * b.kappa[m]; }));
    b.d4 = product(scale_cols(b.synth, [&](int m) {
        const double k2 = b.kappa[m] * b.kappa[m];
        return k2 * k2;
    }));
    return b;
}

}  // namespace

GridPtr make_grid(const GridSpec& spec) {
    if (spec.d != 1 && spec.d != 2)
        throw std::invalid_argument("make_grid: d must be 1 or 2");
    if (spec.nx < 8) throw std::invalid_argument("make_grid: grid too coarse (nx < 8)");
    if (spec.ny < 4) throw std::invalid_argument("make_grid: grid too coarse (ny < 4)");
    if (spec.d == 2 && spec.nz < 4)
        throw std::invalid_argument("make_grid: grid too coarse (nz < 4)");

    auto g = std::make_shared<Grid>();
    g->spec = spec;
    g->hx = 1.0 / spec.nx;
    g->x.resize(spec.nx + 1);
    for (int i = 0; i <= spec.nx; ++i) g->x[i] = i * g->hx;
    g->x[spec.nx] = 1.0;
    g->wx.assign(spec.nx + 1, g->hx);
    g->wx[0] = g->wx[spec.nx] = 0.5 * g->hx;

    g->by = spec.transverse_bc == TransverseBc::dirichlet ? make_dirichlet_basis(spec.ny)
                                                          : make_periodic_basis(spec.ny);
    if (spec.d == 2)
        g->bz = spec.transverse_bc == TransverseBc::dirichlet ? make_dirichlet_basis(spec.nz)
                                                              : make_periodic_basis(spec.nz);
    return g;
}

bool Field::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

Field sample(const GridPtr& grid, const std::function<double(double, double, double)>& fn) {
    Field f(grid);
    const int nt = grid->nt();
    for (int i = 0; i < grid->nxp(); ++i) {
        for (int t = 0; t < nt; ++t) {
            const double v = fn(grid->x[i], grid->ypoint(t), grid->zpoint(t));
            if (!std::isfinite(v))
                throw numerical_error("sample: non-finite value at (x=" +
                                      std::to_string(grid->x[i]) + ", y=" +
                                      std::to_string(grid->ypoint(t)) + ", z=" +
                                      std::to_string(grid->zpoint(t)) + ")");
            f.at(i, t) = v;
        }
    }
    return f;
}

Field zeros_like(const Field& f) {
    Field z(f.grid, f.bc_tag);
    return z;
}

void axpy(double a, const Field& x, Field& y) {
    for (std::size_t k = 0; k < y.values.size(); ++k) y.values[k] += a * x.values[k];
}

Field lincomb(double a, const Field& x, double b, const Field& y) {
    Field out = zeros_like(x);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = a * x.values[k] + b * y.values[k];
    return out;
}

void scale(Field& f, double a) {
    for (double& v : f.values) v *= a;
}

}  // namespace zk
