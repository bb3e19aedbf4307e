#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace zk {

enum class TransverseBc { dirichlet, periodic };

/// Discrete description of the fixed domain (0,1)_x x (-pi/2, pi/2)^d.
/// Extents are not configurable; only resolution and the transverse
/// boundary-condition family are.
struct GridSpec {
    int d = 1;      // transverse dimension count, 1 or 2
    int nx = 64;    // x cells (nodes 0..nx)
    int ny = 16;    // transverse modes/points in y
    int nz = 0;     // transverse modes/points in z (ignored when d == 1)
    TransverseBc transverse_bc = TransverseBc::dirichlet;
};

/// Spectral basis for one transverse direction on (-pi/2, pi/2).
///
/// Dirichlet: phi_m(y) = sin(m (y + pi/2)), m = 1..n, collocated at the n
/// midpoints of a uniform grid.  Every basis function and its second
/// derivative vanish at the walls, so the wall conditions hold identically.
/// Periodic: trigonometric basis with integer wavenumbers 2k (period pi).
///
/// Quadrature weight is pi/n at every point: the discrete inner product is
/// exact for products of basis functions below the top mode, and the sampled
/// constant integrates to exactly pi.
struct Basis {
    TransverseBc kind = TransverseBc::dirichlet;
    int n = 0;
    std::vector<double> points;   // collocation points in (-pi/2, pi/2)
    std::vector<double> weights;  // quadrature weights (uniform pi/n)
    std::vector<double> kappa;    // per-mode |wavenumber|
    // n x n row-major matrices
    std::vector<double> synth;     // modes -> point values
    std::vector<double> analysis;  // point values -> modes
    std::vector<double> d1, d2, d3, d4;  // point-space derivative operators

    /// kappa^2 per mode (d2 eigenvalue is -kappa2, d4 eigenvalue +kappa2^2).
    std::vector<double> kappa2() const {
        std::vector<double> k2(kappa.size());
        for (std::size_t i = 0; i < kappa.size(); ++i) k2[i] = kappa[i] * kappa[i];
        return k2;
    }
};

struct Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Immutable discrete grid: uniform x nodes plus transverse spectral bases.
struct Grid {
    GridSpec spec;
    double hx = 0.0;
    std::vector<double> x;   // nx+1 nodes, x[0]=0, x[nx]=1
    std::vector<double> wx;  // trapezoidal x-weights
    Basis by;
    Basis bz;  // empty when d == 1

    int nxp() const { return spec.nx + 1; }
    int nt() const { return spec.d == 2 ? spec.ny * spec.nz : spec.ny; }
    int nzeff() const { return spec.d == 2 ? spec.nz : 1; }
    /// transverse quadrature weight of flattened index t = jy*nzeff + jz
    double wt(int t) const {
        return spec.d == 2 ? by.weights[t / spec.nz] * bz.weights[t % spec.nz] : by.weights[t];
    }
    double ypoint(int t) const { return by.points[spec.d == 2 ? t / spec.nz : t]; }
    double zpoint(int t) const { return spec.d == 2 ? bz.points[t % spec.nz] : 0.0; }
};

/// Which x-boundary conditions a field is meant to satisfy.  Metadata only;
/// enforcement lives in the operators and the stepper.
enum class BcTag { unconstrained, zk_limit, zk_regularized };

/// Real-valued grid function, stored x-major: values[i*nt + t].
struct Field {
    GridPtr grid;
    BcTag bc_tag = BcTag::unconstrained;
    std::vector<double> values;

    Field() = default;
    explicit Field(GridPtr g, BcTag tag = BcTag::unconstrained)
        : grid(std::move(g)), bc_tag(tag), values(std::size_t(grid->nxp()) * grid->nt(), 0.0) {}

    double& at(int i, int t) { return values[std::size_t(i) * grid->nt() + t]; }
    double at(int i, int t) const { return values[std::size_t(i) * grid->nt() + t]; }
    bool finite() const;
    double max_abs() const;
};

/// Build a grid.  Rejects nx < 8 or ny < 4 (nz < 4 when d = 2) as too coarse,
/// and odd transverse counts for the periodic basis.
GridPtr make_grid(const GridSpec& spec);

/// Sample a pointwise function fn(x, y, z) at grid representation points
/// (z passed as 0 when d = 1).  Errors on non-finite sample values, naming
/// the offending point.
Field sample(const GridPtr& grid, const std::function<double(double, double, double)>& fn);

// small field arithmetic helpers
Field zeros_like(const Field& f);
void axpy(double a, const Field& x, Field& y);           // y += a*x
Field lincomb(double a, const Field& x, double b, const Field& y);
void scale(Field& f, double a);

}  // namespace zk
