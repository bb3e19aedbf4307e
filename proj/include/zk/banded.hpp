#pragma once

#include <vector>

namespace zk {

/// General banded matrix in LAPACK band storage with dgbtrf/dgbtrs behind it.
/// Keeps a copy of the unfactored band so residuals and one step of iterative
/// refinement are available after factorization.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    int n() const { return n_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }

    /// Entry (i, j); valid only for j-i in [-kl, ku].  Usable until factor().
    double& at(int i, int j);
    double at(int i, int j) const;

    /// LU-factorize in place (dgbtrf).  Throws numerical_error on singularity,
    /// naming the pivot index.
    void factor();
    bool factored() const { return factored_; }

    /// Solve A x = b with the factored matrix; b is overwritten with x.
    void solve(std::vector<double>& b) const;

    /// Solve with one step of iterative refinement in working precision.
    void solve_refined(std::vector<double>& b) const;

    /// y = A x using the retained unfactored band.
    void matvec(const std::vector<double>& x, std::vector<double>& y) const;

    /// max_i |b - A x|_i using the retained unfactored band.
    double residual_inf(const std::vector<double>& x, const std::vector<double>& b) const;

private:
    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;   // factored storage (column-major LAPACK band)
    std::vector<double> ab0_;  // unfactored copy for matvec/residual
    std::vector<int> ipiv_;
    bool factored_ = false;
};

/// Invert a dense row-major n x n matrix via LAPACK.  Throws on singularity.
std::vector<double> invert_dense(int n, const std::vector<double>& a);

}  // namespace zk
