#include "zk/banded.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "zk/common.hpp"

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab,
             const int* ldab, int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const double* ab, const int* ldab, const int* ipiv, double* b, const int* ldb,
             int* info);
void dgesv_(const int* n, const int* nrhs, double* a, const int* lda, int* ipiv, double* b,
            const int* ldb, int* info);
}

namespace zk {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(std::size_t(ldab_) * n, 0.0),
      ipiv_(n, 0) {}

double& BandedMatrix::at(int i, int j) {
    // LAPACK band storage: AB(kl+ku+i-j, j) in 0-based indexing
    return ab_[std::size_t(j) * ldab_ + (kl_ + ku_ + i - j)];
}

double BandedMatrix::at(int i, int j) const {
    return ab_[std::size_t(j) * ldab_ + (kl_ + ku_ + i - j)];
}

void BandedMatrix::factor() {
    ab0_ = ab_;
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab_, ipiv_.data(), &info);
    if (info != 0)
        throw numerical_error("banded factorization failed: zero pivot at row " +
                              std::to_string(info - 1));
    factored_ = true;
}

void BandedMatrix::solve(std::vector<double>& b) const {
    if (!factored_) throw numerical_error("BandedMatrix::solve before factor");
    const char trans = 'N';
    const int nrhs = 1;
    int info = 0;
    dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv_.data(), b.data(), &n_,
            &info);
    if (info != 0) throw numerical_error("banded solve failed, info=" + std::to_string(info));
}

void BandedMatrix::matvec(const std::vector<double>& x, std::vector<double>& y) const {
    const std::vector<double>& a = factored_ ? ab0_ : ab_;
    y.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        const int ilo = std::max(0, j - ku_);
        const int ihi = std::min(n_ - 1, j + kl_);
        const double xj = x[j];
        for (int i = ilo; i <= ihi; ++i) y[i] += a[std::size_t(j) * ldab_ + (kl_ + ku_ + i - j)] * xj;
    }
}

double BandedMatrix::residual_inf(const std::vector<double>& x,
                                  const std::vector<double>& b) const {
    std::vector<double> ax;
    matvec(x, ax);
    double r = 0.0;
    for (int i = 0; i < n_; ++i) r = std::max(r, std::abs(b[i] - ax[i]));
    return r;
}

void BandedMatrix::solve_refined(std::vector<double>& b) const {
    std::vector<double> rhs = b;
    solve(b);
    std::vector<double> ax;
    matvec(b, ax);
    std::vector<double> r(n_);
    for (int i = 0; i < n_; ++i) r[i] = rhs[i] - ax[i];
    solve(r);
    for (int i = 0; i < n_; ++i) b[i] += r[i];
}

std::vector<double> invert_dense(int n, const std::vector<double>& a) {
    // Row-major input; LAPACK sees the transpose, and returns the transpose of
    // the inverse of the transpose, i.e. the row-major inverse.  No copies of
    // interpretation needed beyond the identity right-hand side.
    std::vector<double> lu = a;
    std::vector<double> inv(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv[std::size_t(i) * n + i] = 1.0;
    std::vector<int> ipiv(n);
    int info = 0;
    dgesv_(&n, &n, lu.data(), &n, ipiv.data(), inv.data(), &n, &info);
    if (info != 0) throw numerical_error("dense inversion failed, info=" + std::to_string(info));
    return inv;
}

}  // namespace zk
