#include "mplab/linalg.hpp"

#include <complex>
#include <mutex>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <cblas.h>
#include <lapacke.h>

namespace mplab::linalg {

namespace {

void pin_blas_threads() {
    static std::once_flag once;
    std::call_once(once, [] { openblas_set_num_threads(1); });
}

}  // namespace

CMatrix gram(const CMatrix& Y) {
    pin_blas_threads();
    const int n = static_cast<int>(Y.cols());
    const int k = static_cast<int>(Y.rows());
    CMatrix C(n, n);
    if (n == 0) return C;
    if (k == 0) return CMatrix::Zero(n, n);
    cblas_zherk(CblasColMajor, CblasUpper, CblasConjTrans, n, k, 1.0, Y.data(), k, 0.0,
                C.data(), n);
    return C.selfadjointView<Eigen::Upper>();
}

CMatrix gram_outer(const CMatrix& Y) {
    pin_blas_threads();
    const int n = static_cast<int>(Y.rows());
    const int k = static_cast<int>(Y.cols());
    CMatrix C(n, n);
    if (n == 0) return C;
    if (k == 0) return CMatrix::Zero(n, n);
    cblas_zherk(CblasColMajor, CblasUpper, CblasNoTrans, n, k, 1.0, Y.data(), n, 0.0,
                C.data(), n);
    return C.selfadjointView<Eigen::Upper>();
}

std::vector<double> hermitian_eigenvalues(CMatrix A) {
    pin_blas_threads();
    const int n = static_cast<int>(A.rows());
    std::vector<double> w(n);
    if (n == 0) return w;
    int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, A.data(), n, w.data());
    if (info != 0) {
        throw std::runtime_error("zheevd failed with info = " + std::to_string(info));
    }
    return w;
}

CMatrix shifted_inverse(const CMatrix& A, cplx theta) {
    pin_blas_threads();
    const int n = static_cast<int>(A.rows());
    CMatrix M = A;
    M.diagonal().array() -= theta;
    if (n == 0) return M;
    std::vector<int> ipiv(n);
    int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, M.data(), n, ipiv.data());
    if (info > 0) {
        throw std::domain_error("resolvent is singular at this spectral parameter");
    }
    if (info == 0) {
        info = LAPACKE_zgetri(LAPACK_COL_MAJOR, n, M.data(), n, ipiv.data());
    }
    if (info != 0) {
        throw std::runtime_error("LU inverse failed with info = " + std::to_string(info));
    }
    return M;
}

double inverse_residual(const CMatrix& A, cplx theta, const CMatrix& R) {
    if (A.size() == 0) return 0.0;
    CMatrix P = A * R;
    P -= theta * R;
    P.diagonal().array() -= 1.0;
    return P.cwiseAbs().maxCoeff();
}

cplx matmul_trace(const CMatrix& A, const CMatrix& B) {
    return (A.array() * B.transpose().array()).sum();
}

}  // namespace mplab::linalg
