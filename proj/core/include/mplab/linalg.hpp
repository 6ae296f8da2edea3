#pragma once

#include <vector>

#include "mplab/types.hpp"

namespace mplab::linalg {

// Y^* Y and Y Y^* with both triangles filled.
CMatrix gram(const CMatrix& Y);
CMatrix gram_outer(const CMatrix& Y);

// Ascending eigenvalues of a Hermitian matrix (upper triangle is read).
std::vector<double> hermitian_eigenvalues(CMatrix A);

// (A - theta I)^{-1} by LU; throws std::domain_error when singular.
CMatrix shifted_inverse(const CMatrix& A, cplx theta);

// max |(A - theta I) R - I|
double inverse_residual(const CMatrix& A, cplx theta, const CMatrix& R);

cplx matmul_trace(const CMatrix& A, const CMatrix& B);  // Tr(AB)

}  // namespace mplab::linalg
