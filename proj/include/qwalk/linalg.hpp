#pragma once

#include <Eigen/Dense>
#include <utility>

namespace qwalk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest singular value.
double operator_norm(const Matrix& a);

/// Largest absolute entry.
double sup_entry(const Matrix& a);

/// Smallest eigenvalue of a symmetric matrix.
double min_symmetric_eigenvalue(const Matrix& a);

/// Spectral split of a symmetric matrix into positive and negative parts,
/// x = first - second with both summands PSD.
std::pair<Matrix, Matrix> split_positive_negative(const Matrix& sym);

/// Kronecker product, row-major block layout (index (a,b) -> a*cols(b-space)+b).
Matrix kron(const Matrix& a, const Matrix& b);

bool is_symmetric(const Matrix& a, double tol = 1e-12);

}  // namespace qwalk
