#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ctrlgauge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

constexpr double kRankTolerance = 1e-9;

bool all_finite(const Matrix& m);

// Rank via column-pivoted Householder QR; `tol` is relative to the largest pivot.
int numeric_rank(const Matrix& m, double tol = kRankTolerance);

// Orthonormal basis (columns) of the column span of `m`.
Matrix orthonormal_span(const Matrix& m, double tol = kRankTolerance);

// Orthonormal basis of the orthogonal complement of the column span of `m`
// inside R^{m.rows()}.
Matrix orthogonal_complement(const Matrix& m, double tol = kRankTolerance);

// Largest |entry|, 0 for empty matrices.
double max_abs(const Matrix& m);

// Calls `fn` with every k-subset of {0..n-1} in lexicographic order.
// Iteration stops early when `fn` returns false.
void for_each_combination(int n, int k, const std::function<bool(std::span<const int>)>& fn);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Vector jacobi_eigenvalues(const Matrix& sym, double tol = 1e-10, int max_sweeps = 100);

} // namespace linalg
} // namespace ctrlgauge
