#ifndef AMG_DENSE_HPP
#define AMG_DENSE_HPP

#include <utility>
#include <vector>

#include "amg/sparse.hpp"

namespace amg {

// Certificate computations are exact desk-scale eigencomputations; above this
// size they refuse rather than approximate.
inline constexpr int kDenseThreshold = 2000;

/// Row-major dense matrix.
struct DenseMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(int rows, int cols)
        : n_rows(rows), n_cols(cols),
          values(static_cast<std::size_t>(rows) * cols, 0.0) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n_cols + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n_cols + j]; }

    static DenseMatrix identity(int n);
    static DenseMatrix from_sparse(const SparseMatrix& A);

    DenseMatrix transpose() const;
    std::vector<double> apply(const std::vector<double>& x) const;
    double frobenius_norm() const;
};

// C = A * B, cache-friendly ikj loop.
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator+(const DenseMatrix& A, const DenseMatrix& B);

struct SymEigenResult {
    std::vector<double> eigenvalues;   // ascending
    DenseMatrix eigenvectors;          // orthonormal columns, same order
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Sweep order is fixed (upper triangle, row-major), so the result is
/// deterministic. Converged when off(A) <= 1e-14 * ||A||_F, at most 100 sweeps.
/// Pass with_vectors = false when only eigenvalues are needed (skips the
/// accumulation of the rotation product; `eigenvectors` stays empty).
SymEigenResult sym_eig_dense(const DenseMatrix& A, bool with_vectors = true);

/// Whitened restriction of an SPD pencil right-hand side: W spans the
/// orthogonal complement of `kernel` and satisfies W^T A W = I, so pencil
/// extremes of (M, A) on that complement are eigenvalue extremes of W^T M W.
struct DeflatedFactor {
    DenseMatrix W;      // n x m
    int m = 0;          // complement dimension
};

DeflatedFactor factor_deflated(const DenseMatrix& A,
                               const std::vector<std::vector<double>>& kernel);

std::pair<double, double> pencil_extremes(const DeflatedFactor& F, const DenseMatrix& M);

/// Extreme generalized eigenvalues of M v = lambda A v restricted to the
/// orthogonal complement of `kernel`. Errors if A restricted there is not SPD.
std::pair<double, double> gen_eig_extremes(const DenseMatrix& M, const DenseMatrix& A,
                                           const std::vector<std::vector<double>>& kernel);

/// Solves A x = (I - Q_N) b with x orthogonal to the kernel, where Q_N
/// projects onto span(kernel). Dense eigendecomposition below the threshold,
/// deflated conjugate gradients above it.
std::vector<double> pseudo_solve(const SparseMatrix& A, const std::vector<double>& b,
                                 const std::vector<std::vector<double>>& kernel);

// Dense variant used for small coarse operators.
std::vector<double> pseudo_solve_dense(const DenseMatrix& A, const std::vector<double>& b,
                                       const std::vector<std::vector<double>>& kernel);

// Dense pseudo-inverse (eigendecomposition, nonzero eigenvalues inverted).
DenseMatrix pseudo_inverse_dense(const DenseMatrix& A,
                                 const std::vector<std::vector<double>>& kernel);

// Orthonormalize a set of vectors (modified Gram-Schmidt, applied twice).
std::vector<std::vector<double>> orthonormalize(std::vector<std::vector<double>> vecs);

}  // namespace amg

#endif
