#ifndef AMG_SPARSE_HPP
#define AMG_SPARSE_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace amg {

/// Compressed sparse row matrix. Column indices are sorted ascending within
/// each row and hold no duplicates. Matrices flagged `symmetric` store both
/// triangles and satisfy value(i,j) == value(j,i) exactly.
struct SparseMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> row_offsets;   // size n_rows + 1
    std::vector<int> col_indices;
    std::vector<double> values;
    bool symmetric = false;

    SparseMatrix() : row_offsets(1, 0) {}
    SparseMatrix(int rows, int cols)
        : n_rows(rows), n_cols(cols), row_offsets(rows + 1, 0) {}

    int nnz() const { return static_cast<int>(col_indices.size()); }

    // Value at (i,j); zero if the entry is not stored.
    double at(int i, int j) const;

    std::vector<double> diagonal() const;

    SparseMatrix transpose() const;

    // Exact entrywise check of value(i,j) == value(j,i).
    bool is_value_symmetric() const;

    // Row-structure sanity: sorted columns, no duplicates, offsets contiguous.
    void validate() const;
};

struct Triplet {
    int row;
    int col;
    double value;
};

// Builds CSR from triplets; duplicates are summed in insertion order.
SparseMatrix sparse_from_triplets(int rows, int cols, std::vector<Triplet> entries,
                                  bool symmetric_flag = false);

SparseMatrix sparse_identity(int n);

// Dense row-major (n_rows x n_cols) to CSR, exact zeros dropped.
SparseMatrix sparse_from_dense_rows(int rows, int cols, const std::vector<double>& a,
                                    bool symmetric_flag = false);

/// y_i = sum_j A_ij x_j with left-to-right accumulation within each row.
std::vector<double> spmv(const SparseMatrix& A, const std::vector<double>& x);

struct TripleProductStats {
    int dropped = 0;   // entries removed by the relative drop tolerance
};

/// Galerkin product P^T A P for symmetric A. Entries below
/// 1e-14 * max|entry| are dropped and counted in `stats`.
SparseMatrix triple_product(const SparseMatrix& P, const SparseMatrix& A,
                            TripleProductStats* stats = nullptr);

// Matrix Market coordinate format, 1-based indices. The "symmetric"
// qualifier stores the lower triangle only. Values are printed with 17
// significant digits so binary64 round-trips are exact.
SparseMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const SparseMatrix& A, const std::string& path);

// Small vector helpers shared across the library.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);

}  // namespace amg

#endif
