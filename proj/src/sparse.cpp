#include "amg/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace amg {

double SparseMatrix::at(int i, int j) const {
    auto begin = col_indices.begin() + row_offsets[i];
    auto end = col_indices.begin() + row_offsets[i + 1];
    auto it = std::lower_bound(begin, end, j);
    if (it != end && *it == j) return values[it - col_indices.begin()];
    return 0.0;
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(n_rows, 0.0);
    for (int i = 0; i < n_rows; ++i) d[i] = at(i, i);
    return d;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix T(n_cols, n_rows);
    T.symmetric = symmetric;
    std::vector<int> count(n_cols, 0);
    for (int c : col_indices) ++count[c];
    T.row_offsets.assign(n_cols + 1, 0);
    for (int i = 0; i < n_cols; ++i) T.row_offsets[i + 1] = T.row_offsets[i] + count[i];
    T.col_indices.resize(col_indices.size());
    T.values.resize(values.size());
    std::vector<int> cursor(T.row_offsets.begin(), T.row_offsets.end() - 1);
    for (int i = 0; i < n_rows; ++i) {
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
            int pos = cursor[col_indices[k]]++;
            T.col_indices[pos] = i;
            T.values[pos] = values[k];
        }
    }
    return T;
}

bool SparseMatrix::is_value_symmetric() const {
    if (n_rows != n_cols) return false;
    for (int i = 0; i < n_rows; ++i) {
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
            if (values[k] != at(col_indices[k], i)) return false;
        }
    }
    return true;
}

void SparseMatrix::validate() const {
    if (static_cast<int>(row_offsets.size()) != n_rows + 1)
        throw std::runtime_error("SparseMatrix: row_offsets size mismatch");
    if (row_offsets.front() != 0 || row_offsets.back() != nnz())
        throw std::runtime_error("SparseMatrix: row_offsets not contiguous");
    for (int i = 0; i < n_rows; ++i) {
        if (row_offsets[i] > row_offsets[i + 1])
            throw std::runtime_error("SparseMatrix: decreasing row offset");
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
            if (col_indices[k] < 0 || col_indices[k] >= n_cols)
                throw std::runtime_error("SparseMatrix: column index out of range");
            if (k > row_offsets[i] && col_indices[k] <= col_indices[k - 1])
                throw std::runtime_error("SparseMatrix: columns not strictly ascending");
        }
    }
}

SparseMatrix sparse_from_triplets(int rows, int cols, std::vector<Triplet> entries,
                                  bool symmetric_flag) {
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix A(rows, cols);
    A.symmetric = symmetric_flag;
    for (std::size_t k = 0; k < entries.size();) {
        const int r = entries[k].row, c = entries[k].col;
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::runtime_error("sparse_from_triplets: index out of range");
        double v = 0.0;
        while (k < entries.size() && entries[k].row == r && entries[k].col == c)
            v += entries[k++].value;
        A.col_indices.push_back(c);
        A.values.push_back(v);
        A.row_offsets[r + 1] = static_cast<int>(A.col_indices.size());
    }
    for (int i = 0; i < rows; ++i)
        A.row_offsets[i + 1] = std::max(A.row_offsets[i + 1], A.row_offsets[i]);
    return A;
}

SparseMatrix sparse_identity(int n) {
    SparseMatrix A(n, n);
    A.symmetric = true;
    A.col_indices.resize(n);
    A.values.assign(n, 1.0);
    std::iota(A.col_indices.begin(), A.col_indices.end(), 0);
    std::iota(A.row_offsets.begin(), A.row_offsets.end(), 0);
    return A;
}

SparseMatrix sparse_from_dense_rows(int rows, int cols, const std::vector<double>& a,
                                    bool symmetric_flag) {
    std::vector<Triplet> t;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (a[static_cast<std::size_t>(i) * cols + j] != 0.0)
                t.push_back({i, j, a[static_cast<std::size_t>(i) * cols + j]});
    return sparse_from_triplets(rows, cols, std::move(t), symmetric_flag);
}

std::vector<double> spmv(const SparseMatrix& A, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != A.n_cols)
        throw std::runtime_error("spmv: dimension mismatch");
    std::vector<double> y(A.n_rows, 0.0);
    for (int i = 0; i < A.n_rows; ++i) {
        double s = 0.0;
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            s += A.values[k] * x[A.col_indices[k]];
        y[i] = s;
    }
    return y;
}

SparseMatrix triple_product(const SparseMatrix& P, const SparseMatrix& A,
                            TripleProductStats* stats) {
    if (A.n_rows != A.n_cols || P.n_rows != A.n_cols)
        throw std::runtime_error("triple_product: dimension mismatch");
    const int J = P.n_cols;
    const SparseMatrix Pt = P.transpose();

    // Row-by-row: row j of P^T A P via sparse accumulation.
    std::vector<double> acc(J, 0.0);
    std::vector<int> marker(J, -1);
    std::vector<Triplet> out;
    for (int j = 0; j < J; ++j) {
        std::vector<int> cols_touched;
        for (int kp = Pt.row_offsets[j]; kp < Pt.row_offsets[j + 1]; ++kp) {
            const int i = Pt.col_indices[kp];
            const double pij = Pt.values[kp];
            for (int ka = A.row_offsets[i]; ka < A.row_offsets[i + 1]; ++ka) {
                const int m = A.col_indices[ka];
                const double w = pij * A.values[ka];
                for (int km = P.row_offsets[m]; km < P.row_offsets[m + 1]; ++km) {
                    const int c = P.col_indices[km];
                    if (marker[c] != j) {
                        marker[c] = j;
                        acc[c] = 0.0;
                        cols_touched.push_back(c);
                    }
                    acc[c] += w * P.values[km];
                }
            }
        }
        std::sort(cols_touched.begin(), cols_touched.end());
        for (int c : cols_touched) out.push_back({j, c, acc[c]});
    }

    double max_abs = 0.0;
    for (const Triplet& t : out) max_abs = std::max(max_abs, std::abs(t.value));
    const double drop = 1e-14 * max_abs;
    std::vector<Triplet> kept;
    int dropped = 0;
    for (const Triplet& t : out) {
        if (std::abs(t.value) <= drop) {
            ++dropped;
        } else {
            kept.push_back(t);
        }
    }
    if (stats) stats->dropped = dropped;

    SparseMatrix Ac = sparse_from_triplets(J, J, std::move(kept), true);
    // Symmetrize exactly: average with the transpose so the symmetric flag holds.
    const SparseMatrix AcT = Ac.transpose();
    std::vector<Triplet> sym;
    for (int i = 0; i < J; ++i)
        for (int k = Ac.row_offsets[i]; k < Ac.row_offsets[i + 1]; ++k)
            sym.push_back({i, Ac.col_indices[k],
                           0.5 * (Ac.values[k] + AcT.at(i, Ac.col_indices[k]))});
    return sparse_from_triplets(J, J, std::move(sym), true);
}

namespace {

[[noreturn]] void mm_fail(const std::string& path, int line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) mm_fail(path, 1, "missing header");
    ++lineno;
    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate" ||
        field != "real")
        mm_fail(path, lineno, "malformed header (expected '%%MatrixMarket matrix coordinate real ...')");
    bool sym;
    if (symmetry == "symmetric")
        sym = true;
    else if (symmetry == "general")
        sym = false;
    else
        mm_fail(path, lineno, "unsupported symmetry qualifier '" + symmetry + "'");

    int rows = -1, cols = -1;
    long declared_nnz = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ss(line);
        if (!(ss >> rows >> cols >> declared_nnz)) mm_fail(path, lineno, "malformed size line");
        break;
    }
    if (rows < 0) mm_fail(path, lineno + 1, "missing size line");

    std::vector<Triplet> t;
    long seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ss(line);
        int i, j;
        double v;
        if (!(ss >> i >> j >> v)) mm_fail(path, lineno, "malformed entry");
        if (i < 1 || i > rows || j < 1 || j > cols)
            mm_fail(path, lineno, "index out of range");
        if (sym && j > i) mm_fail(path, lineno, "upper-triangle entry in symmetric file");
        t.push_back({i - 1, j - 1, v});
        if (sym && i != j) t.push_back({j - 1, i - 1, v});
        ++seen;
    }
    if (declared_nnz >= 0 && seen != declared_nnz)
        mm_fail(path, lineno, "entry count does not match header");
    return sparse_from_triplets(rows, cols, std::move(t), sym);
}

void write_matrix_market(const SparseMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const bool sym = A.symmetric;
    std::vector<Triplet> t;
    for (int i = 0; i < A.n_rows; ++i)
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            if (!sym || A.col_indices[k] <= i)
                t.push_back({i, A.col_indices[k], A.values[k]});
    out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general")
        << "\n";
    out << A.n_rows << " " << A.n_cols << " " << t.size() << "\n";
    char buf[64];
    for (const Triplet& e : t) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.row + 1, e.col + 1, e.value);
        out << buf;
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace amg
