#include "amg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace amg {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1.0;
    return I;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& A) {
    DenseMatrix D(A.n_rows, A.n_cols);
    for (int i = 0; i < A.n_rows; ++i)
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            D.at(i, A.col_indices[k]) = A.values[k];
    return D;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix T(n_cols, n_rows);
    for (int i = 0; i < n_rows; ++i)
        for (int j = 0; j < n_cols; ++j) T.at(j, i) = at(i, j);
    return T;
}

std::vector<double> DenseMatrix::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_cols)
        throw std::runtime_error("DenseMatrix::apply: dimension mismatch");
    std::vector<double> y(n_rows, 0.0);
    for (int i = 0; i < n_rows; ++i) {
        const double* row = values.data() + static_cast<std::size_t>(i) * n_cols;
        double s = 0.0;
        for (int j = 0; j < n_cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.n_cols != B.n_rows) throw std::runtime_error("matmul: dimension mismatch");
    DenseMatrix C(A.n_rows, B.n_cols);
    const int n = A.n_rows, k_dim = A.n_cols, m = B.n_cols;
    for (int i = 0; i < n; ++i) {
        double* ci = C.values.data() + static_cast<std::size_t>(i) * m;
        for (int k = 0; k < k_dim; ++k) {
            const double aik = A.values[static_cast<std::size_t>(i) * k_dim + k];
            if (aik == 0.0) continue;
            const double* bk = B.values.data() + static_cast<std::size_t>(k) * m;
            for (int j = 0; j < m; ++j) ci[j] += aik * bk[j];
        }
    }
    return C;
}

DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B) {
    DenseMatrix C = A;
    for (std::size_t i = 0; i < C.values.size(); ++i) C.values[i] -= B.values[i];
    return C;
}

DenseMatrix operator+(const DenseMatrix& A, const DenseMatrix& B) {
    DenseMatrix C = A;
    for (std::size_t i = 0; i < C.values.size(); ++i) C.values[i] += B.values[i];
    return C;
}

SymEigenResult sym_eig_dense(const DenseMatrix& A_in, bool with_vectors) {
    const int n = A_in.n_rows;
    if (n != A_in.n_cols) throw std::runtime_error("sym_eig_dense: matrix not square");
    if (n > kDenseThreshold)
        throw std::runtime_error("sym_eig_dense: size " + std::to_string(n) +
                                 " exceeds dense threshold " + std::to_string(kDenseThreshold));

    double max_abs = 0.0;
    for (double v : A_in.values) max_abs = std::max(max_abs, std::abs(v));
    const double sym_tol = 1e-12 * std::max(1.0, max_abs);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(A_in.at(i, j) - A_in.at(j, i)) > sym_tol)
                throw std::runtime_error("sym_eig_dense: input asymmetric at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");

    // Work on the symmetrized copy; VT holds eigenvectors as rows so rotation
    // updates stay contiguous.
    std::vector<double> a(A_in.values);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a[static_cast<std::size_t>(i) * n + j] +
                                    a[static_cast<std::size_t>(j) * n + i]);
            a[static_cast<std::size_t>(i) * n + j] = v;
            a[static_cast<std::size_t>(j) * n + i] = v;
        }
    std::vector<double> vt;
    if (with_vectors) {
        vt.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) vt[static_cast<std::size_t>(i) * n + i] = 1.0;
    }

    double fnorm = 0.0;
    for (double v : a) fnorm += v * v;
    fnorm = std::sqrt(fnorm);
    const double tol_off = 1e-14 * fnorm;
    const double skip = (n > 1) ? tol_off / n : 0.0;

    // Only the upper triangle is kept current during the sweeps; each rotation
    // then touches ~n entries instead of the 4n a full-matrix update needs.
    auto upper = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * n + j];
    };
    for (int sweep = 0; sweep < 100 && n > 1; ++sweep) {
        double off = 0.0, abs_sum = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = upper(i, j);
                off += 2.0 * v * v;
                abs_sum += std::abs(v);
            }
        if (std::sqrt(off) <= tol_off) break;
        // Threshold strategy: early sweeps rotate only the larger elements,
        // which empties the off-diagonal part in fewer total rotations.
        const double thresh =
            (sweep < 4) ? std::max(0.2 * abs_sum / (double(n) * n), skip) : skip;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = upper(p, q);
                if (std::abs(apq) <= thresh) continue;
                const double app = upper(p, p);
                const double aqq = upper(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                                     : -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                upper(p, p) = app - t * apq;
                upper(q, q) = aqq + t * apq;
                upper(p, q) = 0.0;
                auto rotate = [&](double& x, double& y) {
                    const double g = x, h = y;
                    x = g - s * (h + g * tau);
                    y = h + s * (g - h * tau);
                };
                for (int k = 0; k < p; ++k) rotate(upper(k, p), upper(k, q));
                for (int k = p + 1; k < q; ++k) rotate(upper(p, k), upper(k, q));
                for (int k = q + 1; k < n; ++k) rotate(upper(p, k), upper(q, k));

                if (with_vectors) {
                    double* vp = vt.data() + static_cast<std::size_t>(p) * n;
                    double* vq = vt.data() + static_cast<std::size_t>(q) * n;
                    for (int k = 0; k < n; ++k) rotate(vp[k], vq[k]);
                }
            }
        }
    }
    // Restore the lower triangle for the eigenvalue read-out below.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            a[static_cast<std::size_t>(j) * n + i] = a[static_cast<std::size_t>(i) * n + j];

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return a[static_cast<std::size_t>(i) * n + i] < a[static_cast<std::size_t>(j) * n + j];
    });

    SymEigenResult r;
    r.eigenvalues.resize(n);
    if (with_vectors) r.eigenvectors = DenseMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        r.eigenvalues[j] = a[static_cast<std::size_t>(src) * n + src];
        if (with_vectors)
            for (int i = 0; i < n; ++i)
                r.eigenvectors.at(i, j) = vt[static_cast<std::size_t>(src) * n + i];
    }
    return r;
}

std::vector<std::vector<double>> orthonormalize(std::vector<std::vector<double>> vecs) {
    std::vector<std::vector<double>> out;
    for (auto& v : vecs) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : out) axpy(-dot(u, v), u, v);
        const double nrm = norm2(v);
        if (nrm > 1e-12) {
            for (double& x : v) x /= nrm;
            out.push_back(std::move(v));
        }
    }
    return out;
}

namespace {

// Orthonormal basis of the complement of the given (orthonormal) kernel.
DenseMatrix complement_basis(int n, const std::vector<std::vector<double>>& kernel) {
    const int r = static_cast<int>(kernel.size());
    DenseMatrix Z(n, n - r);
    if (r == 0) {
        for (int i = 0; i < n - 0; ++i) Z.at(i, i) = 1.0;
        return Z;
    }
    if (r == 1) {
        // Householder reflector H = I - 2ww^T/(w^T w) with w = u +/- e_0 maps
        // +/-e_0 to the kernel vector u, so its trailing columns are an
        // orthonormal basis of the complement of span{u}.
        std::vector<double> w = kernel[0];
        w[0] += (w[0] >= 0.0 ? 1.0 : -1.0);
        const double wtw = dot(w, w);
        for (int j = 1; j < n; ++j) {
            const double f = 2.0 * w[j] / wtw;
            for (int i = 0; i < n; ++i) Z.at(i, j - 1) = (i == j ? 1.0 : 0.0) - f * w[i];
        }
        return Z;
    }
    // General case: Gram-Schmidt of coordinate vectors against the kernel.
    std::vector<std::vector<double>> basis = kernel;
    int col = 0;
    DenseMatrix Zg(n, n - r);
    for (int e = 0; e < n && col < n - r; ++e) {
        std::vector<double> v(n, 0.0);
        v[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis) axpy(-dot(u, v), u, v);
        const double nrm = norm2(v);
        if (nrm > 1e-8) {
            for (double& x : v) x /= nrm;
            for (int i = 0; i < n; ++i) Zg.at(i, col) = v[i];
            basis.push_back(std::move(v));
            ++col;
        }
    }
    if (col != n - r) throw std::runtime_error("complement_basis: kernel not independent");
    return Zg;
}

DenseMatrix restrict_to(const DenseMatrix& Z, const DenseMatrix& A) {
    // Z^T A Z
    DenseMatrix AZ = matmul(A, Z);
    return matmul(Z.transpose(), AZ);
}

void symmetrize(DenseMatrix& A) {
    for (int i = 0; i < A.n_rows; ++i)
        for (int j = i + 1; j < A.n_cols; ++j) {
            const double v = 0.5 * (A.at(i, j) + A.at(j, i));
            A.at(i, j) = v;
            A.at(j, i) = v;
        }
}

}  // namespace

DeflatedFactor factor_deflated(const DenseMatrix& A,
                               const std::vector<std::vector<double>>& kernel) {
    const int n = A.n_rows;
    if (n > kDenseThreshold)
        throw std::runtime_error("factor_deflated: size exceeds dense threshold");
    const auto kb = orthonormalize(kernel);
    const int r = static_cast<int>(kb.size());
    if (n - r <= 0) throw std::runtime_error("factor_deflated: kernel spans the whole space");

    DenseMatrix Z = complement_basis(n, kb);
    DenseMatrix At = restrict_to(Z, A);
    symmetrize(At);
    SymEigenResult eig = sym_eig_dense(At);
    const double scale = A.frobenius_norm();
    const double tol = 1e-12 * scale;
    if (eig.eigenvalues.front() < tol)
        throw std::runtime_error(
            "factor_deflated: restricted matrix not SPD (eigenvalue " +
            std::to_string(eig.eigenvalues.front()) + " below " + std::to_string(tol) + ")");

    // W = Z U Sigma^{-1/2}
    DenseMatrix U = eig.eigenvectors;
    for (int j = 0; j < n - r; ++j) {
        const double f = 1.0 / std::sqrt(eig.eigenvalues[j]);
        for (int i = 0; i < n - r; ++i) U.at(i, j) *= f;
    }
    DeflatedFactor F;
    F.W = matmul(Z, U);
    F.m = n - r;
    return F;
}

std::pair<double, double> pencil_extremes(const DeflatedFactor& F, const DenseMatrix& M) {
    DenseMatrix B = restrict_to(F.W, M);
    symmetrize(B);
    SymEigenResult eig = sym_eig_dense(B, /*with_vectors=*/false);
    return {eig.eigenvalues.front(), eig.eigenvalues.back()};
}

std::pair<double, double> gen_eig_extremes(const DenseMatrix& M, const DenseMatrix& A,
                                           const std::vector<std::vector<double>>& kernel) {
    if (M.n_rows != A.n_rows || M.n_cols != A.n_cols)
        throw std::runtime_error("gen_eig_extremes: dimension mismatch");
    return pencil_extremes(factor_deflated(A, kernel), M);
}

std::vector<double> pseudo_solve_dense(const DenseMatrix& A, const std::vector<double>& b,
                                       const std::vector<std::vector<double>>& kernel) {
    const int n = A.n_rows;
    const auto kb = orthonormalize(kernel);
    if (static_cast<int>(kb.size()) == n) return std::vector<double>(n, 0.0);

    DenseMatrix Z = complement_basis(n, kb);
    DenseMatrix At = restrict_to(Z, A);
    symmetrize(At);
    SymEigenResult eig = sym_eig_dense(At);
    const int m = Z.n_cols;

    std::vector<double> zb(m, 0.0);
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += Z.at(i, j) * b[i];
        zb[j] = s;
    }
    // y = U diag(1/sigma) U^T zb; eigenvalues at numerical zero are skipped.
    double max_eig = 0.0;
    for (double ev : eig.eigenvalues) max_eig = std::max(max_eig, std::abs(ev));
    const double zero_tol = 1e-14 * std::max(max_eig, 1e-300);
    std::vector<double> y(m, 0.0);
    for (int k = 0; k < m; ++k) {
        if (std::abs(eig.eigenvalues[k]) <= zero_tol) continue;
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += eig.eigenvectors.at(i, k) * zb[i];
        s /= eig.eigenvalues[k];
        for (int i = 0; i < m; ++i) y[i] += s * eig.eigenvectors.at(i, k);
    }
    std::vector<double> x(n, 0.0);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) x[i] += Z.at(i, j) * y[j];
    return x;
}

std::vector<double> pseudo_solve(const SparseMatrix& A, const std::vector<double>& b,
                                 const std::vector<std::vector<double>>& kernel) {
    if (A.n_rows != A.n_cols || static_cast<int>(b.size()) != A.n_rows)
        throw std::runtime_error("pseudo_solve: dimension mismatch");
    const int n = A.n_rows;
    if (n <= kDenseThreshold)
        return pseudo_solve_dense(DenseMatrix::from_sparse(A), b, kernel);

    // Deflated CG on the projected system.
    const auto kb = orthonormalize(kernel);
    auto project = [&](std::vector<double>& v) {
        for (const auto& u : kb) axpy(-dot(u, v), u, v);
    };
    std::vector<double> r = b;
    project(r);
    const double bnorm = norm2(r);
    std::vector<double> x(n, 0.0);
    if (bnorm == 0.0) return x;
    std::vector<double> p = r;
    double rr = dot(r, r);
    for (int it = 0; it < 10 * n; ++it) {
        std::vector<double> Ap = spmv(A, p);
        project(Ap);
        const double pAp = dot(p, Ap);
        if (pAp <= 0.0) break;
        const double alpha = rr / pAp;
        axpy(alpha, p, x);
        axpy(-alpha, Ap, r);
        project(r);
        const double rr_new = dot(r, r);
        if (std::sqrt(rr_new) <= 1e-12 * bnorm) break;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    project(x);
    return x;
}

DenseMatrix pseudo_inverse_dense(const DenseMatrix& A,
                                 const std::vector<std::vector<double>>& kernel) {
    const int n = A.n_rows;
    const auto kb = orthonormalize(kernel);
    if (static_cast<int>(kb.size()) == n) return DenseMatrix(n, n);
    DenseMatrix Z = complement_basis(n, kb);
    DenseMatrix At = restrict_to(Z, A);
    symmetrize(At);
    SymEigenResult eig = sym_eig_dense(At);
    const int m = Z.n_cols;
    double max_eig = 0.0;
    for (double ev : eig.eigenvalues) max_eig = std::max(max_eig, std::abs(ev));
    const double zero_tol = 1e-14 * std::max(max_eig, 1e-300);
    // Z U Sigma^+ U^T Z^T
    DenseMatrix U = eig.eigenvectors;
    for (int j = 0; j < m; ++j) {
        const double ev = eig.eigenvalues[j];
        const double f = (std::abs(ev) <= zero_tol) ? 0.0 : 1.0 / std::sqrt(std::abs(ev));
        for (int i = 0; i < m; ++i) U.at(i, j) *= f;
    }
    DenseMatrix ZU = matmul(Z, U);
    return matmul(ZU, ZU.transpose());
}

}  // namespace amg
