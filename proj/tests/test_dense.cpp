#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "amg/dense.hpp"
#include "amg/rng.hpp"
#include "problems.hpp"

using namespace amg;

TEST_CASE("eigendecomposition of tridiagonal 2x2 and 3x3") {
    DenseMatrix A(2, 2);
    A.at(0, 0) = 2.0; A.at(0, 1) = -1.0;
    A.at(1, 0) = -1.0; A.at(1, 1) = 2.0;
    SymEigenResult e = sym_eig_dense(A);
    CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-13));

    // Path Laplacian on 3 vertices: spectrum {0, 1, 3}.
    DenseMatrix L = DenseMatrix::from_sparse(testprob::path_laplacian(3));
    SymEigenResult el = sym_eig_dense(L);
    CHECK(el.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(el.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(el.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("eigenvectors are orthonormal and reproduce the matrix") {
    Rng rng(123);
    const int n = 20;
    DenseMatrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            A.at(i, j) = v;
            A.at(j, i) = v;
        }
    SymEigenResult e = sym_eig_dense(A);
    // V^T V = I
    DenseMatrix VtV = matmul(e.eigenvectors.transpose(), e.eigenvectors);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(VtV.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    // V Lambda V^T = A
    DenseMatrix VL = e.eigenvectors;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) VL.at(i, j) *= e.eigenvalues[j];
    DenseMatrix R = matmul(VL, e.eigenvectors.transpose());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(R.at(i, j) == doctest::Approx(A.at(i, j)).epsilon(1e-11));
    // Values-only mode matches.
    SymEigenResult ev = sym_eig_dense(A, false);
    for (int i = 0; i < n; ++i)
        CHECK(ev.eigenvalues[i] == doctest::Approx(e.eigenvalues[i]).epsilon(1e-13));
}

TEST_CASE("asymmetric input is rejected") {
    DenseMatrix A(2, 2);
    A.at(0, 1) = 1.0;
    A.at(1, 0) = 2.0;
    CHECK_THROWS_AS(sym_eig_dense(A), std::runtime_error);
}

TEST_CASE("pencil extremes with and without deflation") {
    const SparseMatrix As = testprob::laplacian_1d(6);
    const DenseMatrix A = DenseMatrix::from_sparse(As);
    auto [lo, hi] = gen_eig_extremes(A, A, {});
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));

    // Singular Neumann pencil (2L, L) with the constants deflated.
    const SparseMatrix Ls = testprob::path_laplacian(5);
    DenseMatrix L = DenseMatrix::from_sparse(Ls);
    DenseMatrix L2 = L + L;
    const std::vector<std::vector<double>> kernel{
        std::vector<double>(5, 1.0 / std::sqrt(5.0))};
    auto [l2, h2] = gen_eig_extremes(L2, L, kernel);
    CHECK(l2 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(h2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("deflation refuses an indefinite restriction") {
    DenseMatrix A(2, 2);
    A.at(0, 0) = 1.0;
    A.at(1, 1) = -1.0;
    CHECK_THROWS_WITH_AS(factor_deflated(A, {}), doctest::Contains("not SPD"),
                         std::runtime_error);
}

TEST_CASE("pseudo solve on a singular Neumann system") {
    const SparseMatrix L = testprob::path_laplacian(7);
    const std::vector<std::vector<double>> kernel{
        std::vector<double>(7, 1.0 / std::sqrt(7.0))};
    std::vector<double> b(7, 0.0);
    b[0] = 1.0;
    b[6] = -1.0;  // consistent right side
    const std::vector<double> x = pseudo_solve(L, b, kernel);
    const std::vector<double> r = spmv(L, x);
    for (int i = 0; i < 7; ++i) CHECK(r[i] == doctest::Approx(b[i]).epsilon(1e-10));
    // Solution is mean-zero.
    double mean = 0.0;
    for (double v : x) mean += v;
    CHECK(std::abs(mean) < 1e-12);
}

TEST_CASE("pseudo inverse satisfies A A+ A = A") {
    const DenseMatrix L = DenseMatrix::from_sparse(testprob::path_laplacian(6));
    const std::vector<std::vector<double>> kernel{
        std::vector<double>(6, 1.0 / std::sqrt(6.0))};
    const DenseMatrix Lp = pseudo_inverse_dense(L, kernel);
    const DenseMatrix T = matmul(matmul(L, Lp), L);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(T.at(i, j) == doctest::Approx(L.at(i, j)).epsilon(1e-11));
}

TEST_CASE("dense threshold is enforced") {
    DenseMatrix A(kDenseThreshold + 1, kDenseThreshold + 1);
    CHECK_THROWS_AS(sym_eig_dense(A), std::runtime_error);
}
