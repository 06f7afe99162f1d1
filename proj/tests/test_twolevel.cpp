#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "amg/rng.hpp"
#include "amg/twolevel.hpp"
#include "problems.hpp"

using namespace amg;

namespace {

Prolongation identity_prolongation(int n) {
    Prolongation P;
    P.P = sparse_identity(n);
    return P;
}

// Linear interpolation from every other point of the 1-D Dirichlet problem.
Prolongation linear_interp_1d(int n) {
    std::vector<Triplet> trip;
    int J = 0;
    for (int i = 1; i < n; i += 2) {
        trip.push_back({i, J, 1.0});
        trip.push_back({i - 1, J, 0.5});
        if (i + 1 < n) trip.push_back({i + 1, J, 0.5});
        ++J;
    }
    Prolongation P;
    P.P = sparse_from_triplets(n, J, std::move(trip));
    return P;
}

Pipeline standard_pipeline(const SparseMatrix& A, bool neumann,
                           SmootherKind kind = SmootherKind::sym_gauss_seidel) {
    CertifyConfig cfg;
    cfg.neumann = neumann;
    cfg.smoother.kind = kind;
    return build_pipeline(A, cfg);
}

}  // namespace

TEST_CASE("smoother actions on hand examples") {
    // Jacobi with omega = 1 on diag(2,4): r = (2,4) -> (1,1).
    SparseMatrix D = sparse_from_triplets(2, 2, {{0, 0, 2.0}, {1, 1, 4.0}}, true);
    Smoother jac{SmootherKind::jacobi, 1.0};
    std::vector<double> x = smooth_apply(jac, D, {2.0, 4.0});
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 1.0);
    // Damped: scales by omega.
    jac.omega = 2.0 / 3.0;
    x = smooth_apply(jac, D, {2.0, 4.0});
    CHECK(x[0] == doctest::Approx(2.0 / 3.0));

    // Forward Gauss-Seidel on [[2,-1],[-1,2]], r = (1,0): x0 = 1/2, then
    // x1 = (0 + 1*x0)/2 = 1/4.
    SparseMatrix A = testprob::laplacian_1d(2);
    Smoother gs{SmootherKind::gauss_seidel, 1.0};
    x = smooth_apply(gs, A, {1.0, 0.0});
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(0.25));

    // Symmetric GS: forward sweep, D-scale, backward sweep.
    Smoother sgs{SmootherKind::sym_gauss_seidel, 1.0};
    x = smooth_apply(sgs, A, {0.0, 0.0});
    CHECK(x[0] == 0.0);
    CHECK(x[1] == 0.0);
    x = smooth_apply(sgs, A, {1.0, 0.0});
    // R = (D+U)^{-1} D (D+L)^{-1}: forward gives (1/2, 1/4), D-scale (1, 1/2),
    // backward solve gives x1 = 1/4, x0 = (1 + 1/4)/2 = 5/8.
    CHECK(x[0] == doctest::Approx(0.625));
    CHECK(x[1] == doctest::Approx(0.25));

    SparseMatrix Z = sparse_from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}}, true);
    CHECK_THROWS_AS(smooth_apply(gs, Z, {1.0, 1.0}), std::runtime_error);
}

TEST_CASE("smoother matrix columns match the action") {
    const SparseMatrix A = testprob::laplacian_1d(5);
    for (SmootherKind kind :
         {SmootherKind::jacobi, SmootherKind::gauss_seidel, SmootherKind::sym_gauss_seidel}) {
        Smoother s{kind, 2.0 / 3.0};
        const DenseMatrix R = smoother_matrix(s, A);
        std::vector<double> e(5, 0.0);
        e[2] = 1.0;
        const std::vector<double> col = smooth_apply(s, A, e);
        for (int i = 0; i < 5; ++i) CHECK(R.at(i, 2) == col[i]);
    }
}

TEST_CASE("symmetrized smoother is SPD and dominated by the operator") {
    const SparseMatrix A = testprob::laplacian_1d(8);
    const DenseMatrix Ad = DenseMatrix::from_sparse(A);
    for (SmootherKind kind :
         {SmootherKind::jacobi, SmootherKind::gauss_seidel, SmootherKind::sym_gauss_seidel}) {
        Smoother s{kind, 2.0 / 3.0};
        const DenseMatrix Rb = rbar(s, A);
        // Symmetric by construction.
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                CHECK(Rb.at(i, j) == doctest::Approx(Rb.at(j, i)).epsilon(1e-13));
        // Rbar SPD <=> the smoother contracts in the A-norm.
        const SymEigenResult e = sym_eig_dense(Rb, false);
        CHECK(e.eigenvalues[0] > 0.0);
        // A <= Rbar^{-1}: pencil (Rbar^{-1}, A) stays at or above 1.
        const DenseMatrix Rbi = rbar_inv(s, A);
        auto [lo, hi] = gen_eig_extremes(Rbi, Ad, {});
        CHECK(lo >= 1.0 - 1e-10);
        // Rbar^{-1} Rbar = I.
        const DenseMatrix I = matmul(Rbi, Rb);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                CHECK(I.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-11));
    }
}

TEST_CASE("forward sweep symmetrization equals the symmetric sweep preconditioner") {
    // Rbar of forward GS is exactly the sym-GS preconditioner inverse:
    // (D+U)^{-1} D (D+L)^{-1} as a matrix.
    const SparseMatrix A = testprob::laplacian_1d(6);
    const DenseMatrix Rb = rbar(Smoother{SmootherKind::gauss_seidel, 1.0}, A);
    const DenseMatrix Rsgs =
        smoother_matrix(Smoother{SmootherKind::sym_gauss_seidel, 1.0}, A);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(Rb.at(i, j) == doctest::Approx(Rsgs.at(i, j)).epsilon(1e-12));
}

TEST_CASE("overdamped jacobi is rejected") {
    // omega = 1.5 pushes omega lambda_max(D^{-1}A) past 2 on the 1-D problem,
    // so the smoother diverges, Rbar is indefinite, and the inversion refuses.
    const SparseMatrix A = testprob::laplacian_1d(15);
    CHECK_THROWS_WITH_AS(rbar_inv(Smoother{SmootherKind::jacobi, 1.5}, A),
                         doctest::Contains("damping"), std::runtime_error);
}

TEST_CASE("two-level cycle with identity prolongation is the exact solver") {
    const SparseMatrix A = testprob::laplacian_1d(7);
    const TwoLevelPreconditioner B = build_two_level(
        A, identity_prolongation(7), Smoother{SmootherKind::sym_gauss_seidel, 1.0}, false);
    Rng rng(7);
    std::vector<double> g(7);
    for (double& v : g) v = rng.normal();
    const std::vector<double> x = two_level_apply(B, g);
    const std::vector<double> r = spmv(A, x);
    for (int i = 0; i < 7; ++i) CHECK(r[i] == doctest::Approx(g[i]).epsilon(1e-12));
    CHECK(error_propagation_norm(B) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("error propagation norm with empty coarse space measures the smoother") {
    const SparseMatrix A = testprob::laplacian_1d(9);
    Prolongation empty;
    empty.P = sparse_from_triplets(9, 0, {});
    const TwoLevelPreconditioner B =
        build_two_level(A, empty, Smoother{SmootherKind::sym_gauss_seidel, 1.0}, false);
    const double norm = error_propagation_norm(B);
    // ||I - R A||_A^2 via the pencil equals the smoother-only contraction.
    const DenseMatrix Ad = DenseMatrix::from_sparse(A);
    const DenseMatrix E =
        DenseMatrix::identity(9) - matmul(smoother_matrix(B.smoother, A), Ad);
    auto [lo, hi] = gen_eig_extremes(matmul(E.transpose(), matmul(Ad, E)), Ad, {});
    CHECK(norm == doctest::Approx(hi).epsilon(1e-10));
    CHECK(norm < 1.0);
    CHECK(norm > 0.0);
}

TEST_CASE("exact rate identity for linear interpolation in 1d") {
    const int n = 15;
    const SparseMatrix A = testprob::laplacian_1d(n);
    const TwoLevelPreconditioner B = build_two_level(
        A, linear_interp_1d(n), Smoother{SmootherKind::sym_gauss_seidel, 1.0}, false);
    const double normE2 = error_propagation_norm(B);
    const double K = k_vc(B);
    CHECK(normE2 == doctest::Approx(1.0 - 1.0 / K).epsilon(1e-10));
    CHECK(K >= 1.0);
    CHECK(normE2 < 1.0);

    // Diagonal sandwich around K(V_c).
    const double Kd = k_vc_d(B);
    auto [cd, cu] = norm_equivalence_constants(B.smoother, A);
    CHECK(cd * Kd <= K + 1e-10 * K);
    CHECK(K <= cu * Kd + 1e-10 * K);
}

TEST_CASE("norm equivalence constants on a diagonal operator") {
    // For diagonal A, sym-GS is exact: Rbar = D^{-1} and the pencil
    // (Rbar^{-1}, D) is the identity.
    SparseMatrix D = sparse_from_triplets(3, 3, {{0, 0, 2.0}, {1, 1, 3.0}, {2, 2, 4.0}}, true);
    auto [cd, cu] = norm_equivalence_constants(Smoother{SmootherKind::sym_gauss_seidel, 1.0}, D);
    CHECK(cd == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cu == doctest::Approx(1.0).epsilon(1e-12));

    // omega-damped Jacobi on diagonal A: Rbar = omega(2 - omega) D^{-1}.
    const double omega = 0.5;
    auto [cdj, cuj] = norm_equivalence_constants(Smoother{SmootherKind::jacobi, omega}, D);
    CHECK(cdj == doctest::Approx(1.0 / (omega * (2.0 - omega))).epsilon(1e-12));
    CHECK(cuj == doctest::Approx(1.0 / (omega * (2.0 - omega))).epsilon(1e-12));
}

TEST_CASE("symmetrized cycle is a symmetric positive operator") {
    const SparseMatrix A = testprob::laplacian_1d(15);
    const Pipeline pipe = standard_pipeline(A, false, SmootherKind::gauss_seidel);
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> u(15), v(15);
        for (double& x : u) x = rng.normal();
        for (double& x : v) x = rng.normal();
        const std::vector<double> Bu = two_level_apply_symmetrized(pipe.B, u);
        const std::vector<double> Bv = two_level_apply_symmetrized(pipe.B, v);
        CHECK(dot(v, Bu) == doctest::Approx(dot(u, Bv)).epsilon(1e-10));
    }
}

TEST_CASE("additive preconditioner is symmetric and definite") {
    const SparseMatrix A = testprob::laplacian_1d(15);
    const Pipeline pipe = standard_pipeline(A, false);
    const AdditivePreconditioner Bhat =
        build_additive(pipe.B, pipe.A_S, pipe.subdomains);
    const DenseMatrix Bd = additive_matrix(Bhat);
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j)
            CHECK(Bd.at(i, j) == doctest::Approx(Bd.at(j, i)).epsilon(1e-12));
    // Matches the matrix-free action.
    Rng rng(5);
    std::vector<double> g(15);
    for (double& v : g) v = rng.normal();
    const std::vector<double> y = additive_apply(Bhat, g);
    const std::vector<double> yd = Bd.apply(g);
    for (int i = 0; i < 15; ++i) CHECK(y[i] == doctest::Approx(yd[i]).epsilon(1e-11));
    // Condition number is finite and at least 1.
    const double kappa = additive_condition(Bhat);
    CHECK(kappa >= 1.0 - 1e-10);
    CHECK(std::isfinite(kappa));
}

TEST_CASE("conjugate gradients on the identity converges in one step") {
    const SparseMatrix I = sparse_identity(6);
    const std::vector<double> b{1.0, -2.0, 3.0, 0.5, 0.0, 4.0};
    const PcgResult r =
        pcg(I, b, [](const std::vector<double>& v) { return v; }, 1e-12, 10, {});
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    for (int i = 0; i < 6; ++i) CHECK(r.x[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("preconditioned conjugate gradients on the 1-D problem") {
    const int n = 31;
    const SparseMatrix A = testprob::laplacian_1d(n);
    const Pipeline pipe = standard_pipeline(A, false);
    const std::vector<double> b(n, 1.0);
    const PcgResult plain =
        pcg(A, b, [](const std::vector<double>& v) { return v; }, 1e-8, 200, {});
    const PcgResult two = pcg(
        A, b,
        [&](const std::vector<double>& v) { return two_level_apply_symmetrized(pipe.B, v); },
        1e-8, 200, {});
    CHECK(plain.converged);
    CHECK(two.converged);
    CHECK(two.iterations <= 15);
    CHECK(two.iterations < plain.iterations);
    const std::vector<double> r = spmv(A, two.x);
    for (int i = 0; i < n; ++i) CHECK(r[i] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pcg on a singular neumann system stays in the complement") {
    const SparseMatrix A = testprob::path_laplacian(9);
    std::vector<std::vector<double>> kernel{std::vector<double>(9, 1.0 / 3.0)};
    std::vector<double> b(9, 0.0);
    b[0] = 1.0;
    b[8] = -1.0;
    const PcgResult r =
        pcg(A, b, [](const std::vector<double>& v) { return v; }, 1e-10, 100, kernel);
    CHECK(r.converged);
    double mean = 0.0;
    for (double v : r.x) mean += v;
    CHECK(std::abs(mean) < 1e-10);
}

TEST_CASE("pipeline and certificate on desk problems") {
    for (const testprob::NamedProblem& prob : testprob::standard_problem_set()) {
        if (prob.A.n_rows > 80) continue;  // keep the unit suite quick
        CAPTURE(prob.name);
        CertifyConfig cfg;
        cfg.neumann = prob.neumann;
        const Pipeline pipe = build_pipeline(prob.A, cfg);
        CHECK(!pipe.split.coarse.empty());
        const ConvergenceCertificate cert = certify(pipe);
        CHECK(cert.valid);
        for (const ClauseResult& c : cert.clauses) {
            CAPTURE(c.name);
            CHECK(c.pass);
        }
        CHECK(cert.normE2 < 1.0);
        CHECK(cert.K_Vc >= 1.0 - 1e-12);
        CHECK(cert.kappa_additive <= cert.kappa_bound + 1e-10);
    }
}

TEST_CASE("certificate json and sweep csv formatting") {
    const Pipeline pipe = standard_pipeline(testprob::laplacian_1d(15), false);
    const ConvergenceCertificate cert = certify(pipe);
    const std::string path = "certificate_test.json";
    write_certificate_json(cert, pipe, path, "laplace1d_n15");
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"normE2\"") != std::string::npos);
    CHECK(text.find("laplace1d_n15") != std::string::npos);
    CHECK(text.find("\"clauses\"") != std::string::npos);
    std::remove(path.c_str());

    CHECK(sweep_csv_header() ==
          "eps,h,theta,normE2,K_Vc,K_VcD,mu_c,C_o,kappa,iters");
    SweepRow row;
    row.eps = 1e-4;
    row.h = 0.125;
    row.theta = 0.25;
    row.cert = cert;
    row.iters = 9;
    const std::string line = sweep_csv_row(row);
    CHECK(line.substr(0, 6) == "0.0001");
    CHECK(line.substr(line.size() - 2) == ",9");
}
