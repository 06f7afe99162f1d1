#include "amg/twolevel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace amg {

std::string smoother_name(SmootherKind k) {
    switch (k) {
        case SmootherKind::jacobi: return "jacobi";
        case SmootherKind::gauss_seidel: return "gauss_seidel";
        case SmootherKind::sym_gauss_seidel: return "sym_gauss_seidel";
    }
    return "";
}

SmootherKind smoother_from_name(const std::string& name) {
    if (name == "jacobi") return SmootherKind::jacobi;
    if (name == "gauss_seidel") return SmootherKind::gauss_seidel;
    if (name == "sym_gauss_seidel") return SmootherKind::sym_gauss_seidel;
    throw std::runtime_error("unknown smoother: " + name);
}

namespace {

void check_diagonal(const std::vector<double>& d) {
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] == 0.0)
            throw std::runtime_error("smoother: zero diagonal entry at " +
                                     std::to_string(i));
}

// Solve (D + L) x = r by forward substitution (CSR rows, natural order).
std::vector<double> forward_solve(const SparseMatrix& A, const std::vector<double>& r) {
    const int n = A.n_rows;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        double sum = r[i];
        double diag = 0.0;
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            const int j = A.col_indices[k];
            if (j < i)
                sum -= A.values[k] * x[j];
            else if (j == i)
                diag = A.values[k];
        }
        if (diag == 0.0)
            throw std::runtime_error("smoother: zero diagonal entry at " + std::to_string(i));
        x[i] = sum / diag;
    }
    return x;
}

// Solve (D + U) x = r by backward substitution.
std::vector<double> backward_solve(const SparseMatrix& A, const std::vector<double>& r) {
    const int n = A.n_rows;
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double sum = r[i];
        double diag = 0.0;
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            const int j = A.col_indices[k];
            if (j > i)
                sum -= A.values[k] * x[j];
            else if (j == i)
                diag = A.values[k];
        }
        if (diag == 0.0)
            throw std::runtime_error("smoother: zero diagonal entry at " + std::to_string(i));
        x[i] = sum / diag;
    }
    return x;
}

// Orthogonal projection onto the complement of span(kernel) (orthonormal).
void project_out(const std::vector<std::vector<double>>& kernel, std::vector<double>& v) {
    for (const auto& z : kernel) {
        const double c = dot(z, v);
        axpy(-c, z, v);
    }
}

DenseMatrix diag_matrix(const std::vector<double>& d) {
    DenseMatrix D(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < D.n_rows; ++i) D.at(i, i) = d[i];
    return D;
}

// Rbar^{-1}-orthogonal projector complement residual form (I-Q)^T M (I-Q)
// where Q projects onto range(P) in the M inner product.
DenseMatrix complement_residual_form(const DenseMatrix& Pd, const DenseMatrix& M) {
    const int n = M.n_rows;
    if (Pd.n_cols == 0) return M;
    DenseMatrix G = matmul(matmul(Pd.transpose(), M), Pd);
    DenseMatrix Ginv = pseudo_inverse_dense(G, {});
    DenseMatrix Q = matmul(matmul(Pd, Ginv), matmul(Pd.transpose(), M));
    DenseMatrix ImQ = DenseMatrix::identity(n) - Q;
    return matmul(matmul(ImQ.transpose(), M), ImQ);
}

}  // namespace

std::vector<double> smooth_apply(const Smoother& s, const SparseMatrix& A,
                                 const std::vector<double>& r) {
    if (static_cast<int>(r.size()) != A.n_rows)
        throw std::runtime_error("smooth_apply: dimension mismatch");
    switch (s.kind) {
        case SmootherKind::jacobi: {
            const std::vector<double> d = A.diagonal();
            check_diagonal(d);
            std::vector<double> x(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) x[i] = s.omega * r[i] / d[i];
            return x;
        }
        case SmootherKind::gauss_seidel:
            return forward_solve(A, r);
        case SmootherKind::sym_gauss_seidel: {
            // R = (D+U)^{-1} D (D+L)^{-1}: forward sweep, D-scale, backward sweep.
            std::vector<double> y = forward_solve(A, r);
            const std::vector<double> d = A.diagonal();
            for (std::size_t i = 0; i < y.size(); ++i) y[i] *= d[i];
            return backward_solve(A, y);
        }
    }
    throw std::runtime_error("smooth_apply: unknown kind");
}

DenseMatrix smoother_matrix(const Smoother& s, const SparseMatrix& A) {
    const int n = A.n_rows;
    DenseMatrix R(n, n);
    std::vector<double> e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = smooth_apply(s, A, e);
        for (int i = 0; i < n; ++i) R.at(i, j) = col[i];
        e[j] = 0.0;
    }
    return R;
}

DenseMatrix rbar(const Smoother& s, const SparseMatrix& A) {
    const DenseMatrix R = smoother_matrix(s, A);
    const DenseMatrix Ad = DenseMatrix::from_sparse(A);
    const DenseMatrix Rt = R.transpose();
    return Rt + R - matmul(matmul(Rt, Ad), R);
}

DenseMatrix rbar_inv(const Smoother& s, const SparseMatrix& A) {
    const DenseMatrix Rb = rbar(s, A);
    SymEigenResult eig = sym_eig_dense(Rb);
    const double scale = std::max(Rb.frobenius_norm(), 1e-300);
    if (eig.eigenvalues.front() <= 1e-12 * scale)
        throw std::runtime_error(
            "rbar_inv: Rbar is not SPD (eigenvalue " +
            std::to_string(eig.eigenvalues.front()) +
            "); the smoother does not contract in the A-norm, reduce the damping");
    const int n = Rb.n_rows;
    DenseMatrix out(n, n);
    for (int k = 0; k < n; ++k) {
        const double inv = 1.0 / eig.eigenvalues[k];
        for (int i = 0; i < n; ++i) {
            const double uik = eig.eigenvectors.at(i, k);
            for (int j = 0; j < n; ++j)
                out.at(i, j) += inv * uik * eig.eigenvectors.at(j, k);
        }
    }
    return out;
}

TwoLevelPreconditioner build_two_level(const SparseMatrix& A, Prolongation P,
                                       const Smoother& s, bool neumann) {
    if (P.P.n_rows != A.n_rows)
        throw std::runtime_error("build_two_level: prolongation rows mismatch");
    TwoLevelPreconditioner B;
    B.A = A;
    B.P = std::move(P);
    B.Pt = B.P.P.transpose();
    B.A_c = triple_product(B.P.P, A);
    B.smoother = s;
    if (neumann) {
        const int n = A.n_rows;
        const int J = B.P.P.n_cols;
        B.kernel.push_back(std::vector<double>(n, 1.0 / std::sqrt(double(n))));
        if (J > 0)
            B.coarse_kernel.push_back(std::vector<double>(J, 1.0 / std::sqrt(double(J))));
    }
    return B;
}

std::vector<double> two_level_apply(const TwoLevelPreconditioner& B,
                                    const std::vector<double>& g) {
    std::vector<double> g0 = g;
    project_out(B.kernel, g0);
    std::vector<double> w(B.A.n_rows, 0.0);
    if (B.P.P.n_cols > 0) {
        std::vector<double> gc = spmv(B.Pt, g0);
        const std::vector<double> wc = pseudo_solve(B.A_c, gc, B.coarse_kernel);
        w = spmv(B.P.P, wc);
    }
    std::vector<double> r = spmv(B.A, w);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = g0[i] - r[i];
    const std::vector<double> corr = smooth_apply(B.smoother, B.A, r);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += corr[i];
    project_out(B.kernel, w);
    return w;
}

std::vector<double> two_level_apply_symmetrized(const TwoLevelPreconditioner& B,
                                                const std::vector<double>& g) {
    std::vector<double> g0 = g;
    project_out(B.kernel, g0);

    // Pre-smoothing with R^T. For Jacobi and sym-GS R is symmetric; for
    // forward GS the transpose is the backward sweep.
    std::vector<double> x;
    if (B.smoother.kind == SmootherKind::gauss_seidel)
        x = backward_solve(B.A, g0);
    else
        x = smooth_apply(B.smoother, B.A, g0);

    auto residual = [&](const std::vector<double>& y) {
        std::vector<double> r = spmv(B.A, y);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = g0[i] - r[i];
        return r;
    };

    if (B.P.P.n_cols > 0) {
        std::vector<double> r = residual(x);
        std::vector<double> gc = spmv(B.Pt, r);
        const std::vector<double> wc = pseudo_solve(B.A_c, gc, B.coarse_kernel);
        const std::vector<double> w = spmv(B.P.P, wc);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += w[i];
    }
    std::vector<double> r = residual(x);
    const std::vector<double> corr = smooth_apply(B.smoother, B.A, r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += corr[i];
    project_out(B.kernel, x);
    return x;
}

double error_propagation_norm(const TwoLevelPreconditioner& B) {
    const int n = B.A.n_rows;
    if (n > kDenseThreshold)
        throw std::runtime_error("error_propagation_norm: problem above the dense "
                                 "certificate threshold");
    const DenseMatrix Ad = DenseMatrix::from_sparse(B.A);
    const DenseMatrix R = smoother_matrix(B.smoother, B.A);
    DenseMatrix Pic(n, n);  // P A_c^+ P^T A
    if (B.P.P.n_cols > 0) {
        const DenseMatrix Pd = DenseMatrix::from_sparse(B.P.P);
        const DenseMatrix Acp =
            pseudo_inverse_dense(DenseMatrix::from_sparse(B.A_c), B.coarse_kernel);
        Pic = matmul(matmul(Pd, Acp), matmul(Pd.transpose(), Ad));
    }
    const DenseMatrix I = DenseMatrix::identity(n);
    const DenseMatrix E = matmul(I - matmul(R, Ad), I - Pic);
    const DenseMatrix M = matmul(matmul(E.transpose(), Ad), E);
    return gen_eig_extremes(M, Ad, B.kernel).second;
}

double k_vc(const TwoLevelPreconditioner& B) {
    const DenseMatrix M = rbar_inv(B.smoother, B.A);
    const DenseMatrix T = complement_residual_form(DenseMatrix::from_sparse(B.P.P), M);
    return gen_eig_extremes(T, DenseMatrix::from_sparse(B.A), B.kernel).second;
}

double k_vc_d(const TwoLevelPreconditioner& B) {
    const DenseMatrix D = diag_matrix(B.A.diagonal());
    const DenseMatrix T = complement_residual_form(DenseMatrix::from_sparse(B.P.P), D);
    return gen_eig_extremes(T, DenseMatrix::from_sparse(B.A), B.kernel).second;
}

std::pair<double, double> norm_equivalence_constants(const Smoother& s,
                                                     const SparseMatrix& A) {
    // Extremes of (Rbar^{-1}, D) are the reciprocal extremes of the congruent
    // matrix D^{1/2} Rbar D^{1/2}: one eigensolve, no explicit inverse.
    const DenseMatrix Rb = rbar(s, A);
    const std::vector<double> d = A.diagonal();
    std::vector<double> sq(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] <= 0.0)
            throw std::runtime_error("norm_equivalence_constants: nonpositive diagonal");
        sq[i] = std::sqrt(d[i]);
    }
    DenseMatrix S(Rb.n_rows, Rb.n_cols);
    for (int i = 0; i < Rb.n_rows; ++i)
        for (int j = 0; j < Rb.n_cols; ++j) S.at(i, j) = sq[i] * Rb.at(i, j) * sq[j];
    SymEigenResult eig = sym_eig_dense(S, /*with_vectors=*/false);
    const double lo = eig.eigenvalues.front(), hi = eig.eigenvalues.back();
    if (lo <= 0.0)
        throw std::runtime_error("norm_equivalence_constants: Rbar not SPD");
    return {1.0 / hi, 1.0 / lo};
}

AdditivePreconditioner build_additive(const TwoLevelPreconditioner& B,
                                      const SparseMatrix& A_S,
                                      const SubdomainSet& set) {
    AdditivePreconditioner out;
    out.base = &B;
    out.local_scaling.assign(B.A.n_rows, 0.0);
    const std::vector<double> diag = A_S.diagonal();
    for (int c = 0; c < static_cast<int>(set.subdomains.size()); ++c)
        for (int v : set.subdomains[c].members) {
            const double p = B.P.P.at(v, c);
            if (diag[v] <= 0.0)
                throw std::runtime_error("build_additive: nonpositive filtered diagonal");
            out.local_scaling[v] += p * p / diag[v];
        }
    return out;
}

std::vector<double> additive_apply(const AdditivePreconditioner& Bhat,
                                   const std::vector<double>& g) {
    const TwoLevelPreconditioner& B = *Bhat.base;
    std::vector<double> g0 = g;
    project_out(B.kernel, g0);
    std::vector<double> gc = spmv(B.Pt, g0);
    const std::vector<double> wc = pseudo_solve(B.A_c, gc, B.coarse_kernel);
    std::vector<double> x = spmv(B.P.P, wc);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += Bhat.local_scaling[i] * g0[i];
    project_out(B.kernel, x);
    return x;
}

DenseMatrix additive_matrix(const AdditivePreconditioner& Bhat) {
    const TwoLevelPreconditioner& B = *Bhat.base;
    const int n = B.A.n_rows;
    const DenseMatrix Pd = DenseMatrix::from_sparse(B.P.P);
    const DenseMatrix Acp =
        pseudo_inverse_dense(DenseMatrix::from_sparse(B.A_c), B.coarse_kernel);
    DenseMatrix M = matmul(matmul(Pd, Acp), Pd.transpose());
    for (int i = 0; i < n; ++i) M.at(i, i) += Bhat.local_scaling[i];
    return M;
}

double additive_condition(const AdditivePreconditioner& Bhat) {
    const TwoLevelPreconditioner& B = *Bhat.base;
    const DenseMatrix Ad = DenseMatrix::from_sparse(B.A);
    const DenseMatrix M = matmul(matmul(Ad, additive_matrix(Bhat)), Ad);
    auto [lo, hi] = gen_eig_extremes(M, Ad, B.kernel);
    if (lo <= 0.0)
        throw std::runtime_error("additive_condition: Bhat A not positive definite "
                                 "on the complement of the kernel");
    return hi / lo;
}

PcgResult pcg(const SparseMatrix& A, const std::vector<double>& b,
              const Preconditioner& precond, double tol, int maxit,
              const std::vector<std::vector<double>>& kernel) {
    const int n = A.n_rows;
    PcgResult res;
    res.x.assign(n, 0.0);
    std::vector<double> r = b;
    project_out(kernel, r);
    const double bnorm = std::sqrt(norm2(r));
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    std::vector<double> z = precond(r);
    project_out(kernel, z);
    std::vector<double> p = z;
    double rz = dot(r, z);
    for (int it = 0; it < maxit; ++it) {
        const std::vector<double> Ap = spmv(A, p);
        const double pAp = dot(p, Ap);
        if (pAp <= 1e-300)
            throw std::runtime_error("pcg: breakdown, p'Ap = " + std::to_string(pAp));
        const double alpha = rz / pAp;
        axpy(alpha, p, res.x);
        axpy(-alpha, Ap, r);
        project_out(kernel, r);
        const double relres = std::sqrt(norm2(r)) / bnorm;
        res.residual_history.push_back(relres);
        res.iterations = it + 1;
        if (relres <= tol) {
            res.converged = true;
            break;
        }
        z = precond(r);
        project_out(kernel, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    project_out(kernel, res.x);
    return res;
}

Pipeline build_pipeline(const SparseMatrix& A, const CertifyConfig& cfg) {
    Pipeline pipe;
    pipe.A = A;
    pipe.config = cfg;
    const MMatrixVerdict verdict = is_m_matrix(A);
    if (verdict.ok) {
        pipe.AM = A;
        pipe.used_a_plus = false;
    } else {
        pipe.AM = build_a_plus(A);
        pipe.used_a_plus = true;
    }
    auto [S, A_S] = build_strength(pipe.AM, cfg.theta);
    pipe.S = std::move(S);
    pipe.A_S = std::move(A_S);
    pipe.split = mis_coarsen(pipe.S);
    pipe.subdomains = build_subdomains(pipe.split, pipe.S, cfg.scheme);
    pipe.P = interpolation_weights(pipe.A_S, pipe.split, pipe.subdomains, cfg.scheme);
    pipe.mu = compute_mu(pipe.A_S, pipe.subdomains);
    pipe.B = build_two_level(A, pipe.P, cfg.smoother, cfg.neumann);
    return pipe;
}

ConvergenceCertificate certify(const Pipeline& pipe) {
    const TwoLevelPreconditioner& B = pipe.B;
    const int n = B.A.n_rows;
    if (n > kDenseThreshold)
        throw std::runtime_error("certify: problem above the dense certificate threshold");

    ConvergenceCertificate cert;
    const DenseMatrix Ad = DenseMatrix::from_sparse(B.A);
    const DeflatedFactor F = factor_deflated(Ad, B.kernel);
    const DenseMatrix Pd = DenseMatrix::from_sparse(B.P.P);

    // ||E||_A^2.
    {
        const DenseMatrix R = smoother_matrix(B.smoother, B.A);
        const DenseMatrix Acp =
            pseudo_inverse_dense(DenseMatrix::from_sparse(B.A_c), B.coarse_kernel);
        const DenseMatrix Pic = matmul(matmul(Pd, Acp), matmul(Pd.transpose(), Ad));
        const DenseMatrix I = DenseMatrix::identity(n);
        const DenseMatrix E = matmul(I - matmul(R, Ad), I - Pic);
        cert.normE2 = pencil_extremes(F, matmul(matmul(E.transpose(), Ad), E)).second;
    }

    // K(V_c) and K(V_c, D). The congruent matrix S = D^{1/2} Rbar D^{1/2}
    // yields c_D/c^D (reciprocal extremes) and Rbar^{-1} (eigendecomposition)
    // from a single eigensolve.
    {
        const DenseMatrix Rb = rbar(B.smoother, B.A);
        const std::vector<double> d = B.A.diagonal();
        std::vector<double> sq(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d[i] <= 0.0)
                throw std::runtime_error("certify: nonpositive diagonal entry");
            sq[i] = std::sqrt(d[i]);
        }
        DenseMatrix S(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) S.at(i, j) = sq[i] * Rb.at(i, j) * sq[j];
        SymEigenResult eig = sym_eig_dense(S);
        if (eig.eigenvalues.front() <= 0.0)
            throw std::runtime_error(
                "certify: Rbar is not SPD (eigenvalue " +
                std::to_string(eig.eigenvalues.front()) +
                "); the smoother does not contract in the A-norm, reduce the damping");
        cert.c_D = 1.0 / eig.eigenvalues.back();
        cert.c_up = 1.0 / eig.eigenvalues.front();

        // Rbar^{-1} = D^{1/2} V Lambda^{-1} V^T D^{1/2}.
        DenseMatrix U = eig.eigenvectors;
        for (int k = 0; k < n; ++k) {
            const double f = 1.0 / std::sqrt(eig.eigenvalues[k]);
            for (int i = 0; i < n; ++i) U.at(i, k) *= sq[i] * f;
        }
        const DenseMatrix M = matmul(U, U.transpose());
        cert.K_Vc = pencil_extremes(F, complement_residual_form(Pd, M)).second;
        const DenseMatrix D = diag_matrix(d);
        cert.K_VcD = pencil_extremes(F, complement_residual_form(Pd, D)).second;
    }
    cert.mu_c = pipe.mu.mu_c;
    cert.C_o = pipe.subdomains.c_o;

    // Additive preconditioner condition number and its theoretical bound.
    const AdditivePreconditioner Bhat = build_additive(B, pipe.A_S, pipe.subdomains);
    {
        const DenseMatrix M = matmul(matmul(Ad, additive_matrix(Bhat)), Ad);
        auto [lo, hi] = pencil_extremes(F, M);
        if (lo <= 0.0)
            throw std::runtime_error("certify: Bhat A not positive definite");
        cert.kappa_additive = hi / lo;
    }
    const double Co = static_cast<double>(cert.C_o);
    const bool mu_finite = std::isfinite(cert.mu_c);
    const double mu0sq =
        mu_finite ? Co / cert.mu_c + 2.0 * cert.c_up * Co * Co + 2.0
                  : 2.0 * cert.c_up * Co * Co + 2.0;
    const double mu1sq = 2.0 * std::max(cert.c_up * Co, 1.0);
    cert.kappa_bound = mu0sq * mu1sq;

    cert.theoretical_rate_bound =
        mu_finite ? 1.0 - cert.mu_c / (Co * Co * cert.c_up) : 0.0;

    auto add_clause = [&](const std::string& name, bool pass, double lhs, double rhs) {
        cert.clauses.push_back({name, pass, lhs, rhs});
    };

    // (i) exact rate identity.
    {
        const double expected = cert.K_Vc > 1e-12 ? 1.0 - 1.0 / cert.K_Vc : 0.0;
        const double slack = 1e-8 * std::max(1.0, cert.K_Vc);
        add_clause("identity", std::abs(cert.normE2 - expected) <= slack, cert.normE2,
                   expected);
    }
    // (ii) diagonal sandwich.
    {
        const double slack = 1e-10 * std::max(1.0, cert.K_Vc);
        const double lo = cert.c_D * cert.K_VcD, hi = cert.c_up * cert.K_VcD;
        add_clause("sandwich", lo - slack <= cert.K_Vc && cert.K_Vc <= hi + slack, lo, hi);
    }
    // (iii) local-constant rate bound.
    add_clause("rate_bound", cert.normE2 <= cert.theoretical_rate_bound + 1e-10,
               cert.normE2, cert.theoretical_rate_bound);
    // (iv) additive condition bound.
    add_clause("additive_bound", cert.kappa_additive <= cert.kappa_bound + 1e-10,
               cert.kappa_additive, cert.kappa_bound);
    // (v) coarse approximation bound (the K(V_c,D) pencil against C_o^2/mu_c).
    {
        const double rhs =
            mu_finite ? Co * Co / cert.mu_c : 0.0;
        const bool pass = mu_finite ? cert.K_VcD <= rhs + 1e-10 : cert.K_VcD <= 1e-10;
        add_clause("approximation", pass, cert.K_VcD, rhs);
    }

    cert.valid = true;
    for (const ClauseResult& c : cert.clauses) cert.valid = cert.valid && c.pass;
    return cert;
}

void write_certificate_json(const ConvergenceCertificate& cert, const Pipeline& pipe,
                            const std::string& path,
                            const std::string& problem_descriptor) {
    nlohmann::json j;
    j["normE2"] = cert.normE2;
    j["K_Vc"] = cert.K_Vc;
    j["K_VcD"] = cert.K_VcD;
    j["c_D"] = cert.c_D;
    j["c_up"] = cert.c_up;
    j["mu_c"] = std::isfinite(cert.mu_c) ? nlohmann::json(cert.mu_c)
                                         : nlohmann::json("inf");
    j["C_o"] = cert.C_o;
    j["theoretical_rate_bound"] = cert.theoretical_rate_bound;
    j["kappa_additive"] = cert.kappa_additive;
    j["kappa_bound"] = cert.kappa_bound;
    j["valid"] = cert.valid;
    nlohmann::json clauses = nlohmann::json::array();
    for (const ClauseResult& c : cert.clauses)
        clauses.push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"lhs", c.lhs},
                           {"rhs", c.rhs}});
    j["clauses"] = std::move(clauses);
    nlohmann::json cfg;
    cfg["theta"] = pipe.config.theta;
    cfg["scheme"] = scheme_name(pipe.config.scheme);
    cfg["smoother"] = smoother_name(pipe.config.smoother.kind);
    cfg["omega"] = pipe.config.smoother.omega;
    cfg["neumann"] = pipe.config.neumann;
    if (!problem_descriptor.empty()) cfg["problem"] = problem_descriptor;
    j["config"] = std::move(cfg);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

std::string sweep_csv_header() {
    return "eps,h,theta,normE2,K_Vc,K_VcD,mu_c,C_o,kappa,iters";
}

std::string sweep_csv_row(const SweepRow& row) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%.10g,%d",
                  row.eps, row.h, row.theta, row.cert.normE2, row.cert.K_Vc,
                  row.cert.K_VcD, row.cert.mu_c, row.cert.C_o, row.cert.kappa_additive,
                  row.iters);
    return buf;
}

}  // namespace amg
