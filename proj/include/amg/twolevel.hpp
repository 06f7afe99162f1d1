#ifndef AMG_TWOLEVEL_HPP
#define AMG_TWOLEVEL_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "amg/coarse_space.hpp"
#include "amg/coarsen.hpp"
#include "amg/dense.hpp"
#include "amg/sparse.hpp"

namespace amg {

enum class SmootherKind { jacobi, gauss_seidel, sym_gauss_seidel };

std::string smoother_name(SmootherKind k);
SmootherKind smoother_from_name(const std::string& name);

struct Smoother {
    SmootherKind kind = SmootherKind::sym_gauss_seidel;
    double omega = 2.0 / 3.0;  // jacobi damping
};

/// One smoothing application x = R r. Jacobi: omega*D^{-1}; Gauss-Seidel:
/// forward substitution with the lower triangle; sym-GS: forward then backward
/// sweep, i.e. R = (D+U)^{-1} D (D+L)^{-1}.
std::vector<double> smooth_apply(const Smoother& s, const SparseMatrix& A,
                                 const std::vector<double>& r);

/// R as a dense matrix (columns = smoothed unit vectors).
DenseMatrix smoother_matrix(const Smoother& s, const SparseMatrix& A);

/// Symmetrization for a single post-smoothing step: Rbar = R^T + R - R^T A R.
DenseMatrix rbar(const Smoother& s, const SparseMatrix& A);

/// Rbar^{-1} via eigendecomposition; errors when Rbar is not SPD (the smoother
/// does not contract in the A-norm — reduce the damping).
DenseMatrix rbar_inv(const Smoother& s, const SparseMatrix& A);

struct TwoLevelPreconditioner {
    SparseMatrix A;
    Prolongation P;
    SparseMatrix Pt;   // cached transpose
    SparseMatrix A_c;  // Galerkin P^T A P
    std::vector<std::vector<double>> kernel;         // orthonormal basis of N(A)
    std::vector<std::vector<double>> coarse_kernel;  // basis of N(A_c)
    Smoother smoother;
};

/// Assembles the Galerkin coarse operator and kernel bases. `neumann` selects
/// the constant kernel (fine and coarse); otherwise both kernels are empty.
TwoLevelPreconditioner build_two_level(const SparseMatrix& A, Prolongation P,
                                       const Smoother& s, bool neumann);

/// Algorithm-1 cycle: coarse-grid correction then one post-smoothing step.
std::vector<double> two_level_apply(const TwoLevelPreconditioner& B,
                                    const std::vector<double>& g);

/// Symmetrized cycle (pre-smoothing with R^T, coarse correction, post-smoothing
/// with R); this is the SPD operator handed to PCG.
std::vector<double> two_level_apply_symmetrized(const TwoLevelPreconditioner& B,
                                                const std::vector<double>& g);

/// ||E||_A^2 with E = (I - R A)(I - Pi_c): max eigenvalue of the pencil
/// (E^T A E, A) deflated on N(A). An empty coarse space (J = 0) measures the
/// smoother alone.
double error_propagation_norm(const TwoLevelPreconditioner& B);

/// K(V_c): worst-case best approximation from range(P) in the Rbar^{-1} norm,
/// relative to the A-norm; K(V_c,D) is the same with the diagonal norm.
double k_vc(const TwoLevelPreconditioner& B);
double k_vc_d(const TwoLevelPreconditioner& B);

/// (c_D, c^D): extreme generalized eigenvalues of (Rbar^{-1}, D), computed as
/// the reciprocal extremes of D^{1/2} Rbar D^{1/2}.
std::pair<double, double> norm_equivalence_constants(const Smoother& s,
                                                     const SparseMatrix& A);

struct AdditivePreconditioner {
    const TwoLevelPreconditioner* base = nullptr;
    std::vector<double> local_scaling;  // sum_j p_ij^2 / D_ii per row
};

/// Bhat = P A_c^+ P^T + sum_j Pi_j D_j^{-1} Pi_j^T; the subdomain part reduces
/// to a diagonal because each Pi_j extends along its own weights.
AdditivePreconditioner build_additive(const TwoLevelPreconditioner& B,
                                      const SparseMatrix& A_S,
                                      const SubdomainSet& set);

std::vector<double> additive_apply(const AdditivePreconditioner& Bhat,
                                   const std::vector<double>& g);

DenseMatrix additive_matrix(const AdditivePreconditioner& Bhat);

/// kappa(Bhat A) on the complement of N(A): extreme ratio of the pencil
/// (A Bhat A, A).
double additive_condition(const AdditivePreconditioner& Bhat);

struct PcgResult {
    std::vector<double> x;
    int iterations = 0;
    std::vector<double> residual_history;  // relative residuals per iteration
    bool converged = false;
};

using Preconditioner = std::function<std::vector<double>(const std::vector<double>&)>;

PcgResult pcg(const SparseMatrix& A, const std::vector<double>& b,
              const Preconditioner& precond, double tol, int maxit,
              const std::vector<std::vector<double>>& kernel);

struct CertifyConfig {
    double theta = 0.25;
    Scheme scheme = Scheme::standard;
    Smoother smoother{SmootherKind::sym_gauss_seidel, 2.0 / 3.0};
    bool neumann = false;
};

struct Pipeline {
    SparseMatrix A;
    SparseMatrix AM;   // A itself when it already passes is_m_matrix, else A_+
    bool used_a_plus = false;
    StrengthGraph S;
    SparseMatrix A_S;
    CfSplitting split;
    SubdomainSet subdomains;
    Prolongation P;
    MuReport mu;
    TwoLevelPreconditioner B;
    CertifyConfig config;
};

Pipeline build_pipeline(const SparseMatrix& A, const CertifyConfig& cfg);

struct ClauseResult {
    std::string name;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct ConvergenceCertificate {
    double normE2 = 0.0;
    double K_Vc = 0.0;
    double K_VcD = 0.0;
    double c_D = 0.0;
    double c_up = 0.0;
    double mu_c = 0.0;
    int C_o = 0;
    double theoretical_rate_bound = 0.0;  // 1 - mu_c / (C_o^2 c^D)
    double kappa_additive = 0.0;
    double kappa_bound = 0.0;             // (mu0~ mu1~)^2 from the measured constants
    std::vector<ClauseResult> clauses;
    bool valid = false;
};

/// Computes all certificate quantities and asserts the five convergence
/// clauses: the exact-rate identity, the diagonal sandwich, the local-constant
/// rate bound, the additive condition bound, and the coarse approximation
/// bound. Failures mark the certificate invalid with both numeric sides.
ConvergenceCertificate certify(const Pipeline& pipe);

void write_certificate_json(const ConvergenceCertificate& cert, const Pipeline& pipe,
                            const std::string& path,
                            const std::string& problem_descriptor = "");

struct SweepRow {
    double eps = 0.0;
    double h = 0.0;
    double theta = 0.0;
    ConvergenceCertificate cert;
    int iters = 0;
};

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

}  // namespace amg

#endif
