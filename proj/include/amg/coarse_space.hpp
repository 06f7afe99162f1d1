#ifndef AMG_COARSE_SPACE_HPP
#define AMG_COARSE_SPACE_HPP

#include <cstdint>
#include <vector>

#include "amg/coarsen.hpp"
#include "amg/dense.hpp"
#include "amg/mmatrix.hpp"
#include "amg/sparse.hpp"

namespace amg {

/// Local form over one subdomain: dense Laplacian over the edges interior to
/// Omega_j with the matching slice of the global (filtered) diagonal.
struct LocalProblem {
    int j = -1;                  // coarse vertex, global numbering
    std::vector<int> members;    // members[0] == j
    DenseMatrix A;               // n_j x n_j, A*1 = 0
    std::vector<double> D;       // (D_j)_ii = D_{m_i m_i} of A_S
    bool connected = true;       // local edge graph connectivity

    int n() const { return static_cast<int>(members.size()); }
};

LocalProblem local_operator(const SparseMatrix& A_S, const Subdomain& omega);

/// Second-smallest eigenvalue of D_j^{-1/2} A_j D_j^{-1/2}. Singleton
/// subdomains give +infinity (the coarse space is the whole local space);
/// disconnected local graphs give 0.
double local_mu(const LocalProblem& lp);

struct MuReport {
    std::vector<double> mu;      // per coarse point, coarse order
    double mu_c = 0.0;           // min over non-singleton subdomains
    int argmin = -1;             // coarse column attaining mu_c
    std::vector<int> singletons;     // coarse columns with n_j = 1 (mu = +inf)
    std::vector<int> disconnected;   // coarse columns with mu_j = 0
};

MuReport compute_mu(const SparseMatrix& A_S, const SubdomainSet& set);

struct Prolongation {
    SparseMatrix P;  // n x J; column c supported exactly on Omega_{coarse[c]}
};

/// Partition-of-unity prolongation. Coarse rows are unit rows; fine row i
/// distributes weight over the subdomains containing i, proportionally to the
/// strong-connection weight toward each coarse point (direct term -(A_S)_ij,
/// plus for the standard scheme one-intermediate-fine-point path terms
/// (-(A_S)_ik)(-(A_S)_kj)/(A_S)_kk), then normalizes the row to sum 1.
Prolongation interpolation_weights(const SparseMatrix& A_S, const CfSplitting& split,
                                   const SubdomainSet& set, Scheme scheme);

struct PartitionOfUnityVerdict {
    bool ok = false;
    std::vector<int> bad_rows;
};

/// Rebuilds sum_j Pi_j chi_j from the prolongation weights and checks it is
/// the identity to 1e-14 componentwise (equivalently: row sums of P are 1).
PartitionOfUnityVerdict partition_of_unity_check(const Prolongation& P,
                                                 const SubdomainSet& set, int n);

struct OverlapEnergyReport {
    double max_restriction_ratio = 0.0;  // sum_j |chi_j v|_{A_j}^2 / |v|_{A_S}^2
    double max_assembly_ratio = 0.0;     // |sum_j Pi_j v_j|_D^2 / sum_j |v_j|_{D_j}^2
    bool ok = false;                     // both within C_o + 1e-10
};

OverlapEnergyReport overlap_energy_check(const SparseMatrix& A_S, const SubdomainSet& set,
                                         const Prolongation& P, int trials,
                                         std::uint64_t seed);

/// mu * n^2 * d with mu = sum w_j^2 and d the graph diameter (BFS). The graph
/// must be connected and carry unit weights; w must be a nonnegative
/// probability vector.
double poincare_bound(const GraphForm& graph, const std::vector<double>& w);

/// Sharp constants of c_L h^{d-2} <A_L v, v> <= <A_j v, v> <= c^L h^{d-2} <A_L v, v>
/// with A_L the unit-weight Laplacian on the local edges: extreme generalized
/// eigenvalues of the deflated pencil (A_j, h^{d-2} A_L).
std::pair<double, double> laplacian_equivalence(const LocalProblem& lp, double h, int d);

}  // namespace amg

#endif
