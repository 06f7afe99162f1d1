#ifndef AMG_COARSEN_HPP
#define AMG_COARSEN_HPP

#include <string>
#include <vector>

#include "amg/sparse.hpp"

namespace amg {

enum class Scheme { direct, standard };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct StrongPair {
    int i, j;        // i < j
    double strength; // s_c(i,j) > theta
};

/// Strong-connection graph: pair (i,j) kept when s_c(i,j) > theta.
struct StrengthGraph {
    int n = 0;
    double theta = 0.0;
    std::vector<StrongPair> pairs;
    std::vector<std::vector<int>> adj;  // sorted strong neighbors per vertex
    std::vector<int> flagged;           // rows where s_c was undefined (no
                                        // negative off-diagonals); strength 0
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

/// s_c(i,j) = a_ij / max(min_k a_ik, min_k a_jk), minima over off-diagonal
/// stored entries. Rows without a negative off-diagonal get strength 0;
/// `flagged` (if given) is set when that convention fires.
double strength_function(const SparseMatrix& A, int i, int j, bool* flagged = nullptr);

/// Strength graph plus the filtered matrix A_S: the graph Laplacian over
/// strong edges with weights -a_ij (zero row sums exactly).
std::pair<StrengthGraph, SparseMatrix> build_strength(const SparseMatrix& A, double theta);

struct CfSplitting {
    int n = 0;
    std::vector<int> coarse;     // ascending; column order of the coarse space
    std::vector<int> fine;       // ascending
    std::vector<int> coarse_id;  // global index -> coarse column, -1 for fine
    int J() const { return static_cast<int>(coarse.size()); }
};

/// Greedy MIS over the strength graph: vertices visited in descending strong
/// degree (ascending index on ties), selected coarse iff no already-selected
/// strong neighbor. Isolated vertices become coarse. Deterministic.
CfSplitting mis_coarsen(const StrengthGraph& S);

/// Interpolation neighbors s_j: direct = strong neighbors of j; standard adds
/// the strong neighbors' strong neighbors (minus j). Sorted ascending.
std::vector<int> interpolation_neighbors(const StrengthGraph& S, Scheme scheme, int j);

struct Subdomain {
    int j = -1;               // coarse vertex (global index)
    std::vector<int> members; // members[0] == j, the rest F ∩ s_j ascending
    int n() const { return static_cast<int>(members.size()); }
};

struct SubdomainSet {
    std::vector<Subdomain> subdomains;  // one per coarse point, coarse order
    int c_o = 0;                        // max_j |{l : Ω_l ∩ Ω_j ≠ ∅}|
};

/// Ω_j = {j} ∪ (F ∩ s_j) per coarse point, plus the overlap constant.
/// Errors when some fine point lands in no subdomain (coarsen again with the
/// standard scheme or a smaller theta).
SubdomainSet build_subdomains(const CfSplitting& split, const StrengthGraph& S,
                              Scheme scheme);

void write_splitting_json(const CfSplitting& split, double theta, Scheme scheme,
                          const std::string& path);
CfSplitting read_splitting_json(const std::string& path, double* theta = nullptr,
                                Scheme* scheme = nullptr);
void write_subdomains_json(const SubdomainSet& set, const std::string& path);

}  // namespace amg

#endif
