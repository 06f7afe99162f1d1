#ifndef AMG_MMATRIX_HPP
#define AMG_MMATRIX_HPP

#include <string>
#include <vector>

#include "amg/sparse.hpp"

namespace amg {

struct GraphEdge {
    int i, j;        // canonical i < j
    double weight;   // omega_e
};

/// Weighted graph Laplacian form b(u,v) = sum_e omega_e (delta_e u)(delta_e v).
/// Mixed-sign weights are allowed, but the form must be positive semidefinite
/// with kernel exactly span{1}; this is verified by an eigencheck on creation.
struct GraphForm {
    int k = 0;
    std::vector<GraphEdge> edges;

    // Canonicalizes (i<j, duplicate weights summed) and runs the eigencheck.
    static GraphForm create(int k, std::vector<GraphEdge> edges);

    SparseMatrix matrix() const;
};

struct MMatrixViolation {
    enum Kind { nonpositive_diagonal, positive_offdiagonal, indefinite } kind;
    int i = -1, j = -1;
    double value = 0.0;
    std::string describe() const;
};

struct MMatrixVerdict {
    bool ok = false;
    std::vector<MMatrixViolation> violations;
};

/// Sign conditions plus semidefiniteness (relaxed M-matrix: singular allowed).
MMatrixVerdict is_m_matrix(const SparseMatrix& A);

/// The diagonal-compensation filter: positive off-diagonals are moved onto the
/// diagonal and zeroed, preserving exact zero row sums. Requires Neumann
/// (zero-row-sum) input.
SparseMatrix build_a_plus(const SparseMatrix& A);

struct PositivitySplit {
    std::vector<GraphEdge> positive_edges;
    std::vector<GraphEdge> negative_edges;
    double omega_minus = 0.0;    // max |omega_e| over negative edges
    double lambda_b = 0.0;       // second-smallest eigenvalue of the form
    double ck = 0.0;             // 2(k-1)
    bool positive_part_connected = true;
};

PositivitySplit split_form(const GraphForm& g);

struct MMrelReport {
    PositivitySplit split;
    double measured_form_lower = 0.0;   // min eig of pencil (b_+, b)
    double measured_form_upper = 0.0;   // max eig of pencil (b_+, b)
    double form_bound = 0.0;            // 1 + c(k) omega_- / lambda_b
    double measured_diag_upper = 0.0;   // max_i (D_b^+)_ii / (D_b)_ii
    bool diag_lower_ok = false;         // (D_b)_ii <= (D_b^+)_ii entrywise
    bool ok = false;
};

/// Checks b <= b_+ <= (1 + c(k) omega_-/lambda_b) b and the matching diagonal
/// inequalities via exact pencil extremes; slack 1e-10.
MMrelReport verify_mmrel_bounds(const GraphForm& g);

struct RelativeCheckResult {
    double form_const = 0.0;   // max generalized eigenvalue of (AM, A)
    double diag_const = 0.0;   // max_i D_ii / (D_M)_ii
    bool ok = false;
};

/// Quantifies AM as an M-matrix relative of A: energy domination constant and
/// diagonal ratio. Errors when N(AM) is not contained in N(A).
RelativeCheckResult relative_check(const SparseMatrix& A, const SparseMatrix& AM);

/// Seeded generator of connected mixed-sign PSD graph forms used by the Lemma
/// verification trials: negative edges are scaled so the form's algebraic
/// connectivity keeps at least 10% of its positive-only value.
GraphForm random_psd_graph(int k, std::uint64_t seed);

}  // namespace amg

#endif
