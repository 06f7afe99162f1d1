#include "amg/mmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

#include "amg/dense.hpp"
#include "amg/rng.hpp"

namespace amg {

namespace {

SparseMatrix laplacian_from_edges(int k, const std::vector<GraphEdge>& edges) {
    std::vector<double> diag(k, 0.0);
    std::vector<Triplet> trip;
    for (const GraphEdge& e : edges) {
        trip.push_back({e.i, e.j, -e.weight});
        trip.push_back({e.j, e.i, -e.weight});
        diag[e.i] += e.weight;
        diag[e.j] += e.weight;
    }
    for (int i = 0; i < k; ++i) trip.push_back({i, i, diag[i]});
    return sparse_from_triplets(k, k, std::move(trip), true);
}

std::vector<double> constant_kernel(int k) {
    return std::vector<double>(k, 1.0 / std::sqrt(static_cast<double>(k)));
}

}  // namespace

GraphForm GraphForm::create(int k, std::vector<GraphEdge> raw) {
    if (k < 2) throw std::runtime_error("GraphForm: need at least two vertices");
    std::map<std::pair<int, int>, double> canon;
    for (GraphEdge e : raw) {
        if (e.i == e.j) throw std::runtime_error("GraphForm: self-loop");
        if (e.i < 0 || e.j < 0 || e.i >= k || e.j >= k)
            throw std::runtime_error("GraphForm: vertex index out of range");
        if (e.i > e.j) std::swap(e.i, e.j);
        canon[{e.i, e.j}] += e.weight;
    }
    GraphForm g;
    g.k = k;
    for (const auto& [key, w] : canon) g.edges.push_back({key.first, key.second, w});

    // PSD with kernel exactly span{1}.
    SymEigenResult eig = sym_eig_dense(DenseMatrix::from_sparse(g.matrix()));
    const double scale = std::max(1.0, std::abs(eig.eigenvalues.back()));
    if (eig.eigenvalues.front() < -1e-12 * scale)
        throw std::runtime_error("GraphForm: form is not positive semidefinite");
    if (eig.eigenvalues[1] <= 1e-12 * scale)
        throw std::runtime_error("GraphForm: kernel larger than span{1} (graph form singular)");
    return g;
}

SparseMatrix GraphForm::matrix() const { return laplacian_from_edges(k, edges); }

std::string MMatrixViolation::describe() const {
    switch (kind) {
        case nonpositive_diagonal:
            return "diagonal entry (" + std::to_string(i) + "," + std::to_string(i) +
                   ") = " + std::to_string(value) + " not positive";
        case positive_offdiagonal:
            return "off-diagonal entry (" + std::to_string(i) + "," + std::to_string(j) +
                   ") = " + std::to_string(value) + " positive";
        case indefinite:
            return "matrix indefinite, eigenvalue " + std::to_string(value);
    }
    return "";
}

MMatrixVerdict is_m_matrix(const SparseMatrix& A) {
    if (!A.is_value_symmetric())
        throw std::runtime_error("is_m_matrix: matrix not symmetric");
    MMatrixVerdict v;
    for (int i = 0; i < A.n_rows; ++i) {
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            const int j = A.col_indices[k];
            if (i == j) {
                if (A.values[k] <= 0.0)
                    v.violations.push_back(
                        {MMatrixViolation::nonpositive_diagonal, i, i, A.values[k]});
            } else if (A.values[k] > 1e-14) {
                v.violations.push_back(
                    {MMatrixViolation::positive_offdiagonal, i, j, A.values[k]});
            }
        }
        if (A.at(i, i) == 0.0 && A.row_offsets[i] == A.row_offsets[i + 1])
            v.violations.push_back({MMatrixViolation::nonpositive_diagonal, i, i, 0.0});
    }
    DenseMatrix Ad = DenseMatrix::from_sparse(A);
    SymEigenResult eig = sym_eig_dense(Ad);
    if (eig.eigenvalues.front() < -1e-12 * Ad.frobenius_norm())
        v.violations.push_back({MMatrixViolation::indefinite, -1, -1, eig.eigenvalues.front()});
    v.ok = v.violations.empty();
    return v;
}

SparseMatrix build_a_plus(const SparseMatrix& A) {
    if (!A.is_value_symmetric())
        throw std::runtime_error("build_a_plus: matrix not symmetric");
    for (int i = 0; i < A.n_rows; ++i) {
        double row_sum = 0.0;
        double scale = 1.0;
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            row_sum += A.values[k];
            scale = std::max(scale, std::abs(A.values[k]));
        }
        if (std::abs(row_sum) > 1e-12 * scale)
            throw std::runtime_error("build_a_plus: nonzero row sum in row " +
                                     std::to_string(i) +
                                     " (construction requires the Neumann form)");
    }
    std::vector<Triplet> trip;
    for (int i = 0; i < A.n_rows; ++i) {
        double diag = 0.0;
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            const int j = A.col_indices[k];
            if (j == i) continue;
            const double v = std::min(A.values[k], 0.0);
            if (v != 0.0) {
                trip.push_back({i, j, v});
                diag -= v;
            }
        }
        trip.push_back({i, i, diag});
    }
    return sparse_from_triplets(A.n_rows, A.n_cols, std::move(trip), true);
}

PositivitySplit split_form(const GraphForm& g) {
    PositivitySplit s;
    for (const GraphEdge& e : g.edges) {
        if (e.weight > 0.0)
            s.positive_edges.push_back(e);
        else {
            s.negative_edges.push_back(e);
            s.omega_minus = std::max(s.omega_minus, std::abs(e.weight));
        }
    }
    s.ck = 2.0 * (g.k - 1);
    SymEigenResult eig = sym_eig_dense(DenseMatrix::from_sparse(g.matrix()));
    s.lambda_b = eig.eigenvalues[1];

    // Connectivity of the positive-part graph (informational flag).
    std::vector<std::vector<int>> adj(g.k);
    for (const GraphEdge& e : s.positive_edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<char> seen(g.k, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int w : adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                q.push(w);
            }
    }
    s.positive_part_connected = (count == g.k);
    return s;
}

MMrelReport verify_mmrel_bounds(const GraphForm& g) {
    MMrelReport rep;
    rep.split = split_form(g);
    rep.form_bound = 1.0 + rep.split.ck * rep.split.omega_minus / rep.split.lambda_b;

    const SparseMatrix Ab = g.matrix();
    const SparseMatrix Abp = laplacian_from_edges(g.k, rep.split.positive_edges);

    const std::vector<std::vector<double>> kernel{constant_kernel(g.k)};
    auto [lo, hi] = gen_eig_extremes(DenseMatrix::from_sparse(Abp),
                                     DenseMatrix::from_sparse(Ab), kernel);
    rep.measured_form_lower = lo;
    rep.measured_form_upper = hi;

    const std::vector<double> db = Ab.diagonal();
    const std::vector<double> dbp = Abp.diagonal();
    rep.diag_lower_ok = true;
    rep.measured_diag_upper = 0.0;
    bool diag_upper_ok = true;
    for (int i = 0; i < g.k; ++i) {
        if (db[i] > dbp[i] + 1e-10) rep.diag_lower_ok = false;
        rep.measured_diag_upper = std::max(rep.measured_diag_upper, dbp[i] / db[i]);
        if (dbp[i] > rep.form_bound * db[i] + 1e-10) diag_upper_ok = false;
    }
    rep.ok = rep.diag_lower_ok && diag_upper_ok && rep.measured_form_lower >= 1.0 - 1e-10 &&
             rep.measured_form_upper <= rep.form_bound + 1e-10;
    return rep;
}

RelativeCheckResult relative_check(const SparseMatrix& A, const SparseMatrix& AM) {
    if (A.n_rows != AM.n_rows || A.n_cols != AM.n_cols)
        throw std::runtime_error("relative_check: dimension mismatch");
    const DenseMatrix Ad = DenseMatrix::from_sparse(A);
    const DenseMatrix AMd = DenseMatrix::from_sparse(AM);

    // Kernel of A from its eigendecomposition.
    SymEigenResult eigA = sym_eig_dense(Ad);
    const double ascale = std::max(Ad.frobenius_norm(), 1e-300);
    std::vector<std::vector<double>> kernel;
    for (int k = 0; k < Ad.n_rows; ++k) {
        if (std::abs(eigA.eigenvalues[k]) <= 1e-12 * ascale) {
            std::vector<double> v(Ad.n_rows);
            for (int i = 0; i < Ad.n_rows; ++i) v[i] = eigA.eigenvectors.at(i, k);
            kernel.push_back(std::move(v));
        }
    }
    // N(AM) must sit inside N(A); otherwise the pencil constant is meaningless.
    SymEigenResult eigM = sym_eig_dense(AMd);
    const double mscale = std::max(AMd.frobenius_norm(), 1e-300);
    for (int k = 0; k < AMd.n_rows; ++k) {
        if (std::abs(eigM.eigenvalues[k]) <= 1e-12 * mscale) {
            std::vector<double> v(AMd.n_rows);
            for (int i = 0; i < AMd.n_rows; ++i) v[i] = eigM.eigenvectors.at(i, k);
            const std::vector<double> Av = Ad.apply(v);
            if (norm2(Av) > 1e-10 * ascale)
                throw std::runtime_error("relative_check: kernel of AM not contained in kernel of A");
        }
    }

    RelativeCheckResult r;
    auto [lo, hi] = gen_eig_extremes(AMd, Ad, kernel);
    (void)lo;
    r.form_const = hi;

    const std::vector<double> d = A.diagonal();
    const std::vector<double> dm = AM.diagonal();
    r.diag_const = 0.0;
    for (int i = 0; i < A.n_rows; ++i) {
        if (dm[i] <= 0.0)
            throw std::runtime_error("relative_check: AM diagonal not positive at " +
                                     std::to_string(i));
        r.diag_const = std::max(r.diag_const, d[i] / dm[i]);
    }
    r.ok = std::isfinite(r.form_const) && std::isfinite(r.diag_const);
    return r;
}

GraphForm random_psd_graph(int k, std::uint64_t seed) {
    Rng rng(seed);
    std::map<std::pair<int, int>, double> pos;
    // Random spanning tree keeps the positive part connected.
    for (int v = 1; v < k; ++v) {
        const int u = rng.uniform_int(0, v - 1);
        pos[{std::min(u, v), std::max(u, v)}] = rng.uniform(0.5, 1.5);
    }
    const int extra = rng.uniform_int(0, k);
    for (int e = 0; e < extra; ++e) {
        const int u = rng.uniform_int(0, k - 1);
        const int v = rng.uniform_int(0, k - 1);
        if (u == v) continue;
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        if (!pos.count(key)) pos[key] = rng.uniform(0.5, 1.5);
    }

    std::vector<GraphEdge> base;
    for (const auto& [key, w] : pos) base.push_back({key.first, key.second, w});
    SymEigenResult eig0 = sym_eig_dense(DenseMatrix::from_sparse(laplacian_from_edges(k, base)));
    const double lambda_pos = eig0.eigenvalues[1];

    // Candidate negative edges on pairs not already used.
    std::vector<GraphEdge> neg;
    const int wanted = std::max(1, k / 3);
    for (int attempt = 0; attempt < 20 && static_cast<int>(neg.size()) < wanted; ++attempt) {
        const int u = rng.uniform_int(0, k - 1);
        const int v = rng.uniform_int(0, k - 1);
        if (u == v) continue;
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        if (pos.count(key)) continue;
        bool dup = false;
        for (const GraphEdge& e : neg)
            if (e.i == key.first && e.j == key.second) dup = true;
        if (dup) continue;
        neg.push_back({key.first, key.second, -rng.uniform(0.5, 1.0)});
    }

    // Scale the negative weights so the algebraic connectivity keeps at least
    // 10% of its positive-only value (bisection, deterministic).
    auto lambda2_at = [&](double s) {
        std::vector<GraphEdge> all = base;
        for (GraphEdge e : neg) {
            e.weight *= s;
            all.push_back(e);
        }
        SymEigenResult eig =
            sym_eig_dense(DenseMatrix::from_sparse(laplacian_from_edges(k, all)));
        return eig.eigenvalues[1];
    };
    const double target = 0.1 * lambda_pos;
    double lo = 0.0, hi = 1.0;
    if (lambda2_at(1.0) < target) {
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (lambda2_at(mid) >= target)
                lo = mid;
            else
                hi = mid;
        }
    } else {
        lo = 1.0;
    }
    std::vector<GraphEdge> all = base;
    for (GraphEdge e : neg) {
        e.weight *= lo;
        if (e.weight != 0.0) all.push_back(e);
    }
    return GraphForm::create(k, all);
}

}  // namespace amg
