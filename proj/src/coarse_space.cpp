#include "amg/coarse_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "amg/rng.hpp"

namespace amg {

namespace {

bool edge_graph_connected(const DenseMatrix& A) {
    const int n = A.n_rows;
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v)
            if (v != u && A.at(u, v) != 0.0 && !seen[v]) {
                seen[v] = 1;
                ++count;
                q.push(v);
            }
    }
    return count == n;
}

}  // namespace

LocalProblem local_operator(const SparseMatrix& A_S, const Subdomain& omega) {
    LocalProblem lp;
    lp.j = omega.j;
    lp.members = omega.members;
    const int m = lp.n();
    lp.A = DenseMatrix(m, m);
    lp.D.resize(m);

    std::vector<int> local(A_S.n_rows, -1);
    for (int k = 0; k < m; ++k) local[lp.members[k]] = k;

    const std::vector<double> diag = A_S.diagonal();
    for (int k = 0; k < m; ++k) {
        const int gi = lp.members[k];
        lp.D[k] = diag[gi];
        for (int p = A_S.row_offsets[gi]; p < A_S.row_offsets[gi + 1]; ++p) {
            const int gj = A_S.col_indices[p];
            if (gj == gi) continue;
            const int lj = local[gj];
            if (lj < 0) continue;
            const double omega_e = -A_S.values[p];
            lp.A.at(k, lj) = -omega_e;
            lp.A.at(k, k) += omega_e;  // diag = sum of interior edge weights
        }
    }
    lp.connected = edge_graph_connected(lp.A);
    return lp;
}

double local_mu(const LocalProblem& lp) {
    const int m = lp.n();
    if (m == 1) return std::numeric_limits<double>::infinity();
    DenseMatrix B(m, m);
    std::vector<double> dinv_sqrt(m);
    for (int i = 0; i < m; ++i) {
        if (lp.D[i] <= 0.0)
            throw std::runtime_error("local_mu: nonpositive diagonal entry");
        dinv_sqrt[i] = 1.0 / std::sqrt(lp.D[i]);
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            B.at(i, j) = dinv_sqrt[i] * lp.A.at(i, j) * dinv_sqrt[j];
    SymEigenResult eig = sym_eig_dense(B);
    return eig.eigenvalues[1];
}

MuReport compute_mu(const SparseMatrix& A_S, const SubdomainSet& set) {
    MuReport rep;
    rep.mu_c = std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(set.subdomains.size()); ++c) {
        const LocalProblem lp = local_operator(A_S, set.subdomains[c]);
        const double mu = local_mu(lp);
        rep.mu.push_back(mu);
        if (lp.n() == 1) {
            rep.singletons.push_back(c);
            continue;  // coarse point exactly representable; excluded from min
        }
        if (!lp.connected) rep.disconnected.push_back(c);
        if (mu < rep.mu_c) {
            rep.mu_c = mu;
            rep.argmin = c;
        }
    }
    return rep;
}

Prolongation interpolation_weights(const SparseMatrix& A_S, const CfSplitting& split,
                                   const SubdomainSet& set, Scheme scheme) {
    const int n = split.n;
    const int J = split.J();
    std::vector<std::vector<std::pair<int, double>>> row_entries(n);  // (col, weight)

    for (int c = 0; c < J; ++c) row_entries[split.coarse[c]].push_back({c, 1.0});

    // Subdomains containing each fine point.
    std::vector<std::vector<int>> containing(n);
    for (int c = 0; c < J; ++c)
        for (int v : set.subdomains[c].members)
            if (v != set.subdomains[c].j) containing[v].push_back(c);

    const std::vector<double> diag = A_S.diagonal();
    for (int i : split.fine) {
        double total = 0.0;
        for (int c : containing[i]) {
            const int j = split.coarse[c];
            double w = std::max(-A_S.at(i, j), 0.0);
            if (scheme == Scheme::standard) {
                // Route through one intermediate fine point strong to both.
                for (int p = A_S.row_offsets[i]; p < A_S.row_offsets[i + 1]; ++p) {
                    const int k = A_S.col_indices[p];
                    if (k == i || split.coarse_id[k] >= 0) continue;
                    const double aik = A_S.values[p];
                    const double akj = A_S.at(k, j);
                    if (aik < 0.0 && akj < 0.0) w += (-aik) * (-akj) / diag[k];
                }
            }
            if (w > 0.0) {
                row_entries[i].push_back({c, w});
                total += w;
            }
        }
        if (total <= 0.0)
            throw std::runtime_error("interpolation_weights: fine point " +
                                     std::to_string(i) + " has zero total weight");
        for (auto& [c, w] : row_entries[i]) w /= total;
    }

    std::vector<Triplet> trip;
    for (int i = 0; i < n; ++i)
        for (const auto& [c, w] : row_entries[i]) trip.push_back({i, c, w});
    Prolongation out;
    out.P = sparse_from_triplets(n, J, std::move(trip), false);
    return out;
}

PartitionOfUnityVerdict partition_of_unity_check(const Prolongation& P,
                                                 const SubdomainSet& set, int n) {
    // sum_j Pi_j chi_j is diagonal with entries sum_c p_{i,c}; off-diagonal
    // terms vanish structurally, so identity == row sums 1.
    std::vector<double> row_sum(n, 0.0);
    for (int c = 0; c < static_cast<int>(set.subdomains.size()); ++c)
        for (int v : set.subdomains[c].members) row_sum[v] += P.P.at(v, c);
    PartitionOfUnityVerdict verdict;
    for (int i = 0; i < n; ++i)
        if (std::abs(row_sum[i] - 1.0) > 1e-14) verdict.bad_rows.push_back(i);
    verdict.ok = verdict.bad_rows.empty();
    return verdict;
}

OverlapEnergyReport overlap_energy_check(const SparseMatrix& A_S, const SubdomainSet& set,
                                         const Prolongation& P, int trials,
                                         std::uint64_t seed) {
    const int n = A_S.n_rows;
    const int J = static_cast<int>(set.subdomains.size());
    std::vector<LocalProblem> locals;
    for (const Subdomain& s : set.subdomains) locals.push_back(local_operator(A_S, s));
    const std::vector<double> diag = A_S.diagonal();

    Rng rng(seed);
    OverlapEnergyReport rep;
    for (int t = 0; t < trials; ++t) {
        // Restriction ratio: sum_j |chi_j v|^2_{A_j} over |v|^2_{A_S}.
        std::vector<double> v(n);
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
        const double energy = dot(v, spmv(A_S, v));
        if (energy > 1e-12) {
            double local_sum = 0.0;
            for (const LocalProblem& lp : locals) {
                std::vector<double> vj(lp.n());
                for (int k = 0; k < lp.n(); ++k) vj[k] = v[lp.members[k]];
                local_sum += dot(vj, lp.A.apply(vj));
            }
            rep.max_restriction_ratio =
                std::max(rep.max_restriction_ratio, local_sum / energy);
        }

        // Assembly ratio: |sum_j Pi_j v_j|^2_D over sum_j |v_j|^2_{D_j}.
        std::vector<double> glued(n, 0.0);
        double denom = 0.0;
        for (int c = 0; c < J; ++c) {
            const LocalProblem& lp = locals[c];
            for (int k = 0; k < lp.n(); ++k) {
                const double x = rng.uniform(-1.0, 1.0);
                glued[lp.members[k]] += P.P.at(lp.members[k], c) * x;
                denom += lp.D[k] * x * x;
            }
        }
        double num = 0.0;
        for (int i = 0; i < n; ++i) num += diag[i] * glued[i] * glued[i];
        if (denom > 1e-12)
            rep.max_assembly_ratio = std::max(rep.max_assembly_ratio, num / denom);
    }
    rep.ok = rep.max_restriction_ratio <= set.c_o + 1e-10 &&
             rep.max_assembly_ratio <= set.c_o + 1e-10;
    return rep;
}

double poincare_bound(const GraphForm& graph, const std::vector<double>& w) {
    const int n = graph.k;
    if (static_cast<int>(w.size()) != n)
        throw std::runtime_error("poincare_bound: weight vector size mismatch");
    double sum = 0.0, mu = 0.0;
    for (double wj : w) {
        if (wj < 0.0) throw std::runtime_error("poincare_bound: negative weight");
        sum += wj;
        mu += wj * wj;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::runtime_error("poincare_bound: weights must sum to 1");
    for (const GraphEdge& e : graph.edges)
        if (std::abs(e.weight - 1.0) > 1e-12)
            throw std::runtime_error("poincare_bound: graph must have unit weights");

    std::vector<std::vector<int>> adj(n);
    for (const GraphEdge& e : graph.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    // Diameter by BFS from every vertex.
    int d = 0;
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::queue<int> q;
        q.push(s);
        dist[s] = 0;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
        }
        for (int v = 0; v < n; ++v) {
            if (dist[v] < 0) throw std::runtime_error("poincare_bound: graph disconnected");
            d = std::max(d, dist[v]);
        }
    }
    return mu * static_cast<double>(n) * static_cast<double>(n) * d;
}

std::pair<double, double> laplacian_equivalence(const LocalProblem& lp, double h, int d) {
    if (!lp.connected)
        throw std::runtime_error("laplacian_equivalence: local graph disconnected");
    const int m = lp.n();
    if (m == 1) return {1.0, 1.0};
    DenseMatrix L(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (lp.A.at(i, j) != 0.0) {
                L.at(i, j) = -1.0;
                L.at(j, i) = -1.0;
                L.at(i, i) += 1.0;
                L.at(j, j) += 1.0;
            }
    const double scale = std::pow(h, d - 2);
    for (double& x : L.values) x *= scale;
    std::vector<double> ones(m, 1.0 / std::sqrt(static_cast<double>(m)));
    return gen_eig_extremes(lp.A, L, {ones});
}

}  // namespace amg
