#include "amg/coarsen.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace amg {

std::string scheme_name(Scheme s) {
    return s == Scheme::direct ? "direct" : "standard";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "direct") return Scheme::direct;
    if (name == "standard") return Scheme::standard;
    throw std::runtime_error("unknown interpolation scheme: " + name);
}

namespace {

// Most negative off-diagonal of row i, or 0 when the row has none.
double row_min_offdiag(const SparseMatrix& A, int i, bool* has_negative) {
    double m = 0.0;
    bool found = false;
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
        if (A.col_indices[k] == i) continue;
        if (A.values[k] < m) {
            m = A.values[k];
            found = true;
        }
    }
    if (has_negative) *has_negative = found;
    return m;
}

}  // namespace

double strength_function(const SparseMatrix& A, int i, int j, bool* flagged) {
    if (i == j) throw std::runtime_error("strength_function: i == j");
    if (flagged) *flagged = false;
    bool neg_i = false, neg_j = false;
    const double mi = row_min_offdiag(A, i, &neg_i);
    const double mj = row_min_offdiag(A, j, &neg_j);
    const double denom = std::max(mi, mj);  // closer to zero
    if (!neg_i || !neg_j || denom == 0.0) {
        if (flagged) *flagged = true;
        return 0.0;
    }
    return A.at(i, j) / denom;
}

std::pair<StrengthGraph, SparseMatrix> build_strength(const SparseMatrix& A, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::runtime_error("build_strength: theta must be in (0,1)");
    if (!A.is_value_symmetric())
        throw std::runtime_error("build_strength: matrix not symmetric");

    StrengthGraph S;
    S.n = A.n_rows;
    S.theta = theta;
    S.adj.resize(S.n);

    // Row minima once, then one pass over the upper triangle.
    std::vector<double> row_min(S.n);
    std::vector<char> has_neg(S.n, 0);
    for (int i = 0; i < S.n; ++i) {
        bool neg = false;
        row_min[i] = row_min_offdiag(A, i, &neg);
        has_neg[i] = neg;
        if (!neg) S.flagged.push_back(i);
    }
    for (int i = 0; i < S.n; ++i) {
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            const int j = A.col_indices[k];
            if (j <= i) continue;
            if (!has_neg[i] || !has_neg[j]) continue;
            const double s = A.values[k] / std::max(row_min[i], row_min[j]);
            if (s > theta) {
                S.pairs.push_back({i, j, s});
                S.adj[i].push_back(j);
                S.adj[j].push_back(i);
            }
        }
    }
    for (auto& nbrs : S.adj) std::sort(nbrs.begin(), nbrs.end());

    std::vector<Triplet> trip;
    std::vector<double> diag(S.n, 0.0);
    for (const StrongPair& p : S.pairs) {
        const double omega = -A.at(p.i, p.j);
        trip.push_back({p.i, p.j, -omega});
        trip.push_back({p.j, p.i, -omega});
        diag[p.i] += omega;
        diag[p.j] += omega;
    }
    for (int i = 0; i < S.n; ++i) trip.push_back({i, i, diag[i]});
    SparseMatrix As = sparse_from_triplets(S.n, S.n, std::move(trip), true);
    return {std::move(S), std::move(As)};
}

CfSplitting mis_coarsen(const StrengthGraph& S) {
    std::vector<int> order(S.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (S.degree(a) != S.degree(b)) return S.degree(a) > S.degree(b);
        return a < b;
    });

    CfSplitting split;
    split.n = S.n;
    split.coarse_id.assign(S.n, -1);
    std::vector<char> selected(S.n, 0);
    for (int v : order) {
        bool blocked = false;
        for (int u : S.adj[v])
            if (selected[u]) {
                blocked = true;
                break;
            }
        if (!blocked) selected[v] = 1;
    }
    for (int v = 0; v < S.n; ++v) {
        if (selected[v]) {
            split.coarse_id[v] = static_cast<int>(split.coarse.size());
            split.coarse.push_back(v);
        } else {
            split.fine.push_back(v);
        }
    }
    return split;
}

std::vector<int> interpolation_neighbors(const StrengthGraph& S, Scheme scheme, int j) {
    if (j < 0 || j >= S.n) throw std::runtime_error("interpolation_neighbors: bad index");
    if (scheme == Scheme::direct) return S.adj[j];
    std::set<int> out(S.adj[j].begin(), S.adj[j].end());
    for (int u : S.adj[j]) out.insert(S.adj[u].begin(), S.adj[u].end());
    out.erase(j);
    return {out.begin(), out.end()};
}

SubdomainSet build_subdomains(const CfSplitting& split, const StrengthGraph& S,
                              Scheme scheme) {
    SubdomainSet set;
    std::vector<std::vector<int>> containing(S.n);  // vertex -> subdomain slots
    for (int c = 0; c < split.J(); ++c) {
        const int j = split.coarse[c];
        Subdomain omega;
        omega.j = j;
        omega.members.push_back(j);
        for (int v : interpolation_neighbors(S, scheme, j))
            if (split.coarse_id[v] < 0) omega.members.push_back(v);
        for (int v : omega.members) containing[v].push_back(c);
        set.subdomains.push_back(std::move(omega));
    }

    for (int v = 0; v < S.n; ++v)
        if (containing[v].empty())
            throw std::runtime_error(
                "build_subdomains: fine point " + std::to_string(v) +
                " not covered by any subdomain; rerun with the standard scheme "
                "or a smaller theta");

    set.c_o = 0;
    for (int c = 0; c < split.J(); ++c) {
        std::set<int> touching;
        for (int v : set.subdomains[c].members)
            touching.insert(containing[v].begin(), containing[v].end());
        set.c_o = std::max(set.c_o, static_cast<int>(touching.size()));
    }
    return set;
}

void write_splitting_json(const CfSplitting& split, double theta, Scheme scheme,
                          const std::string& path) {
    nlohmann::json j;
    j["coarse"] = split.coarse;
    j["fine"] = split.fine;
    j["theta"] = theta;
    j["scheme"] = scheme_name(scheme);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

CfSplitting read_splitting_json(const std::string& path, double* theta, Scheme* scheme) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    CfSplitting split;
    split.coarse = j.at("coarse").get<std::vector<int>>();
    split.fine = j.at("fine").get<std::vector<int>>();
    split.n = static_cast<int>(split.coarse.size() + split.fine.size());
    split.coarse_id.assign(split.n, -1);
    for (int c = 0; c < split.J(); ++c) {
        const int v = split.coarse[c];
        if (v < 0 || v >= split.n || split.coarse_id[v] >= 0)
            throw std::runtime_error(path + ": invalid coarse index list");
        split.coarse_id[v] = c;
    }
    for (int v : split.fine)
        if (v < 0 || v >= split.n || split.coarse_id[v] >= 0)
            throw std::runtime_error(path + ": coarse/fine sets not a partition");
    if (theta) *theta = j.at("theta").get<double>();
    if (scheme) *scheme = scheme_from_name(j.at("scheme").get<std::string>());
    return split;
}

void write_subdomains_json(const SubdomainSet& set, const std::string& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const Subdomain& s : set.subdomains)
        j.push_back({{"j", s.j}, {"members", s.members}});
    nlohmann::json root;
    root["subdomains"] = std::move(j);
    root["C_o"] = set.c_o;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << root.dump(2) << "\n";
}

}  // namespace amg
