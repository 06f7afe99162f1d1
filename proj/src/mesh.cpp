#include "amg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "amg/rng.hpp"

namespace amg {

double TriMesh::signed_area(int t) const {
    const auto& tri = triangles[t];
    const auto& a = vertices[tri[0]];
    const auto& b = vertices[tri[1]];
    const auto& c = vertices[tri[2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

void TriMesh::validate() const {
    if (coeff.size() != triangles.size())
        throw std::runtime_error("TriMesh: one coefficient per element required");
    for (int t = 0; t < n_triangles(); ++t) {
        for (int v : triangles[t])
            if (v < 0 || v >= n_vertices())
                throw std::runtime_error("TriMesh: vertex index out of range");
        if (signed_area(t) <= 0.0)
            throw std::runtime_error("TriMesh: non-positive area in element " +
                                     std::to_string(t));
        if (coeff[t] <= 0.0)
            throw std::runtime_error("TriMesh: non-positive coefficient in element " +
                                     std::to_string(t));
    }
    // Edge connectivity: breadth-first search over shared edges.
    if (n_triangles() > 1) {
        std::map<std::pair<int, int>, std::vector<int>> edge_elems;
        for (int t = 0; t < n_triangles(); ++t)
            for (int e = 0; e < 3; ++e) {
                int a = triangles[t][e], b = triangles[t][(e + 1) % 3];
                if (a > b) std::swap(a, b);
                edge_elems[{a, b}].push_back(t);
            }
        std::vector<char> seen(n_triangles(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            const int t = q.front();
            q.pop();
            for (int e = 0; e < 3; ++e) {
                int a = triangles[t][e], b = triangles[t][(e + 1) % 3];
                if (a > b) std::swap(a, b);
                for (int s : edge_elems[{a, b}])
                    if (!seen[s]) {
                        seen[s] = 1;
                        ++count;
                        q.push(s);
                    }
            }
        }
        if (count != n_triangles())
            throw std::runtime_error("TriMesh: mesh is not edge-connected");
    }
}

namespace {

bool grid_aligned(double x, int n) {
    const double scaled = x * n;
    return std::abs(scaled - std::round(scaled)) <= 1e-12 * n;
}

}  // namespace

TriMesh generate_structured_mesh(int n, const Rect& interface, double eps, bool perturb,
                                 std::uint64_t seed, double amplitude) {
    if (n < 2) throw std::runtime_error("generate_structured_mesh: n must be >= 2");
    if (eps <= 0.0 || eps > 1.0)
        throw std::runtime_error("generate_structured_mesh: eps must be in (0,1]");
    if (!interface.empty()) {
        for (double c : {interface.x0, interface.x1, interface.y0, interface.y1})
            if (!grid_aligned(c, n))
                throw std::runtime_error(
                    "generate_structured_mesh: interface not aligned with grid lines");
    }

    TriMesh mesh;
    const double h = 1.0 / n;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.push_back({i * h, j * h});
    auto vid = [&](int i, int j) { return j * (n + 1) + i; };

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            // Split along the lower-left to upper-right diagonal.
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }

    if (perturb) {
        Rng rng(seed);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                const int v = vid(i, j);
                const double x = mesh.vertices[v][0], y = mesh.vertices[v][1];
                const bool domain_boundary = (i == 0 || i == n || j == 0 || j == n);
                // Keep the jump interface aligned: vertices on its boundary
                // lines stay put.
                bool on_interface = false;
                if (!interface.empty()) {
                    const bool on_vline =
                        (std::abs(x - interface.x0) < 1e-12 || std::abs(x - interface.x1) < 1e-12) &&
                        y >= interface.y0 - 1e-12 && y <= interface.y1 + 1e-12;
                    const bool on_hline =
                        (std::abs(y - interface.y0) < 1e-12 || std::abs(y - interface.y1) < 1e-12) &&
                        x >= interface.x0 - 1e-12 && x <= interface.x1 + 1e-12;
                    on_interface = on_vline || on_hline;
                }
                const double dx = rng.uniform(-amplitude * h, amplitude * h);
                const double dy = rng.uniform(-amplitude * h, amplitude * h);
                if (domain_boundary || on_interface) continue;  // draws above keep the stream aligned
                mesh.vertices[v][0] = x + dx;
                mesh.vertices[v][1] = y + dy;
            }
    }

    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double bx = (mesh.vertices[tri[0]][0] + mesh.vertices[tri[1]][0] +
                           mesh.vertices[tri[2]][0]) / 3.0;
        const double by = (mesh.vertices[tri[0]][1] + mesh.vertices[tri[1]][1] +
                           mesh.vertices[tri[2]][1]) / 3.0;
        mesh.coeff.push_back(interface.contains(bx, by) ? eps : 1.0);
    }

    mesh.validate();
    return mesh;
}

std::pair<SparseMatrix, EdgeWeightTable> assemble_stiffness(const TriMesh& mesh) {
    mesh.validate();
    const int nv = mesh.n_vertices();

    std::map<std::pair<int, int>, EdgeWeight> table;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const double area = mesh.signed_area(t);
        if (area < 1e-14)
            throw std::runtime_error("assemble_stiffness: degenerate triangle " +
                                     std::to_string(t));
        const auto& tri = mesh.triangles[t];
        const double aT = mesh.coeff[t];
        // Edge (va, vb) opposite vc: omega_{e,T} = (aT/2) cot(angle at vc).
        for (int c = 0; c < 3; ++c) {
            int va = tri[(c + 1) % 3], vb = tri[(c + 2) % 3];
            const int vc = tri[c];
            const auto& pa = mesh.vertices[va];
            const auto& pb = mesh.vertices[vb];
            const auto& pc = mesh.vertices[vc];
            const double d =
                (pa[0] - pc[0]) * (pb[0] - pc[0]) + (pa[1] - pc[1]) * (pb[1] - pc[1]);
            const double omega = aT * d / (4.0 * area);  // (aT/2)*cot = aT*dot/(4|T|)
            if (va > vb) std::swap(va, vb);
            auto& ew = table[{va, vb}];
            ew.i = va;
            ew.j = vb;
            ew.omega += omega;
            ew.per_element.push_back({t, omega});
        }
    }

    // Off-diagonals are -omega_e; diagonals the negated off-diagonal row sums,
    // accumulated in edge order so A*1 = 0 holds exactly per component.
    std::vector<Triplet> trip;
    std::vector<std::vector<std::pair<int, double>>> row_off(nv);
    for (const auto& [key, ew] : table) {
        row_off[ew.i].push_back({ew.j, -ew.omega});
        row_off[ew.j].push_back({ew.i, -ew.omega});
    }
    for (int i = 0; i < nv; ++i) {
        double diag = 0.0;
        for (const auto& [j, v] : row_off[i]) {
            trip.push_back({i, j, v});
            diag -= v;
        }
        trip.push_back({i, i, diag});
    }

    EdgeWeightTable weights;
    for (auto& [key, ew] : table) weights.edges.push_back(std::move(ew));
    return {sparse_from_triplets(nv, nv, std::move(trip), true), std::move(weights)};
}

DirichletResult apply_dirichlet(const SparseMatrix& A, const std::vector<int>& boundary) {
    std::vector<char> is_bdry(A.n_rows, 0);
    for (int b : boundary) {
        if (b < 0 || b >= A.n_rows)
            throw std::runtime_error("apply_dirichlet: boundary index out of range");
        is_bdry[b] = 1;
    }
    DirichletResult r;
    std::vector<int> new_index(A.n_rows, -1);
    for (int i = 0; i < A.n_rows; ++i)
        if (!is_bdry[i]) {
            new_index[i] = static_cast<int>(r.interior_to_full.size());
            r.interior_to_full.push_back(i);
        }
    const int m = static_cast<int>(r.interior_to_full.size());
    if (m == 0) throw std::runtime_error("apply_dirichlet: empty interior");

    std::vector<Triplet> trip;
    for (int i = 0; i < A.n_rows; ++i) {
        if (is_bdry[i]) continue;
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            const int j = A.col_indices[k];
            if (!is_bdry[j]) trip.push_back({new_index[i], new_index[j], A.values[k]});
        }
    }
    r.A = sparse_from_triplets(m, m, std::move(trip), A.symmetric);
    return r;
}

std::vector<int> boundary_vertices(const TriMesh& mesh) {
    std::vector<int> out;
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        const double x = mesh.vertices[v][0], y = mesh.vertices[v][1];
        if (std::abs(x) < 1e-12 || std::abs(x - 1.0) < 1e-12 || std::abs(y) < 1e-12 ||
            std::abs(y - 1.0) < 1e-12)
            out.push_back(v);
    }
    return out;
}

ShapeRegularityReport shape_regularity(const TriMesh& mesh) {
    mesh.validate();
    ShapeRegularityReport rep;
    rep.sigma = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        double side[3];
        for (int e = 0; e < 3; ++e) {
            const auto& a = mesh.vertices[tri[e]];
            const auto& b = mesh.vertices[tri[(e + 1) % 3]];
            side[e] = std::hypot(b[0] - a[0], b[1] - a[1]);
        }
        const double area = mesh.signed_area(t);
        const double perimeter = side[0] + side[1] + side[2];
        ElementShape s;
        s.h_bar = std::max({side[0], side[1], side[2]});
        s.h = std::sqrt(area);
        s.h_under = 2.0 * (2.0 * area / perimeter);  // twice the inradius
        s.ratio = s.h_bar / s.h_under;
        rep.sigma = std::max(rep.sigma, s.ratio);
        rep.elements.push_back(s);
    }
    return rep;
}

void write_mesh_json(const TriMesh& mesh, const std::string& path) {
    nlohmann::json j;
    j["vertices"] = mesh.vertices;
    j["triangles"] = mesh.triangles;
    j["coeff"] = mesh.coeff;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

TriMesh read_mesh_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    TriMesh mesh;
    mesh.vertices = j.at("vertices").get<std::vector<std::array<double, 2>>>();
    mesh.triangles = j.at("triangles").get<std::vector<std::array<int, 3>>>();
    mesh.coeff = j.at("coeff").get<std::vector<double>>();
    mesh.validate();
    return mesh;
}

}  // namespace amg
