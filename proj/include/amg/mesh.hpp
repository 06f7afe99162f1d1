#ifndef AMG_MESH_HPP
#define AMG_MESH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "amg/sparse.hpp"

namespace amg {

/// 2D triangulation of the unit square with a per-element coefficient.
/// Triangles are counterclockwise; the coefficient is constant per element so
/// coefficient discontinuities stay aligned with the partition.
struct TriMesh {
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<double> coeff;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    double signed_area(int t) const;

    // Positive areas, valid indices, one coefficient per element,
    // edge-connectivity of the element graph.
    void validate() const;
};

/// Axis-aligned rectangle in [0,1]^2 marking the low-coefficient region.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    bool empty() const { return x1 <= x0 || y1 <= y0; }
    bool contains(double x, double y) const {
        return x > x0 && x < x1 && y > y0 && y < y1;
    }
};

/// Uniform right-triangle mesh (each cell split along the lower-left to
/// upper-right diagonal). Elements whose barycenter falls inside `interface`
/// get coefficient `eps`, the rest 1. With `perturb`, interior vertices away
/// from the interface boundary are jittered by up to amplitude*h with a fixed
/// seed, which introduces obtuse angles and hence positive off-diagonals.
TriMesh generate_structured_mesh(int n, const Rect& interface, double eps,
                                 bool perturb = false, std::uint64_t seed = 0x5EEDu,
                                 double amplitude = 0.25);

struct EdgeWeight {
    int i = -1, j = -1;                              // i < j
    double omega = 0.0;                              // -a_ij, total over elements
    std::vector<std::pair<int, double>> per_element; // (triangle, omega_{e,T})
};

struct EdgeWeightTable {
    std::vector<EdgeWeight> edges;  // covers every off-diagonal nonzero of A
};

/// Neumann P1 stiffness matrix plus the per-edge cotangent weights
/// omega_{e,T} = (1/2) a_T cot(angle opposite e in T). Diagonals are the
/// negated off-diagonal row sums, so A*1 = 0 holds exactly.
std::pair<SparseMatrix, EdgeWeightTable> assemble_stiffness(const TriMesh& mesh);

struct DirichletResult {
    SparseMatrix A;                    // principal submatrix on interior indices
    std::vector<int> interior_to_full; // index map back to the full numbering
};

DirichletResult apply_dirichlet(const SparseMatrix& A, const std::vector<int>& boundary);

// Vertices of the mesh on the boundary of [0,1]^2.
std::vector<int> boundary_vertices(const TriMesh& mesh);

struct ElementShape {
    double h_bar;   // diameter
    double h;       // |T|^{1/d}
    double h_under; // twice the inradius
    double ratio;   // h_bar / h_under
};

struct ShapeRegularityReport {
    std::vector<ElementShape> elements;
    double sigma;   // max ratio
};

ShapeRegularityReport shape_regularity(const TriMesh& mesh);

// Mesh JSON: {"vertices":[[x,y],...],"triangles":[[i,j,k],...],"coeff":[...]}
// with 0-based indices; round-trip exact.
void write_mesh_json(const TriMesh& mesh, const std::string& path);
TriMesh read_mesh_json(const std::string& path);

}  // namespace amg

#endif
