#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "amg/mesh.hpp"
#include "problems.hpp"

using namespace amg;

TEST_CASE("structured mesh has 2n^2 elements and (n+1)^2 vertices") {
    const TriMesh mesh = generate_structured_mesh(8, Rect{}, 1.0);
    CHECK(mesh.n_triangles() == 128);
    CHECK(mesh.n_vertices() == 81);
    mesh.validate();
    for (int t = 0; t < mesh.n_triangles(); ++t)
        CHECK(mesh.signed_area(t) == doctest::Approx(0.5 / 64.0).epsilon(1e-14));
}

TEST_CASE("interface must align with grid lines") {
    CHECK_THROWS_WITH_AS(generate_structured_mesh(8, Rect{0.3, 0.25, 0.75, 0.75}, 1e-4),
                         doctest::Contains("not aligned"), std::runtime_error);
    // 0.25 is a grid line at n = 8 but not at n = 6.
    CHECK_NOTHROW(generate_structured_mesh(8, Rect{0.25, 0.25, 0.75, 0.75}, 1e-4));
    CHECK_THROWS_AS(generate_structured_mesh(6, Rect{0.25, 0.25, 0.75, 0.75}, 1e-4),
                    std::runtime_error);
}

TEST_CASE("stiffness matrix row sums vanish exactly") {
    const TriMesh mesh =
        generate_structured_mesh(8, Rect{0.25, 0.25, 0.75, 0.75}, 1e-4);
    auto [A, w] = assemble_stiffness(mesh);
    REQUIRE(A.n_rows == mesh.n_vertices());
    const std::vector<double> rowsum = spmv(A, std::vector<double>(A.n_rows, 1.0));
    for (int i = 0; i < A.n_rows; ++i)
        CHECK(std::abs(rowsum[i]) <= 1e-14 * A.at(i, i));
    CHECK(A.is_value_symmetric());
    // One table entry per mesh edge: 2n(n+1) axis-aligned plus n^2 diagonals.
    CHECK(static_cast<int>(w.edges.size()) == 2 * 8 * 9 + 64);
    for (const EdgeWeight& e : w.edges) {
        CHECK(e.i < e.j);
        double total = 0.0;
        for (auto [t, wt] : e.per_element) total += wt;
        CHECK(e.omega == doctest::Approx(total).epsilon(1e-14));
        CHECK(e.omega == doctest::Approx(-A.at(e.i, e.j)).epsilon(1e-12));
    }
}

TEST_CASE("interior stiffness row of the uniform mesh is the 5-point stencil") {
    // On the unperturbed right-triangle mesh with unit coefficient, the P1
    // stiffness matrix reduces to the classical 5-point stencil (the diagonal
    // couplings cancel).
    const int n = 4;
    const TriMesh mesh = generate_structured_mesh(n, Rect{}, 1.0);
    auto [A, w] = assemble_stiffness(mesh);
    const int center = 2 * (n + 1) + 2;  // vertex (2,2)
    CHECK(A.at(center, center) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(A.at(center, center - 1) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(A.at(center, center + 1) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(A.at(center, center - (n + 1)) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(A.at(center, center + (n + 1)) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::abs(A.at(center, center + n)) < 1e-14);
    CHECK(std::abs(A.at(center, center + n + 2)) < 1e-14);
}

TEST_CASE("dirichlet elimination keeps only interior vertices") {
    const TriMesh mesh = generate_structured_mesh(8, Rect{}, 1.0);
    auto [A, w] = assemble_stiffness(mesh);
    const std::vector<int> bdry = boundary_vertices(mesh);
    CHECK(static_cast<int>(bdry.size()) == 32);  // 4n on the unit square
    const DirichletResult r = apply_dirichlet(A, bdry);
    CHECK(r.A.n_rows == 49);  // (n-1)^2
    CHECK(static_cast<int>(r.interior_to_full.size()) == 49);
    for (int i = 0; i < r.A.n_rows; ++i)
        for (int j = 0; j < r.A.n_cols; ++j)
            CHECK(r.A.at(i, j) == A.at(r.interior_to_full[i], r.interior_to_full[j]));
}

TEST_CASE("shape regularity of known triangles") {
    // Right isoceles triangle: diameter h*sqrt(2), twice the inradius
    // h*(2 - sqrt(2)), so the ratio is sqrt(2) + 1.
    TriMesh right;
    right.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    right.triangles = {{0, 1, 2}};
    right.coeff = {1.0};
    ShapeRegularityReport rep = shape_regularity(right);
    CHECK(rep.sigma == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-13));

    // Equilateral triangle: diameter 1, twice the inradius 1/sqrt(3).
    TriMesh eq;
    eq.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    eq.triangles = {{0, 1, 2}};
    eq.coeff = {1.0};
    rep = shape_regularity(eq);
    CHECK(rep.sigma == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
    CHECK(rep.elements[0].h == doctest::Approx(std::sqrt(std::sqrt(3.0) / 4.0)).epsilon(1e-13));
}

TEST_CASE("mesh json round trip is exact") {
    const TriMesh mesh =
        generate_structured_mesh(4, Rect{0.25, 0.25, 0.75, 0.75}, 1e-4, true);
    const std::string path = "mesh_roundtrip_test.json";
    write_mesh_json(mesh, path);
    const TriMesh back = read_mesh_json(path);
    REQUIRE(back.n_vertices() == mesh.n_vertices());
    REQUIRE(back.n_triangles() == mesh.n_triangles());
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        CHECK(back.vertices[v][0] == mesh.vertices[v][0]);
        CHECK(back.vertices[v][1] == mesh.vertices[v][1]);
    }
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        CHECK(back.triangles[t] == mesh.triangles[t]);
        CHECK(back.coeff[t] == mesh.coeff[t]);
    }
    std::remove(path.c_str());
}

TEST_CASE("perturbed mesh is deterministic and produces positive off-diagonals") {
    const Rect iface{0.25, 0.25, 0.75, 0.75};
    const TriMesh a = generate_structured_mesh(8, iface, 1e-4, true);
    const TriMesh b = generate_structured_mesh(8, iface, 1e-4, true);
    for (int v = 0; v < a.n_vertices(); ++v) {
        CHECK(a.vertices[v][0] == b.vertices[v][0]);
        CHECK(a.vertices[v][1] == b.vertices[v][1]);
    }
    a.validate();
    auto [A, w] = assemble_stiffness(a);
    int positive = 0;
    for (int i = 0; i < A.n_rows; ++i)
        for (int j = 0; j < A.n_cols; ++j)
            if (i != j && A.at(i, j) > 1e-14) ++positive;
    CHECK(positive > 0);  // obtuse angles break the M-matrix property
}
