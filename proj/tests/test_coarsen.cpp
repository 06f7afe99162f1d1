#include <doctest.h>

#include <cstdio>
#include <stdexcept>

#include "amg/coarsen.hpp"
#include "problems.hpp"

using namespace amg;

TEST_CASE("strength function on uniform and jump paths") {
    const SparseMatrix U = testprob::path_laplacian(4);
    CHECK(strength_function(U, 0, 1) == doctest::Approx(1.0));
    CHECK(strength_function(U, 1, 2) == doctest::Approx(1.0));
    // Symmetry of the measure.
    CHECK(strength_function(U, 2, 1) == strength_function(U, 1, 2));

    // Weights (1, 0.01, 1): the middle edge is weak relative to both rows.
    const SparseMatrix W = testprob::weighted_path({1.0, 0.01, 1.0});
    CHECK(strength_function(W, 0, 1) == doctest::Approx(1.0));
    CHECK(strength_function(W, 1, 2) == doctest::Approx(0.01));
    CHECK(strength_function(W, 2, 3) == doctest::Approx(1.0));

    // Row without negative off-diagonals: strength 0, flagged.
    const SparseMatrix D =
        sparse_from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 1.0}}, true);
    bool flagged = false;
    CHECK(strength_function(D, 0, 1, &flagged) == 0.0);
    CHECK(flagged);
}

TEST_CASE("strength graph and filtered matrix on the jump path") {
    const SparseMatrix W = testprob::weighted_path({1.0, 0.01, 1.0});
    auto [S, As] = build_strength(W, 0.25);
    CHECK(S.n == 4);
    CHECK(S.theta == 0.25);
    REQUIRE(S.pairs.size() == 2);
    CHECK(S.pairs[0].i == 0);
    CHECK(S.pairs[0].j == 1);
    CHECK(S.pairs[1].i == 2);
    CHECK(S.pairs[1].j == 3);
    CHECK(S.adj[1] == std::vector<int>{0});
    CHECK(S.adj[2] == std::vector<int>{3});

    // A_S is the Laplacian over strong edges with weights -a_ij.
    CHECK(As.at(0, 1) == -1.0);
    CHECK(As.at(1, 2) == 0.0);  // weak edge dropped
    CHECK(As.at(0, 0) == 1.0);
    CHECK(As.at(1, 1) == 1.0);
    for (int i = 0; i < 4; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 4; ++j) sum += As.at(i, j);
        CHECK(sum == 0.0);
    }

    CHECK_THROWS_AS(build_strength(W, 0.0), std::runtime_error);
    CHECK_THROWS_AS(build_strength(W, 1.0), std::runtime_error);
}

TEST_CASE("greedy independent-set coarsening on the 5-path") {
    auto [S, As] = build_strength(testprob::path_laplacian(5), 0.25);
    const CfSplitting split = mis_coarsen(S);
    // Visit order is 1,2,3 (degree 2) then 0,4: select 1, then 3.
    CHECK(split.coarse == std::vector<int>{1, 3});
    CHECK(split.fine == std::vector<int>{0, 2, 4});
    CHECK(split.coarse_id[1] == 0);
    CHECK(split.coarse_id[3] == 1);
    CHECK(split.coarse_id[0] == -1);
    // Independence: no strong edge joins two coarse points, and every fine
    // point has a coarse strong neighbor.
    for (const StrongPair& p : S.pairs)
        CHECK(!(split.coarse_id[p.i] >= 0 && split.coarse_id[p.j] >= 0));
    for (int f : split.fine) {
        bool covered = false;
        for (int nb : S.adj[f]) covered = covered || split.coarse_id[nb] >= 0;
        CHECK(covered);
    }
}

TEST_CASE("vertices without strong connections become coarse") {
    const SparseMatrix D = sparse_from_triplets(
        3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}, true);
    auto [S, As] = build_strength(D, 0.25);
    CHECK(S.pairs.empty());
    CHECK(S.flagged == std::vector<int>{0, 1, 2});
    const CfSplitting split = mis_coarsen(S);
    CHECK(split.coarse == std::vector<int>{0, 1, 2});
    CHECK(split.fine.empty());
}

TEST_CASE("interpolation neighborhoods on the 6-path") {
    auto [S, As] = build_strength(testprob::path_laplacian(6), 0.25);
    CHECK(interpolation_neighbors(S, Scheme::direct, 3) == std::vector<int>{2, 4});
    CHECK(interpolation_neighbors(S, Scheme::standard, 3) ==
          std::vector<int>{1, 2, 4, 5});
    CHECK(interpolation_neighbors(S, Scheme::direct, 0) == std::vector<int>{1});
    CHECK(interpolation_neighbors(S, Scheme::standard, 0) == std::vector<int>{1, 2});
}

TEST_CASE("subdomains and overlap constant on the 7-path") {
    auto [S, As] = build_strength(testprob::path_laplacian(7), 0.25);
    CfSplitting split;
    split.n = 7;
    split.coarse = {1, 3, 5};
    split.fine = {0, 2, 4, 6};
    split.coarse_id = {-1, 0, -1, 1, -1, 2, -1};
    const SubdomainSet set = build_subdomains(split, S, Scheme::direct);
    REQUIRE(set.subdomains.size() == 3);
    CHECK(set.subdomains[0].j == 1);
    CHECK(set.subdomains[0].members == std::vector<int>{1, 0, 2});
    CHECK(set.subdomains[1].members == std::vector<int>{3, 2, 4});
    CHECK(set.subdomains[2].members == std::vector<int>{5, 4, 6});
    // The middle subdomain touches both others plus itself.
    CHECK(set.c_o == 3);
}

TEST_CASE("uncovered fine points are an error") {
    auto [S, As] = build_strength(testprob::path_laplacian(5), 0.25);
    CfSplitting split;
    split.n = 5;
    split.coarse = {0};
    split.fine = {1, 2, 3, 4};
    split.coarse_id = {0, -1, -1, -1, -1};
    CHECK_THROWS_WITH_AS(build_subdomains(split, S, Scheme::direct),
                         doctest::Contains("standard scheme"), std::runtime_error);
}

TEST_CASE("splitting json round trip") {
    auto [S, As] = build_strength(testprob::path_laplacian(9), 0.25);
    const CfSplitting split = mis_coarsen(S);
    const std::string path = "splitting_roundtrip_test.json";
    write_splitting_json(split, 0.25, Scheme::standard, path);
    double theta = 0.0;
    Scheme scheme = Scheme::direct;
    const CfSplitting back = read_splitting_json(path, &theta, &scheme);
    CHECK(back.n == split.n);
    CHECK(back.coarse == split.coarse);
    CHECK(back.fine == split.fine);
    CHECK(back.coarse_id == split.coarse_id);
    CHECK(theta == 0.25);
    CHECK(scheme == Scheme::standard);
    std::remove(path.c_str());
}

TEST_CASE("scheme names round trip") {
    CHECK(scheme_name(Scheme::direct) == "direct");
    CHECK(scheme_from_name("standard") == Scheme::standard);
    CHECK_THROWS_AS(scheme_from_name("aggressive"), std::runtime_error);
}
