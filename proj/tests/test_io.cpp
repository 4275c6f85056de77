#include <doctest.h>

#include <random>

#include "gromon/io.hpp"
#include "gromon/shapes.hpp"
#include "oracles.hpp"

using namespace gromon;

TEST_CASE("space json round trip") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 5; ++t) {
        auto X = oracle::random_space(rng, 4, t % 2 == 0);
        auto j = space_to_json(X);
        CHECK(j["scalar"] == "rational");
        auto Y = rspace_from_json(Json::parse(j.dump()));
        CHECK(Y.dist() == X.dist());
        CHECK(Y.weights() == X.weights());
        CHECK(space_to_json(Y).dump() == j.dump());
    }
    auto F = sample_curve(PlaneCurve::circle(), 12).space();
    auto G = fspace_from_json(Json::parse(space_to_json(F).dump()));
    CHECK(G.dist() == F.dist());
    CHECK(G.weights() == F.weights());
    // numbers are read exactly in rational mode
    auto Z = rspace_from_json(Json::parse(R"({"n":2,"dist":[[0,0.25],[0.25,0]],"weights":["1/2",0.5]})"));
    CHECK(Z.d(0, 1) == rat(1, 4));
    CHECK_THROWS_AS(rspace_from_json(Json::parse(R"({"n":2,"dist":[[0]],"weights":[1]})")), InvalidInput);
}

TEST_CASE("graph, tree and multiset json") {
    std::mt19937_64 rng(4);
    auto T = random_tree(rng, 6);
    auto j = graph_to_json(T);
    auto U = graph_from_json(Json::parse(j.dump()));
    CHECK(tree_canonical_form(U) == tree_canonical_form(T));
    CHECK(graph_to_json(U) == j);

    auto M = merge_tree(T, 0);
    auto N = merge_tree_from_json(Json::parse(merge_tree_to_json(M).dump()));
    CHECK(N.parent == M.parent);
    CHECK(N.height == M.height);
    CHECK(N.root == M.root);

    auto ms = node_multiset(T);
    CHECK(node_multiset_from_json(Json::parse(node_multiset_to_json(ms).dump())) == ms);

    PartitionFixture f{{0, 0, 1}, {1, 0, 0}, {{0, 1, 1, 0}}};
    auto g = partition_from_json(Json::parse(partition_to_json(f).dump()));
    CHECK(g.part_x == f.part_x);
    CHECK(g.part_y == f.part_y);
    CHECK(g.pairing == f.pairing);
}

TEST_CASE("result json") {
    auto X = delta_space(2), Y = delta_space(1);
    auto r = gm_exact(X, Y, PExponent::finite(1));
    auto j = gm_result_to_json(r);
    CHECK(j["value"] == "1/2");
    CHECK(j["witness"] == Json::array({0, 0}));
    CHECK(gm_result_to_json(gm_exact(Y, X, PExponent::finite(1)))["value"] == "inf");
}
