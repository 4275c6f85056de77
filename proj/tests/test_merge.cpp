#include <random>

#include "doctest.h"
#include "gromon/merge.hpp"

using namespace gromon;

namespace {
MetricGraph star(std::vector<Rational> lens) {
    std::vector<GEdge> E;
    for (std::size_t i = 0; i < lens.size(); ++i) E.push_back({0, int(i) + 1, lens[i]});
    return MetricGraph(int(lens.size()) + 1, E);
}
MergeTree stem(const Rational& h) {
    MergeTree M;
    M.parent = {-1};
    M.height = {h};
    M.origin = {-1};
    return M;
}
bool contains(const std::vector<Rational>& v, const Rational& q) {
    return std::binary_search(v.begin(), v.end(), q);
}
}  // namespace

TEST_CASE("merge tree construction") {
    auto E = MetricGraph(2, {{0, 1, rat(3, 2)}});
    auto M = merge_tree(E, 0);
    REQUIRE(M.size() == 1);
    CHECK(M.height[0] == rat(-3, 2));
    auto S = star({1, 1, 1});
    auto C = merge_tree(S, 0);
    CHECK(C.size() == 4);
    CHECK(C.height[C.root] == 0);
    CHECK(C.leaves().size() == 3);
    for (int l : C.leaves()) CHECK(C.height[l] == -1);
    auto L = merge_tree(S, 1);  // leaf: rooted at its neighbour
    CHECK(L.size() == 3);
    CHECK(L.height[L.root] == -1);
    for (int l : L.leaves()) CHECK(L.height[l] == -2);
    CHECK_THROWS_AS(merge_tree(MetricGraph::circle(1), 0), NotATree);
}

TEST_CASE("candidate sets") {
    auto A = merge_tree(star({1, 1, 1}), 0);
    auto B = merge_tree(MetricGraph(2, {{0, 1, 1}}), 0);
    auto c = candidate_set(A, B);
    CHECK(c == std::vector<Rational>{0, rat(1, 2), 1});
    CHECK(candidate_set(B, A) == c);
}

TEST_CASE("interleaving decisions") {
    CHECK(is_interleaved(stem(-1), stem(-2), 1));
    CHECK_FALSE(is_interleaved(stem(-1), stem(-2), rat(1, 2)));
    CHECK(interleaving_distance(stem(-1), stem(rat(-7, 3))) == rat(4, 3));

    auto A = merge_tree(star({1, 1, 1}), 0);
    auto B = merge_tree(MetricGraph(2, {{0, 1, 1}}), 0);
    CHECK(is_interleaved(A, B, rat(1, 2)));
    CHECK_FALSE(is_interleaved(A, B, rat(1, 4)));
    CHECK_FALSE(is_interleaved(A, B, rat(49, 100)));
    CHECK(is_interleaved(A, A, 0));
    auto big = merge_tree(star({1, 1, 1, 1, 1, 1, 1, 1}), 0);
    CHECK_THROWS_AS(is_interleaved(big, big, 0), SizeLimitExceeded);
}

TEST_CASE("interleaving distance is a metric on random rooted trees") {
    std::mt19937_64 rng(5);
    std::vector<MergeTree> pool;
    while (pool.size() < 8) {
        auto T = random_tree(rng, 4);
        pool.push_back(merge_tree(T, int(rng() % T.nodes())));
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        CHECK(interleaving_distance(pool[i], pool[i]) == 0);
        for (std::size_t j = 0; j < pool.size(); ++j) {
            Rational dij = interleaving_distance(pool[i], pool[j]);
            CHECK(dij == interleaving_distance(pool[j], pool[i]));
            // monotone in ε over the candidate grid
            for (const auto& e : candidate_set(pool[i], pool[j]))
                CHECK(is_interleaved(pool[i], pool[j], e) == (e >= dij));
            for (std::size_t k = 0; k < pool.size(); ++k)
                CHECK(interleaving_distance(pool[i], pool[k]) <= dij + interleaving_distance(pool[j], pool[k]));
        }
    }
}

TEST_CASE("delta over rootings") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 8; ++t) {
        auto T = random_tree(rng, 4), S = random_tree(rng, 4);
        CHECK(delta(T, T) == 0);
        Rational d = delta(T, S);
        CHECK(d == delta(S, T));
        bool member = false;
        for (int a = 0; a < T.nodes(); ++a)
            for (int b = 0; b < S.nodes(); ++b)
                member = member || contains(candidate_set(merge_tree(T, a), merge_tree(S, b)), d);
        CHECK(member);
    }
}

TEST_CASE("sigma sets") {
    auto T = star({1, rat(3, 2), rat(7, 4)});
    auto sg = sigma_sets(node_multiset(T));
    CHECK(sg.leaf_lengths.size() == 3);
    CHECK(sgn(sg.epsilon) > 0);
    CHECK(sg.epsilon == sg.min_gap / 28);
    CHECK(sg.in_sigma(0));
    CHECK(sg.in_sigma(rat(3, 2)));
    CHECK(sg.in_sigma(1 + rat(7, 4)));
    CHECK_FALSE(sg.in_sigma(rat(1, 8)));
    CHECK(sg.in_sigma2(rat(1, 2)));
    CHECK(sg.in_sigma1(rat(1, 4)));
    // rooted node heights lie in Σ_T, so Λ₁,₁ ⊂ Σ₁
    for (int x = 0; x < T.nodes(); ++x) {
        auto M = merge_tree(T, x);
        for (const auto& h : M.height) CHECK(sg.in_sigma(-h));
        for (const auto& a : M.height)
            for (const auto& b : M.height) CHECK(sg.in_sigma1(abs(Rational(a - b)) / 2));
    }
}
