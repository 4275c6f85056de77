#include <doctest.h>

#include <random>

#include "gromon/transport.hpp"
#include "oracles.hpp"

using namespace gromon;
using R = Rational;

namespace {
StepCDF<R> random_cdf(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> loc(0, 12), mass(1, 5), cnt(1, 5);
    std::vector<std::pair<R, R>> atoms;
    int k = cnt(rng);
    R tot = 0;
    for (int i = 0; i < k; ++i) {
        atoms.emplace_back(rat(loc(rng), 2), R(mass(rng)));
        tot += atoms.back().second;
    }
    for (auto& a : atoms) a.second /= tot;
    return StepCDF<R>::from_atoms(atoms);
}
}  // namespace

TEST_CASE("quantile") {
    auto d0 = StepCDF<R>::dirac(0);
    CHECK(quantile(d0, R(0)) == 0);
    CHECK(quantile(d0, rat(99, 100)) == 0);
    auto F = StepCDF<R>::from_atoms({{R(0), rat(1, 2)}, {R(1), rat(1, 2)}});
    CHECK(quantile(F, rat(1, 4)) == 0);
    CHECK(quantile(F, rat(3, 4)) == 1);
    CHECK(quantile(F, R(1)) == 1);
    // Δ₃ pairs: 3 zero pairs and 6 unit pairs of mass 1/9
    auto H3 = StepCDF<R>::from_atoms({{R(0), rat(1, 3)}, {R(1), rat(2, 3)}});
    CHECK(quantile(H3, rat(1, 2)) == 1);
    CHECK_THROWS_AS(quantile(F, R(2)), InvalidInput);
}

TEST_CASE("w1 between step CDFs") {
    auto d0 = StepCDF<R>::dirac(0), d1 = StepCDF<R>::dirac(1);
    CHECK(w1_cdf(d0, d0) == 0);
    CHECK(w1_cdf(d0, d1) == 1);
    auto F = StepCDF<R>::from_atoms({{R(0), rat(1, 2)}, {R(1), rat(1, 2)}});
    CHECK(w1_cdf(F, d0) == rat(1, 2));
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        auto A = random_cdf(rng), B = random_cdf(rng), C = random_cdf(rng);
        CHECK(w1_cdf(A, B) == w1_cdf(B, A));
        CHECK(w1_cdf(A, C) <= w1_cdf(A, B) + w1_cdf(B, C));
        CHECK((w1_cdf(A, B) == 0) == (A == B));
        CHECK(wp_quantile(A, B, PExponent::finite(1)).power == w1_cdf(A, B));
    }
}

TEST_CASE("wp via quantiles") {
    auto d0 = StepCDF<R>::dirac(0), d1 = StepCDF<R>::dirac(1);
    for (int p : {1, 2, 3}) {
        CHECK(wp_quantile(d0, d1, PExponent::finite(p)).exact().value() == 1);
        CHECK(wp_quantile(d1, d1, PExponent::finite(p)).is_zero());
    }
    // atoms {0,2} vs {1}: |Δ| = 1 on all levels
    auto F = StepCDF<R>::from_atoms({{R(0), rat(1, 2)}, {R(2), rat(1, 2)}});
    CHECK(wp_quantile(F, d1, PExponent::finite(2)).power == 1);
    auto G = StepCDF<R>::from_atoms({{R(0), rat(1, 4)}, {R(4), rat(3, 4)}});
    // levels: [0,1/4) 0 vs 0, [1/4,1/2) 4 vs 0, [1/2,1) 4 vs 2
    CHECK(wp_quantile(G, F, PExponent::finite(2)).power == rat(1, 4) * 16 + rat(1, 2) * 4);
    CHECK_THROWS_AS(wp_quantile(F, G, PExponent::inf()), InvalidInput);
}

TEST_CASE("assignment") {
    CostMatrix<R> C{2, 2, {0, 1, 1, 0}};
    auto r = solve_assignment(C, {rat(1, 2), rat(1, 2)}, {rat(1, 2), rat(1, 2)});
    REQUIRE_FALSE(r.infinite());
    CHECK(r.cost == 0);
    CHECK(r.map->a == std::vector<int>{0, 1});
    CostMatrix<R> C12{1, 2, {0, 0}};
    CHECK(solve_assignment(C12, {R(1)}, {rat(1, 2), rat(1, 2)}).infinite());

    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> U(0, 20);
    for (int n = 2; n <= 7; ++n)
        for (int t = 0; t < 10; ++t) {
            CostMatrix<R> M{std::size_t(n), std::size_t(n), {}};
            for (int k = 0; k < n * n; ++k) M.c.push_back(rat(U(rng), 3));
            std::vector<R> w(n, rat(1, n));
            auto res = solve_assignment(M, w, w);
            CHECK(res.cost * n == oracle::brute_assignment(M));
        }
    // k-to-1 with duplicated targets vs general-weight branch and bound
    for (int t = 0; t < 20; ++t) {
        CostMatrix<R> M{6, 3, {}};
        for (int k = 0; k < 18; ++k) M.c.push_back(R(U(rng)));
        std::vector<R> wx(6, rat(1, 6)), wy(3, rat(1, 3));
        auto a = solve_assignment(M, wx, wy);
        // perturbed-equal weights route through the exhaustive path
        std::vector<R> wx2{rat(1, 6), rat(1, 6), rat(1, 6), rat(1, 6), rat(1, 6), rat(1, 6)};
        std::vector<R> wy2{rat(1, 3), rat(1, 3), rat(1, 3)};
        auto b = solve_assignment(M, wx2, wy2, 12);
        CHECK(a.cost == b.cost);
    }
    // general weights
    CostMatrix<R> G{3, 2, {1, 5, 2, 1, 7, 0}};
    auto g = solve_assignment(G, {rat(1, 4), rat(1, 4), rat(1, 2)}, {rat(1, 2), rat(1, 2)});
    REQUIRE_FALSE(g.infinite());
    CHECK(g.map->a == std::vector<int>{0, 0, 1});
    CHECK(g.cost == rat(1, 4) + rat(1, 2) * 0 + rat(1, 4) * 2);
    CHECK(solve_assignment(G, {rat(1, 4), rat(1, 4), rat(1, 2)}, {rat(1, 3), rat(2, 3)}).infinite());
}

TEST_CASE("kantorovich LP") {
    CostMatrix<R> Z{2, 2, {0, 0, 0, 0}};
    auto z = solve_kantorovich(Z, {rat(1, 2), rat(1, 2)}, {rat(1, 2), rat(1, 2)});
    CHECK(z.second == 0);
    CostMatrix<R> C{1, 2, {0, 1}};
    auto c = solve_kantorovich(C, {R(1)}, {rat(1, 2), rat(1, 2)});
    CHECK(c.second == rat(1, 2));

    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> U(0, 30), W(1, 9);
    auto rw = [&](int n) {
        std::vector<R> w(n);
        R tot = 0;
        for (auto& x : w) {
            x = W(rng);
            tot += x;
        }
        for (auto& x : w) x /= tot;
        return w;
    };
    for (int t = 0; t < 40; ++t) {
        CostMatrix<R> M{6, 4, {}};
        for (int k = 0; k < 24; ++k) M.c.push_back(rat(U(rng), 7));
        auto wx = rw(6), wy = rw(4);
        auto [mu, v] = solve_kantorovich(M, wx, wy);
        CHECK(v == oracle::min_cost_flow(M, wx, wy));
        for (std::size_t i = 0; i < 6; ++i) {
            R s = 0;
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(mu.at(i, j) >= 0);
                s += mu.at(i, j);
            }
            CHECK(s == wx[i]);
        }
        auto a = solve_assignment(M, wx, wy);
        if (!a.infinite()) CHECK(v <= a.cost);
    }
    // determinism
    CostMatrix<R> M{5, 5, {}};
    for (int k = 0; k < 25; ++k) M.c.push_back(R(k % 3));
    std::vector<R> w(5, rat(1, 5));
    auto p1 = solve_kantorovich(M, w, w), p2 = solve_kantorovich(M, w, w);
    CHECK(p1.first.plan == p2.first.plan);
}
