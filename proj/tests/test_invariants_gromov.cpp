#include <doctest.h>

#include <random>
#include <set>

#include "gromon/gromov.hpp"
#include "gromon/invariants.hpp"
#include "gromon/shapes.hpp"
#include "oracles.hpp"

using namespace gromon;

namespace {
RSpace simplex(std::size_t n) {
    std::vector<Rational> d(n * n, Rational(1));
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
    return RSpace::uniform(n, d);
}

// ∫ |F − G| for two weighted atom lists, integrated between consecutive locations
Rational w1_atoms(const std::vector<std::pair<Rational, Rational>>& a,
                  const std::vector<std::pair<Rational, Rational>>& b) {
    std::set<Rational> locs;
    for (const auto& [x, m] : a) locs.insert(x);
    for (const auto& [x, m] : b) locs.insert(x);
    auto cdf = [](const auto& at, const Rational& t) {
        Rational s = 0;
        for (const auto& [x, m] : at)
            if (x <= t) s += m;
        return s;
    };
    Rational acc = 0;
    for (auto it = locs.begin(); std::next(it) != locs.end(); ++it)
        acc += abs(Rational(cdf(a, *it) - cdf(b, *it))) * (*std::next(it) - *it);
    return acc;
}

std::vector<std::pair<Rational, Rational>> pair_atoms(const RSpace& X) {
    std::vector<std::pair<Rational, Rational>> out;
    for (std::size_t i = 0; i < X.n(); ++i)
        for (std::size_t j = 0; j < X.n(); ++j) out.emplace_back(X.d(i, j), X.w(i) * X.w(j));
    return out;
}

std::vector<std::pair<Rational, Rational>> row_atoms(const RSpace& X, std::size_t i) {
    std::vector<std::pair<Rational, Rational>> out;
    for (std::size_t j = 0; j < X.n(); ++j) out.emplace_back(X.d(i, j), X.w(j));
    return out;
}
}  // namespace

TEST_CASE("simplex family") {
    for (std::size_t n : {1, 2, 3, 4}) {
        auto r = gm_exact(simplex(2 * n), simplex(n), PExponent::finite(1));
        CHECK(r.value.exact().value() == rat(1, long(2 * n)));
        auto r2 = gm_exact(simplex(2 * n), simplex(n), PExponent::finite(2));
        CHECK(r2.value.power == rat(1, long(2 * n)));
        REQUIRE(r.witness);
        CHECK(map_cost(simplex(2 * n), simplex(n), *r.witness, PExponent::finite(1)).power == r.value.power);
    }
    CHECK(gm_exact(simplex(2), simplex(1), PExponent::finite(2)).value.str() == "(1/2)^(1/2)");
}

TEST_CASE("triangle failure example") {
    auto X = simplex(2), Y = simplex(1);
    auto Z = RSpace(2, {0, 1, 1, 0}, {rat(1, 4), rat(3, 4)});
    for (int p : {1, 2, 3}) {
        auto P = PExponent::finite(p);
        CHECK(gm_exact(X, Y, P).value.power == rat(1, 2));
        CHECK(gm_exact(Y, X, P).value.infinite);
        CHECK(gm_exact(X, Z, P).value.infinite);
        CHECK(gm_exact(Z, X, P).value.infinite);
    }
}

TEST_CASE("bloom spaces") {
    auto [X, Y] = bloom_point_clouds();
    CHECK(global_distribution(X) == global_distribution(Y));
    CHECK(lower_bound_global(X, Y, PExponent::finite(1)).is_zero());
    CHECK_FALSE(gm_exact(X, Y, PExponent::finite(1)).value.is_zero());
    CHECK_FALSE(find_isometry(X, Y).has_value());
}

TEST_CASE("exact search agrees with enumeration") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; ++t) {
        bool uni = t % 2 == 0;
        std::size_t nx = 2 + t % 4, ny = uni ? 1 + t % 3 : nx;
        auto X = oracle::random_space(rng, nx, uni), Y = oracle::random_space(rng, ny, uni);
        if (!uni) Y = RSpace(ny, Y.dist(), X.weights());
        for (int p : {1, 2}) {
            auto r = gm_exact(X, Y, PExponent::finite(p));
            auto b = oracle::brute_gm(X, Y, p);
            CHECK(r.value.infinite == !b.has_value());
            if (b) {
                CHECK(r.value.power == *b);
                auto h = gm_heuristic(X, Y, PExponent::finite(p), 7 + t);
                CHECK_FALSE(h.value.infinite);
                CHECK(*b <= h.value.power);
                REQUIRE(h.witness);
                CHECK(map_cost(X, Y, *h.witness, PExponent::finite(p)).power == h.value.power);
            }
        }
    }
}

TEST_CASE("bounds against direct integrals") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 12; ++t) {
        auto X = oracle::random_space(rng, 4), Y = oracle::random_space(rng, 2);
        CHECK(lower_bound_global(X, Y, PExponent::finite(1)).power == w1_atoms(pair_atoms(X), pair_atoms(Y)));
        auto C = cost_function(X, Y);
        for (std::size_t i = 0; i < X.n(); ++i)
            for (std::size_t j = 0; j < Y.n(); ++j) CHECK(C(i, j) == w1_atoms(row_atoms(X, i), row_atoms(Y, j)));
        auto g = gm_exact(X, Y, PExponent::finite(1));
        auto m = lower_bound_local_monge(X, Y);
        auto k = lower_bound_local_kantorovich(X, Y);
        REQUIRE_FALSE(m.infinite());
        CHECK(k <= m.cost);
        CHECK(m.cost <= g.value.power);
        CHECK(lower_bound_global(X, Y, PExponent::finite(1)).power <= g.value.power);
        CHECK(lower_bound_local_monge(X, Y, MapClass::bijective).infinite());
    }
}

TEST_CASE("quasi-metric suite") {
    std::mt19937_64 rng(31);
    std::vector<RSpace> pool;
    for (int i = 0; i < 5; ++i) pool.push_back(oracle::random_space(rng, 2 + i % 3));
    pool.push_back(simplex(2));
    pool.push_back(simplex(4));
    for (int p : {1, 2}) {
        auto rep = quasi_metric_suite(pool, PExponent::finite(p));
        CHECK(rep.checks > 0);
        CHECK(rep.ok());
    }
}

TEST_CASE("mass splitting reproduces the coupling objective") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> U(0, 4);
    for (int t = 0; t < 10; ++t) {
        std::size_t nx = 3, ny = 2 + t % 2;
        Coupling<Rational> mu{nx, ny, std::vector<Rational>(nx * ny)};
        Rational tot = 0;
        for (auto& v : mu.plan) tot += (v = U(rng) + (t % 3 == 0));
        if (tot == 0) continue;
        for (auto& v : mu.plan) v /= tot;
        std::vector<Rational> wx(nx, 0), wy(ny, 0);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j) wx[i] += mu.at(i, j), wy[j] += mu.at(i, j);
        if (std::count(wx.begin(), wx.end(), 0) || std::count(wy.begin(), wy.end(), 0)) continue;
        auto X = RSpace(nx, oracle::random_space(rng, nx).dist(), wx);
        auto Y = RSpace(ny, oracle::random_space(rng, ny).dist(), wy);
        auto [ms, piY] = mass_splitting_from_coupling(X, Y, mu);
        CHECK(ms.support.size() == ms.space.n());
        for (int p : {1, 2})
            CHECK(map_cost(ms.space, Y, piY, PExponent::finite(p)).power == oracle::gw_objective(X, Y, mu, p));
        CHECK(map_cost(ms.space, X, ms.projection, PExponent::finite(1)).is_zero());
    }
}
