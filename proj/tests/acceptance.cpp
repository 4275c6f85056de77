// One PASS/FAIL line per acceptance criterion, with wall time against its budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "gromon/gromov.hpp"
#include "gromon/graphs.hpp"
#include "gromon/invariants.hpp"
#include "gromon/merge.hpp"
#include "gromon/shapes.hpp"
#include "oracles.hpp"

using namespace gromon;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && dt >= budget_s) {
        o.ok = false;
        o.detail = "over time budget";
    }
    if (!o.ok) ++failures;
    std::printf("%s %2d %s (%.2f s / %.0f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), dt, budget_s,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
}

std::vector<std::tuple<int, int, double>> as_double(const MetricGraph& G) {
    std::vector<std::tuple<int, int, double>> out;
    for (const auto& e : G.edges()) out.emplace_back(e.u, e.v, e.len.get_d());
    return out;
}

}  // namespace

int main() {
    criterion(1, "simplex family exact values", 1, [](Outcome& o) {
        for (std::size_t n : {1, 2, 3})
            for (int p : {1, 2}) {
                auto r = gm_exact(delta_space(2 * n), delta_space(n), PExponent::finite(p));
                // value^p = 1/(2n)
                o.require(!r.value.infinite && r.value.power == rat(1, long(2 * n)),
                          "n=" + std::to_string(n) + " p=" + std::to_string(p) + " got " + r.value.str());
            }
    });

    criterion(2, "asymmetry and infinite values", 1, [](Outcome& o) {
        auto X = two_point_space(rat(1, 2), rat(1, 2)), Y = delta_space(1);
        auto Z = two_point_space(rat(1, 4), rat(3, 4));
        for (int p : {1, 2}) {
            auto P = PExponent::finite(p);
            auto xy = gm_exact(X, Y, P);
            o.require(!xy.value.infinite && xy.value.power == rat(1, 2), "X to Y should be 2^(-1/p)");
            o.require(gm_exact(Y, X, P).value.infinite, "Y to X should be infinite");
            o.require(gm_exact(X, Z, P).value.infinite && gm_exact(Z, X, P).value.infinite,
                      "quarter weights should be infinite both ways");
        }
    });

    criterion(3, "bloom sets", 5, [](Outcome& o) {
        auto [X, Y] = bloom_point_clouds();
        o.require(lower_bound_global(X, Y, PExponent::finite(1)).is_zero(), "global bound not zero");
        auto g = gm_exact(X, Y, PExponent::finite(1));
        o.require(!g.value.infinite && !g.value.is_zero(), "exact distance should be positive");
        // every bijection has positive cost
        std::vector<int> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        int count = 0;
        Rational least = -1;
        do {
            Rational c = map_cost(X, Y, MeasurePreservingMap{perm}, PExponent::finite(1)).power;
            if (least < 0 || c < least) least = c;
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        o.require(count == 720 && sgn(least) > 0, "some bijection has zero cost");
        o.require(least == g.value.power, "exact search disagrees with bijection enumeration");
        o.require(!find_isometry(X, Y).has_value(), "spaces reported isometric");
    });

    criterion(4, "polygon pair with equal partition data", 10, [](Outcome& o) {
        auto cp = mallows_clarke_pair(4, mallows_clarke_default_height(4), 96);
        auto X = cp.X.space(), Y = cp.Y.space();
        o.require(partition_equality_check(X, Y, cp.part_x, cp.part_y, cp.pairing), "partition check failed");
        o.require(global_distribution(X) == global_distribution(Y), "global distributions differ");
        o.require(!congruent(cp.X, cp.Y), "shapes reported congruent");
    });

    criterion(5, "circle and bumpy circle expansions", 60, [](Outcome& o) {
        std::vector<std::pair<double, double>> s;
        for (int i = 1; i <= 300; ++i) {
            double r = i * 0.001;
            s.emplace_back(r, circle_chordal_cdf(r));
        }
        auto f = fit_taylor_coeffs(s, {1, 3}, 0.3);
        double c1 = 1 / M_PI, c3 = 1 / (24 * M_PI);
        o.require(std::fabs(f.coeffs[0] - c1) <= 0.05 * c1, "linear coefficient off");
        o.require(std::fabs(f.coeffs[1] - c3) <= 0.05 * c3, "cubic coefficient off");

        double A = 0.1;
        std::vector<double> grid;
        for (int i = 1; i <= 30; ++i) grid.push_back(i * 0.01);
        auto mc = bumpy_circle_mc_cdf(A, 5, 2'000'000, 11, grid);
        auto g = fit_taylor_coeffs(mc, {1, 3}, 0.3);
        double lead = (2 + A * A) / (2 * M_PI);
        char buf[96];
        std::snprintf(buf, sizeof buf, "bumpy leading %.5f vs %.5f", g.coeffs[0], lead);
        o.require(std::fabs(g.coeffs[0] - lead) <= 0.05 * lead, buf);
    });

    criterion(6, "sampled sphere local volume", 60, [](Outcome& o) {
        auto S = sample_sphere_surface(2, 100'000, 2024);
        std::vector<double> grid;
        for (int k = 0; k <= 36; ++k) grid.push_back(0.1 + 0.05 * k);
        double sup = 0;
        std::vector<double> cubic;
        for (std::size_t base = 0; base < 30; ++base) {
            auto loc = empirical_local_cdf(S, base * 3331, grid);
            for (auto [r, v] : loc) sup = std::max(sup, std::fabs(v - r * r / 4));
            cubic.push_back(fit_taylor_coeffs(loc, {2, 3}).coeffs[1]);
        }
        double mean = std::accumulate(cubic.begin(), cubic.end(), 0.0) / double(cubic.size()), var = 0;
        for (double c : cubic) var += (c - mean) * (c - mean);
        double se = std::sqrt(var / double(cubic.size() - 1) / double(cubic.size()));
        char buf[96];
        std::snprintf(buf, sizeof buf, "sup error %.4f, cubic t = %.2f", sup, mean / se);
        o.require(sup <= 0.02, buf);
        o.require(std::fabs(mean / se) < 3, buf);
    });

    criterion(7, "lobe trees", 5, [](Outcome& o) {
        auto [m1, m2] = reference_lobe_matrices();
        for (const auto& m : {m1, m2})
            for (int i = 0; i < 3; ++i) o.require(m[i][0] + m[i][1] + m[i][2] == 20, "row sum not 20");
        auto T1 = lobe_tree(m1), T2 = lobe_tree(m2);
        o.require(node_multiset(T1) == node_multiset(T2), "node multisets differ");
        o.require(tree_canonical_form(T1) != tree_canonical_form(T2), "trees isomorphic");
        auto L1 = lobe_tree_layout(m1), L2 = lobe_tree_layout(m2);
        auto nm = lobe_node_map(L1, L2, reference_lobe_permutation());
        auto D1 = discretize_graph(L1.graph, rat(1, 2)), D2 = discretize_graph(L2.graph, rat(1, 2));
        o.require(D1.space.n() == D2.space.n(), "discretizations differ in size");
        std::vector<int> phi;
        for (const auto& p : D1.points) {
            auto q = lobe_map_point(L1, L2, nm, p);
            auto it = std::find(D2.points.begin(), D2.points.end(), q);
            o.require(it != D2.points.end(), "image is not a sample point");
            if (it == D2.points.end()) return;
            phi.push_back(int(it - D2.points.begin()));
        }
        o.require(pushforward_check(D1.space, D2.space, phi), "block map is not measure preserving");
        auto C = cost_function(D1.space, D2.space);
        Rational cost = 0;
        for (std::size_t i = 0; i < phi.size(); ++i) cost += D1.space.w(i) * C(i, std::size_t(phi[i]));
        o.require(cost == 0, "local cost of the block map is " + to_string(cost));
    });

    criterion(8, "trees with equal global distributions", 30, [](Outcome& o) {
        auto [U1, U2] = path_sequence_pair_unit();
        auto s1 = edge_midpoint_sampling(U1, 2), s2 = edge_midpoint_sampling(U2, 2);
        o.require(partition_equality_check(s1.disc.space, s2.disc.space, s1.part, s2.part, edge_class_pairing(U1, U2)),
                  "partition witness failed");
        o.require(global_distribution(s1.disc.space) == global_distribution(s2.disc.space),
                  "sampled global distributions differ");
        auto [T1, T2] = path_sequence_pair();
        o.require(node_multiset(T1) != node_multiset(T2), "node multisets equal");
        auto D1 = discretize_graph(T1, rat(1, 4)), D2 = discretize_graph(T2, rat(1, 4));
        auto lp = lower_bound_local_kantorovich(D1.space, D2.space);
        o.require(sgn(lp) > 0, "transport bound is zero");
    });

    criterion(9, "tree reconstruction round trips", 60, [](Outcome& o) {
        std::mt19937_64 rng(9);
        int pass = 0;
        for (int t = 0; t < 100; ++t) {
            auto T = random_tree(rng, 12);
            try {
                pass += tree_canonical_form(reconstruct_tree(node_multiset(T))) == tree_canonical_form(T);
            } catch (const Error&) {
            }
        }
        o.require(pass == 100, std::to_string(pass) + "/100");
    });

    criterion(10, "quasi-metric suite", 120, [](Outcome& o) {
        std::mt19937_64 rng(10);
        std::size_t checks = 0, bad = 0;
        std::string first;
        for (int t = 0; t < 50; ++t) {
            std::vector<RSpace> S;
            for (int k = 0; k < 3; ++k) S.push_back(oracle::random_space(rng, 5));
            auto rep = quasi_metric_suite(S, PExponent::finite(1));
            checks += rep.checks;
            bad += rep.violations.size();
            if (!rep.ok() && first.empty()) first = rep.violations[0];
        }
        o.require(checks > 0 && bad == 0, std::to_string(bad) + " violations, first: " + first);
    });

    criterion(11, "mass splitting identity", 10, [](Outcome& o) {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<int> U(0, 5);
        int done = 0;
        while (done < 50) {
            Coupling<Rational> mu{4, 4, std::vector<Rational>(16)};
            Rational tot = 0;
            for (auto& v : mu.plan) tot += (v = U(rng));
            std::vector<Rational> wx(4, 0), wy(4, 0);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) wx[i] += mu.at(i, j), wy[j] += mu.at(i, j);
            if (std::count(wx.begin(), wx.end(), 0) || std::count(wy.begin(), wy.end(), 0)) continue;
            for (auto& v : mu.plan) v /= tot;
            for (auto& v : wx) v /= tot;
            for (auto& v : wy) v /= tot;
            auto X = RSpace(4, oracle::random_space(rng, 4).dist(), wx);
            auto Y = RSpace(4, oracle::random_space(rng, 4).dist(), wy);
            auto [ms, piY] = mass_splitting_from_coupling(X, Y, mu);
            o.require(map_cost(ms.space, Y, piY, PExponent::finite(1)).power == oracle::gw_objective(X, Y, mu, 1),
                      "objective mismatch at coupling " + std::to_string(done));
            ++done;
        }
    });

    criterion(12, "ball volumes and interleaving candidates", 60, [](Outcome& o) {
        std::mt19937_64 rng(12);
        const double cell = 1.0 / 64;
        double sup = 0;
        for (int t = 0; t < 50; ++t) {
            auto G = random_graph(rng, 4 + t % 5, t % 4);
            auto D = as_double(G);
            for (int v = 0; v < G.nodes(); ++v) {
                auto h = ball_volume_function(G, GraphPoint::at_node(v));
                auto g = oracle::fine_grid(G.nodes(), D, cell, v);
                for (int k = 0; k <= 120; ++k) {
                    double r = k * 0.07 + 0.003;
                    sup = std::max(sup, std::fabs(h(Rational(r)).get_d() - g.volume(r)));
                }
            }
        }
        o.require(sup < cell, "ball volume sup error " + std::to_string(sup));
        std::mt19937_64 rt(13);
        for (int t = 0; t < 25; ++t) {
            auto T = random_tree(rt, 4), S = random_tree(rt, 4);
            Rational d = delta(T, S);
            bool member = false;
            for (int a = 0; a < T.nodes() && !member; ++a)
                for (int b = 0; b < S.nodes() && !member; ++b) {
                    auto c = candidate_set(merge_tree(T, a), merge_tree(S, b));
                    member = std::binary_search(c.begin(), c.end(), d);
                }
            o.require(member, "delta outside the candidate union at pair " + std::to_string(t));
        }
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
