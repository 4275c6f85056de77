#include "gromon/gromov.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "gromon/invariants.hpp"

namespace gromon {

namespace {

template <class T>
bool uniform_weights(const FiniteMMSpace<T>& X) {
    for (std::size_t i = 1; i < X.n(); ++i)
        if (!Num<T>::eq(X.w(i), X.w(0))) return false;
    return true;
}

template <class T>
T gterm(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, std::size_t i, std::size_t j,
        int yi, int yj, PExponent p) {
    T g = Num<T>::abs(T(X.d(i, j) - Y.d(yi, yj)));
    return p.infinite ? g : ipow(g, p.p);
}

template <class T>
struct GMEnum {
    const FiniteMMSpace<T>& X;
    const FiniteMMSpace<T>& Y;
    PExponent p;
    std::vector<T> cap;
    std::vector<int> cur, best;
    T best_cost{};
    bool found = false;

    GMEnum(const FiniteMMSpace<T>& X_, const FiniteMMSpace<T>& Y_, PExponent p_)
        : X(X_), Y(Y_), p(p_), cap(Y_.weights()), cur(X_.n(), -1) {}

    T increment(std::size_t k, int y) const {
        T inc = Num<T>::zero();
        for (std::size_t i = 0; i < k; ++i) {
            T g = gterm(X, Y, i, k, cur[i], y, p);
            if (p.infinite) {
                if (g > inc) inc = g;
            } else {
                inc += 2 * X.w(i) * X.w(k) * g;
            }
        }
        return inc;
    }

    void run(std::size_t k, const T& partial) {
        if (found && !(partial < best_cost)) return;
        if (k == X.n()) {
            for (const auto& c : cap)
                if (!Num<T>::is_zero(c)) return;
            best = cur;
            best_cost = partial;
            found = true;
            return;
        }
        for (std::size_t y = 0; y < Y.n(); ++y) {
            if (!Num<T>::leq(X.w(k), cap[y])) continue;
            T inc = increment(k, int(y));
            T next = p.infinite ? (inc > partial ? inc : partial) : T(partial + inc);
            cap[y] -= X.w(k);
            cur[k] = int(y);
            run(k + 1, next);
            cap[y] += X.w(k);
            cur[k] = -1;
        }
    }
};

template <class T>
T full_cost(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, const std::vector<int>& a,
            PExponent p) {
    T acc = Num<T>::zero();
    for (std::size_t i = 0; i < X.n(); ++i)
        for (std::size_t j = 0; j < X.n(); ++j) {
            T g = gterm(X, Y, i, j, a[i], a[j], p);
            if (p.infinite) {
                if (g > acc) acc = g;
            } else {
                acc += X.w(i) * X.w(j) * g;
            }
        }
    return acc;
}

// randomized feasible map; empty if none exists
template <class T>
bool random_feasible(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, std::mt19937_64& rng,
                     std::vector<int>& out) {
    std::vector<T> cap(Y.weights());
    out.assign(X.n(), -1);
    std::vector<std::vector<int>> orders(X.n());
    for (auto& o : orders) {
        o.resize(Y.n());
        std::iota(o.begin(), o.end(), 0);
        std::shuffle(o.begin(), o.end(), rng);
    }
    std::size_t budget = 2000000;
    std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
        if (budget-- == 0) throw SizeLimitExceeded("feasible-map search budget exhausted");
        if (k == X.n()) {
            for (const auto& c : cap)
                if (!Num<T>::is_zero(c)) return false;
            return true;
        }
        for (int y : orders[k]) {
            if (!Num<T>::leq(X.w(k), cap[y])) continue;
            cap[y] -= X.w(k);
            out[k] = y;
            if (go(k + 1)) return true;
            cap[y] += X.w(k);
        }
        return false;
    };
    return go(0);
}

}  // namespace

template <class T>
GMResult<T> gm_exact(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, PExponent p,
                     GMGuards guards) {
    GMResult<T> res;
    res.method = "exact";
    res.value = PowerValue<T>::inf_value(p);
    if (X.n() < Y.n()) return res;
    if (uniform_weights(X) && uniform_weights(Y)) {
        if (X.n() % Y.n() != 0) return res;
        if (X.n() > guards.uniform)
            throw SizeLimitExceeded("exact Gromov-Monge limited to " +
                                    std::to_string(guards.uniform) + " points (uniform)");
    } else if (X.n() > guards.general) {
        throw SizeLimitExceeded("exact Gromov-Monge limited to " +
                                std::to_string(guards.general) + " points (general weights)");
    }

    // split on the image of point 0; each branch finds its lexicographically first optimum
    std::vector<GMEnum<T>> branches;
    branches.reserve(Y.n());
    for (std::size_t y = 0; y < Y.n(); ++y) branches.emplace_back(X, Y, p);
    parallel_for(Y.n(), [&](std::size_t y) {
        auto& e = branches[y];
        if (!Num<T>::leq(X.w(0), e.cap[y])) return;
        e.cap[y] -= X.w(0);
        e.cur[0] = int(y);
        e.run(1, Num<T>::zero());
    });
    const GMEnum<T>* win = nullptr;
    for (const auto& e : branches)
        if (e.found && (!win || e.best_cost < win->best_cost)) win = &e;
    if (!win) return res;
    res.value = PowerValue<T>::from_power(win->best_cost, p);
    res.witness = MeasurePreservingMap{win->best};
    return res;
}

template <class T>
GMResult<T> gm_heuristic(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, PExponent p,
                         std::uint64_t seed, int restarts) {
    GMResult<T> res;
    res.method = "heuristic";
    res.value = PowerValue<T>::inf_value(p);
    if (restarts < 1) throw InvalidInput("restarts must be >= 1");
    if (X.n() < Y.n()) return res;
    const bool uni = uniform_weights(X) && uniform_weights(Y);
    if (uni && X.n() % Y.n() != 0) return res;
    std::mt19937_64 rng(seed);
    const std::size_t n = X.n();

    std::vector<int> best;
    T best_cost{};
    for (int r = 0; r < restarts; ++r) {
        std::vector<int> a;
        if (r == 0) {
            // seed with the optimal local-distribution assignment
            auto lh = lower_bound_local_monge(X, Y, MapClass::all, n);
            if (lh.infinite()) return res;
            a = lh.map->a;
        } else if (uni) {
            a.resize(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = int(i % Y.n());
            std::shuffle(a.begin(), a.end(), rng);
        } else if (!random_feasible(X, Y, rng, a)) {
            return res;
        }
        T cost = full_cost(X, Y, a, p);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t i = 0; i < n && !improved; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (a[i] == a[j] || !(X.w(i) == X.w(j))) continue;
                    T next;
                    if (p.infinite) {
                        std::swap(a[i], a[j]);
                        next = full_cost(X, Y, a, p);
                        std::swap(a[i], a[j]);
                    } else {
                        T delta = Num<T>::zero();
                        for (std::size_t l = 0; l < n; ++l) {
                            if (l == i || l == j) continue;
                            delta += X.w(l) * X.w(i) *
                                     (gterm(X, Y, i, l, a[j], a[l], p) - gterm(X, Y, i, l, a[i], a[l], p));
                            delta += X.w(l) * X.w(j) *
                                     (gterm(X, Y, j, l, a[i], a[l], p) - gterm(X, Y, j, l, a[j], a[l], p));
                        }
                        delta += X.w(i) * X.w(j) *
                                 (gterm(X, Y, i, j, a[j], a[i], p) - gterm(X, Y, i, j, a[i], a[j], p));
                        next = cost + 2 * delta;
                    }
                    bool better = Num<T>::exact ? next < cost
                                                : Num<T>::to_double(next) <
                                                      Num<T>::to_double(cost) - float_tolerance();
                    if (better) {
                        std::swap(a[i], a[j]);
                        cost = Num<T>::exact ? next : full_cost(X, Y, a, p);
                        improved = true;
                        break;
                    }
                }
        }
        if (best.empty() || cost < best_cost) {
            best = a;
            best_cost = cost;
        }
    }
    res.value = PowerValue<T>::from_power(best_cost, p);
    res.witness = MeasurePreservingMap{best};
    return res;
}

template <class T>
SuiteReport quasi_metric_suite(const std::vector<FiniteMMSpace<T>>& S, PExponent p) {
    SuiteReport rep;
    const std::size_t k = S.size();
    std::vector<std::vector<GMResult<T>>> d(k, std::vector<GMResult<T>>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) d[i][j] = gm_exact(S[i], S[j], p);
    auto tag = [](std::size_t i, std::size_t j) {
        return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
    };
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const auto& v = d[i][j].value;
            ++rep.checks;
            if (!v.infinite && v.power < Num<T>::zero())
                rep.violations.push_back("negative distance " + tag(i, j));
            if (i == j) {
                ++rep.checks;
                if (!v.is_zero()) rep.violations.push_back("nonzero self-distance " + tag(i, j));
            }
            if (v.is_zero()) {
                ++rep.checks;
                if (!is_isomorphism(S[i], S[j], *d[i][j].witness))
                    rep.violations.push_back("zero distance without isomorphism " + tag(i, j));
            }
            if (i < j) {
                ++rep.checks;
                const auto& w = d[j][i].value;
                if (S[i].n() == S[j].n()) {
                    if (!v.same(w)) rep.violations.push_back("asymmetric equal-size pair " + tag(i, j));
                } else if (!v.infinite && !w.infinite) {
                    rep.violations.push_back("both directions finite for sizes " + tag(i, j));
                }
            }
            for (std::size_t m = 0; m < k; ++m) {
                const auto& a = d[i][j].value;
                const auto& b = d[j][m].value;
                const auto& c = d[i][m].value;
                ++rep.checks;
                if (a.infinite || b.infinite) continue;
                bool bad;
                if (c.infinite) {
                    bad = true;
                } else if (p.infinite || p.p == 1) {
                    bad = Num<T>::exact ? (a.power + b.power < c.power)
                                        : !Num<T>::leq(c.power, T(a.power + b.power));
                } else {
                    double lhs = c.approx(), rhs = a.approx() + b.approx();
                    bad = lhs > rhs * (1 + 1e-12) + 1e-15;
                }
                if (bad)
                    rep.violations.push_back("triangle inequality " + tag(i, j) + "->" +
                                             std::to_string(m));
            }
            // lower bounds
            if (!v.infinite && !p.infinite) {
                auto lH = lower_bound_global(S[i], S[j], p);
                ++rep.checks;
                bool bad = p.p == 1 ? !Num<T>::leq(lH.power, v.power)
                                    : lH.approx() > v.approx() * (1 + 1e-12) + 1e-15;
                if (bad) rep.violations.push_back("global bound exceeds distance " + tag(i, j));
                if (p.p == 1) {
                    auto lh = lower_bound_local_monge(S[i], S[j]);
                    auto lu = lower_bound_local_kantorovich(S[i], S[j]);
                    rep.checks += 2;
                    if (lh.infinite() || !Num<T>::leq(lh.cost, v.power))
                        rep.violations.push_back("local Monge bound exceeds distance " + tag(i, j));
                    else if (!Num<T>::leq(lu, lh.cost))
                        rep.violations.push_back("Kantorovich bound exceeds Monge bound " + tag(i, j));
                }
            }
        }
    return rep;
}

template <class T>
std::pair<MassSplitting<T>, MeasurePreservingMap> mass_splitting_from_coupling(
    const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, const Coupling<T>& mu) {
    if (!is_coupling(X, Y, mu)) throw InvalidInput("invalid coupling");
    MassSplitting<T> ms;
    std::vector<T> w;
    for (std::size_t i = 0; i < mu.nx; ++i)
        for (std::size_t j = 0; j < mu.ny; ++j)
            if (mu.at(i, j) > Num<T>::zero() && !Num<T>::is_zero(mu.at(i, j))) {
                ms.support.emplace_back(int(i), int(j));
                w.push_back(mu.at(i, j));
            }
    const std::size_t n = w.size();
    std::vector<T> dist(n * n);
    MeasurePreservingMap px, py;
    for (std::size_t a = 0; a < n; ++a) {
        px.a.push_back(ms.support[a].first);
        py.a.push_back(ms.support[a].second);
        for (std::size_t b = 0; b < n; ++b)
            dist[a * n + b] = X.d(ms.support[a].first, ms.support[b].first);
    }
    if constexpr (!Num<T>::exact) {
        // renormalize dropped near-zero mass
        T tot = 0;
        for (auto& x : w) tot += x;
        for (auto& x : w) x /= tot;
    }
    ms.space = FiniteMMSpace<T>(n, std::move(dist), std::move(w), true, false);
    ms.projection = px;
    return {ms, py};
}

template <class T>
std::vector<std::pair<T, T>> cross_distance_measure(const FiniteMMSpace<T>& X,
                                                    const std::vector<int>& part, int bi, int bj) {
    std::vector<std::pair<T, T>> atoms;
    for (std::size_t a = 0; a < X.n(); ++a) {
        if (part[a] != bi) continue;
        for (std::size_t b = 0; b < X.n(); ++b)
            if (part[b] == bj) atoms.emplace_back(X.d(a, b), X.w(a) * X.w(b));
    }
    std::sort(atoms.begin(), atoms.end(), [](const auto& l, const auto& r) {
        if (l.first < r.first) return true;
        if (r.first < l.first) return false;
        return l.second < r.second;
    });
    std::vector<std::pair<T, T>> out;
    for (auto& at : atoms) {
        if (!out.empty() && out.back().first == at.first)
            out.back().second += at.second;
        else
            out.push_back(at);
    }
    return out;
}

namespace {
int check_partition(const std::vector<int>& part, std::size_t n) {
    if (part.size() != n) throw InvalidInput("partition length differs from point count");
    int k = 0;
    for (int b : part) {
        if (b < 0) throw InvalidInput("negative block label");
        k = std::max(k, b + 1);
    }
    std::vector<char> used(k, 0);
    for (int b : part) used[b] = 1;
    for (char u : used)
        if (!u) throw InvalidInput("empty partition block");
    return k;
}
}  // namespace

template <class T>
bool partition_equality_check(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                              const std::vector<int>& px, const std::vector<int>& py,
                              const BlockPairing& pairing) {
    const int kx = check_partition(px, X.n()), ky = check_partition(py, Y.n());
    if (kx != ky) throw InvalidInput("partitions have different block counts");
    const std::size_t kk = std::size_t(kx) * kx;
    if (pairing.size() != kk) throw InvalidInput("pairing must cover every ordered block pair");
    std::vector<char> sx(kk, 0), sy(kk, 0);
    for (const auto& e : pairing) {
        for (int v : e)
            if (v < 0 || v >= kx) throw InvalidInput("pairing refers to an unknown block");
        auto& a = sx[e[0] * kx + e[1]];
        auto& b = sy[e[2] * kx + e[3]];
        if (a || b) throw InvalidInput("pairing is not a bijection");
        a = b = 1;
    }
    for (const auto& e : pairing) {
        auto hx = cross_distance_measure(X, px, e[0], e[1]);
        auto hy = cross_distance_measure(Y, py, e[2], e[3]);
        if (hx.size() != hy.size()) return false;
        for (std::size_t t = 0; t < hx.size(); ++t)
            if (!Num<T>::eq(hx[t].first, hy[t].first) || !Num<T>::eq(hx[t].second, hy[t].second))
                return false;
    }
    return true;
}

template <class T>
std::optional<MeasurePreservingMap> find_isometry(const FiniteMMSpace<T>& X,
                                                  const FiniteMMSpace<T>& Y) {
    const std::size_t n = X.n();
    if (n != Y.n()) return std::nullopt;
    auto profile = [](const FiniteMMSpace<T>& S, std::size_t i) {
        std::vector<std::pair<T, T>> pr;
        for (std::size_t j = 0; j < S.n(); ++j) pr.emplace_back(S.d(i, j), S.w(j));
        std::sort(pr.begin(), pr.end(), [](const auto& l, const auto& r) {
            if (l.first < r.first) return true;
            if (r.first < l.first) return false;
            return l.second < r.second;
        });
        return pr;
    };
    auto same = [](const std::vector<std::pair<T, T>>& a, const std::vector<std::pair<T, T>>& b) {
        for (std::size_t t = 0; t < a.size(); ++t)
            if (!Num<T>::eq(a[t].first, b[t].first) || !Num<T>::eq(a[t].second, b[t].second))
                return false;
        return true;
    };
    std::vector<std::vector<std::pair<T, T>>> PX(n), PY(n);
    for (std::size_t i = 0; i < n; ++i) {
        PX[i] = profile(X, i);
        PY[i] = profile(Y, i);
    }
    std::vector<std::vector<int>> cand(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (Num<T>::eq(X.w(i), Y.w(j)) && same(PX[i], PY[j])) cand[i].push_back(int(j));
        if (cand[i].empty()) return std::nullopt;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return cand[a].size() < cand[b].size(); });
    std::vector<int> img(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
        if (k == n) return true;
        int x = order[k];
        for (int y : cand[x]) {
            if (used[y]) continue;
            bool ok = true;
            for (std::size_t t = 0; t < k && ok; ++t) {
                int xp = order[t];
                ok = Num<T>::eq(X.d(x, xp), Y.d(y, img[xp]));
            }
            if (!ok) continue;
            used[y] = 1;
            img[x] = y;
            if (go(k + 1)) return true;
            used[y] = 0;
            img[x] = -1;
        }
        return false;
    };
    if (!go(0)) return std::nullopt;
    return MeasurePreservingMap{img};
}

#define GROMON_INST(T)                                                                           \
    template GMResult<T> gm_exact(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&, PExponent,  \
                                  GMGuards);                                                     \
    template GMResult<T> gm_heuristic(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&,          \
                                      PExponent, std::uint64_t, int);                            \
    template SuiteReport quasi_metric_suite(const std::vector<FiniteMMSpace<T>>&, PExponent);    \
    template std::pair<MassSplitting<T>, MeasurePreservingMap> mass_splitting_from_coupling(     \
        const FiniteMMSpace<T>&, const FiniteMMSpace<T>&, const Coupling<T>&);                   \
    template std::vector<std::pair<T, T>> cross_distance_measure(                                \
        const FiniteMMSpace<T>&, const std::vector<int>&, int, int);                             \
    template bool partition_equality_check(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&,     \
                                           const std::vector<int>&, const std::vector<int>&,     \
                                           const BlockPairing&);                                 \
    template std::optional<MeasurePreservingMap> find_isometry(const FiniteMMSpace<T>&,          \
                                                               const FiniteMMSpace<T>&);
GROMON_INST(Rational)
GROMON_INST(double)
#undef GROMON_INST

}  // namespace gromon
