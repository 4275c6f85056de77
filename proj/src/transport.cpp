#include "gromon/transport.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace gromon {

// ---- StepCDF ----

template <class T>
StepCDF<T> StepCDF<T>::from_atoms(std::vector<std::pair<T, T>> atoms) {
    if (atoms.empty()) throw InvalidInput("no atoms");
    std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
        if (a.first < b.first) return true;
        if (b.first < a.first) return false;
        return a.second < b.second;
    });
    StepCDF F;
    T acc = Num<T>::zero();
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        acc += atoms[k].second;
        if (k + 1 < atoms.size() && atoms[k + 1].first == atoms[k].first) continue;
        F.xs.push_back(atoms[k].first);
        F.values.push_back(acc);
    }
    if (!Num<T>::eq(F.values.back(), Num<T>::one())) throw InvalidInput("atoms must sum to 1");
    F.values.back() = Num<T>::one();
    return F;
}

template <class T>
StepCDF<T> StepCDF<T>::dirac(const T& x) {
    StepCDF F;
    F.xs = {x};
    F.values = {Num<T>::one()};
    return F;
}

template <class T>
T StepCDF<T>::operator()(const T& r) const {
    auto it = std::upper_bound(xs.begin(), xs.end(), r);
    if (it == xs.begin()) return Num<T>::zero();
    return values[std::size_t(it - xs.begin()) - 1];
}

template <class T>
void StepCDF<T>::validate() const {
    if (xs.empty() || xs.size() != values.size()) throw InvalidInput("malformed step CDF");
    if (xs[0] < Num<T>::zero()) throw InvalidInput("negative breakpoint");
    for (std::size_t k = 1; k < xs.size(); ++k) {
        if (!(xs[k - 1] < xs[k])) throw InvalidInput("breakpoints must increase");
        if (values[k] < values[k - 1]) throw InvalidInput("values must be nondecreasing");
    }
    if (!Num<T>::eq(values.back(), Num<T>::one())) throw InvalidInput("CDF must end at 1");
}

template <class T>
bool StepCDF<T>::operator==(const StepCDF& o) const {
    return xs == o.xs && values == o.values;
}

template <class T>
void StepCDF<T>::write_csv(std::ostream& os) const {
    os << "r,value\n";
    for (std::size_t k = 0; k < xs.size(); ++k)
        os << to_string(xs[k]) << ',' << to_string(values[k]) << '\n';
}

template <class T>
T quantile(const StepCDF<T>& F, const T& u) {
    if (u < Num<T>::zero() || u > Num<T>::one()) throw InvalidInput("quantile level out of [0,1]");
    for (std::size_t k = 0; k < F.xs.size(); ++k)
        if (F.values[k] > u) return F.xs[k];
    return F.xs.back();
}

template <class T>
T w1_cdf(const StepCDF<T>& F, const StepCDF<T>& G) {
    std::vector<T> grid(F.xs);
    grid.insert(grid.end(), G.xs.begin(), G.xs.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    T acc = Num<T>::zero();
    std::size_t a = 0, b = 0;
    T fa = Num<T>::zero(), gb = Num<T>::zero();
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        while (a < F.xs.size() && !(grid[k] < F.xs[a])) fa = F.values[a++];
        while (b < G.xs.size() && !(grid[k] < G.xs[b])) gb = G.values[b++];
        acc += Num<T>::abs(T(fa - gb)) * (grid[k + 1] - grid[k]);
    }
    return acc;
}

template <class T>
PowerValue<T> wp_quantile(const StepCDF<T>& F, const StepCDF<T>& G, PExponent p) {
    if (p.infinite) throw InvalidInput("p = inf is not supported for quantile transport");
    // quantile of F is xs[k] on u ∈ [values[k-1], values[k])
    std::vector<T> levels(F.values);
    levels.insert(levels.end(), G.values.begin(), G.values.end());
    levels.push_back(Num<T>::zero());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    T acc = Num<T>::zero();
    std::size_t a = 0, b = 0;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        const T& lo = levels[k];
        while (a + 1 < F.values.size() && !(lo < F.values[a])) ++a;
        while (b + 1 < G.values.size() && !(lo < G.values[b])) ++b;
        T diff = Num<T>::abs(T(F.xs[a] - G.xs[b]));
        acc += (levels[k + 1] - lo) * ipow(diff, p.p);
    }
    return PowerValue<T>::from_power(acc, p);
}

// ---- assignment ----

template <class T>
std::vector<int> hungarian(const CostMatrix<T>& C) {
    const std::size_t n = C.nx, m = C.ny;
    if (n > m) throw InvalidInput("hungarian needs rows <= cols");
    std::vector<T> u(n + 1, Num<T>::zero()), v(m + 1, Num<T>::zero()), minv(m + 1);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<char> used(m + 1, 0), set(m + 1, 0);
        do {
            used[j0] = 1;
            std::size_t i0 = p[j0], j1 = 0;
            T delta{};
            bool have = false;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                T cur = C(i0 - 1, j - 1) - u[i0] - v[j];
                if (!set[j] || cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                    set[j] = 1;
                }
                if (!have || minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                    have = true;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else if (set[j]) {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> perm(n, -1);
    for (std::size_t j = 1; j <= m; ++j)
        if (p[j]) perm[p[j] - 1] = int(j - 1);
    return perm;
}

namespace {

template <class T>
bool all_equal(const std::vector<T>& w) {
    for (const auto& x : w)
        if (!Num<T>::eq(x, w[0])) return false;
    return true;
}

template <class T>
struct BranchBound {
    const CostMatrix<T>& C;
    const std::vector<T>& wx;
    std::vector<T> cap;
    std::vector<T> tail;  // Σ_{i>=k} w_i min_j C(i,j)
    std::vector<int> cur, best;
    T best_cost{};
    bool found = false;

    BranchBound(const CostMatrix<T>& C_, const std::vector<T>& wx_, const std::vector<T>& wy)
        : C(C_), wx(wx_), cap(wy), cur(C_.nx, -1) {
        tail.assign(C.nx + 1, Num<T>::zero());
        for (std::size_t k = C.nx; k-- > 0;) {
            T mn = C(k, 0);
            for (std::size_t j = 1; j < C.ny; ++j)
                if (C(k, j) < mn) mn = C(k, j);
            tail[k] = tail[k + 1] + wx[k] * mn;
        }
    }

    void run(std::size_t k, const T& partial) {
        if (found && !(partial + tail[k] < best_cost)) return;
        if (k == C.nx) {
            for (const auto& c : cap)
                if (!Num<T>::is_zero(c)) return;
            best = cur;
            best_cost = partial;
            found = true;
            return;
        }
        for (std::size_t j = 0; j < C.ny; ++j) {
            if (!Num<T>::leq(wx[k], cap[j])) continue;
            cap[j] -= wx[k];
            cur[k] = int(j);
            run(k + 1, partial + wx[k] * C(k, j));
            cap[j] += wx[k];
        }
        cur[k] = -1;
    }
};

}  // namespace

template <class T>
AssignmentResult<T> solve_assignment(const CostMatrix<T>& C, const std::vector<T>& wx,
                                     const std::vector<T>& wy, std::size_t size_guard) {
    if (wx.size() != C.nx || wy.size() != C.ny) throw InvalidInput("cost/weight size mismatch");
    AssignmentResult<T> res;
    if (C.nx < C.ny) return res;  // cannot cover a fully supported target
    if (all_equal(wx) && all_equal(wy)) {
        if (C.nx % C.ny != 0) return res;
        const std::size_t k = C.nx / C.ny;
        CostMatrix<T> D;
        D.nx = D.ny = C.nx;
        D.c.resize(C.nx * C.nx);
        for (std::size_t i = 0; i < C.nx; ++i)
            for (std::size_t j = 0; j < C.nx; ++j) D(i, j) = C(i, j / k);
        auto perm = hungarian(D);
        MeasurePreservingMap phi;
        phi.a.resize(C.nx);
        res.cost = Num<T>::zero();
        for (std::size_t i = 0; i < C.nx; ++i) {
            phi.a[i] = perm[i] / int(k);
            res.cost += wx[i] * C(i, phi.a[i]);
        }
        res.map = phi;
        return res;
    }
    if (C.nx > size_guard)
        throw SizeLimitExceeded("general-weight assignment limited to " +
                                std::to_string(size_guard) + " source points");
    BranchBound<T> bb(C, wx, wy);
    bb.run(0, Num<T>::zero());
    if (!bb.found) return res;
    res.map = MeasurePreservingMap{bb.best};
    res.cost = bb.best_cost;
    return res;
}

// ---- Kantorovich: transportation simplex, Bland's rule ----

template <class T>
std::pair<Coupling<T>, T> solve_kantorovich(const CostMatrix<T>& C, const std::vector<T>& wx,
                                            const std::vector<T>& wy) {
    using N = Num<T>;
    const std::size_t n = C.nx, m = C.ny;
    if (wx.size() != n || wy.size() != m) throw InvalidInput("cost/weight size mismatch");
    std::vector<T> x(n * m, N::zero());
    std::vector<char> basic(n * m, 0);

    // northwest corner
    {
        std::vector<T> a(wx), b(wy);
        std::size_t i = 0, j = 0;
        while (i < n && j < m) {
            T q = a[i] < b[j] ? a[i] : b[j];
            x[i * m + j] = q;
            basic[i * m + j] = 1;
            a[i] -= q;
            b[j] -= q;
            if (i + 1 == n && j + 1 == m) break;
            if (N::is_zero(a[i]) && i + 1 < n)
                ++i;
            else
                ++j;
        }
    }

    std::vector<T> u(n), v(m);
    for (std::size_t iter = 0;; ++iter) {
        // adjacency of basis tree: nodes 0..n-1 rows, n..n+m-1 cols
        std::vector<std::vector<std::size_t>> adj(n + m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (basic[i * m + j]) {
                    adj[i].push_back(n + j);
                    adj[n + j].push_back(i);
                }
        // potentials: u_i + v_j = c_ij on basis
        std::vector<char> seen(n + m, 0);
        std::deque<std::size_t> q{0};
        seen[0] = 1;
        u[0] = N::zero();
        while (!q.empty()) {
            std::size_t a = q.front();
            q.pop_front();
            for (std::size_t b : adj[a]) {
                if (seen[b]) continue;
                seen[b] = 1;
                if (a < n)
                    v[b - n] = C(a, b - n) - u[a];
                else
                    u[b] = C(b, a - n) - v[a - n];
                q.push_back(b);
            }
        }
        // entering: first cell with negative reduced cost
        std::size_t ei = n, ej = m;
        for (std::size_t i = 0; i < n && ei == n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (basic[i * m + j]) continue;
                T r = C(i, j) - u[i] - v[j];
                bool neg = N::exact ? r < N::zero() : N::to_double(r) < -float_tolerance();
                if (neg) {
                    ei = i;
                    ej = j;
                    break;
                }
            }
        if (ei == n) break;

        // tree path from column node ej to row node ei
        std::vector<std::size_t> par(n + m, SIZE_MAX);
        std::deque<std::size_t> bq{n + ej};
        par[n + ej] = n + ej;
        while (!bq.empty()) {
            std::size_t a = bq.front();
            bq.pop_front();
            if (a == ei) break;
            for (std::size_t b : adj[a])
                if (par[b] == SIZE_MAX) {
                    par[b] = a;
                    bq.push_back(b);
                }
        }
        // cycle: (ei,ej)+, then cells along path from ei back to ej alternate −,+,...
        std::vector<std::size_t> cells;
        for (std::size_t a = ei; a != n + ej; a = par[a]) {
            std::size_t b = par[a];
            std::size_t r = a < n ? a : b, c = a < n ? b - n : a - n;
            cells.push_back(r * m + c);
        }
        std::size_t leave = SIZE_MAX;
        T theta{};
        for (std::size_t k = 0; k < cells.size(); k += 2) {
            const T& val = x[cells[k]];
            if (leave == SIZE_MAX || val < theta || (val == theta && cells[k] < leave)) {
                theta = val;
                leave = cells[k];
            }
        }
        if (leave == SIZE_MAX) throw Error("transportation simplex lost its basis");
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k % 2 == 0)
                x[cells[k]] -= theta;
            else
                x[cells[k]] += theta;
        }
        x[ei * m + ej] = theta;
        basic[ei * m + ej] = 1;
        basic[leave] = 0;
        x[leave] = N::zero();
        if (iter > 1000000) throw Error("transportation simplex did not terminate");
    }

    Coupling<T> mu;
    mu.nx = n;
    mu.ny = m;
    mu.plan = x;
    T cost = N::zero();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) cost += x[i * m + j] * C(i, j);
    return {mu, cost};
}

#define GROMON_INST(T)                                                                           \
    template struct StepCDF<T>;                                                                  \
    template T quantile(const StepCDF<T>&, const T&);                                            \
    template T w1_cdf(const StepCDF<T>&, const StepCDF<T>&);                                     \
    template PowerValue<T> wp_quantile(const StepCDF<T>&, const StepCDF<T>&, PExponent);         \
    template std::vector<int> hungarian(const CostMatrix<T>&);                                   \
    template AssignmentResult<T> solve_assignment(const CostMatrix<T>&, const std::vector<T>&,   \
                                                  const std::vector<T>&, std::size_t);           \
    template std::pair<Coupling<T>, T> solve_kantorovich(const CostMatrix<T>&,                   \
                                                         const std::vector<T>&,                  \
                                                         const std::vector<T>&);
GROMON_INST(Rational)
GROMON_INST(double)
#undef GROMON_INST

}  // namespace gromon
