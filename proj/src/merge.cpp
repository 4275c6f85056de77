#include "gromon/merge.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gromon {

namespace {
Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
}  // namespace

std::vector<int> MergeTree::leaves() const {
    std::vector<bool> has_child(parent.size(), false);
    for (int p : parent)
        if (p >= 0) has_child[p] = true;
    std::vector<int> out;
    for (int u = 0; u < size(); ++u)
        if (!has_child[u]) out.push_back(u);
    return out;
}

int MergeTree::lca(int a, int b) const {
    std::set<int> up;
    for (int u = a; u >= 0; u = parent[u]) up.insert(u);
    for (int u = b; u >= 0; u = parent[u])
        if (up.count(u)) return u;
    throw Error("merge tree is not connected");
}

int MergeTree::ancestor_at(int u, const Rational& t) const {
    if (t < height[u]) throw InvalidInput("height below the node");
    while (parent[u] >= 0 && height[parent[u]] <= t) u = parent[u];
    return u;
}

void MergeTree::validate() const {
    if (parent.size() != height.size() || parent.empty()) throw InvalidInput("merge tree arrays disagree");
    int roots = 0;
    for (int u = 0; u < size(); ++u) {
        if (parent[u] < 0) {
            ++roots;
            if (u != root) throw InvalidInput("root index mismatch");
        } else if (parent[u] >= size() || !(height[u] < height[parent[u]])) {
            throw InvalidInput("child must lie below its parent");
        }
    }
    if (roots != 1) throw InvalidInput("merge tree needs exactly one root");
    for (int u = 0; u < size(); ++u) {
        int steps = 0;
        for (int v = u; v >= 0; v = parent[v])
            if (++steps > size()) throw InvalidInput("parent array has a cycle");
    }
}

MergeTree merge_tree(const MetricGraph& T, int x) {
    if (!T.is_tree()) throw NotATree("merge trees need a tree");
    if (x < 0 || x >= T.nodes()) throw InvalidInput("root node out of range");
    int start = x;
    if (T.degree(x) == 1) {
        const auto& e = T.edges()[T.incident(x)[0]];
        start = e.u == x ? e.v : e.u;
    }
    MergeTree M;
    std::vector<int> id(T.nodes(), -1);
    std::vector<int> queue{start};
    id[start] = 0;
    M.parent.push_back(-1);
    M.height.push_back(-T.node_distance(x, start));
    M.origin.push_back(start);
    for (std::size_t k = 0; k < queue.size(); ++k) {
        int v = queue[k];
        for (int e : T.incident(v)) {
            int w = T.edges()[e].u == v ? T.edges()[e].v : T.edges()[e].u;
            if (w == x || id[w] >= 0) continue;
            id[w] = M.size();
            M.parent.push_back(id[v]);
            M.height.push_back(-T.node_distance(x, w));
            M.origin.push_back(w);
            queue.push_back(w);
        }
    }
    M.validate();
    return M;
}

std::vector<Rational> candidate_set(const MergeTree& A, const MergeTree& B) {
    std::set<Rational> s;
    for (const auto& a : A.height)
        for (const auto& b : A.height) s.insert(abs(Rational(a - b)) / 2);
    for (const auto& a : B.height)
        for (const auto& b : B.height) s.insert(abs(Rational(a - b)) / 2);
    for (const auto& a : A.height)
        for (const auto& b : B.height) s.insert(abs(Rational(a - b)));
    return {s.begin(), s.end()};
}

namespace {

struct Pt {
    int node;
    Rational h;
};

// height where the root paths of two points meet
Rational meet(const MergeTree& M, const Pt& p, const Pt& q) {
    return rmax(rmax(p.h, q.h), M.height[M.lca(p.node, q.node)]);
}

// one point per edge crossing at height t
std::vector<int> crossing(const MergeTree& M, const Rational& t) {
    std::vector<int> out;
    for (int u = 0; u < M.size(); ++u)
        if (M.height[u] <= t && (M.parent[u] < 0 || t < M.height[M.parent[u]])) out.push_back(u);
    return out;
}

// a leaf below each node
std::vector<int> leaf_below(const MergeTree& M) {
    std::vector<int> rep(M.size(), -1);
    for (int l : M.leaves())
        for (int u = l; u >= 0 && rep[u] < 0; u = M.parent[u]) rep[u] = l;
    return rep;
}

}  // namespace

bool is_interleaved(const MergeTree& A, const MergeTree& B, const Rational& eps, int size_guard) {
    if (A.size() + B.size() > size_guard)
        throw SizeLimitExceeded("interleaving search limited to " + std::to_string(size_guard) + " nodes");
    if (sgn(eps) < 0) return false;
    const auto la = A.leaves(), lb = B.leaves();
    const auto repA = leaf_below(A), repB = leaf_below(B);
    std::vector<std::vector<int>> ca, cb;
    for (int a : la) ca.push_back(crossing(B, A.height[a] + eps));
    for (int b : lb) cb.push_back(crossing(A, B.height[b] + eps));
    std::vector<int> phi(A.size(), -1), psi(B.size(), -1);  // leaf → node of the image point

    // ψ(φ(a)) = a shifted by 2ε, tested through a leaf below φ(a)
    auto round_trip_a = [&](int a) {
        int b = repB[phi[a]];
        if (psi[b] < 0) return true;
        Pt img{psi[b], B.height[b] + eps};
        return meet(A, img, Pt{a, A.height[a]}) <= A.height[a] + 2 * eps;
    };
    auto round_trip_b = [&](int b) {
        int a = repA[psi[b]];
        Pt img{phi[a], A.height[a] + eps};
        return meet(B, img, Pt{b, B.height[b]}) <= B.height[b] + 2 * eps;
    };

    std::function<bool(std::size_t)> assign_psi = [&](std::size_t k) -> bool {
        if (k == lb.size()) return true;
        int b = lb[k];
        for (int c : cb[k]) {
            psi[b] = c;
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                int b2 = lb[j];
                Pt p{c, B.height[b] + eps}, q{psi[b2], B.height[b2] + eps};
                ok = meet(A, p, q) <= B.height[B.lca(b, b2)] + eps;
            }
            ok = ok && round_trip_b(b);
            for (std::size_t i = 0; i < la.size() && ok; ++i)
                if (repB[phi[la[i]]] == b) ok = round_trip_a(la[i]);
            if (ok && assign_psi(k + 1)) return true;
        }
        psi[b] = -1;
        return false;
    };
    std::function<bool(std::size_t)> assign_phi = [&](std::size_t k) -> bool {
        if (k == la.size()) return assign_psi(0);
        int a = la[k];
        for (int c : ca[k]) {
            phi[a] = c;
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                int a2 = la[j];
                Pt p{c, A.height[a] + eps}, q{phi[a2], A.height[a2] + eps};
                ok = meet(B, p, q) <= A.height[A.lca(a, a2)] + eps;
            }
            if (ok && assign_phi(k + 1)) return true;
        }
        phi[a] = -1;
        return false;
    };
    return assign_phi(0);
}

Rational interleaving_distance(const MergeTree& A, const MergeTree& B, int size_guard) {
    for (const auto& e : candidate_set(A, B))
        if (is_interleaved(A, B, e, size_guard)) return e;
    throw Error("no candidate value admits an interleaving");
}

Rational delta(const MetricGraph& T, const MetricGraph& S, int size_guard) {
    std::optional<Rational> best;
    for (int t = 0; t < T.nodes(); ++t)
        for (int s = 0; s < S.nodes(); ++s) {
            auto A = merge_tree(T, t), B = merge_tree(S, s);
            for (const auto& e : candidate_set(A, B)) {
                if (best && e >= *best) break;
                if (is_interleaved(A, B, e, size_guard)) {
                    best = e;
                    break;
                }
            }
            if (best && sgn(*best) == 0) return *best;
        }
    return *best;
}

// ---- Σ sets ----

bool SigmaSets::in_sigma(const Rational& q) const {
    Rational k = q * scale;
    if (k.get_den() != 1 || sgn(k) < 0 || k >= Rational(long(sums.size()))) return false;
    return sums.test(k.get_num().get_ui());
}

bool SigmaSets::in_sigma2(const Rational& q) const {
    Rational k = abs(q) * scale;
    if (k.get_den() != 1 || k >= Rational(long(sums.size()))) return false;
    return ((sums >> k.get_num().get_ui()) & sums).any();
}

bool SigmaSets::in_sigma1(const Rational& q) const { return in_sigma2(2 * q); }

SigmaSets sigma_sets(const NodeMultiset& ms, std::size_t max_bits) {
    SigmaSets S;
    std::set<Rational> radii;
    for (std::size_t i = 0; i < ms.functions.size(); ++i) {
        const auto& f = ms.functions[i];
        for (std::size_t k = 1; k < f.breakpoints().size(); ++k) radii.insert(f.breakpoints()[k]);
        if (ms.degree(i) == 1) S.leaf_lengths.push_back(f.first_slope_change(f.initial_slope()));
    }
    S.radii.assign(radii.begin(), radii.end());
    std::vector<Rational> all = S.radii;
    all.insert(all.end(), S.leaf_lengths.begin(), S.leaf_lengths.end());
    mpz_class den = 1;
    for (const auto& v : all) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    S.scale = Rational(den);
    mpz_class total = 0;
    std::vector<std::size_t> w;
    for (const auto& v : all) {
        mpz_class k = v.get_num() * (den / v.get_den());
        total += k;
        if (total + 1 > mpz_class(static_cast<unsigned long>(max_bits)))
            throw SizeLimitExceeded("subset-sum range too large");
        w.push_back(k.get_ui());
    }
    S.sums.resize(total.get_ui() + 1);
    S.sums.set(0);
    for (auto k : w) S.sums |= S.sums << k;
    std::optional<std::size_t> prev, gap;
    for (auto i = S.sums.find_first(); i != boost::dynamic_bitset<>::npos; i = S.sums.find_next(i)) {
        if (prev && (!gap || i - *prev < *gap)) gap = i - *prev;
        prev = i;
    }
    if (!gap) throw InvalidInput("no positive sums");
    S.min_gap = Rational(long(*gap)) / S.scale;
    S.epsilon = S.min_gap / 28;
    return S;
}

}  // namespace gromon
