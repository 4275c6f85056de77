#include "gromon/graphs.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

namespace gromon {

namespace {
Rational pos(const Rational& x) { return sgn(x) > 0 ? x : Rational(0); }
Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
}  // namespace

// ---- PwlCDF ----

PwlCDF::PwlCDF(std::vector<Rational> xs, std::vector<Rational> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.empty() || xs_.size() != ys_.size()) throw InvalidInput("breakpoints and values must pair up");
    if (sgn(xs_[0]) != 0) throw InvalidInput("first breakpoint must be 0");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i - 1] < xs_[i])) throw InvalidInput("breakpoints must increase strictly");
    simplify();
}

void PwlCDF::simplify() {
    while (xs_.size() > 1 && ys_[ys_.size() - 1] == ys_[ys_.size() - 2]) {
        xs_.pop_back();
        ys_.pop_back();
    }
    std::vector<Rational> X{xs_[0]}, Y{ys_[0]};
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (X.size() >= 2 && i + 1 <= xs_.size()) {
            const std::size_t k = X.size();
            Rational s1 = (Y[k - 1] - Y[k - 2]) / (X[k - 1] - X[k - 2]);
            Rational s2 = (ys_[i] - Y[k - 1]) / (xs_[i] - X[k - 1]);
            if (s1 == s2) {
                X.back() = xs_[i];
                Y.back() = ys_[i];
                continue;
            }
        }
        X.push_back(xs_[i]);
        Y.push_back(ys_[i]);
    }
    xs_ = std::move(X);
    ys_ = std::move(Y);
}

Rational PwlCDF::operator()(const Rational& r) const {
    if (r <= xs_[0]) return ys_[0];
    if (r >= xs_.back()) return ys_.back();
    std::size_t k = std::upper_bound(xs_.begin(), xs_.end(), r) - xs_.begin();  // xs[k-1] <= r < xs[k]
    Rational t = (r - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
    return ys_[k - 1] + t * (ys_[k] - ys_[k - 1]);
}

Rational PwlCDF::slope_after(const Rational& r) const {
    if (r >= xs_.back()) return 0;
    std::size_t k = std::upper_bound(xs_.begin(), xs_.end(), r) - xs_.begin();
    if (k == 0) k = 1;
    return (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]);
}

Rational PwlCDF::first_slope_change(const Rational& s) const {
    for (std::size_t k = 0; k + 1 < xs_.size(); ++k)
        if ((ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]) != s) return xs_[k];
    return xs_.back();
}

Rational PwlCDF::quantile(const Rational& t) const {
    if (t <= ys_[0]) return 0;
    if (t > ys_.back()) throw InvalidInput("quantile level above the final value");
    std::size_t k = 1;
    while (ys_[k] < t) ++k;
    return xs_[k - 1] + (t - ys_[k - 1]) * (xs_[k] - xs_[k - 1]) / (ys_[k] - ys_[k - 1]);
}

namespace {
template <class F>
PwlCDF combine(const PwlCDF& a, const PwlCDF& b, F f) {
    std::vector<Rational> xs;
    std::set_union(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
                   b.breakpoints().end(), std::back_inserter(xs));
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Rational> ys;
    for (const auto& x : xs) ys.push_back(f(a(x), b(x)));
    return PwlCDF(std::move(xs), std::move(ys));
}
}  // namespace

PwlCDF PwlCDF::operator+(const PwlCDF& o) const {
    return combine(*this, o, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}
PwlCDF PwlCDF::operator-(const PwlCDF& o) const {
    return combine(*this, o, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}
PwlCDF PwlCDF::scaled(const Rational& c) const {
    std::vector<Rational> ys;
    for (const auto& y : ys_) ys.push_back(c * y);
    return PwlCDF(xs_, std::move(ys));
}
PwlCDF PwlCDF::shift_left(const Rational& l) const {
    std::vector<Rational> xs{Rational(0)}, ys{(*this)(l)};
    for (std::size_t k = 0; k < xs_.size(); ++k)
        if (xs_[k] > l) {
            xs.push_back(xs_[k] - l);
            ys.push_back(ys_[k]);
        }
    return PwlCDF(std::move(xs), std::move(ys));
}
PwlCDF PwlCDF::shift_right(const Rational& l) const {
    if (sgn(l) == 0) return *this;
    std::vector<Rational> xs{Rational(0)}, ys{ys_[0]};
    for (std::size_t k = 0; k < xs_.size(); ++k) {
        xs.push_back(xs_[k] + l);
        ys.push_back(ys_[k]);
    }
    return PwlCDF(std::move(xs), std::move(ys));
}
PwlCDF PwlCDF::constant(const Rational& c) { return PwlCDF({Rational(0)}, {c}); }
PwlCDF PwlCDF::ramp(const Rational& l) { return PwlCDF({Rational(0), l}, {Rational(0), l}); }

void PwlCDF::validate_cdf() const {
    if (sgn(ys_[0]) != 0) throw InvalidInput("CDF must start at 0");
    for (std::size_t k = 1; k < ys_.size(); ++k)
        if (ys_[k] < ys_[k - 1]) throw InvalidInput("CDF must be nondecreasing");
    if (ys_.back() != 1) throw InvalidInput("CDF must end at 1");
}

bool PwlCDF::operator<(const PwlCDF& o) const {
    const std::size_t n = std::min(xs_.size(), o.xs_.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (xs_[k] != o.xs_[k]) return xs_[k] < o.xs_[k];
        if (ys_[k] != o.ys_[k]) return ys_[k] < o.ys_[k];
    }
    return xs_.size() < o.xs_.size();
}

std::string PwlCDF::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t k = 0; k < xs_.size(); ++k)
        os << (k ? ";" : "") << '(' << to_string(xs_[k]) << ',' << to_string(ys_[k]) << ')';
    os << ']';
    return os.str();
}

void PwlCDF::write_csv(std::ostream& os) const {
    os << "r,value\n";
    for (std::size_t k = 0; k < xs_.size(); ++k) os << to_string(xs_[k]) << ',' << to_string(ys_[k]) << '\n';
}

// ---- MetricGraph ----

MetricGraph::MetricGraph(int nodes, std::vector<GEdge> edges, bool allow_degree2)
    : n_(nodes), edges_(std::move(edges)) {
    if (n_ < 1) throw InvalidInput("graph needs at least one node");
    if (edges_.empty()) throw InvalidInput("graph needs at least one edge");
    deg_.assign(n_, 0);
    inc_.assign(n_, {});
    total_ = 0;
    std::vector<int> comp(n_);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto& E = edges_[e];
        if (E.u < 0 || E.v < 0 || E.u >= n_ || E.v >= n_) throw InvalidInput("edge endpoint out of range");
        if (sgn(E.len) <= 0) throw InvalidInput("edge lengths must be positive");
        E.len.canonicalize();
        deg_[E.u]++;
        deg_[E.v]++;
        inc_[E.u].push_back(int(e));
        if (E.v != E.u) inc_[E.v].push_back(int(e));
        total_ += E.len;
        comp[find(E.u)] = find(E.v);
    }
    for (int v = 0; v < n_; ++v)
        if (find(v) != find(0)) throw InvalidInput("graph is not connected");
    if (!allow_degree2)
        for (int v = 0; v < n_; ++v)
            if (deg_[v] == 2) throw InvalidInput("degree-2 vertex " + std::to_string(v) + " must be smoothed");
    tree_ = int(edges_.size()) == n_ - 1;
    node_distances();  // filled eagerly so concurrent readers never race on the cache
}

MetricGraph MetricGraph::circle(const Rational& length) { return MetricGraph(1, {{0, 0, length}}, true); }

MetricGraph MetricGraph::smoothed(int nodes, const std::vector<GEdge>& edges) {
    std::vector<GEdge> E = edges;
    std::vector<bool> alive(nodes, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < nodes && !changed; ++v) {
            if (!alive[v]) continue;
            std::vector<int> inc;
            for (std::size_t e = 0; e < E.size(); ++e) {
                if (E[e].u == v) inc.push_back(int(e));
                if (E[e].v == v) inc.push_back(int(e));
            }
            if (inc.size() != 2 || inc[0] == inc[1]) continue;  // a lone self-loop stays a circle
            auto other = [&](int e) { return E[e].u == v ? E[e].v : E[e].u; };
            int a = inc[0], b = inc[1];
            GEdge m{other(a), other(b), E[a].len + E[b].len};
            E[a] = m;
            E.erase(E.begin() + b);
            alive[v] = false;
            changed = true;
        }
    }
    std::vector<int> idx(nodes, -1);
    int k = 0;
    for (int v = 0; v < nodes; ++v)
        if (alive[v]) idx[v] = k++;
    for (auto& e : E) {
        e.u = idx[e.u];
        e.v = idx[e.v];
    }
    return MetricGraph(k, std::move(E), k == 1);
}

const std::vector<Rational>& MetricGraph::node_distances() const {
    if (!dist_.empty()) return dist_;
    std::vector<Rational> D(std::size_t(n_) * n_);
    using QE = std::pair<Rational, int>;
    for (int s = 0; s < n_; ++s) {
        std::vector<bool> done(n_, false), seen(n_, false);
        std::vector<Rational> d(n_);
        std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
        d[s] = 0;
        seen[s] = true;
        pq.push({Rational(0), s});
        while (!pq.empty()) {
            auto [dv, v] = pq.top();
            pq.pop();
            if (done[v]) continue;
            done[v] = true;
            for (int e : inc_[v]) {
                int w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
                Rational nd = dv + edges_[e].len;
                if (!seen[w] || nd < d[w]) {
                    seen[w] = true;
                    d[w] = nd;
                    pq.push({nd, w});
                }
            }
        }
        for (int t = 0; t < n_; ++t) D[std::size_t(s) * n_ + t] = d[t];
    }
    dist_ = std::move(D);
    return dist_;
}

GraphPoint GraphPoint::on_edge(const MetricGraph& G, int e, const Rational& s) {
    if (e < 0 || e >= int(G.edges().size())) throw InvalidInput("edge index out of range");
    const auto& E = G.edges()[e];
    if (sgn(s) < 0 || s > E.len) throw InvalidInput("offset outside edge");
    if (sgn(s) == 0) return at_node(E.u);
    if (s == E.len) return at_node(E.v);
    GraphPoint p;
    p.edge = e;
    p.offset = s;
    p.offset.canonicalize();
    return p;
}

namespace {
std::vector<std::pair<int, Rational>> exits(const MetricGraph& G, const GraphPoint& p) {
    if (p.is_node()) return {{p.node, Rational(0)}};
    const auto& E = G.edges()[p.edge];
    return {{E.u, p.offset}, {E.v, E.len - p.offset}};
}
}  // namespace

Rational graph_distance(const MetricGraph& G, const GraphPoint& a, const GraphPoint& b) {
    if (a == b) return 0;
    std::optional<Rational> best;
    if (!a.is_node() && !b.is_node() && a.edge == b.edge) best = abs(Rational(a.offset - b.offset));
    for (auto& [na, da] : exits(G, a))
        for (auto& [nb, db] : exits(G, b)) {
            Rational d = da + G.node_distance(na, nb) + db;
            if (!best || d < *best) best = d;
        }
    return *best;
}

PwlCDF ball_volume_function(const MetricGraph& G, const GraphPoint& x) {
    struct Piece {
        Rational l, da, db;
    };
    std::vector<Piece> pieces;
    std::vector<Rational> dn(G.nodes());
    auto ex = exits(G, x);
    for (int y = 0; y < G.nodes(); ++y) {
        Rational best = ex[0].second + G.node_distance(ex[0].first, y);
        for (std::size_t k = 1; k < ex.size(); ++k) {
            Rational d = ex[k].second + G.node_distance(ex[k].first, y);
            if (d < best) best = d;
        }
        dn[y] = best;
    }
    for (std::size_t e = 0; e < G.edges().size(); ++e) {
        const auto& E = G.edges()[e];
        if (!x.is_node() && int(e) == x.edge) {
            pieces.push_back({x.offset, Rational(0), dn[E.u]});
            pieces.push_back({E.len - x.offset, Rational(0), dn[E.v]});
        } else {
            pieces.push_back({E.len, dn[E.u], dn[E.v]});
        }
    }
    std::vector<Rational> xs{Rational(0)};
    for (const auto& p : pieces) {
        Rational a = rmin(p.da, p.db), b = rmax(p.da, p.db);
        xs.push_back(a);
        xs.push_back(b);
        xs.push_back((p.l + a + b) / 2);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    const Rational L = G.total_length();
    std::vector<Rational> ys;
    ys.reserve(xs.size());
    for (const auto& r : xs) {
        Rational v = 0;
        for (const auto& p : pieces) v += rmin(p.l, pos(r - p.da) + pos(r - p.db));
        ys.push_back(v / L);
    }
    return PwlCDF(std::move(xs), std::move(ys));
}

int NodeMultiset::degree(std::size_t i) const {
    Rational d = functions.at(i).initial_slope() * total_length;
    if (d.get_den() != 1) throw InconsistentMultiset("initial slope times length is not an integer");
    return int(d.get_num().get_si());
}

NodeMultiset node_multiset(const MetricGraph& G) {
    NodeMultiset ms;
    ms.total_length = G.total_length();
    ms.functions.resize(G.nodes());
    parallel_for(std::size_t(G.nodes()), [&](std::size_t v) {
        ms.functions[v] = ball_volume_function(G, GraphPoint::at_node(int(v)));
    });
    std::sort(ms.functions.begin(), ms.functions.end());
    return ms;
}

// ---- node counting ----

Rational BallPushforward::mass_open(const Rational& a, const Rational& b) const {
    Rational m = 0;
    for (const auto& p : pieces) {
        if (p.v0 == p.v1) {
            if (a < p.v0 && p.v0 < b) m += p.length;
            continue;
        }
        Rational lo = rmin(p.v0, p.v1), hi = rmax(p.v0, p.v1);
        Rational ov = rmin(hi, b) - rmax(lo, a);
        if (sgn(ov) > 0) m += ov / (hi - lo) * p.length;
    }
    return m;
}

BallPushforward small_ball_pushforward(const MetricGraph& G, const Rational& r) {
    if (sgn(r) <= 0) throw InvalidInput("radius must be positive");
    for (const auto& E : G.edges())
        if (!(2 * r < E.len)) throw InvalidInput("radius must be below half the shortest edge");
    BallPushforward pf;
    pf.r = r;
    const Rational L = G.total_length();
    for (int e = 0; e < int(G.edges().size()); ++e) {
        const auto& E = G.edges()[e];
        Rational s[4] = {Rational(0), r, E.len - r, E.len};
        Rational v[4];
        for (int k = 0; k < 4; ++k) v[k] = ball_volume_function(G, GraphPoint::on_edge(G, e, s[k]))(r) * L;
        for (int k = 0; k < 3; ++k) pf.pieces.push_back({s[k + 1] - s[k], v[k], v[k + 1]});
    }
    return pf;
}

BallPushforward small_ball_pushforward(const NodeMultiset& ms, const Rational& r) {
    if (sgn(r) <= 0) throw InvalidInput("radius must be positive");
    Rational shortest = -1;
    for (const auto& f : ms.functions) {
        Rational b = f.first_slope_change(f.initial_slope());
        if (shortest < 0 || b < shortest) shortest = b;
    }
    if (!(2 * r < shortest)) throw InvalidInput("radius must be below half the shortest edge");
    BallPushforward pf;
    pf.r = r;
    int degsum = 0;
    for (std::size_t i = 0; i < ms.functions.size(); ++i) {
        int k = ms.degree(i);
        degsum += k;
        for (int t = 0; t < k; ++t) pf.pieces.push_back({r, k * r, 2 * r});
    }
    Rational rest = ms.total_length - degsum * r;
    if (sgn(rest) < 0) throw InconsistentMultiset("degrees exceed total length");
    if (sgn(rest) > 0) pf.pieces.push_back({rest, 2 * r, 2 * r});
    return pf;
}

std::map<int, int> node_count_recovery(const BallPushforward& pf) {
    const Rational& r = pf.r;
    std::map<int, int> out;
    auto as_count = [](const Rational& q) {
        if (q.get_den() != 1 || sgn(q) < 0) throw InconsistentMultiset("non-integral node count");
        return int(q.get_num().get_si());
    };
    int leaves = as_count(pf.mass_open(0, 2 * r) / r);
    if (leaves) out[1] = leaves;
    Rational vmax = 0;
    for (const auto& p : pf.pieces) vmax = rmax(vmax, rmax(p.v0, p.v1));
    Rational kq = vmax / r;
    mpz_class kc = (kq.get_num() + kq.get_den() - 1) / kq.get_den();
    int kmax = int(kc.get_si());
    std::map<int, Rational> found;
    for (int k = kmax; k >= 3; --k) {
        // each degree-l node spreads l·r/(l−2) of mass over every band ((k−1)r, kr), k ≤ l
        Rational m = pf.mass_open((k - 1) * r, k * r);
        for (auto& [l, c] : found) m -= Rational(l) * r / (l - 2) * c;
        Rational c = m * (k - 2) / (k * r);
        int n = as_count(c);
        found[k] = n;
        if (n) out[k] = n;
    }
    return out;
}

std::map<int, int> node_count_recovery(const NodeMultiset& ms, const Rational& r) {
    return node_count_recovery(small_ball_pushforward(ms, r));
}

// ---- reconstruction ----

MetricGraph reconstruct_tree(const NodeMultiset& ms) {
    const int N = int(ms.functions.size());
    const Rational L = ms.total_length;
    if (N < 2 || sgn(L) <= 0) throw InconsistentMultiset("a tree needs at least two nodes");
    std::vector<PwlCDF> V;
    std::vector<int> deg;
    for (int i = 0; i < N; ++i) {
        V.push_back(ms.functions[i].scaled(L));
        deg.push_back(ms.degree(i));
        if (deg.back() < 1 || deg.back() == 2) throw InconsistentMultiset("invalid node degree");
    }
    auto verify = [&](const MetricGraph& T) {
        if (node_multiset(T) != ms) throw InconsistentMultiset("no tree realizes this node multiset");
        return T;
    };
    if (N == 2) {
        // the single-edge tree is the one case with two equal node functions
        if (deg[0] != 1 || deg[1] != 1) throw InconsistentMultiset("two nodes must both be leaves");
        return verify(MetricGraph(2, {{0, 1, L}}));
    }
    std::vector<PwlCDF> sorted = ms.functions;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 1; i < N; ++i)
        if (sorted[i] == sorted[i - 1]) throw DistinctnessViolated("node functions are not pairwise distinct");
    std::map<PwlCDF, int> lookup;
    for (int i = 0; i < N; ++i) lookup[V[i]] = i;

    struct Comp {
        int root;
        PwlCDF vc;  // volume from the root inside the component
        int known;  // edges at the root inside the component
        bool alive = true;
    };
    std::vector<Comp> comps;
    std::vector<int> comp_of(N, -1);
    for (int i = 0; i < N; ++i)
        if (deg[i] == 1) {
            comp_of[i] = int(comps.size());
            comps.push_back({i, PwlCDF::constant(0), 0});
        }
    std::vector<GEdge> edges;
    int alive = int(comps.size());
    while (true) {
        int pick = -1;
        for (int c = 0; c < int(comps.size()); ++c)
            if (comps[c].alive && deg[comps[c].root] - comps[c].known == 1) {
                pick = c;
                break;
            }
        if (pick < 0) break;
        Comp C = comps[pick];
        PwlCDF B = V[C.root] - C.vc;  // volume through the missing edge
        Rational len = B.first_slope_change(1);
        if (sgn(len) <= 0) throw InconsistentMultiset("branch volume does not start with slope 1");
        PwlCDF toward = PwlCDF::ramp(len) + C.vc.shift_right(len);  // seen from the far end
        PwlCDF beyond = B.shift_left(len) - PwlCDF::constant(len);
        PwlCDF target = beyond + toward;
        auto it = lookup.find(target);
        if (it == lookup.end()) throw InconsistentMultiset("no node matches the predicted function");
        int j = it->second;
        if (j == C.root) throw InconsistentMultiset("predicted neighbour is the node itself");
        edges.push_back({C.root, j, len});
        comps[pick].alive = false;
        if (comp_of[j] < 0) {
            comps[pick] = {j, toward, 1};
            comp_of[j] = pick;
        } else {
            Comp& D = comps[comp_of[j]];
            if (!D.alive || D.root != j) throw InconsistentMultiset("predicted neighbour is already interior");
            D.vc = D.vc + toward;
            D.known += 1;
            --alive;
        }
        if (comps[comp_of[j]].known > deg[j]) throw InconsistentMultiset("degree exceeded");
        if (int(edges.size()) > N - 1) throw InconsistentMultiset("too many edges");
    }
    if (alive != 1 || int(edges.size()) != N - 1) throw InconsistentMultiset("reconstruction did not close up");
    return verify(MetricGraph(N, std::move(edges)));
}

// ---- canonical form ----

std::string tree_canonical_form(const MetricGraph& T) {
    if (!T.is_tree()) throw NotATree("canonical form needs a tree");
    const int n = T.nodes();
    std::vector<std::vector<std::pair<int, Rational>>> adj(n);
    for (const auto& e : T.edges()) {
        adj[e.u].push_back({e.v, e.len});
        adj[e.v].push_back({e.u, e.len});
    }
    // centroids by node count
    std::vector<int> size(n, 1), parent(n, -1), order;
    order.push_back(0);
    for (std::size_t k = 0; k < order.size(); ++k)
        for (auto& [w, l] : adj[order[k]])
            if (w != parent[order[k]]) {
                parent[w] = order[k];
                order.push_back(w);
            }
    for (int k = n - 1; k > 0; --k) size[parent[order[k]]] += size[order[k]];
    std::vector<int> centroids;
    for (int v = 0; v < n; ++v) {
        int worst = n - size[v];
        for (auto& [w, l] : adj[v])
            if (w != parent[v]) worst = std::max(worst, size[w]);
        if (2 * worst <= n) centroids.push_back(v);
    }
    std::function<std::string(int, int)> enc = [&](int v, int p) {
        std::vector<std::string> ch;
        for (auto& [w, l] : adj[v])
            if (w != p) ch.push_back(to_string(l) + ":" + enc(w, v));
        std::sort(ch.begin(), ch.end());
        std::string s = "(";
        for (auto& c : ch) s += c;
        return s + ")";
    };
    std::string best;
    for (int c : centroids) {
        std::string s = enc(c, -1);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

// ---- lobe trees ----

LobeLayout lobe_tree_layout(const LobeMatrix& counts) {
    LobeLayout L;
    std::vector<GEdge> E;
    int next = 13;
    L.center = 0;
    for (int i = 0; i < 3; ++i) {
        L.lobe[i] = 1 + i;
        E.push_back({0, L.lobe[i], Rational(1)});
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (counts[i][j] < 1) throw InvalidInput("lobe counts must be positive");
            L.sub[i][j] = 4 + 3 * i + j;
            E.push_back({L.lobe[i], L.sub[i][j], Rational(1)});
        }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int t = 0; t < counts[i][j]; ++t) {
                L.leaves[i][j].push_back(next);
                E.push_back({L.sub[i][j], next++, Rational(1)});
            }
    L.graph = MetricGraph(next, std::move(E), true);
    return L;
}

MetricGraph lobe_tree(const LobeMatrix& counts) {
    auto L = lobe_tree_layout(counts);
    return MetricGraph::smoothed(L.graph.nodes(), L.graph.edges());
}

std::vector<int> lobe_node_map(const LobeLayout& a, const LobeLayout& b,
                               const std::array<std::array<std::pair<int, int>, 3>, 3>& perm) {
    std::vector<int> m(a.graph.nodes(), -1);
    m[a.center] = b.center;
    for (int i = 0; i < 3; ++i) m[a.lobe[i]] = b.lobe[i];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            auto [k, l] = perm[i][j];
            m[a.sub[i][j]] = b.sub[k][l];
            if (a.leaves[i][j].size() != b.leaves[k][l].size())
                throw InvalidInput("block map pairs sub-lobes with different branch counts");
            for (std::size_t t = 0; t < a.leaves[i][j].size(); ++t) m[a.leaves[i][j][t]] = b.leaves[k][l][t];
        }
    return m;
}

GraphPoint lobe_map_point(const LobeLayout& a, const LobeLayout& b, const std::vector<int>& node_map,
                          const GraphPoint& p) {
    if (p.is_node()) return GraphPoint::at_node(node_map.at(p.node));
    int child = node_map.at(a.graph.edges().at(p.edge).v);
    for (int f = 0; f < int(b.graph.edges().size()); ++f)
        if (b.graph.edges()[f].v == child) return GraphPoint::on_edge(b.graph, f, p.offset);
    throw InvalidInput("point lies outside the layout");
}

std::array<std::array<std::pair<int, int>, 3>, 3> reference_lobe_permutation() {
    return {{{{{0, 0}, {1, 2}, {2, 0}}}, {{{1, 0}, {2, 1}, {0, 1}}}, {{{0, 2}, {1, 1}, {2, 2}}}}};
}

std::pair<LobeMatrix, LobeMatrix> reference_lobe_matrices() {
    return {LobeMatrix{{{5, 10, 5}, {3, 3, 14}, {1, 7, 12}}}, LobeMatrix{{{5, 14, 1}, {3, 7, 10}, {5, 3, 12}}}};
}

// ---- gluing ----

GraphPoint tree_center(const MetricGraph& T) {
    if (!T.is_tree()) throw NotATree("center needs a tree");
    const int n = T.nodes();
    auto far = [&](int s) {
        int b = s;
        for (int v = 0; v < n; ++v)
            if (T.node_distance(s, v) > T.node_distance(s, b)) b = v;
        return b;
    };
    int a = far(0), b = far(a);
    Rational half = T.node_distance(a, b) / 2;
    // walk from a toward b
    int v = a;
    while (true) {
        for (int e : T.incident(v)) {
            const auto& E = T.edges()[e];
            int w = E.u == v ? E.v : E.u;
            if (T.node_distance(a, w) != T.node_distance(a, v) + E.len) continue;
            if (T.node_distance(w, b) + T.node_distance(a, w) != 2 * half) continue;
            if (T.node_distance(a, w) >= half) {
                Rational into = half - T.node_distance(a, v);
                return GraphPoint::on_edge(T, e, E.u == v ? into : E.len - into);
            }
            v = w;
            break;
        }
        if (T.node_distance(a, v) == half) return GraphPoint::at_node(v);
    }
}

MetricGraph glue_tree(const MetricGraph& S, int leaf, const MetricGraph& T, const Rational& delta,
                      std::optional<GraphPoint> at) {
    if (!S.is_tree() || !T.is_tree()) throw NotATree("gluing needs trees");
    if (leaf < 0 || leaf >= S.nodes() || S.degree(leaf) != 1) throw InvalidInput("attachment node is not a leaf");
    if (sgn(delta) <= 0) throw InvalidInput("scale must be positive");
    GraphPoint p = at ? *at : tree_center(T);
    std::vector<GEdge> E = S.edges();
    int n = S.nodes();
    std::vector<int> idx(T.nodes());
    for (int k = 0; k < T.nodes(); ++k) idx[k] = (p.is_node() && k == p.node) ? leaf : n++;
    for (int e = 0; e < int(T.edges().size()); ++e) {
        const auto& te = T.edges()[e];
        if (!p.is_node() && e == p.edge) {
            E.push_back({idx[te.u], leaf, delta * p.offset});
            E.push_back({leaf, idx[te.v], delta * (te.len - p.offset)});
        } else {
            E.push_back({idx[te.u], idx[te.v], delta * te.len});
        }
    }
    return MetricGraph::smoothed(n, E);
}

// ---- discretization ----

DiscreteGraph discretize_graph(const MetricGraph& G, const Rational& mesh) {
    if (sgn(mesh) <= 0) throw InvalidInput("mesh must be positive");
    DiscreteGraph D;
    std::vector<Rational> w;
    const Rational L = G.total_length();
    for (int v = 0; v < G.nodes(); ++v) {
        D.points.push_back(GraphPoint::at_node(v));
        w.push_back(G.degree(v) * mesh / 2 / L);
    }
    for (int e = 0; e < int(G.edges().size()); ++e) {
        Rational q = G.edges()[e].len / mesh;
        if (q.get_den() != 1) throw InvalidInput("mesh does not divide edge " + std::to_string(e));
        long cnt = q.get_num().get_si();
        for (long k = 1; k < cnt; ++k) {
            D.points.push_back(GraphPoint::on_edge(G, e, k * mesh));
            w.push_back(mesh / L);
        }
    }
    const std::size_t n = D.points.size();
    std::vector<Rational> d(n * n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = graph_distance(G, D.points[i], D.points[j]);
    });
    D.space = RSpace(n, std::move(d), std::move(w), false, false);
    return D;
}

// ---- generators ----

MetricGraph random_tree(std::mt19937_64& rng, int max_edges) {
    if (max_edges < 1) throw InvalidInput("need at least one edge");
    int nv = std::uniform_int_distribution<int>(2, max_edges + 1)(rng);
    std::vector<GEdge> E;
    for (int i = 1; i < nv; ++i) E.push_back({std::uniform_int_distribution<int>(0, i - 1)(rng), i, Rational(1)});
    MetricGraph T = MetricGraph::smoothed(nv, E);
    // distinct lengths k/12
    std::vector<int> pool(120);
    std::iota(pool.begin(), pool.end(), 1);
    std::vector<GEdge> out = T.edges();
    for (std::size_t e = 0; e < out.size(); ++e) {
        std::size_t k = std::uniform_int_distribution<std::size_t>(e, pool.size() - 1)(rng);
        std::swap(pool[e], pool[k]);
        out[e].len = rat(pool[e], 12);
    }
    return MetricGraph(T.nodes(), std::move(out));
}

MetricGraph random_graph(std::mt19937_64& rng, int nodes, int extra_edges) {
    if (nodes < 2) throw InvalidInput("need at least two nodes");
    std::uniform_int_distribution<int> len(1, 12);
    std::vector<GEdge> E;
    for (int i = 1; i < nodes; ++i)
        E.push_back({std::uniform_int_distribution<int>(0, i - 1)(rng), i, rat(len(rng), 4)});
    std::uniform_int_distribution<int> pick(0, nodes - 1);
    for (int k = 0; k < extra_edges; ++k) {
        int a = pick(rng), b = pick(rng);
        if (a == b) b = (a + 1) % nodes;
        E.push_back({a, b, rat(len(rng), 4)});
    }
    return MetricGraph::smoothed(nodes, E);
}

namespace {
const std::vector<std::pair<int, int>> kPairT1{{0, 5}, {0, 7}, {0, 9}, {1, 0}, {1, 2},
                                               {2, 3}, {2, 4}, {5, 6}, {7, 8}};
const std::vector<std::pair<int, int>> kPairT2{{0, 4}, {0, 8}, {1, 0}, {1, 2}, {2, 3},
                                               {4, 5}, {4, 6}, {4, 7}, {8, 9}};
std::vector<GEdge> unit_edges(const std::vector<std::pair<int, int>>& es) {
    std::vector<GEdge> E;
    for (auto [u, v] : es) E.push_back({u, v, Rational(1)});
    return E;
}
}  // namespace

std::pair<MetricGraph, MetricGraph> path_sequence_pair_unit() {
    return {MetricGraph(10, unit_edges(kPairT1), true), MetricGraph(10, unit_edges(kPairT2), true)};
}

EdgeSampling edge_midpoint_sampling(const MetricGraph& G, int q) {
    if (q < 1) throw InvalidInput("need at least one sample per edge");
    EdgeSampling S;
    std::vector<Rational> w;
    const Rational L = G.total_length();
    for (int e = 0; e < int(G.edges().size()); ++e)
        for (int i = 0; i < q; ++i) {
            const auto& E = G.edges()[e];
            S.disc.points.push_back(GraphPoint::on_edge(G, e, E.len * rat(2 * i + 1, 2 * q)));
            w.push_back(E.len / q / L);
            S.part.push_back(e);
        }
    const std::size_t n = S.disc.points.size();
    std::vector<Rational> d(n * n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = graph_distance(G, S.disc.points[i], S.disc.points[j]);
    });
    S.disc.space = RSpace(n, std::move(d), std::move(w), false, false);
    return S;
}

namespace {
// (same edge?, gap between nearest endpoints, lengths) determines the cross-distance measure in a tree
std::vector<std::pair<std::tuple<int, Rational, Rational, Rational>, std::pair<int, int>>> edge_classes(
    const MetricGraph& T) {
    std::vector<std::pair<std::tuple<int, Rational, Rational, Rational>, std::pair<int, int>>> out;
    const auto& E = T.edges();
    for (int a = 0; a < int(E.size()); ++a)
        for (int b = 0; b < int(E.size()); ++b) {
            Rational gap = 0;
            if (a != b) {
                gap = T.node_distance(E[a].u, E[b].u);
                for (int x : {E[a].u, E[a].v})
                    for (int y : {E[b].u, E[b].v}) gap = rmin(gap, T.node_distance(x, y));
            }
            out.push_back({{a == b ? 0 : 1, gap, E[a].len, E[b].len}, {a, b}});
        }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}
}  // namespace

BlockPairing edge_class_pairing(const MetricGraph& A, const MetricGraph& B) {
    if (!A.is_tree() || !B.is_tree()) throw NotATree("edge pairing needs trees");
    auto ca = edge_classes(A), cb = edge_classes(B);
    if (ca.size() != cb.size()) throw InvalidInput("edge counts differ");
    BlockPairing P;
    for (std::size_t k = 0; k < ca.size(); ++k) {
        if (ca[k].first != cb[k].first) throw InvalidInput("edge distance classes differ");
        P.push_back({ca[k].second.first, ca[k].second.second, cb[k].second.first, cb[k].second.second});
    }
    return P;
}

std::pair<MetricGraph, MetricGraph> path_sequence_pair() {
    return {MetricGraph::smoothed(10, unit_edges(kPairT1)), MetricGraph::smoothed(10, unit_edges(kPairT2))};
}

}  // namespace gromon
