#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gromon/core.hpp"
#include "gromon/gromov.hpp"

namespace gromon {

// continuous piecewise-linear function on [0, ∞), constant after the last breakpoint
class PwlCDF {
public:
    PwlCDF() : xs_{Rational(0)}, ys_{Rational(0)} {}
    PwlCDF(std::vector<Rational> xs, std::vector<Rational> ys);  // simplified on construction

    const std::vector<Rational>& breakpoints() const { return xs_; }
    const std::vector<Rational>& values() const { return ys_; }
    Rational operator()(const Rational& r) const;
    Rational slope_after(const Rational& r) const;  // right derivative
    Rational initial_slope() const { return slope_after(Rational(0)); }
    // first r >= 0 where the right slope differs from s (last breakpoint if never)
    Rational first_slope_change(const Rational& s) const;
    // smallest r with F(r) >= t
    Rational quantile(const Rational& t) const;
    Rational final_value() const { return ys_.back(); }

    PwlCDF operator+(const PwlCDF& o) const;
    PwlCDF operator-(const PwlCDF& o) const;
    PwlCDF scaled(const Rational& c) const;
    PwlCDF shift_left(const Rational& l) const;   // r ↦ F(r + l)
    PwlCDF shift_right(const Rational& l) const;  // r ↦ F(max(r − l, 0))
    static PwlCDF constant(const Rational& c);
    static PwlCDF ramp(const Rational& l);  // min(r, l)

    // nondecreasing, F(0) = 0, final value 1
    void validate_cdf() const;
    bool operator==(const PwlCDF& o) const { return xs_ == o.xs_ && ys_ == o.ys_; }
    bool operator!=(const PwlCDF& o) const { return !(*this == o); }
    bool operator<(const PwlCDF& o) const;
    std::string str() const;
    void write_csv(std::ostream& os) const;  // "r,value"

private:
    std::vector<Rational> xs_, ys_;
    void simplify();
};

struct GEdge {
    int u = 0, v = 0;
    Rational len;
};

class MetricGraph {
public:
    MetricGraph() = default;
    // allow_degree2 keeps degree-2 vertices (layouts, circle); otherwise they are rejected
    MetricGraph(int nodes, std::vector<GEdge> edges, bool allow_degree2 = false);

    static MetricGraph circle(const Rational& length);
    // builds from a graph that may contain degree-2 vertices by merging edges through them
    static MetricGraph smoothed(int nodes, const std::vector<GEdge>& edges);

    int nodes() const { return n_; }
    const std::vector<GEdge>& edges() const { return edges_; }
    int degree(int v) const { return deg_[v]; }
    bool is_tree() const { return tree_; }
    Rational total_length() const { return total_; }
    // incident edge indices
    const std::vector<int>& incident(int v) const { return inc_[v]; }
    // exact all-pairs node distances (cached)
    const std::vector<Rational>& node_distances() const;
    Rational node_distance(int a, int b) const { return node_distances()[std::size_t(a) * n_ + b]; }

private:
    int n_ = 0;
    std::vector<GEdge> edges_;
    std::vector<int> deg_;
    std::vector<std::vector<int>> inc_;
    bool tree_ = false;
    Rational total_;
    mutable std::vector<Rational> dist_;
};

struct GraphPoint {
    int node = -1;  // set for node points
    int edge = -1;  // set for interior points
    Rational offset;  // from edge.u

    static GraphPoint at_node(int v) { return GraphPoint{v, -1, Rational(0)}; }
    // canonicalizes endpoints to node form
    static GraphPoint on_edge(const MetricGraph& G, int e, const Rational& s);
    bool is_node() const { return node >= 0; }
    bool operator==(const GraphPoint& o) const {
        return node == o.node && edge == o.edge && offset == o.offset;
    }
};

Rational graph_distance(const MetricGraph& G, const GraphPoint& a, const GraphPoint& b);

// normalized ball volume r ↦ μ(B(x, r))
PwlCDF ball_volume_function(const MetricGraph& G, const GraphPoint& x);

struct NodeMultiset {
    std::vector<PwlCDF> functions;  // sorted
    Rational total_length;
    bool operator==(const NodeMultiset& o) const {
        return total_length == o.total_length && functions == o.functions;
    }
    bool operator!=(const NodeMultiset& o) const { return !(*this == o); }
    // degree of function i (initial slope × total length)
    int degree(std::size_t i) const;
};

NodeMultiset node_multiset(const MetricGraph& G);

// pushforward of length measure under x ↦ |B(x, r)| (unnormalized), as linear pieces
struct BallPushforward {
    struct Piece {
        Rational length, v0, v1;  // a segment of given length on which the volume runs v0 → v1
    };
    Rational r;
    std::vector<Piece> pieces;
    Rational mass_open(const Rational& a, const Rational& b) const;  // mass of (a, b)
};

// exact pushforward computed from the graph geometry (r below half the shortest edge)
BallPushforward small_ball_pushforward(const MetricGraph& G, const Rational& r);
// the same measure rebuilt from node degrees alone
BallPushforward small_ball_pushforward(const NodeMultiset& ms, const Rational& r);
// counts per degree via the leaf formula and the top-down recursion
std::map<int, int> node_count_recovery(const BallPushforward& pf);
std::map<int, int> node_count_recovery(const NodeMultiset& ms, const Rational& r);

MetricGraph reconstruct_tree(const NodeMultiset& ms);

std::string tree_canonical_form(const MetricGraph& T);

// center → 3 lobe nodes → 3 sub-lobe nodes each → counts[i][j] unit leaf edges
using LobeMatrix = std::array<std::array<int, 3>, 3>;
MetricGraph lobe_tree(const LobeMatrix& counts);
struct LobeLayout {
    MetricGraph graph;  // unsmoothed: a sub-lobe with one leaf keeps its degree-2 node
    int center = 0;
    std::array<int, 3> lobe{};
    std::array<std::array<int, 3>, 3> sub{};
    std::array<std::array<std::vector<int>, 3>, 3> leaves;
};
LobeLayout lobe_tree_layout(const LobeMatrix& counts);
// node map between two layouts: sub-lobe (i,j) goes to perm[i][j] = (i', j')
std::vector<int> lobe_node_map(const LobeLayout& a, const LobeLayout& b,
                               const std::array<std::array<std::pair<int, int>, 3>, 3>& perm);
// point map: nodes by lobe_node_map, an edge point follows the image of the edge's child end
// (layout edges run parent → child); interior center–lobe edges are fixed
GraphPoint lobe_map_point(const LobeLayout& a, const LobeLayout& b, const std::vector<int>& node_map,
                          const GraphPoint& p);
std::array<std::array<std::pair<int, int>, 3>, 3> reference_lobe_permutation();
std::pair<LobeMatrix, LobeMatrix> reference_lobe_matrices();

// metric center of a tree (node or edge point)
GraphPoint tree_center(const MetricGraph& T);
// attaches T scaled by delta at point `at` (default: its center) onto leaf `leaf` of S
MetricGraph glue_tree(const MetricGraph& S, int leaf, const MetricGraph& T, const Rational& delta,
                      std::optional<GraphPoint> at = std::nullopt);

struct DiscreteGraph {
    RSpace space;
    std::vector<GraphPoint> points;  // nodes first, then edge interiors in edge order
};
DiscreteGraph discretize_graph(const MetricGraph& G, const Rational& mesh);

// random smoothed tree with at most max_edges edges and pairwise distinct lengths
MetricGraph random_tree(std::mt19937_64& rng, int max_edges);
// random connected graph (may contain cycles and multi-edges), lengths in quarter units
MetricGraph random_graph(std::mt19937_64& rng, int nodes, int extra_edges);

// q samples per edge at offsets (i+½)/q of its length; blocks are edges
struct EdgeSampling {
    DiscreteGraph disc;
    std::vector<int> part;
};
EdgeSampling edge_midpoint_sampling(const MetricGraph& G, int q);
// pairs edge pairs of two trees by (same edge, endpoint gap, lengths); throws if the classes differ
BlockPairing edge_class_pairing(const MetricGraph& A, const MetricGraph& B);

// nonisomorphic unit-edge trees with equal global distance distribution
std::pair<MetricGraph, MetricGraph> path_sequence_pair();
// the same trees before smoothing (unit edges, degree-2 vertices kept)
std::pair<MetricGraph, MetricGraph> path_sequence_pair_unit();

}  // namespace gromon
