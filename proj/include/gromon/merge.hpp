#pragma once

#include <boost/dynamic_bitset.hpp>
#include <vector>

#include "gromon/graphs.hpp"

namespace gromon {

// rooted tree with heights; the root carries an implicit stem to +∞
struct MergeTree {
    std::vector<int> parent;       // -1 at the root
    std::vector<Rational> height;  // child height < parent height
    std::vector<int> origin;       // node of the source tree, -1 if none
    int root = 0;

    int size() const { return int(parent.size()); }
    std::vector<int> leaves() const;
    int lca(int a, int b) const;
    // node u' on the root path of u with height(u') <= t < height(parent(u'))
    int ancestor_at(int u, const Rational& t) const;
    void validate() const;
};

// superlevel merge tree of y ↦ −d(x, y); a leaf x is rooted at its neighbour
MergeTree merge_tree(const MetricGraph& T, int x);

// ½|f(u) − f(v)| within each tree and |f(u) − g(w)| across, sorted and deduplicated
std::vector<Rational> candidate_set(const MergeTree& A, const MergeTree& B);

bool is_interleaved(const MergeTree& A, const MergeTree& B, const Rational& eps, int size_guard = 14);

// least candidate admitting an interleaving
Rational interleaving_distance(const MergeTree& A, const MergeTree& B, int size_guard = 14);

// minimum over node rootings of both trees
Rational delta(const MetricGraph& T, const MetricGraph& S, int size_guard = 14);

// subset sums of all slope-change radii and leaf-edge lengths read off a node multiset
struct SigmaSets {
    std::vector<Rational> radii;
    std::vector<Rational> leaf_lengths;
    Rational scale;                 // sums are multiples of 1/scale
    boost::dynamic_bitset<> sums;   // bit k set iff k/scale is a subset sum
    Rational min_gap;               // smallest positive difference of two sums
    Rational epsilon;               // (1/14) · min(Σ₁ ∪ Σ₂ \ {0}) = min_gap / 28

    bool in_sigma(const Rational& q) const;
    bool in_sigma2(const Rational& q) const;  // |A − A'| for sums A, A'
    bool in_sigma1(const Rational& q) const;  // ½|A − A'|
};

SigmaSets sigma_sets(const NodeMultiset& ms, std::size_t max_bits = 50'000'000);

}  // namespace gromon
