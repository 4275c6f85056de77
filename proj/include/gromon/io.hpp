#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "gromon/core.hpp"
#include "gromon/gromov.hpp"
#include "gromon/graphs.hpp"
#include "gromon/merge.hpp"

namespace gromon {

using Json = nlohmann::json;

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);  // "-" writes to stdout

// scalars: rationals as "p/q" strings, floats as numbers
Json scalar_json(const Rational& q);
Json scalar_json(double x);
Rational rational_from_json(const Json& j);  // accepts strings and numbers
double double_from_json(const Json& j);

// { "n", "dist", "weights", "scalar" }
template <class T>
Json space_to_json(const FiniteMMSpace<T>& X);
RSpace rspace_from_json(const Json& j);
FSpace fspace_from_json(const Json& j);
// "rational" or "float", defaulting to rational when absent
std::string space_scalar(const Json& j);

// { "nodes", "edges": [{"u", "v", "len"}] }
Json graph_to_json(const MetricGraph& G);
MetricGraph graph_from_json(const Json& j, bool allow_degree2 = false);

// { "parent": [int], "height": ["p/q"], "root": int }
Json merge_tree_to_json(const MergeTree& M);
MergeTree merge_tree_from_json(const Json& j);

// { "value": string|number|"inf", "witness": [int], "method": string }
template <class T>
Json gm_result_to_json(const GMResult<T>& r);
template <class T>
Json power_value_json(const PowerValue<T>& v);

template <class T>
Json cost_matrix_to_json(const CostMatrix<T>& C);

template <class T>
Json step_cdf_to_json(const StepCDF<T>& F);
Json pwl_to_json(const PwlCDF& f);
PwlCDF pwl_from_json(const Json& j);

// { "total_length", "functions": [pwl] }
Json node_multiset_to_json(const NodeMultiset& ms);
NodeMultiset node_multiset_from_json(const Json& j);

// block partitions of two spaces and the block-pair matching
struct PartitionFixture {
    std::vector<int> part_x, part_y;
    BlockPairing pairing;
};
Json partition_to_json(const PartitionFixture& f);
PartitionFixture partition_from_json(const Json& j);

}  // namespace gromon
