#include "gromon/io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

namespace gromon {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    if (path == "-" || path.empty()) {
        std::cout << j.dump() << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << j.dump() << "\n";
}

Json scalar_json(const Rational& q) { return to_string(q); }
Json scalar_json(double x) { return x; }

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return parse_rational(j.dump());  // decimal text, read exactly
    throw InvalidInput("expected a number or \"p/q\" string");
}

double double_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
    throw InvalidInput("expected a number or \"p/q\" string");
}

template <class T>
Json space_to_json(const FiniteMMSpace<T>& X) {
    Json d = Json::array(), w = Json::array();
    for (std::size_t i = 0; i < X.n(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < X.n(); ++k) row.push_back(scalar_json(X.d(i, k)));
        d.push_back(std::move(row));
        w.push_back(scalar_json(X.w(i)));
    }
    return Json{{"n", X.n()},
                {"dist", d},
                {"weights", w},
                {"scalar", std::is_same_v<T, Rational> ? "rational" : "float"}};
}
template Json space_to_json(const RSpace&);
template Json space_to_json(const FSpace&);

std::string space_scalar(const Json& j) {
    std::string s = j.value("scalar", std::string("rational"));
    if (s != "rational" && s != "float") throw InvalidInput("scalar must be rational or float");
    return s;
}

namespace {
template <class T, class F>
FiniteMMSpace<T> space_from(const Json& j, F conv) {
    if (!j.is_object() || !j.contains("n") || !j.contains("dist") || !j.contains("weights"))
        throw InvalidInput("space JSON needs n, dist, weights");
    std::size_t n = j.at("n").get<std::size_t>();
    const auto& D = j.at("dist");
    const auto& W = j.at("weights");
    if (!D.is_array() || D.size() != n || !W.is_array() || W.size() != n)
        throw InvalidInput("space JSON sizes disagree with n");
    std::vector<T> d(n * n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!D[i].is_array() || D[i].size() != n) throw InvalidInput("distance row has wrong length");
        for (std::size_t k = 0; k < n; ++k) d[i * n + k] = conv(D[i][k]);
        w[i] = conv(W[i]);
    }
    bool pseudo = j.value("pseudo", false);
    return FiniteMMSpace<T>(n, std::move(d), std::move(w), pseudo);
}
}  // namespace

RSpace rspace_from_json(const Json& j) { return space_from<Rational>(j, rational_from_json); }
FSpace fspace_from_json(const Json& j) { return space_from<double>(j, double_from_json); }

Json graph_to_json(const MetricGraph& G) {
    Json E = Json::array();
    for (const auto& e : G.edges()) E.push_back({{"u", e.u}, {"v", e.v}, {"len", to_string(e.len)}});
    return Json{{"nodes", G.nodes()}, {"edges", E}};
}

MetricGraph graph_from_json(const Json& j, bool allow_degree2) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw InvalidInput("graph JSON needs nodes and edges");
    std::vector<GEdge> E;
    for (const auto& e : j.at("edges"))
        E.push_back({e.at("u").get<int>(), e.at("v").get<int>(), rational_from_json(e.at("len"))});
    return MetricGraph(j.at("nodes").get<int>(), std::move(E), allow_degree2);
}

Json merge_tree_to_json(const MergeTree& M) {
    Json h = Json::array();
    for (const auto& x : M.height) h.push_back(to_string(x));
    return Json{{"parent", M.parent}, {"height", h}, {"root", M.root}};
}

MergeTree merge_tree_from_json(const Json& j) {
    MergeTree M;
    M.parent = j.at("parent").get<std::vector<int>>();
    for (const auto& x : j.at("height")) M.height.push_back(rational_from_json(x));
    M.origin.assign(M.parent.size(), -1);
    auto r = std::find(M.parent.begin(), M.parent.end(), -1);
    M.root = j.value("root", r == M.parent.end() ? 0 : int(r - M.parent.begin()));
    M.validate();
    return M;
}

template <class T>
Json power_value_json(const PowerValue<T>& v) {
    if (v.infinite) return "inf";
    if constexpr (std::is_same_v<T, Rational>) return v.str();
    else return v.approx();
}
template Json power_value_json(const PowerValue<Rational>&);
template Json power_value_json(const PowerValue<double>&);

template <class T>
Json gm_result_to_json(const GMResult<T>& r) {
    Json out{{"value", power_value_json(r.value)}, {"method", r.method}};
    out["witness"] = r.witness ? Json(r.witness->a) : Json::array();
    return out;
}
template Json gm_result_to_json(const GMResult<Rational>&);
template Json gm_result_to_json(const GMResult<double>&);

template <class T>
Json cost_matrix_to_json(const CostMatrix<T>& C) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < C.nx; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < C.ny; ++k) row.push_back(scalar_json(C(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}
template Json cost_matrix_to_json(const CostMatrix<Rational>&);
template Json cost_matrix_to_json(const CostMatrix<double>&);

template <class T>
Json step_cdf_to_json(const StepCDF<T>& F) {
    Json xs = Json::array(), vs = Json::array();
    for (const auto& x : F.xs) xs.push_back(scalar_json(x));
    for (const auto& v : F.values) vs.push_back(scalar_json(v));
    return Json{{"r", xs}, {"value", vs}};
}
template Json step_cdf_to_json(const StepCDF<Rational>&);
template Json step_cdf_to_json(const StepCDF<double>&);

Json pwl_to_json(const PwlCDF& f) {
    Json xs = Json::array(), vs = Json::array();
    for (const auto& x : f.breakpoints()) xs.push_back(to_string(x));
    for (const auto& v : f.values()) vs.push_back(to_string(v));
    return Json{{"r", xs}, {"value", vs}};
}

PwlCDF pwl_from_json(const Json& j) {
    std::vector<Rational> xs, ys;
    for (const auto& x : j.at("r")) xs.push_back(rational_from_json(x));
    for (const auto& y : j.at("value")) ys.push_back(rational_from_json(y));
    return PwlCDF(std::move(xs), std::move(ys));
}

Json node_multiset_to_json(const NodeMultiset& ms) {
    Json fs = Json::array();
    for (const auto& f : ms.functions) fs.push_back(pwl_to_json(f));
    return Json{{"total_length", to_string(ms.total_length)}, {"functions", fs}};
}

NodeMultiset node_multiset_from_json(const Json& j) {
    NodeMultiset ms;
    ms.total_length = rational_from_json(j.at("total_length"));
    for (const auto& f : j.at("functions")) ms.functions.push_back(pwl_from_json(f));
    std::sort(ms.functions.begin(), ms.functions.end());
    return ms;
}

Json partition_to_json(const PartitionFixture& f) {
    Json P = Json::array();
    for (const auto& q : f.pairing) P.push_back({q[0], q[1], q[2], q[3]});
    return Json{{"part_x", f.part_x}, {"part_y", f.part_y}, {"pairing", P}};
}

PartitionFixture partition_from_json(const Json& j) {
    PartitionFixture f;
    f.part_x = j.at("part_x").get<std::vector<int>>();
    f.part_y = j.at("part_y").get<std::vector<int>>();
    for (const auto& q : j.at("pairing")) {
        if (q.size() != 4) throw InvalidInput("pairing entries need four block indices");
        f.pairing.push_back({q[0].get<int>(), q[1].get<int>(), q[2].get<int>(), q[3].get<int>()});
    }
    return f;
}

}  // namespace gromon
