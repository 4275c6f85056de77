#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "gromon/gromov.hpp"
#include "gromon/graphs.hpp"
#include "gromon/invariants.hpp"
#include "gromon/io.hpp"
#include "gromon/merge.hpp"
#include "gromon/shapes.hpp"

namespace py = pybind11;
using namespace gromon;

// JSON text crosses the boundary; the Python side turns it into dicts and Fractions
namespace {

Json parse(const std::string& s) { return Json::parse(s); }
std::string out(const Json& j) { return j.dump(); }

bool is_float(const Json& j) { return j.value("scalar", std::string("rational")) == "float"; }

std::string gm(const std::string& xs, const std::string& ys, const std::string& p, const std::string& method,
               std::optional<std::uint64_t> seed) {
    auto jx = parse(xs), jy = parse(ys);
    PExponent P = PExponent::parse(p);
    auto go = [&](const auto& X, const auto& Y) {
        if (method == "exact") return out(gm_result_to_json(gm_exact(X, Y, P)));
        if (method != "heuristic") throw InvalidInput("method must be exact or heuristic");
        if (!seed) throw InvalidInput("heuristic search needs a seed");
        return out(gm_result_to_json(gm_heuristic(X, Y, P, *seed)));
    };
    if (is_float(jx) || is_float(jy)) return go(fspace_from_json(jx), fspace_from_json(jy));
    return go(rspace_from_json(jx), rspace_from_json(jy));
}

std::string bounds(const std::string& xs, const std::string& ys, const std::string& p) {
    auto jx = parse(xs), jy = parse(ys);
    auto go = [&](const auto& X, const auto& Y) {
        Json o;
        o["global"] = power_value_json(lower_bound_global(X, Y, PExponent::parse(p)));
        auto m = lower_bound_local_monge(X, Y);
        o["local"] = m.infinite() ? Json("inf") : scalar_json(m.cost);
        o["kantorovich"] = scalar_json(lower_bound_local_kantorovich(X, Y));
        return out(o);
    };
    if (is_float(jx) || is_float(jy)) return go(fspace_from_json(jx), fspace_from_json(jy));
    return go(rspace_from_json(jx), rspace_from_json(jy));
}

std::string distribution(const std::string& xs, std::optional<int> point) {
    auto j = parse(xs);
    auto go = [&](const auto& X) {
        if (!point) return out(step_cdf_to_json(global_distribution(X)));
        if (*point < 0 || std::size_t(*point) >= X.n()) throw InvalidInput("point out of range");
        return out(step_cdf_to_json(local_distribution(X)[std::size_t(*point)]));
    };
    return is_float(j) ? go(fspace_from_json(j)) : go(rspace_from_json(j));
}

}  // namespace

PYBIND11_MODULE(_gromon, m) {
    // base first: later registrations are tried first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<SizeLimitExceeded>(m, "SizeLimitExceeded", PyExc_RuntimeError);
    py::register_exception<DistinctnessViolated>(m, "DistinctnessViolated", PyExc_ValueError);
    py::register_exception<NotATree>(m, "NotATree", PyExc_ValueError);

    m.def("gm", &gm, py::arg("x"), py::arg("y"), py::arg("p") = "1", py::arg("method") = "exact",
          py::arg("seed") = py::none(), py::call_guard<py::gil_scoped_release>());
    m.def("bounds", &bounds, py::arg("x"), py::arg("y"), py::arg("p") = "1",
          py::call_guard<py::gil_scoped_release>());
    m.def("distribution", &distribution, py::arg("x"), py::arg("point") = py::none());
    m.def("delta_space", [](std::size_t n) { return out(space_to_json(delta_space(n))); });
    m.def("bloom", [] {
        auto [X, Y] = bloom_point_clouds();
        return std::make_pair(out(space_to_json(X)), out(space_to_json(Y)));
    });
    m.def("curve", [](const std::string& kind, std::size_t n_samples, double a, double b, int n) {
        PlaneCurve c;
        if (kind == "circle") c = PlaneCurve::circle();
        else if (kind == "ellipse") c = PlaneCurve::ellipse(a, b);
        else if (kind == "bumpy") c = PlaneCurve::bumpy_circle(a, n);
        else throw InvalidInput("unknown curve kind " + kind);
        return out(space_to_json(sample_curve(c, n_samples).space()));
    }, py::arg("kind"), py::arg("m"), py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("n") = 5);
    m.def("mallows_clarke", [](int n, std::size_t samples) {
        auto P = mallows_clarke_pair(n, mallows_clarke_default_height(n), samples);
        return std::make_tuple(out(space_to_json(P.X.space())), out(space_to_json(P.Y.space())),
                               out(partition_to_json({P.part_x, P.part_y, P.pairing})));
    });
    m.def("verify_partition", [](const std::string& xs, const std::string& ys, const std::string& fs) {
        auto jx = parse(xs), jy = parse(ys);
        auto f = partition_from_json(parse(fs));
        if (is_float(jx) || is_float(jy))
            return partition_equality_check(fspace_from_json(jx), fspace_from_json(jy), f.part_x, f.part_y, f.pairing);
        return partition_equality_check(rspace_from_json(jx), rspace_from_json(jy), f.part_x, f.part_y, f.pairing);
    });
    m.def("lobe_tree", [](const std::vector<int>& v) {
        if (v.size() != 9) throw InvalidInput("lobe matrix needs nine entries");
        LobeMatrix M;
        for (int i = 0; i < 9; ++i) M[i / 3][i % 3] = v[std::size_t(i)];
        return out(graph_to_json(lobe_tree(M)));
    });
    m.def("random_tree", [](std::uint64_t seed, int max_edges) {
        std::mt19937_64 rng(seed);
        return out(graph_to_json(random_tree(rng, max_edges)));
    }, py::arg("seed"), py::arg("max_edges") = 10);
    m.def("node_multiset", [](const std::string& g) {
        return out(node_multiset_to_json(node_multiset(graph_from_json(parse(g)))));
    });
    m.def("reconstruct_tree", [](const std::string& ms) {
        return out(graph_to_json(reconstruct_tree(node_multiset_from_json(parse(ms)))));
    });
    m.def("canonical_form", [](const std::string& g) { return tree_canonical_form(graph_from_json(parse(g))); });
    m.def("tree_delta", [](const std::string& t, const std::string& s, int guard) {
        return to_string(delta(graph_from_json(parse(t)), graph_from_json(parse(s)), guard));
    }, py::arg("t"), py::arg("s"), py::arg("size_guard") = 14);
    m.def("discretize_graph", [](const std::string& g, const std::string& mesh) {
        return out(space_to_json(discretize_graph(graph_from_json(parse(g)), parse_rational(mesh)).space));
    });
}
