#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "gromon/gromov.hpp"
#include "gromon/graphs.hpp"
#include "gromon/invariants.hpp"
#include "gromon/io.hpp"
#include "gromon/merge.hpp"
#include "gromon/shapes.hpp"

using namespace gromon;

namespace {

int log_level() {
    const char* s = std::getenv("GROMON_LOG");
    if (!s) return 0;
    std::string v = s;
    if (v == "debug" || v == "2") return 2;
    if (v == "info" || v == "1") return 1;
    return 0;
}

void logmsg(int level, const std::string& msg) {
    if (log_level() >= level) std::cerr << "[gromon] " << msg << "\n";
}

struct Config {
    std::string p = "1";
    std::string scalar = "rational";
    std::optional<std::uint64_t> seed;
    std::string mesh = "1/2";
    double tol = 1e-9;
    int threads = 0;
    int size_guard = 0;
    std::string out = "-";
};

constexpr int kOk = 0, kError = 1, kInfinite = 2;

std::uint64_t need_seed(const Config& c) {
    if (!c.seed) throw InvalidInput("this command is randomized and needs --seed");
    return *c.seed;
}

void emit(const Config& c, const Json& j) { write_json_file(c.out, j); }

// writes prefix + name when an output prefix is given, otherwise collects into one object
void emit_many(const Config& c, const std::vector<std::pair<std::string, Json>>& parts) {
    if (c.out == "-") {
        Json all = Json::object();
        for (const auto& [k, v] : parts) all[k] = v;
        std::cout << all.dump() << "\n";
        return;
    }
    for (const auto& [k, v] : parts) write_json_file(c.out + k + ".json", v);
}

std::string read_scalar(const Config& c, const Json& j) {
    if (j.contains("edges")) return "rational";
    return j.contains("scalar") ? space_scalar(j) : c.scalar;
}

// a metric graph is accepted wherever a space is, discretized at --mesh
RSpace load_rspace(const Config& c, const Json& j) {
    if (j.contains("edges")) return discretize_graph(graph_from_json(j), parse_rational(c.mesh)).space;
    return rspace_from_json(j);
}

RSpace random_rspace(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> U(1, 9);
    std::vector<Rational> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = U(rng);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i * n + k] + d[k * n + j] < d[i * n + j]) d[i * n + j] = d[i * n + k] + d[k * n + j];
    return RSpace::uniform(n, d);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw InvalidInput("bad integer list: " + s);
        }
    }
    return out;
}

// ---- dist ----

template <class T>
int dist_gm(const Config& c, const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, const std::string& method,
            int restarts) {
    PExponent p = PExponent::parse(c.p);
    GMResult<T> r;
    if (method == "exact") {
        GMGuards g;
        if (c.size_guard > 0) g.uniform = g.general = std::size_t(c.size_guard);
        r = gm_exact(X, Y, p, g);
    } else if (method == "heuristic") {
        r = gm_heuristic(X, Y, p, need_seed(c), restarts);
    } else {
        throw InvalidInput("method must be exact or heuristic");
    }
    emit(c, gm_result_to_json(r));
    return r.value.infinite ? kInfinite : kOk;
}

template <class T>
int dist_bounds(const Config& c, const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, const std::string& which) {
    Json out = Json::object();
    bool inf = false;
    auto want = [&](const std::string& w) { return which == "all" || which == w; };
    if (!want("global") && !want("local") && !want("kantorovich"))
        throw InvalidInput("--which must be global, local, kantorovich or all");
    if (want("global")) {
        auto v = lower_bound_global(X, Y, PExponent::parse(c.p));
        out["global"] = power_value_json(v);
    }
    if (want("local")) {
        std::size_t guard = c.size_guard > 0 ? std::size_t(c.size_guard) : 12;
        auto m = lower_bound_local_monge(X, Y, MapClass::all, guard);
        inf = inf || m.infinite();
        out["local"] = m.infinite() ? Json("inf") : scalar_json(m.cost);
        if (m.map) out["local_map"] = m.map->a;
    }
    if (want("kantorovich")) out["kantorovich"] = scalar_json(lower_bound_local_kantorovich(X, Y));
    if (which != "all") out["value"] = out[which];
    emit(c, out);
    return which != "kantorovich" && which != "global" && inf ? kInfinite : kOk;
}

// ---- invariants ----

template <class T>
int inv_space(const Config& c, const FiniteMMSpace<T>& X, const std::string& what, int point, bool csv) {
    StepCDF<T> F;
    if (what == "global") {
        F = global_distribution(X);
    } else {
        if (point < 0 || std::size_t(point) >= X.n()) throw InvalidInput("--point out of range");
        F = local_distribution(X)[std::size_t(point)];
    }
    if (csv) {
        if (c.out == "-") {
            F.write_csv(std::cout);
        } else {
            std::ofstream o(c.out);
            F.write_csv(o);
        }
    } else {
        emit(c, step_cdf_to_json(F));
    }
    return kOk;
}

// ---- verify ----

template <class T>
int verify_partition(const Config& c, const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                     const PartitionFixture& f) {
    bool ok = partition_equality_check(X, Y, f.part_x, f.part_y, f.pairing);
    emit(c, Json{{"check", "partition"}, {"pass", ok}});
    return ok ? kOk : kError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gromov-Monge distances, distance-distribution invariants and metric tree tools"};
    app.require_subcommand(1);
    Config c;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (required by randomized commands)");
    app.add_option("--p", c.p, "exponent: positive integer or inf");
    app.add_option("--scalar", c.scalar, "rational or float")->check(CLI::IsMember({"rational", "float"}));
    app.add_option("--mesh", c.mesh, "graph discretization mesh");
    app.add_option("--tol", c.tol, "float-mode comparison tolerance");
    app.add_option("--threads", c.threads, "worker threads (0 = hardware)");
    app.add_option("--size-guard", c.size_guard, "override exhaustive-search size guard");
    app.add_option("-o,--out", c.out, "output file or prefix ('-' for stdout)");
    app.fallthrough();

    std::function<int()> run;
    std::vector<std::string> files;

    // dist
    auto* dist = app.add_subcommand("dist", "distances and lower bounds");
    dist->require_subcommand(1);
    std::string method = "exact", which = "global";
    int restarts = 10;
    auto* d_gm = dist->add_subcommand("gm", "Gromov-Monge distance from X to Y");
    d_gm->add_option("files", files, "X.json Y.json")->required()->expected(2);
    d_gm->add_option("--method", method, "exact or heuristic");
    d_gm->add_option("--restarts", restarts, "heuristic restarts");
    d_gm->callback([&] {
        run = [&] {
            auto jx = read_json_file(files[0]), jy = read_json_file(files[1]);
            if (read_scalar(c, jx) == "float" || read_scalar(c, jy) == "float")
                return dist_gm(c, fspace_from_json(jx), fspace_from_json(jy), method, restarts);
            return dist_gm(c, load_rspace(c, jx), load_rspace(c, jy), method, restarts);
        };
    });
    auto* d_b = dist->add_subcommand("bounds", "distance-distribution lower bounds");
    d_b->add_option("files", files, "X.json Y.json")->required()->expected(2);
    d_b->add_option("--which", which, "global, local, kantorovich or all");
    d_b->callback([&] {
        run = [&] {
            auto jx = read_json_file(files[0]), jy = read_json_file(files[1]);
            if (read_scalar(c, jx) == "float" || read_scalar(c, jy) == "float")
                return dist_bounds(c, fspace_from_json(jx), fspace_from_json(jy), which);
            return dist_bounds(c, load_rspace(c, jx), load_rspace(c, jy), which);
        };
    });

    // gen
    auto* gen = app.add_subcommand("gen", "generate fixtures");
    gen->require_subcommand(1);
    gen->add_subcommand("bloom", "two 6-point subsets of the line with equal distance sets")->callback([&] {
        run = [&] {
            auto [X, Y] = bloom_point_clouds();
            emit_many(c, {{"X", space_to_json(X)}, {"Y", space_to_json(Y)}});
            return kOk;
        };
    });
    std::string kind = "circle", matrix, degrees = "1,3";
    std::size_t m = 64, pm = 120;
    double A = 1, B = 1, height = -1, rmax = 0;
    int n = 4, dim = 2, max_edges = 10, leaf = -1, point = 0, trials = 10;
    std::string delta_s = "1/10";
    auto* g_curve = gen->add_subcommand("curve", "sampled plane curve");
    g_curve->add_option("--kind", kind, "circle, ellipse, bumpy or mallows");
    g_curve->add_option("--m", m, "number of samples");
    g_curve->add_option("--A", A, "ellipse semi-axis or bump amplitude");
    g_curve->add_option("--B", B, "ellipse semi-axis");
    g_curve->add_option("--n", n, "bump count or polygon half-order");
    g_curve->add_option("--height", height, "triangle apex height (mallows)");
    g_curve->callback([&] {
        run = [&] {
            if (kind == "mallows") {
                double h = height > 0 ? height : mallows_clarke_default_height(n);
                auto P = mallows_clarke_pair(n, h, m);
                emit_many(c, {{"X", space_to_json(P.X.space())},
                              {"Y", space_to_json(P.Y.space())},
                              {"pairing", partition_to_json({P.part_x, P.part_y, P.pairing})}});
                return kOk;
            }
            PlaneCurve cv;
            if (kind == "circle") cv = PlaneCurve::circle();
            else if (kind == "ellipse") cv = PlaneCurve::ellipse(A, B);
            else if (kind == "bumpy") cv = PlaneCurve::bumpy_circle(A, n);
            else throw InvalidInput("unknown curve kind " + kind);
            emit(c, space_to_json(sample_curve(cv, m).space()));
            return kOk;
        };
    });
    auto* g_sph = gen->add_subcommand("sphere", "uniform samples on the unit sphere");
    g_sph->add_option("--d", dim, "sphere dimension");
    g_sph->add_option("--m", m, "number of samples");
    g_sph->callback([&] {
        run = [&] {
            emit(c, space_to_json(sample_sphere_surface(dim, m, need_seed(c)).space()));
            return kOk;
        };
    });
    auto* g_poly = gen->add_subcommand("polyhedron", "dodecahedron pair with pyramids on complementary faces");
    g_poly->add_option("--m", pm, "samples, 120 k^2");
    g_poly->add_option("--height", height, "pyramid apex height");
    g_poly->callback([&] {
        run = [&] {
            auto P = dodecahedron_bump_pair(height > 0 ? height : 0.3, pm);
            emit_many(c, {{"X", space_to_json(P.X.space())},
                          {"Y", space_to_json(P.Y.space())},
                          {"pairing", partition_to_json({P.part_x, P.part_y, P.pairing})}});
            return kOk;
        };
    });
    auto* g_lobe = gen->add_subcommand("lobetree", "tree with three lobes of three sub-lobes");
    g_lobe->add_option("--matrix", matrix, "nine comma-separated leaf counts, row by row")->required();
    g_lobe->callback([&] {
        run = [&] {
            auto v = parse_int_list(matrix);
            if (v.size() != 9) throw InvalidInput("--matrix needs nine entries");
            LobeMatrix M;
            for (int i = 0; i < 9; ++i) M[i / 3][i % 3] = v[i];
            emit(c, graph_to_json(lobe_tree(M)));
            return kOk;
        };
    });
    auto* g_glue = gen->add_subcommand("gluetree", "attach a tree to a leaf of a base tree");
    g_glue->add_option("files", files, "base.json tree.json")->required()->expected(2);
    g_glue->add_option("--leaf", leaf, "leaf of the base tree")->required();
    g_glue->add_option("--delta", delta_s, "length of the connecting edge");
    g_glue->callback([&] {
        run = [&] {
            auto S = graph_from_json(read_json_file(files[0]));
            auto T = graph_from_json(read_json_file(files[1]));
            emit(c, graph_to_json(glue_tree(S, leaf, T, parse_rational(delta_s))));
            return kOk;
        };
    });
    auto* g_rand = gen->add_subcommand("randomtree", "random tree with distinct edge lengths");
    g_rand->add_option("--max-edges", max_edges, "edge budget");
    g_rand->callback([&] {
        run = [&] {
            std::mt19937_64 rng(need_seed(c));
            emit(c, graph_to_json(random_tree(rng, max_edges)));
            return kOk;
        };
    });

    // invariant
    auto* inv = app.add_subcommand("invariant", "distance-distribution invariants");
    inv->require_subcommand(1);
    bool csv = false;
    std::string file;
    for (const char* name : {"global", "local"}) {
        auto* s = inv->add_subcommand(name, std::string(name) + " distance distribution of a space");
        s->add_option("file", file, "space.json")->required();
        s->add_flag("--csv", csv, "write r,value rows");
        if (std::string(name) == "local") s->add_option("--point", point, "base point index");
        std::string what = name;
        s->callback([&, what] {
            run = [&, what] {
                auto j = read_json_file(file);
                if (read_scalar(c, j) == "float") return inv_space(c, fspace_from_json(j), what, point, csv);
                return inv_space(c, load_rspace(c, j), what, point, csv);
            };
        });
    }
    auto* i_nm = inv->add_subcommand("nodemultiset", "ball-volume functions at the nodes of a metric graph");
    i_nm->add_option("file", file, "graph.json")->required();
    i_nm->callback([&] {
        run = [&] {
            emit(c, node_multiset_to_json(node_multiset(graph_from_json(read_json_file(file)))));
            return kOk;
        };
    });

    // tree
    auto* tree = app.add_subcommand("tree", "metric tree reconstruction and comparison");
    tree->require_subcommand(1);
    auto* t_rec = tree->add_subcommand("reconstruct", "rebuild a tree from its node multiset");
    t_rec->add_option("file", file, "multiset.json or graph.json")->required();
    t_rec->callback([&] {
        run = [&] {
            auto j = read_json_file(file);
            auto ms = j.contains("functions") ? node_multiset_from_json(j) : node_multiset(graph_from_json(j));
            emit(c, graph_to_json(reconstruct_tree(ms)));
            return kOk;
        };
    });
    auto* t_can = tree->add_subcommand("canon", "isometry-invariant canonical string");
    t_can->add_option("file", file, "graph.json")->required();
    t_can->callback([&] {
        run = [&] {
            emit(c, Json{{"canonical", tree_canonical_form(graph_from_json(read_json_file(file)))}});
            return kOk;
        };
    });
    auto* t_del = tree->add_subcommand("delta", "minimum merge-tree interleaving over rootings");
    t_del->add_option("files", files, "T.json S.json")->required()->expected(2);
    t_del->callback([&] {
        run = [&] {
            auto T = graph_from_json(read_json_file(files[0])), S = graph_from_json(read_json_file(files[1]));
            int guard = c.size_guard > 0 ? c.size_guard : 14;
            emit(c, Json{{"value", to_string(delta(T, S, guard))}});
            return kOk;
        };
    });

    // verify
    auto* ver = app.add_subcommand("verify", "verification suites");
    ver->require_subcommand(1);
    auto* v_part = ver->add_subcommand("partition", "block-pair cross-distance equality");
    v_part->add_option("files", files, "X.json Y.json pairing.json")->required()->expected(3);
    v_part->callback([&] {
        run = [&] {
            auto jx = read_json_file(files[0]), jy = read_json_file(files[1]);
            auto f = partition_from_json(read_json_file(files[2]));
            if (read_scalar(c, jx) == "float" || read_scalar(c, jy) == "float")
                return verify_partition(c, fspace_from_json(jx), fspace_from_json(jy), f);
            return verify_partition(c, load_rspace(c, jx), load_rspace(c, jy), f);
        };
    });
    auto* v_qm = ver->add_subcommand("quasimetric", "quasi-metric axioms on random triples");
    v_qm->add_option("--n", n, "points per space");
    v_qm->add_option("--trials", trials, "number of triples");
    v_qm->callback([&] {
        run = [&] {
            std::mt19937_64 rng(need_seed(c));
            PExponent p = PExponent::parse(c.p);
            std::size_t checks = 0;
            std::vector<std::string> bad;
            for (int t = 0; t < trials; ++t) {
                std::vector<RSpace> S;
                for (int k = 0; k < 3; ++k) S.push_back(random_rspace(rng, std::size_t(n)));
                auto rep = quasi_metric_suite(S, p);
                checks += rep.checks;
                for (auto& v : rep.violations) bad.push_back("trial " + std::to_string(t) + ": " + v);
                logmsg(2, "triple " + std::to_string(t) + " checked");
            }
            emit(c, Json{{"check", "quasimetric"}, {"trials", trials}, {"checks", checks}, {"violations", bad}});
            return bad.empty() ? kOk : kError;
        };
    });
    auto* v_rec = ver->add_subcommand("reconstruct", "reconstruction round trips on random trees");
    v_rec->add_option("--trials", trials, "number of trees");
    v_rec->add_option("--max-edges", max_edges, "edge budget");
    v_rec->callback([&] {
        run = [&] {
            std::mt19937_64 rng(need_seed(c));
            int pass = 0;
            for (int t = 0; t < trials; ++t) {
                auto T = random_tree(rng, max_edges);
                try {
                    pass += tree_canonical_form(reconstruct_tree(node_multiset(T))) == tree_canonical_form(T);
                } catch (const Error& e) {
                    logmsg(1, std::string("trial failed: ") + e.what());
                }
            }
            emit(c, Json{{"check", "reconstruct"}, {"trials", trials}, {"passed", pass}});
            return pass == trials ? kOk : kError;
        };
    });
    auto* v_sw = ver->add_subcommand("sandwich", "global ≤ local ≤ exact distance on random pairs");
    v_sw->add_option("--n", n, "points per space");
    v_sw->add_option("--trials", trials, "number of pairs");
    v_sw->callback([&] {
        run = [&] {
            std::mt19937_64 rng(need_seed(c));
            int pass = 0;
            for (int t = 0; t < trials; ++t) {
                auto X = random_rspace(rng, std::size_t(n)), Y = random_rspace(rng, std::size_t(n));
                auto g = gm_exact(X, Y, PExponent::finite(1));
                auto lg = lower_bound_global(X, Y, PExponent::finite(1));
                auto lm = lower_bound_local_monge(X, Y);
                auto lk = lower_bound_local_kantorovich(X, Y);
                pass += !g.value.infinite && !lm.infinite() && lk <= lm.cost && lm.cost <= g.value.power &&
                        lg.power <= g.value.power;
            }
            emit(c, Json{{"check", "sandwich"}, {"trials", trials}, {"passed", pass}});
            return pass == trials ? kOk : kError;
        };
    });

    // fit
    auto* fit = app.add_subcommand("fit", "curve fitting");
    fit->require_subcommand(1);
    auto* f_t = fit->add_subcommand("taylor", "least-squares power series on (r, H(r)) rows");
    f_t->add_option("file", file, "CSV of r,value")->required();
    f_t->add_option("--degrees", degrees, "comma-separated powers of r");
    f_t->add_option("--rmax", rmax, "largest radius used (0 keeps all)");
    f_t->callback([&] {
        run = [&] {
            std::ifstream in(file);
            if (!in) throw InvalidInput("cannot open " + file);
            std::vector<std::pair<double, double>> rows;
            std::string line;
            while (std::getline(in, line)) {
                auto k = line.find(',');
                if (k == std::string::npos) continue;
                try {
                    rows.emplace_back(std::stod(line.substr(0, k)), std::stod(line.substr(k + 1)));
                } catch (const std::exception&) {
                    continue;  // header
                }
            }
            auto F = fit_taylor_coeffs(rows, parse_int_list(degrees), rmax);
            emit(c, Json{{"degrees", F.degrees}, {"coeffs", F.coeffs}, {"residual", F.residual}});
            return kOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kError;
    }
    if (seed_opt->count()) c.seed = seed_value;
    try {
        set_float_tolerance(c.tol);
        if (c.threads > 0) set_threads(c.threads);
        auto t0 = std::chrono::steady_clock::now();
        int code = run ? run() : kError;
        logmsg(1, "done in " +
                      std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) +
                      " s");
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
}
