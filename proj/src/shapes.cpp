#include "gromon/shapes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

namespace gromon {

namespace {
constexpr double kPi = 3.14159265358979323846;

double norm3(const Point& a, const Point& b) {
    double x = a[0] - b[0], y = a[1] - b[1], z = a[2] - b[2];
    return std::sqrt(x * x + y * y + z * z);
}
Point lin(const Point& a, double s, const Point& b, double t) {
    return {s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]};
}
Point lin3(const Point& a, double s, const Point& b, double t, const Point& c, double u) {
    return {s * a[0] + t * b[0] + u * c[0], s * a[1] + t * b[1] + u * c[1],
            s * a[2] + t * b[2] + u * c[2]};
}
Point cross(const Point& a, const Point& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

SampledSpace uniform_sample(std::vector<Point> pts, int dim, std::string prov) {
    SampledSpace S;
    S.points = std::move(pts);
    S.weights.assign(S.points.size(), 1.0 / double(S.points.size()));
    S.dim = dim;
    S.provenance = std::move(prov);
    return S;
}
}  // namespace

// ---- exact fixtures ----

RSpace delta_space(std::size_t n) {
    if (n == 0) throw InvalidInput("n must be positive");
    std::vector<Rational> d(n * n, Rational(1));
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
    return RSpace::uniform(n, std::move(d));
}

RSpace two_point_space(const Rational& w0, const Rational& w1) {
    return RSpace(2, {0, 1, 1, 0}, {w0, w1});
}

RSpace line_points(const std::vector<Rational>& xs) {
    const std::size_t n = xs.size();
    std::vector<Rational> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = abs(Rational(xs[i] - xs[j]));
    return RSpace::uniform(n, std::move(d), false, false);
}

std::pair<RSpace, RSpace> bloom_point_clouds() {
    auto conv = [](std::initializer_list<int> v) {
        std::vector<Rational> out;
        for (int x : v) out.emplace_back(x);
        return out;
    };
    return {line_points(conv({0, 1, 4, 10, 12, 17})), line_points(conv({0, 1, 8, 11, 13, 17}))};
}

// ---- SampledSpace ----

double SampledSpace::distance(std::size_t i, std::size_t j) const {
    if (!dist.empty()) return dist[i * points.size() + j];
    return norm3(points[i], points[j]);
}

FSpace SampledSpace::space() const {
    const std::size_t n = points.size();
    if (n > 20000) throw SizeLimitExceeded("distance matrix too large to materialize");
    std::vector<double> d(n * n);
    if (!dist.empty()) {
        d = dist;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = i == j ? 0.0 : norm3(points[i], points[j]);
    }
    return FSpace(n, std::move(d), weights, false, false);
}

// ---- curves ----

PlaneCurve PlaneCurve::ellipse(double A, double B) {
    if (!(A >= B && B > 0)) throw InvalidInput("ellipse needs A >= B > 0");
    PlaneCurve c;
    c.kind = Kind::ellipse;
    c.a = A;
    c.b = B;
    return c;
}

PlaneCurve PlaneCurve::bumpy_circle(double A, int n) {
    if (!(A >= 0 && A < 1) || n < 1) throw InvalidInput("bumpy circle needs 0 <= A < 1, n >= 1");
    PlaneCurve c;
    c.kind = Kind::bumpy_circle;
    c.a = A;
    c.n = n;
    return c;
}

PlaneCurve PlaneCurve::polygon(std::vector<std::array<double, 2>> v) {
    if (v.size() < 3) throw InvalidInput("polygon needs at least 3 vertices");
    PlaneCurve c;
    c.kind = Kind::polygon;
    c.vertices = std::move(v);
    return c;
}

PlaneCurve PlaneCurve::mallows_clarke(int n, double height, std::vector<int> edges) {
    if (n < 2) throw InvalidInput("mallows_clarke needs n >= 2");
    if (!(height > 0) || !std::isfinite(height)) throw InvalidInput("triangle height must be positive");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (int(edges.size()) != n) throw InvalidInput("exactly n triangle edges required");
    for (int e : edges)
        if (e < 0 || e >= 2 * n) throw InvalidInput("triangle edge out of range");
    PlaneCurve c;
    c.kind = Kind::mallows_clarke;
    c.n = n;
    c.height = height;
    c.triangle_edges = std::move(edges);
    return c;
}

std::string PlaneCurve::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::circle: os << "circle"; break;
        case Kind::ellipse: os << "ellipse(" << a << "," << b << ")"; break;
        case Kind::bumpy_circle: os << "bumpy_circle(" << a << "," << n << ")"; break;
        case Kind::polygon: os << "polygon(" << vertices.size() << " vertices)"; break;
        case Kind::mallows_clarke:
            os << "mallows_clarke(" << n << "," << height << ";";
            for (int e : triangle_edges) os << ' ' << e;
            os << ")";
            break;
    }
    return os.str();
}

double circle_chordal_cdf(double r) {
    if (r <= 0) return 0;
    if (r >= 2) return 1;
    return 2.0 / kPi * std::asin(r / 2);
}

double ellipse_perimeter(double A, double B) {
    using boost::math::quadrature::gauss_kronrod;
    auto speed = [&](double t) { return std::hypot(A * std::sin(t), B * std::cos(t)); };
    return gauss_kronrod<double, 31>::integrate(speed, 0.0, 2 * kPi, 15, 1e-13);
}

namespace {

double bumpy_cdf(double A, int n, double s) { return (s + A * (1 - std::cos(n * s)) / n) / (2 * kPi); }

double bumpy_inverse(double A, int n, double u) {
    double lo = 0, hi = 2 * kPi, s = 2 * kPi * u;
    for (int it = 0; it < 60; ++it) {
        double f = bumpy_cdf(A, n, s) - u;
        if (f > 0) hi = s; else lo = s;
        double fp = (1 + A * std::sin(n * s)) / (2 * kPi);
        double next = s - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - s) < 1e-15) return next;
        s = next;
    }
    return s;
}

// ---- Mallows–Clarke geometry ----
// flags (edge e, half h); half 0 runs from the piece centre toward vertex e, half 1 toward e+1

struct MCGeom {
    int n;
    double height;
    int k[2];  // samples per half: [0] plain edge, [1] triangle leg

    Point vertex(int v) const {
        double t = v * kPi / n;
        return {std::cos(t), std::sin(t), 0};
    }
    Point sample(int e, int h, int i, int kind) const {
        Point v = vertex(h == 0 ? e : e + 1);
        Point c;
        if (kind == 0) {
            c = lin(vertex(e), 0.5, vertex(e + 1), 0.5);
        } else {
            double ra = std::cos(kPi / (2 * n)) + height, t = (e + 0.5) * kPi / n;
            c = {ra * std::cos(t), ra * std::sin(t), 0};
        }
        double t = (i + 0.5) / k[kind];
        return lin(c, 1 - t, v, t);
    }
    std::pair<int, int> rel(int ea, int ha, int eb, int hb) const {
        const int N = 2 * n;
        if (ha == 0) return {((eb - ea) % N + N) % N, hb};
        return {((ea - eb) % N + N) % N, 1 - hb};
    }
};

struct MCSample {
    int e, h, i, kind;
};

struct MCBuilt {
    SampledSpace S;
    std::vector<int> part;
};

MCBuilt mc_build(const MCGeom& g, const std::vector<int>& tri_edges, const std::string& prov) {
    const int N = 2 * g.n;
    std::vector<int> kind(N, 0);
    for (int e : tri_edges) kind[e] = 1;
    std::vector<MCSample> smp;
    MCBuilt out;
    for (int e = 0; e < N; ++e)
        for (int h = 0; h < 2; ++h)
            for (int i = 0; i < g.k[kind[e]]; ++i) {
                smp.push_back({e, h, i, kind[e]});
                out.part.push_back(e);
            }
    const std::size_t m = smp.size();
    std::vector<Point> pts(m);
    for (std::size_t a = 0; a < m; ++a) pts[a] = g.sample(smp[a].e, smp[a].h, smp[a].i, smp[a].kind);
    out.S = uniform_sample(std::move(pts), 2, prov);
    out.S.dist.assign(m * m, 0.0);
    std::map<std::tuple<int, int, int, int, int, int>, double> cache;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            const auto& A = smp[a];
            const auto& B = smp[b];
            auto r1 = g.rel(A.e, A.h, B.e, B.h);
            auto r2 = g.rel(B.e, B.h, A.e, A.h);
            auto k1 = std::make_tuple(r1.first, r1.second, A.i, B.i, A.kind, B.kind);
            auto k2 = std::make_tuple(r2.first, r2.second, B.i, A.i, B.kind, A.kind);
            auto key = std::min(k1, k2);
            auto it = cache.find(key);
            if (it == cache.end()) {
                auto [re, rh, i1, i2, ka, kb] = key;
                double d = norm3(g.sample(0, 0, i1, ka), g.sample(re, rh, i2, kb));
                it = cache.emplace(key, d).first;
            }
            out.S.dist[a * m + b] = it->second;
        }
    return out;
}

MCGeom mc_geom(int n, double height, std::size_t m) {
    if (n < 2) throw InvalidInput("n must be >= 2");
    if (!(height > 0)) throw InvalidInput("triangle height must be positive");
    if (m < 3 || m % (2 * n) != 0)
        throw InvalidInput("sample count must be a multiple of 2n for block-symmetric sampling");
    const int K = int(m / (2 * n));
    if (K < 2) throw InvalidInput("too few samples for block-symmetric sampling");
    double half = std::sin(kPi / (2 * n));  // half edge length on the unit-circumradius polygon
    double leg = std::hypot(half, height);
    int kt = int(std::lround(K * leg / (half + leg)));
    kt = std::clamp(kt, 1, K - 1);
    return MCGeom{n, height, {K - kt, kt}};
}

std::vector<std::vector<int>> dihedral_images(const std::vector<int>& set, int N) {
    std::vector<std::vector<int>> out;
    for (int r = 0; r < N; ++r)
        for (int refl = 0; refl < 2; ++refl) {
            std::vector<int> img;
            for (int e : set) {
                int x = refl ? (-e - 1) : e;
                img.push_back(((x + r) % N + N) % N);
            }
            std::sort(img.begin(), img.end());
            out.push_back(img);
        }
    return out;
}

}  // namespace

double mallows_clarke_default_height(int n) {
    // apex at radius 1.4 over the edge midpoint
    return 1.4 - std::cos(kPi / (2 * n));
}

SampledSpace sample_curve(const PlaneCurve& c, std::size_t m) {
    if (m < 3) throw InvalidInput("need at least 3 samples");
    std::vector<Point> pts(m);
    switch (c.kind) {
        case PlaneCurve::Kind::circle:
            for (std::size_t i = 0; i < m; ++i) {
                double t = 2 * kPi * (i + 0.5) / m;
                pts[i] = {std::cos(t), std::sin(t), 0};
            }
            break;
        case PlaneCurve::Kind::bumpy_circle:
            for (std::size_t i = 0; i < m; ++i) {
                double t = bumpy_inverse(c.a, c.n, (i + 0.5) / m);
                pts[i] = {std::cos(t), std::sin(t), 0};
            }
            break;
        case PlaneCurve::Kind::ellipse: {
            using boost::math::quadrature::gauss_kronrod;
            const double A = c.a, B = c.b;
            auto speed = [&](double t) { return std::hypot(A * std::sin(t), B * std::cos(t)); };
            const double L = ellipse_perimeter(A, B);
            double t = 0, s_at_t = 0;
            for (std::size_t i = 0; i < m; ++i) {
                double target = L * (i + 0.5) / m;
                for (int it = 0; it < 50; ++it) {
                    double f = s_at_t - target;
                    if (std::fabs(f) < 1e-13 * L) break;
                    double nt = t - f / speed(t);
                    s_at_t += gauss_kronrod<double, 31>::integrate(speed, t, nt, 10, 1e-14);
                    t = nt;
                }
                pts[i] = {A * std::cos(t), B * std::sin(t), 0};
            }
            break;
        }
        case PlaneCurve::Kind::polygon: {
            const auto& V = c.vertices;
            const std::size_t k = V.size();
            std::vector<double> len(k);
            double L = 0;
            for (std::size_t e = 0; e < k; ++e) {
                const auto& a = V[e];
                const auto& b = V[(e + 1) % k];
                len[e] = std::hypot(b[0] - a[0], b[1] - a[1]);
                if (!(len[e] > 0)) throw InvalidInput("degenerate polygon edge");
                L += len[e];
            }
            std::size_t e = 0;
            double start = 0;
            for (std::size_t i = 0; i < m; ++i) {
                double s = L * (i + 0.5) / m;
                while (e + 1 < k && s > start + len[e]) start += len[e++];
                double t = (s - start) / len[e];
                const auto& a = V[e];
                const auto& b = V[(e + 1) % k];
                pts[i] = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 0};
            }
            break;
        }
        case PlaneCurve::Kind::mallows_clarke: {
            auto g = mc_geom(c.n, c.height, m);
            return mc_build(g, c.triangle_edges, c.describe()).S;
        }
    }
    return uniform_sample(std::move(pts), 2, c.describe());
}

SampledSpace sample_sphere_surface(int d, std::size_t m, std::uint64_t seed) {
    if (d != 1 && d != 2) throw InvalidInput("sphere dimension must be 1 or 2");
    if (m < 10) throw InvalidInput("need at least 10 samples");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<Point> pts(m);
    for (auto& p : pts) {
        double r;
        do {
            p = {N(rng), N(rng), d == 2 ? N(rng) : 0.0};
            r = std::sqrt(dot(p, p));
        } while (r < 1e-12);
        for (auto& x : p) x /= r;
    }
    return uniform_sample(std::move(pts), d + 1, "sphere(" + std::to_string(d) + ")");
}

std::array<std::array<std::string, 8>, 2> octagon_labels() {
    return {{{"T3", "S1", "S2", "S3", "T4", "T1", "S4", "T2"},
             {"T3", "T1", "S2", "S3", "T4", "S1", "S4", "T2"}}};
}

CurvePair mallows_clarke_pair(int n, double height, std::size_t m) {
    auto g = mc_geom(n, height, m);
    const int N = 2 * n;
    CurvePair cp;
    BlockPairing pairing;
    if (n == 4) {
        cp.edges_x = {0, 4, 5, 7};
        cp.edges_y = {0, 1, 4, 7};
        auto labels = octagon_labels();
        std::map<std::string, int> ex, ey;
        for (int e = 0; e < 8; ++e) {
            ex[labels[0][e]] = e;
            ey[labels[1][e]] = e;
        }
        // matching table for pairs touching S1 or T1; identical labels otherwise
        std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> table = {
            {{"S1", "S2"}, {"S1", "S4"}}, {{"S1", "T2"}, {"S1", "T2"}}, {{"T1", "T2"}, {"T1", "T2"}},
            {{"T1", "S2"}, {"T1", "S4"}}, {{"S1", "S3"}, {"S1", "S3"}}, {{"S1", "T3"}, {"S1", "T4"}},
            {{"T1", "T3"}, {"T1", "T4"}}, {{"T1", "S3"}, {"T1", "S3"}}, {{"S1", "S4"}, {"S1", "S2"}},
            {{"S1", "T4"}, {"S1", "T3"}}, {{"T1", "T4"}, {"T1", "T3"}}, {{"T1", "S4"}, {"T1", "S2"}},
        };
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) {
                std::string la = labels[0][a], lb = labels[0][b];
                std::pair<std::string, std::string> img{la, lb};
                if (auto it = table.find({la, lb}); it != table.end()) {
                    img = it->second;
                } else if (auto jt = table.find({lb, la}); jt != table.end()) {
                    img = {jt->second.second, jt->second.first};
                }
                pairing.push_back({a, b, ey.at(img.first), ey.at(img.second)});
            }
    } else {
        // lexicographically first n-subset containing 0 with no dihedral image equal to its complement
        std::vector<int> sel(N, 0);
        std::fill(sel.begin() + 1, sel.begin() + n, 1);
        sel[0] = 1;
        std::vector<int> found;
        std::vector<int> mask(N - 1, 0);
        std::fill(mask.begin(), mask.begin() + (n - 1), 1);
        do {
            std::vector<int> A{0}, Ac;
            for (int i = 0; i < N - 1; ++i) (mask[i] ? A : Ac).push_back(i + 1);
            std::sort(Ac.begin(), Ac.end());
            bool sym = false;
            for (auto& img : dihedral_images(A, N))
                if (img == Ac) sym = true;
            if (!sym) {
                found = A;
                break;
            }
        } while (std::prev_permutation(mask.begin(), mask.end()));
        if (found.empty()) throw InvalidInput("no asymmetric edge partition for this n");
        cp.edges_x = found;
        for (int e = 0; e < N; ++e)
            if (!std::binary_search(found.begin(), found.end(), e)) cp.edges_y.push_back(e);
        std::vector<int> kx(N, 0), ky(N, 0);
        for (int e : cp.edges_x) kx[e] = 1;
        for (int e : cp.edges_y) ky[e] = 1;
        std::map<std::tuple<int, int, int>, std::vector<std::pair<int, int>>> cx, cy;
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                int dd = ((b - a) % N + N) % N;
                dd = std::min(dd, N - dd);
                cx[{dd, kx[a], kx[b]}].push_back({a, b});
                cy[{dd, ky[a], ky[b]}].push_back({a, b});
            }
        for (auto& [key, lx] : cx) {
            auto& ly = cy[key];
            if (ly.size() != lx.size()) throw Error("edge classes do not balance");
            for (std::size_t t = 0; t < lx.size(); ++t)
                pairing.push_back({lx[t].first, lx[t].second, ly[t].first, ly[t].second});
        }
    }
    auto bx = mc_build(g, cp.edges_x, PlaneCurve::mallows_clarke(n, height, cp.edges_x).describe());
    auto by = mc_build(g, cp.edges_y, PlaneCurve::mallows_clarke(n, height, cp.edges_y).describe());
    cp.X = std::move(bx.S);
    cp.Y = std::move(by.S);
    cp.part_x = std::move(bx.part);
    cp.part_y = std::move(by.part);
    cp.pairing = std::move(pairing);
    return cp;
}

// ---- dodecahedron ----

namespace {

struct Dodeca {
    std::vector<Point> verts;
    std::vector<std::array<int, 5>> faces;  // cyclic
    std::vector<Point> centers;
    // flag = face*10 + edge*2 + side; (center, edge midpoint, vertex)
    std::vector<std::array<Point, 3>> flags;
    std::vector<int> rel;  // rel[a*120+b]: image of flag b under the symmetry taking a to flag 0
    std::vector<int> face_dist;

    Dodeca() {
        const double ph = (1 + std::sqrt(5.0)) / 2, ip = 1 / ph;
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) verts.push_back({double(sx), double(sy), double(sz)});
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                verts.push_back({0, s1 * ip, s2 * ph});
                verts.push_back({s1 * ip, s2 * ph, 0});
                verts.push_back({s1 * ph, 0, s2 * ip});
            }
        std::vector<Point> normals;
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                normals.push_back({0, s1 * ph, double(s2)});
                normals.push_back({s1 * ph, double(s2), 0});
                normals.push_back({double(s1), 0, s2 * ph});
            }
        for (const auto& nv : normals) {
            std::vector<std::pair<double, int>> sc;
            for (int v = 0; v < 20; ++v) sc.push_back({-dot(nv, verts[v]), v});
            std::sort(sc.begin(), sc.end());
            std::array<int, 5> f{};
            Point c{0, 0, 0};
            for (int t = 0; t < 5; ++t) {
                f[t] = sc[t].second;
                c = lin(c, 1, verts[f[t]], 0.2);
            }
            // order counterclockwise about the outward normal
            Point u = lin(verts[f[0]], 1, c, -1);
            Point w = cross(nv, u);
            std::sort(f.begin(), f.end(), [&](int a, int b) {
                Point pa = lin(verts[a], 1, c, -1), pb = lin(verts[b], 1, c, -1);
                return std::atan2(dot(pa, w), dot(pa, u)) < std::atan2(dot(pb, w), dot(pb, u));
            });
            faces.push_back(f);
            centers.push_back(c);
        }
        for (int fi = 0; fi < 12; ++fi)
            for (int e = 0; e < 5; ++e)
                for (int s = 0; s < 2; ++s) {
                    const Point& a = verts[faces[fi][e]];
                    const Point& b = verts[faces[fi][(e + 1) % 5]];
                    flags.push_back({centers[fi], lin(a, 0.5, b, 0.5), s == 0 ? a : b});
                }
        // symmetry group acts simply transitively on flags
        auto mat = [&](int a) {
            Eigen::Matrix3d F;
            for (int c = 0; c < 3; ++c)
                for (int r = 0; r < 3; ++r) F(r, c) = flags[a][c][r];
            return F;
        };
        Eigen::Matrix3d F0 = mat(0);
        rel.assign(120 * 120, -1);
        for (int a = 0; a < 120; ++a) {
            Eigen::Matrix3d M = F0 * mat(a).inverse();
            for (int b = 0; b < 120; ++b) {
                std::array<Point, 3> img;
                for (int c = 0; c < 3; ++c) {
                    Eigen::Vector3d x(flags[b][c][0], flags[b][c][1], flags[b][c][2]);
                    Eigen::Vector3d y = M * x;
                    img[c] = {y[0], y[1], y[2]};
                }
                for (int t = 0; t < 120; ++t) {
                    double err = 0;
                    for (int c = 0; c < 3; ++c) err += norm3(img[c], flags[t][c]);
                    if (err < 1e-9) {
                        rel[a * 120 + b] = t;
                        break;
                    }
                }
                if (rel[a * 120 + b] < 0) throw Error("dodecahedron symmetry table incomplete");
            }
        }
        // face adjacency distances
        face_dist.assign(144, -1);
        auto adjacent = [&](int f, int g) {
            int common = 0;
            for (int x : faces[f])
                for (int y : faces[g]) common += x == y;
            return common == 2;
        };
        for (int s = 0; s < 12; ++s) {
            std::vector<int> q{s};
            face_dist[s * 12 + s] = 0;
            for (std::size_t h = 0; h < q.size(); ++h)
                for (int g = 0; g < 12; ++g)
                    if (face_dist[s * 12 + g] < 0 && adjacent(q[h], g)) {
                        face_dist[s * 12 + g] = face_dist[s * 12 + q[h]] + 1;
                        q.push_back(g);
                    }
        }
    }

    std::vector<int> face_perm(int a) const {
        std::vector<int> p(12);
        for (int f = 0; f < 12; ++f) p[f] = rel[a * 120 + f * 10] / 10;
        return p;
    }
};

const Dodeca& dodeca() {
    static const Dodeca D;
    return D;
}

// barycentric centroids of the k² subtriangles
std::vector<std::array<double, 3>> tri_grid(int k) {
    std::vector<std::array<double, 3>> out;
    for (int a = 0; a < k; ++a)
        for (int b = 0; a + b < k; ++b) {
            int c = k - 1 - a - b;
            out.push_back({(a + 1.0 / 3) / k, (b + 1.0 / 3) / k, (c + 1.0 / 3) / k});
        }
    for (int a = 0; a + 1 < k; ++a)
        for (int b = 0; a + b + 1 < k; ++b) {
            int c = k - 2 - a - b;
            out.push_back({(a + 2.0 / 3) / k, (b + 2.0 / 3) / k, (c + 2.0 / 3) / k});
        }
    return out;
}

}  // namespace

SurfacePair dodecahedron_bump_pair(double height, std::size_t m) {
    if (!(height >= 0) || !std::isfinite(height)) throw InvalidInput("invalid pyramid height");
    int k = int(std::lround(std::sqrt(double(m) / 120)));
    if (k < 1 || std::size_t(120 * k * k) != m)
        throw InvalidInput("sample count must be 120*k^2");
    const Dodeca& D = dodeca();
    auto grid = tri_grid(k);

    // first 6-face set with no symmetry onto its complement
    std::vector<int> A;
    {
        std::vector<int> mask(12, 0);
        std::fill(mask.begin(), mask.begin() + 6, 1);
        do {
            std::vector<int> S, Sc;
            for (int f = 0; f < 12; ++f) (mask[f] ? S : Sc).push_back(f);
            bool sym = false;
            for (int a = 0; a < 120 && !sym; ++a) {
                auto p = D.face_perm(a);
                std::vector<int> img;
                for (int f : S) img.push_back(p[f]);
                std::sort(img.begin(), img.end());
                sym = img == Sc;
            }
            if (!sym) {
                A = S;
                break;
            }
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    if (A.empty()) throw Error("no asymmetric face partition");

    auto apex = [&](int f, int kind) {
        const Point& c = D.centers[f];
        if (kind == 0) return c;
        double r = std::sqrt(dot(c, c));
        return lin(c, 1, c, height / r);
    };
    auto sample = [&](int flag, int i, int kind) {
        const auto& F = D.flags[flag];
        const auto& w = grid[i];
        return lin3(apex(flag / 10, kind), w[0], F[1], w[1], F[2], w[2]);
    };
    auto area = [&](int kind) {
        Point P = apex(0, kind);
        Point u = lin(D.flags[0][1], 1, P, -1), v = lin(D.flags[0][2], 1, P, -1);
        Point c = cross(u, v);
        return 0.5 * std::sqrt(dot(c, c));
    };
    const double a0 = area(0), a1 = area(1);
    const double total = 60 * (a0 + a1);  // six faces of each kind, ten triangles each
    const int g = int(grid.size());

    auto build = [&](const std::vector<int>& kinds, std::vector<int>& part) {
        SampledSpace S;
        S.dim = 3;
        std::vector<std::array<int, 3>> id;  // flag, index, kind
        for (int fl = 0; fl < 120; ++fl)
            for (int i = 0; i < g; ++i) {
                int kind = kinds[fl / 10];
                id.push_back({fl, i, kind});
                S.points.push_back(sample(fl, i, kind));
                S.weights.push_back((kind ? a1 : a0) / g / total);
                part.push_back(fl / 10);
            }
        const std::size_t n = id.size();
        S.dist.assign(n * n, 0.0);
        std::map<std::tuple<int, int, int, int, int>, double> cache;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (a == b) continue;
                const auto& P = id[a];
                const auto& Q = id[b];
                auto k1 = std::make_tuple(D.rel[P[0] * 120 + Q[0]], P[1], Q[1], P[2], Q[2]);
                auto k2 = std::make_tuple(D.rel[Q[0] * 120 + P[0]], Q[1], P[1], Q[2], P[2]);
                auto key = std::min(k1, k2);
                auto it = cache.find(key);
                if (it == cache.end()) {
                    auto [fb, i1, i2, ka, kb] = key;
                    it = cache.emplace(key, norm3(sample(0, i1, ka), sample(fb, i2, kb))).first;
                }
                S.dist[a * n + b] = it->second;
            }
        return S;
    };

    SurfacePair sp;
    sp.faces_x = A;
    std::vector<int> kx(12, 0), ky(12, 1);
    for (int f : A) {
        kx[f] = 1;
        ky[f] = 0;
    }
    sp.X = build(kx, sp.part_x);
    sp.Y = build(ky, sp.part_y);
    std::ostringstream pr;
    pr << "dodecahedron pyramids h=" << height << " faces";
    for (int f : A) pr << ' ' << f;
    sp.X.provenance = pr.str();
    sp.Y.provenance = pr.str() + " (complement)";

    std::map<std::tuple<int, int, int>, std::vector<std::pair<int, int>>> cx, cy;
    for (int a = 0; a < 12; ++a)
        for (int b = 0; b < 12; ++b) {
            int dd = D.face_dist[a * 12 + b];
            cx[{dd, kx[a], kx[b]}].push_back({a, b});
            cy[{dd, ky[a], ky[b]}].push_back({a, b});
        }
    for (auto& [key, lx] : cx) {
        auto& ly = cy[key];
        if (ly.size() != lx.size()) throw Error("face classes do not balance");
        for (std::size_t t = 0; t < lx.size(); ++t)
            sp.pairing.push_back({lx[t].first, lx[t].second, ly[t].first, ly[t].second});
    }
    return sp;
}

bool congruent(const SampledSpace& X, const SampledSpace& Y, double tol) {
    if (X.size() != Y.size()) return false;
    double old = float_tolerance();
    set_float_tolerance(tol);
    bool res;
    try {
        res = find_isometry(X.space(), Y.space()).has_value();
    } catch (...) {
        set_float_tolerance(old);
        throw;
    }
    set_float_tolerance(old);
    return res;
}

// ---- empirical distributions ----

std::vector<std::pair<double, double>> bumpy_circle_mc_cdf(double A, int n, std::size_t pairs,
                                                           std::uint64_t seed,
                                                           const std::vector<double>& grid) {
    if (!(A >= 0 && A < 1) || n < 1) throw InvalidInput("bumpy circle needs 0 <= A < 1, n >= 1");
    if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidInput("grid must be sorted");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<std::size_t> cnt(grid.size() + 1, 0);
    for (std::size_t t = 0; t < pairs; ++t) {
        double s1 = bumpy_inverse(A, n, U(rng)), s2 = bumpy_inverse(A, n, U(rng));
        double d = 2 * std::fabs(std::sin((s1 - s2) / 2));
        cnt[std::lower_bound(grid.begin(), grid.end(), d) - grid.begin()]++;
    }
    std::vector<std::pair<double, double>> out;
    std::size_t acc = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        acc += cnt[k];
        out.emplace_back(grid[k], double(acc) / double(pairs));
    }
    return out;
}

std::vector<std::pair<double, double>> empirical_global_cdf(const SampledSpace& S,
                                                            const std::vector<double>& grid) {
    if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidInput("grid must be sorted");
    const std::size_t n = S.size();
    std::vector<double> mass(grid.size() + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double d = i == j ? 0.0 : S.distance(i, j);
            mass[std::lower_bound(grid.begin(), grid.end(), d) - grid.begin()] += S.weights[i] * S.weights[j];
        }
    std::vector<std::pair<double, double>> out;
    double acc = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        acc += mass[k];
        out.emplace_back(grid[k], acc);
    }
    return out;
}

std::vector<std::pair<double, double>> empirical_local_cdf(const SampledSpace& S, std::size_t i,
                                                           const std::vector<double>& grid) {
    if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidInput("grid must be sorted");
    if (i >= S.size()) throw InvalidInput("index out of range");
    std::vector<double> mass(grid.size() + 1, 0.0);
    for (std::size_t j = 0; j < S.size(); ++j) {
        double d = i == j ? 0.0 : S.distance(i, j);
        mass[std::lower_bound(grid.begin(), grid.end(), d) - grid.begin()] += S.weights[j];
    }
    std::vector<std::pair<double, double>> out;
    double acc = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        acc += mass[k];
        out.emplace_back(grid[k], acc);
    }
    return out;
}

TaylorFit fit_taylor_coeffs(const std::vector<std::pair<double, double>>& samples,
                            const std::vector<int>& degrees, double r_max) {
    if (degrees.size() < 2) throw InvalidInput("at least two degrees required");
    std::vector<std::pair<double, double>> use;
    for (const auto& s : samples)
        if (r_max <= 0 || s.first <= r_max) use.push_back(s);
    const std::size_t n = use.size(), k = degrees.size();
    if (n < k + 1) throw InvalidInput("ill-conditioned window: too few samples");
    Eigen::MatrixXd M(n, k);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = use[i].second;
        for (std::size_t j = 0; j < k; ++j) M(i, j) = std::pow(use[i].first, degrees[j]);
    }
    // column scaling keeps the conditioning estimate meaningful
    Eigen::VectorXd scale = M.colwise().norm();
    for (std::size_t j = 0; j < k; ++j) {
        if (!(scale[j] > 0)) throw InvalidInput("ill-conditioned window: zero column");
        M.col(j) /= scale[j];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv[k - 1] <= 0 || sv[0] / sv[k - 1] > 1e10)
        throw InvalidInput("ill-conditioned window");
    Eigen::VectorXd c = svd.solve(y);
    TaylorFit fit;
    fit.degrees = degrees;
    for (std::size_t j = 0; j < k; ++j) fit.coeffs.push_back(c[j] / scale[j]);
    fit.residual = std::sqrt((M * c - y).squaredNorm() / double(n));
    return fit;
}

}  // namespace gromon
