#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gromon/core.hpp"
#include "gromon/gromov.hpp"

namespace gromon {

// ---- small exact fixtures ----

RSpace delta_space(std::size_t n);                    // n points, all distances 1, uniform
RSpace two_point_space(const Rational& w0, const Rational& w1);  // distance 1
RSpace line_points(const std::vector<Rational>& xs);  // subset of the real line, uniform
std::pair<RSpace, RSpace> bloom_point_clouds();

// ---- sampled curves and surfaces ----

using Point = std::array<double, 3>;

struct SampledSpace {
    std::vector<Point> points;
    std::vector<double> weights;
    int dim = 2;
    std::string provenance;
    // optional precomputed distances (symmetry-canonical evaluation); row-major
    std::vector<double> dist;

    std::size_t size() const { return points.size(); }
    double distance(std::size_t i, std::size_t j) const;
    FSpace space() const;  // materializes the distance matrix
};

struct PlaneCurve {
    enum class Kind { circle, ellipse, bumpy_circle, polygon, mallows_clarke } kind = Kind::circle;
    double a = 1, b = 1;              // ellipse semi-axes; bumpy amplitude in a
    int n = 0;                        // bumpy frequency; mallows_clarke half edge count
    double height = 0;                // mallows_clarke triangle height
    std::vector<int> triangle_edges;  // mallows_clarke edges carrying a triangle
    std::vector<std::array<double, 2>> vertices;  // polygon

    static PlaneCurve circle() { return {}; }
    static PlaneCurve ellipse(double A, double B);
    static PlaneCurve bumpy_circle(double A, int n);
    static PlaneCurve polygon(std::vector<std::array<double, 2>> v);
    static PlaneCurve mallows_clarke(int n, double height, std::vector<int> triangle_edges);
    std::string describe() const;
};

SampledSpace sample_curve(const PlaneCurve& c, std::size_t m);

// uniform samples on the unit sphere S^d in R^{d+1}, seeded
SampledSpace sample_sphere_surface(int d, std::size_t m, std::uint64_t seed);

// curve pair built on a regular 2n-gon; blocks are the 2n edges
struct CurvePair {
    SampledSpace X, Y;
    std::vector<int> part_x, part_y;  // block (edge) per sample
    BlockPairing pairing;
    std::vector<int> edges_x, edges_y;  // triangle edges
};

double mallows_clarke_default_height(int n);
// n = 4 reproduces the octagon pair with its printed matching table; other n search for a
// triangle edge set with no dihedral symmetry onto its complement
CurvePair mallows_clarke_pair(int n, double height, std::size_t m);
// labels of the octagon edges, X then Y ("S1".."T4")
std::array<std::array<std::string, 8>, 2> octagon_labels();

struct SurfacePair {
    SampledSpace X, Y;
    std::vector<int> part_x, part_y;  // face per sample
    BlockPairing pairing;
    std::vector<int> faces_x;         // faces carrying a pyramid in X (Y uses the complement)
};

// m must be 120·k² (k² samples per fundamental triangle)
SurfacePair dodecahedron_bump_pair(double height, std::size_t m);

// exact congruence decision for sampled sets via distance-preserving bijection search
bool congruent(const SampledSpace& X, const SampledSpace& Y, double tol = 1e-9);

// ---- continuous reference quantities ----

double circle_chordal_cdf(double r);  // (2/π) asin(r/2)
double ellipse_perimeter(double A, double B);
// empirical CDF of chordal distances between independent draws from the bumpy-circle density
std::vector<std::pair<double, double>> bumpy_circle_mc_cdf(double A, int n, std::size_t pairs,
                                                           std::uint64_t seed,
                                                           const std::vector<double>& grid);
// μ⊗μ CDF of sampled distances on a grid of radii
std::vector<std::pair<double, double>> empirical_global_cdf(const SampledSpace& S,
                                                            const std::vector<double>& grid);
// μ(B_r(x_i)) on a grid of radii
std::vector<std::pair<double, double>> empirical_local_cdf(const SampledSpace& S, std::size_t i,
                                                           const std::vector<double>& grid);

struct TaylorFit {
    std::vector<int> degrees;
    std::vector<double> coeffs;
    double residual = 0;  // root-mean-square
};

// least squares Σ c_k r^{d_k} on samples with r ≤ r_max (r_max ≤ 0 keeps all)
TaylorFit fit_taylor_coeffs(const std::vector<std::pair<double, double>>& samples,
                            const std::vector<int>& degrees, double r_max = 0);

}  // namespace gromon
