#pragma once

#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "gromon/core.hpp"

namespace gromon {

// Right-continuous step CDF: F(r) = values[k] on [xs[k], xs[k+1]), 0 before xs[0].
template <class T>
struct StepCDF {
    std::vector<T> xs;
    std::vector<T> values;

    // weighted atoms (location, mass); masses must sum to 1
    static StepCDF from_atoms(std::vector<std::pair<T, T>> atoms);
    static StepCDF dirac(const T& x);

    T operator()(const T& r) const;
    void validate() const;
    bool operator==(const StepCDF& o) const;
    void write_csv(std::ostream& os) const;
};

template <class T>
T quantile(const StepCDF<T>& F, const T& u);

template <class T>
T w1_cdf(const StepCDF<T>& F, const StepCDF<T>& G);

// (∫₀¹ |F⁻¹ − G⁻¹|^p du), returned as a p-power value
template <class T>
PowerValue<T> wp_quantile(const StepCDF<T>& F, const StepCDF<T>& G, PExponent p);

template <class T>
struct CostMatrix {
    std::size_t nx = 0, ny = 0;
    std::vector<T> c;
    const T& operator()(std::size_t i, std::size_t j) const { return c[i * ny + j]; }
    T& operator()(std::size_t i, std::size_t j) { return c[i * ny + j]; }
};

template <class T>
struct AssignmentResult {
    std::optional<MeasurePreservingMap> map;  // empty when infeasible
    T cost{};
    bool infinite() const { return !map.has_value(); }
};

// min over measure-preserving maps of Σ_x w_X(x) C(x, φ(x))
template <class T>
AssignmentResult<T> solve_assignment(const CostMatrix<T>& C, const std::vector<T>& wx,
                                     const std::vector<T>& wy, std::size_t size_guard = 12);

template <class T>
std::pair<Coupling<T>, T> solve_kantorovich(const CostMatrix<T>& C, const std::vector<T>& wx,
                                            const std::vector<T>& wy);

// square assignment, minimizing Σ C(i, perm[i]); exposed for tests and the heuristic
template <class T>
std::vector<int> hungarian(const CostMatrix<T>& C);

}  // namespace gromon
