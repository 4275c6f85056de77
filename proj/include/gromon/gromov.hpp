#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gromon/core.hpp"
#include "gromon/transport.hpp"

namespace gromon {

template <class T>
struct GMResult {
    PowerValue<T> value;
    std::optional<MeasurePreservingMap> witness;
    std::string method;
};

struct GMGuards {
    std::size_t uniform = 8;
    std::size_t general = 12;
};

template <class T>
GMResult<T> gm_exact(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, PExponent p,
                     GMGuards guards = {});

template <class T>
GMResult<T> gm_heuristic(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, PExponent p,
                         std::uint64_t seed, int restarts = 10);

struct SuiteReport {
    std::size_t checks = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// nonnegativity, identity of indiscernibles, triangle inequality, finite-space symmetry;
// with p = 1 also the bound sandwich L_h^U ≤ L_h ≤ d_GM and L_H ≤ d_GM
template <class T>
SuiteReport quasi_metric_suite(const std::vector<FiniteMMSpace<T>>& spaces, PExponent p);

template <class T>
struct MassSplitting {
    FiniteMMSpace<T> space;           // pseudo-metric, pulled back from X
    MeasurePreservingMap projection;  // onto X
    std::vector<std::pair<int, int>> support;  // (x, y) per point of the space
};

// returns the splitting together with the projection onto Y
template <class T>
std::pair<MassSplitting<T>, MeasurePreservingMap> mass_splitting_from_coupling(
    const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, const Coupling<T>& mu);

// pairing entries (i, j, k, l): block pair (i,j) of X matches block pair (k,l) of Y
using BlockPairing = std::vector<std::array<int, 4>>;

template <class T>
bool partition_equality_check(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                              const std::vector<int>& part_x, const std::vector<int>& part_y,
                              const BlockPairing& pairing);

// weighted multiset of cross distances between two blocks, merged by distance
template <class T>
std::vector<std::pair<T, T>> cross_distance_measure(const FiniteMMSpace<T>& X,
                                                    const std::vector<int>& part, int i, int j);

// distance- and weight-preserving bijection, if one exists
template <class T>
std::optional<MeasurePreservingMap> find_isometry(const FiniteMMSpace<T>& X,
                                                  const FiniteMMSpace<T>& Y);

}  // namespace gromon
