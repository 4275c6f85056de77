#pragma once

#include <string>
#include <vector>

#include "gromon/core.hpp"
#include "gromon/transport.hpp"

namespace gromon {

template <class T>
StepCDF<T> global_distribution(const FiniteMMSpace<T>& X);

template <class T>
std::vector<StepCDF<T>> local_distribution(const FiniteMMSpace<T>& X);

// c_{X,Y}(x,y) = ∫ |h_X(x,t) − h_Y(y,t)| dt
template <class T>
CostMatrix<T> cost_function(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y);

template <class T>
PowerValue<T> lower_bound_global(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                                 PExponent p);

enum class MapClass { all, bijective };
MapClass parse_map_class(const std::string& s);

template <class T>
AssignmentResult<T> lower_bound_local_monge(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                                            MapClass cls = MapClass::all,
                                            std::size_t size_guard = 12);

template <class T>
T lower_bound_local_kantorovich(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y);

}  // namespace gromon
