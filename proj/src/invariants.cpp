#include "gromon/invariants.hpp"

namespace gromon {

template <class T>
StepCDF<T> global_distribution(const FiniteMMSpace<T>& X) {
    std::vector<std::pair<T, T>> atoms;
    atoms.reserve(X.n() * X.n());
    for (std::size_t i = 0; i < X.n(); ++i)
        for (std::size_t j = 0; j < X.n(); ++j) atoms.emplace_back(X.d(i, j), X.w(i) * X.w(j));
    return StepCDF<T>::from_atoms(std::move(atoms));
}

template <class T>
std::vector<StepCDF<T>> local_distribution(const FiniteMMSpace<T>& X) {
    std::vector<StepCDF<T>> out(X.n());
    parallel_for(X.n(), [&](std::size_t i) {
        std::vector<std::pair<T, T>> atoms;
        atoms.reserve(X.n());
        for (std::size_t j = 0; j < X.n(); ++j) atoms.emplace_back(X.d(i, j), X.w(j));
        out[i] = StepCDF<T>::from_atoms(std::move(atoms));
    });
    return out;
}

template <class T>
CostMatrix<T> cost_function(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y) {
    auto hx = local_distribution(X);
    auto hy = local_distribution(Y);
    CostMatrix<T> C;
    C.nx = X.n();
    C.ny = Y.n();
    C.c.resize(C.nx * C.ny);
    parallel_for(C.nx, [&](std::size_t i) {
        for (std::size_t j = 0; j < C.ny; ++j) C(i, j) = w1_cdf(hx[i], hy[j]);
    });
    return C;
}

template <class T>
PowerValue<T> lower_bound_global(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                                 PExponent p) {
    if (p.infinite) throw InvalidInput("global bound needs finite p");
    auto H = global_distribution(X), G = global_distribution(Y);
    if (p.p == 1) return PowerValue<T>::from_power(w1_cdf(H, G), p);
    return wp_quantile(H, G, p);
}

MapClass parse_map_class(const std::string& s) {
    if (s == "all") return MapClass::all;
    if (s == "bijective") return MapClass::bijective;
    throw InvalidInput("map class must be all or bijective");
}

template <class T>
AssignmentResult<T> lower_bound_local_monge(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                                            MapClass cls, std::size_t size_guard) {
    if (cls == MapClass::bijective && X.n() != Y.n()) return {};
    return solve_assignment(cost_function(X, Y), X.weights(), Y.weights(), size_guard);
}

template <class T>
T lower_bound_local_kantorovich(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y) {
    return solve_kantorovich(cost_function(X, Y), X.weights(), Y.weights()).second;
}

#define GROMON_INST(T)                                                                         \
    template StepCDF<T> global_distribution(const FiniteMMSpace<T>&);                          \
    template std::vector<StepCDF<T>> local_distribution(const FiniteMMSpace<T>&);              \
    template CostMatrix<T> cost_function(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&);    \
    template PowerValue<T> lower_bound_global(const FiniteMMSpace<T>&,                         \
                                              const FiniteMMSpace<T>&, PExponent);             \
    template AssignmentResult<T> lower_bound_local_monge(                                      \
        const FiniteMMSpace<T>&, const FiniteMMSpace<T>&, MapClass, std::size_t);              \
    template T lower_bound_local_kantorovich(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&);
GROMON_INST(Rational)
GROMON_INST(double)
#undef GROMON_INST

}  // namespace gromon
