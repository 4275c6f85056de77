#pragma once

#include <gmpxx.h>

#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gromon {

using Rational = mpq_class;

// canonical a/b
inline Rational rat(long a, long b = 1) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

// ---- errors ----

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidInput : Error {
    using Error::Error;
};
struct SizeLimitExceeded : Error {
    using Error::Error;
};
struct DistinctnessViolated : Error {
    using Error::Error;
};
struct InconsistentMultiset : Error {
    using Error::Error;
};
struct NotATree : Error {
    using Error::Error;
};

// ---- scalar plumbing ----

void set_float_tolerance(double tol);
double float_tolerance();

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
std::string to_string(double x);

template <class T>
struct Num;

template <>
struct Num<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "rational";
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long v) { return Rational(v); }
    static Rational from_ratio(long a, long b) {
        Rational q(a, b);
        q.canonicalize();
        return q;
    }
    static bool eq(const Rational& a, const Rational& b) { return a == b; }
    static bool is_zero(const Rational& a) { return sgn(a) == 0; }
    static bool leq(const Rational& a, const Rational& b) { return a <= b; }
    static Rational abs(const Rational& a) { return ::abs(a); }
    static double to_double(const Rational& a) { return a.get_d(); }
};

template <>
struct Num<double> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long v) { return double(v); }
    static double from_ratio(long a, long b) { return double(a) / double(b); }
    static bool eq(double a, double b) { return std::fabs(a - b) <= float_tolerance(); }
    static bool is_zero(double a) { return std::fabs(a) <= float_tolerance(); }
    static bool leq(double a, double b) { return a <= b + float_tolerance(); }
    static double abs(double a) { return std::fabs(a); }
    static double to_double(double a) { return a; }
};

template <class T>
T ipow(const T& base, int p) {
    T r = Num<T>::one();
    T b = base;
    while (p > 0) {
        if (p & 1) r *= b;
        p >>= 1;
        if (p) b *= b;
    }
    return r;
}

// exact p-th root of a nonnegative rational, if it is one
std::optional<Rational> exact_root(const Rational& q, int p);

// ---- exponents and p-power values ----

struct PExponent {
    int p = 1;
    bool infinite = false;
    static PExponent finite(int p);
    static PExponent inf() { return PExponent{0, true}; }
    static PExponent parse(const std::string& s);
    std::string str() const;
    bool operator==(const PExponent& o) const { return infinite == o.infinite && (infinite || p == o.p); }
};

// A nonnegative cost c stored as c^p (exact when T is rational), or c itself for p = inf.
// Infinite means "no admissible map".
template <class T>
struct PowerValue {
    T power{};  // c^p, or c when p infinite
    PExponent p;
    bool infinite = false;

    static PowerValue inf_value(PExponent p) {
        PowerValue v;
        v.p = p;
        v.infinite = true;
        return v;
    }
    static PowerValue from_power(T pw, PExponent p) {
        PowerValue v;
        v.power = std::move(pw);
        v.p = p;
        return v;
    }
    static PowerValue from_value(const T& c, PExponent p) {
        return from_power(p.infinite ? c : ipow(c, p.p), p);
    }

    double approx() const;
    std::string str() const;
    bool is_zero() const { return !infinite && Num<T>::is_zero(power); }
    // exact value when expressible in T
    std::optional<T> exact() const;

    bool operator<(const PowerValue& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return power < o.power;
    }
    bool same(const PowerValue& o) const {
        if (infinite || o.infinite) return infinite == o.infinite;
        return Num<T>::eq(power, o.power);
    }
};

// ---- spaces, maps, couplings ----

template <class T>
class FiniteMMSpace {
public:
    FiniteMMSpace() = default;
    FiniteMMSpace(std::size_t n, std::vector<T> dist, std::vector<T> weights, bool pseudo = false,
                  bool check_triangle = true);

    std::size_t n() const { return n_; }
    const T& d(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    const T& w(std::size_t i) const { return w_[i]; }
    const std::vector<T>& weights() const { return w_; }
    const std::vector<T>& dist() const { return dist_; }
    bool pseudo() const { return pseudo_; }
    T diameter() const;

    // uniform-weight metric space from a distance matrix
    static FiniteMMSpace uniform(std::size_t n, std::vector<T> dist, bool pseudo = false,
                                 bool check_triangle = true);
    // relabel: point i of result is point perm[i] of this
    FiniteMMSpace permuted(const std::vector<int>& perm) const;

private:
    std::size_t n_ = 0;
    std::vector<T> dist_;
    std::vector<T> w_;
    bool pseudo_ = false;
};

using RSpace = FiniteMMSpace<Rational>;
using FSpace = FiniteMMSpace<double>;

struct MeasurePreservingMap {
    std::vector<int> a;
    int operator()(std::size_t i) const { return a[i]; }
    std::size_t size() const { return a.size(); }
};

template <class T>
struct Coupling {
    std::size_t nx = 0, ny = 0;
    std::vector<T> plan;  // row-major nx*ny
    const T& at(std::size_t i, std::size_t j) const { return plan[i * ny + j]; }
    T& at(std::size_t i, std::size_t j) { return plan[i * ny + j]; }
};

template <class T>
bool is_coupling(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, const Coupling<T>& mu);

template <class T>
T distortion(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, std::size_t x, std::size_t y,
             std::size_t xp, std::size_t yp);

template <class T>
bool pushforward_check(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                       const std::vector<int>& assignment);

template <class T>
PowerValue<T> map_cost(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                       const MeasurePreservingMap& phi, PExponent p);

template <class T>
Coupling<T> coupling_from_map(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                              const MeasurePreservingMap& phi);

template <class T>
bool is_isomorphism(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                    const MeasurePreservingMap& phi);

// ---- threading ----

void set_threads(int n);
int threads();
// runs f(i) for i in [0,n); results must be written to disjoint slots by the caller
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace gromon
