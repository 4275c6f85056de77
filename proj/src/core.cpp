#include "gromon/core.hpp"

#include <algorithm>
#include <cstdio>
#include <thread>

namespace gromon {

namespace {
std::atomic<double> g_tol{1e-9};
std::atomic<int> g_threads{1};
}  // namespace

void set_float_tolerance(double tol) {
    if (!(tol >= 0)) throw InvalidInput("tolerance must be nonnegative");
    g_tol = tol;
}
double float_tolerance() { return g_tol; }

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ') s.push_back(c);
    if (s.empty()) throw InvalidInput("empty rational");
    try {
        if (s.find_first_of("eE") != std::string::npos) {
            double v = std::stod(s);
            if (!std::isfinite(v)) throw InvalidInput("non-finite number: " + raw);
            return Rational(v);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            bool neg = s[0] == '-';
            std::string body = s.substr(neg || s[0] == '+' ? 1 : 0);
            dot = body.find('.');
            std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
            if (ip.empty()) ip = "0";
            if (fp.empty()) fp = "0";
            for (char c : ip + fp)
                if (c < '0' || c > '9') throw InvalidInput("bad number: " + raw);
            mpz_class num(ip + fp, 10), den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
            Rational q(num, den);
            q.canonicalize();
            return neg ? Rational(-q) : q;
        }
        Rational q;
        if (q.set_str(s, 10) != 0) throw InvalidInput("bad rational: " + raw);
        if (sgn(q.get_den()) == 0) throw InvalidInput("zero denominator: " + raw);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw InvalidInput("bad number: " + raw);
    }
}

std::string to_string(const Rational& q) {
    Rational c(q);
    c.canonicalize();
    return c.get_str();
}

std::string to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::optional<Rational> exact_root(const Rational& q, int p) {
    if (sgn(q) < 0 || p < 1) return std::nullopt;
    mpz_class a, b;
    if (!mpz_root(a.get_mpz_t(), q.get_num_mpz_t(), p)) return std::nullopt;
    if (!mpz_root(b.get_mpz_t(), q.get_den_mpz_t(), p)) return std::nullopt;
    Rational r(a, b);
    r.canonicalize();
    return r;
}

PExponent PExponent::finite(int p) {
    if (p < 1) throw InvalidInput("p must be >= 1");
    return PExponent{p, false};
}

PExponent PExponent::parse(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return inf();
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw InvalidInput("p must be an integer >= 1 or inf");
        return finite(v);
    } catch (const std::logic_error&) {
        throw InvalidInput("p must be an integer >= 1 or inf");
    }
}

std::string PExponent::str() const { return infinite ? "inf" : std::to_string(p); }

template <class T>
double PowerValue<T>::approx() const {
    if (infinite) return std::numeric_limits<double>::infinity();
    double b = Num<T>::to_double(power);
    if (p.infinite || p.p == 1) return b;
    return std::pow(b, 1.0 / p.p);
}

template <class T>
std::optional<T> PowerValue<T>::exact() const {
    if (infinite) return std::nullopt;
    if (p.infinite || p.p == 1) return power;
    if constexpr (Num<T>::exact) {
        return exact_root(power, p.p);
    } else {
        return std::pow(power, 1.0 / p.p);
    }
}

template <class T>
std::string PowerValue<T>::str() const {
    if (infinite) return "inf";
    auto e = exact();
    if (e) return to_string(*e);
    return "(" + to_string(power) + ")^(1/" + std::to_string(p.p) + ")";
}

template struct PowerValue<Rational>;
template struct PowerValue<double>;

// ---- FiniteMMSpace ----

template <class T>
FiniteMMSpace<T>::FiniteMMSpace(std::size_t n, std::vector<T> dist, std::vector<T> weights,
                                bool pseudo, bool check_triangle)
    : n_(n), dist_(std::move(dist)), w_(std::move(weights)), pseudo_(pseudo) {
    using N = Num<T>;
    if (n_ == 0) throw InvalidInput("space must have at least one point");
    if (dist_.size() != n_ * n_) throw InvalidInput("distance matrix has wrong size");
    if (w_.size() != n_) throw InvalidInput("weight vector has wrong size");
    T total = N::zero();
    for (std::size_t i = 0; i < n_; ++i) {
        if (!(w_[i] > N::zero()) || N::is_zero(w_[i]))
            throw InvalidInput("weights must be strictly positive");
        total += w_[i];
    }
    if (!N::eq(total, N::one())) throw InvalidInput("weights must sum to 1");
    for (std::size_t i = 0; i < n_; ++i) {
        if (!N::is_zero(d(i, i))) throw InvalidInput("diagonal must be zero");
        for (std::size_t j = 0; j < n_; ++j) {
            if (d(i, j) < N::zero()) throw InvalidInput("distances must be nonnegative");
            if (!(d(i, j) == d(j, i))) throw InvalidInput("distance matrix must be symmetric");
            if (!pseudo_ && i != j && N::is_zero(d(i, j)))
                throw InvalidInput("zero distance between distinct points (set pseudo)");
        }
    }
    if (check_triangle) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k)
                    if (!N::leq(d(i, k), d(i, j) + d(j, k)))
                        throw InvalidInput("triangle inequality violated");
    }
}

template <class T>
T FiniteMMSpace<T>::diameter() const {
    T m = Num<T>::zero();
    for (const auto& v : dist_)
        if (v > m) m = v;
    return m;
}

template <class T>
FiniteMMSpace<T> FiniteMMSpace<T>::uniform(std::size_t n, std::vector<T> dist, bool pseudo,
                                           bool check_triangle) {
    std::vector<T> w(n);
    if constexpr (Num<T>::exact) {
        for (auto& x : w) x = Rational(1, long(n));
        return FiniteMMSpace(n, std::move(dist), std::move(w), pseudo, check_triangle);
    } else {
        for (auto& x : w) x = 1.0 / double(n);
        return FiniteMMSpace(n, std::move(dist), std::move(w), pseudo, check_triangle);
    }
}

template <class T>
FiniteMMSpace<T> FiniteMMSpace<T>::permuted(const std::vector<int>& perm) const {
    if (perm.size() != n_) throw InvalidInput("permutation has wrong size");
    std::vector<T> dd(n_ * n_), ww(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        ww[i] = w_[perm[i]];
        for (std::size_t j = 0; j < n_; ++j) dd[i * n_ + j] = d(perm[i], perm[j]);
    }
    return FiniteMMSpace(n_, std::move(dd), std::move(ww), pseudo_, false);
}

template class FiniteMMSpace<Rational>;
template class FiniteMMSpace<double>;

// ---- maps ----

template <class T>
bool is_coupling(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, const Coupling<T>& mu) {
    if (mu.nx != X.n() || mu.ny != Y.n() || mu.plan.size() != mu.nx * mu.ny) return false;
    for (const auto& v : mu.plan)
        if (v < Num<T>::zero() && !Num<T>::is_zero(v)) return false;
    for (std::size_t i = 0; i < mu.nx; ++i) {
        T s = Num<T>::zero();
        for (std::size_t j = 0; j < mu.ny; ++j) s += mu.at(i, j);
        if (!Num<T>::eq(s, X.w(i))) return false;
    }
    for (std::size_t j = 0; j < mu.ny; ++j) {
        T s = Num<T>::zero();
        for (std::size_t i = 0; i < mu.nx; ++i) s += mu.at(i, j);
        if (!Num<T>::eq(s, Y.w(j))) return false;
    }
    return true;
}

template <class T>
T distortion(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y, std::size_t x, std::size_t y,
             std::size_t xp, std::size_t yp) {
    if (x >= X.n() || xp >= X.n() || y >= Y.n() || yp >= Y.n())
        throw InvalidInput("index out of range");
    return Num<T>::abs(T(X.d(x, xp) - Y.d(y, yp)));
}

template <class T>
bool pushforward_check(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                       const std::vector<int>& a) {
    if (a.size() != X.n()) return false;
    std::vector<T> fib(Y.n(), Num<T>::zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0 || std::size_t(a[i]) >= Y.n()) return false;
        fib[a[i]] += X.w(i);
    }
    for (std::size_t j = 0; j < Y.n(); ++j)
        if (!Num<T>::eq(fib[j], Y.w(j))) return false;
    return true;
}

template <class T>
PowerValue<T> map_cost(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                       const MeasurePreservingMap& phi, PExponent p) {
    if (!pushforward_check(X, Y, phi.a)) throw InvalidInput("map is not measure-preserving");
    const std::size_t n = X.n();
    T acc = Num<T>::zero();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            T g = Num<T>::abs(T(X.d(i, j) - Y.d(phi.a[i], phi.a[j])));
            if (p.infinite) {
                if (g > acc) acc = g;
            } else {
                acc += X.w(i) * X.w(j) * ipow(g, p.p);
            }
        }
    }
    return PowerValue<T>::from_power(acc, p);
}

template <class T>
Coupling<T> coupling_from_map(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                              const MeasurePreservingMap& phi) {
    if (!pushforward_check(X, Y, phi.a)) throw InvalidInput("map is not measure-preserving");
    Coupling<T> c;
    c.nx = X.n();
    c.ny = Y.n();
    c.plan.assign(c.nx * c.ny, Num<T>::zero());
    for (std::size_t i = 0; i < c.nx; ++i) c.at(i, phi.a[i]) = X.w(i);
    return c;
}

template <class T>
bool is_isomorphism(const FiniteMMSpace<T>& X, const FiniteMMSpace<T>& Y,
                    const MeasurePreservingMap& phi) {
    if (X.n() != Y.n() || phi.size() != X.n()) return false;
    std::vector<char> hit(Y.n(), 0);
    for (std::size_t i = 0; i < X.n(); ++i) {
        int y = phi.a[i];
        if (y < 0 || std::size_t(y) >= Y.n() || hit[y]) return false;
        hit[y] = 1;
        if (!Num<T>::eq(X.w(i), Y.w(y))) return false;
    }
    for (std::size_t i = 0; i < X.n(); ++i)
        for (std::size_t j = 0; j < X.n(); ++j)
            if (!Num<T>::eq(X.d(i, j), Y.d(phi.a[i], phi.a[j]))) return false;
    return true;
}

#define GROMON_INST(T)                                                                           \
    template bool is_coupling(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&,                  \
                              const Coupling<T>&);                                               \
    template T distortion(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&, std::size_t,         \
                          std::size_t, std::size_t, std::size_t);                                \
    template bool pushforward_check(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&,            \
                                    const std::vector<int>&);                                    \
    template PowerValue<T> map_cost(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&,            \
                                    const MeasurePreservingMap&, PExponent);                     \
    template Coupling<T> coupling_from_map(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&,     \
                                           const MeasurePreservingMap&);                         \
    template bool is_isomorphism(const FiniteMMSpace<T>&, const FiniteMMSpace<T>&,               \
                                 const MeasurePreservingMap&);
GROMON_INST(Rational)
GROMON_INST(double)
#undef GROMON_INST

// ---- threads ----

void set_threads(int n) { g_threads = std::max(1, n); }
int threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    int t = std::min<std::size_t>(threads(), n);
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int k = 0; k < t; ++k)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) f(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace gromon
