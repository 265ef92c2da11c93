#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace compact4 {

// Uniform grid on [a, b] with n subintervals: x_j = a + j*h, h = (b-a)/n.
// Immutable once constructed.
class Grid {
public:
    Grid(double a, double b, int n)
        : a_(a)
        , b_(b)
        , n_(n) {
        if (!(a < b)) throw std::invalid_argument("Grid: requires a < b");
        if (n < 2) throw std::invalid_argument("Grid: requires n >= 2");
    }

    double a() const { return a_; }
    double b() const { return b_; }
    int n() const { return n_; }
    double h() const { return (b_ - a_) / n_; }
    double x(int j) const { return a_ + j * h(); }
    int size() const { return n_ + 1; }  // number of nodes

private:
    double a_;
    double b_;
    int n_;
};

// Nodal values v_0..v_n.
using GridFunction = std::vector<double>;

template <class F>
GridFunction sample(F&& f, const Grid& g) {
    GridFunction v(static_cast<std::size_t>(g.size()));
    for (int j = 0; j <= g.n(); ++j) v[static_cast<std::size_t>(j)] = f(g.x(j));
    return v;
}

// Discrete inner product (u, w)_h = h * sum_{j=0..n} u_j w_j.
// Endpoint values are included.
inline double inner_product(const GridFunction& u, const GridFunction& w, double h) {
    if (u.size() != w.size()) throw std::invalid_argument("inner_product: size mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * w[j];
    return h * s;
}

inline double inner_product(const GridFunction& u, const GridFunction& w, const Grid& g) {
    return inner_product(u, w, g.h());
}

// |v|_h over the index window [lo, hi] (inclusive).
inline double norm_h(const GridFunction& v, double h, int lo, int hi) {
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) {
        const double vj = v[static_cast<std::size_t>(j)];
        s += vj * vj;
    }
    return std::sqrt(h * s);
}

inline double norm_h(const GridFunction& v, double h) {
    return norm_h(v, h, 0, static_cast<int>(v.size()) - 1);
}

inline double norm_h(const GridFunction& v, const Grid& g) { return norm_h(v, g.h()); }

// |v|_inf over the index window [lo, hi] (inclusive).
inline double norm_sup(const GridFunction& v, int lo, int hi) {
    double m = 0.0;
    for (int j = lo; j <= hi; ++j) m = std::max(m, std::abs(v[static_cast<std::size_t>(j)]));
    return m;
}

inline double norm_sup(const GridFunction& v) {
    return norm_sup(v, 0, static_cast<int>(v.size()) - 1);
}

struct NormReport {
    double norm_h = 0.0;
    double norm_sup = 0.0;
};

inline NormReport norms(const GridFunction& v, double h, int lo, int hi) {
    return {norm_h(v, h, lo, hi), norm_sup(v, lo, hi)};
}

inline NormReport norms(const GridFunction& v, double h) {
    return norms(v, h, 0, static_cast<int>(v.size()) - 1);
}

}  // namespace compact4
