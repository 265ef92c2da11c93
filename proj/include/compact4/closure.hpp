#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "linear_form.hpp"
#include "operators.hpp"

namespace compact4 {

enum class Side { left, right };

// Boundary values (u^(2), u^(3), u^(4)) recovered at one endpoint.
struct BoundaryTriple {
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;
};

// Values of the equation data at one endpoint.
struct EndpointCoefficients {
    double A = 0.0;
    double Aprime = 0.0;
    double B = 0.0;
    double D = 0.0;
    double H = 0.0;
    double f = 0.0;
};

struct SolvabilityViolation : std::runtime_error {
    SolvabilityViolation(Side s, double q)
        : std::runtime_error(std::string("closure solvability violated at ") +
                             (s == Side::left ? "left" : "right") +
                             " endpoint: |12 -/+ 4Dh + Ah^2| = " + std::to_string(std::abs(q)))
        , side(s)
        , quantity(q) {}
    Side side;
    double quantity;
};

// 12 - 4 D0 h + A0 h^2 at the left endpoint, 12 + 4 D0 h + A0 h^2 at the
// right; the closure system is solvable iff this does not vanish.
inline double solvability_quantity(double A0, double D0, double h, Side side) {
    const double s = (side == Side::left) ? -1.0 : 1.0;
    return 12.0 + s * 4.0 * D0 * h + A0 * h * h;
}

inline void check_solvability(double A0, double D0, double h, Side side) {
    const double q = solvability_quantity(A0, D0, h, side);
    const double scale = 12.0 + std::abs(4.0 * D0 * h) + std::abs(A0 * h * h);
    if (std::abs(q) < 1e-8 * scale) throw SolvabilityViolation(side, q);
}

// The 3x3 endpoint system alpha * (u^(2), u^(3), u^(4))^T = b formed by
//   row 1: the differential equation restricted to the endpoint,
//   row 2: a Simpson integration identity for u^(3),
//   row 3: a Taylor linear-combination identity for u^(4) one node in.
// The right-end matrix mirrors the left one with the sign of the 1/(2h)
// entries flipped.
struct ClosureMatrix {
    std::array<std::array<double, 3>, 3> m{};
};

inline ClosureMatrix closure_matrix(double A0, double D0, double h, Side side) {
    check_solvability(A0, D0, h, side);
    const double s = (side == Side::left) ? 1.0 : -1.0;
    ClosureMatrix a;
    a.m[0] = {A0, D0, 1.0};
    a.m[1] = {0.0, s / (2.0 * h), 1.0 / 6.0};
    a.m[2] = {2.0 / (h * h), s / (2.0 * h), 0.0};
    return a;
}

// Closed-form inverse of the closure matrix.  Left end:
//   (1/q) * [[h^2, -6h^2, 6h^2 - 2 D0 h^3],
//            [-4h,   24h,       2 A0 h^3],
//            [ 12, -24 D0 h + 6 A0 h^2, -6 A0 h^2]],  q = 12 - 4 D0 h + A0 h^2.
// The right end is the same with h -> -h in the odd-order entries,
//   (1/q) * [[h^2, -6h^2, 6h^2 + 2 D0 h^3],
//            [ 4h,  -24h,      -2 A0 h^3],
//            [ 12,  24 D0 h + 6 A0 h^2, -6 A0 h^2]],  q = 12 + 4 D0 h + A0 h^2.
inline ClosureMatrix alpha_inverse(double A0, double D0, double h, Side side) {
    check_solvability(A0, D0, h, side);
    const double q = solvability_quantity(A0, D0, h, side);
    const double s = (side == Side::left) ? 1.0 : -1.0;
    const double h2 = h * h, h3 = h * h * h;
    ClosureMatrix inv;
    inv.m[0] = {h2 / q, -6.0 * h2 / q, (6.0 * h2 - s * 2.0 * D0 * h3) / q};
    inv.m[1] = {-s * 4.0 * h / q, s * 24.0 * h / q, s * 2.0 * A0 * h3 / q};
    inv.m[2] = {12.0 / q, (-s * 24.0 * D0 * h + 6.0 * A0 * h2) / q, -6.0 * A0 * h2 / q};
    return inv;
}

namespace detail {

template <class T>
T stencil_d1(const std::vector<T>& v, int j, double h) {
    return (v[uz(j + 1)] - v[uz(j - 1)]) / (2.0 * h);
}

template <class T>
T stencil_d2(const std::vector<T>& v, int j, double h) {
    return (v[uz(j + 1)] - 2.0 * v[uz(j)] + v[uz(j - 1)]) / (h * h);
}

template <class T>
T stencil_tilde2(const std::vector<T>& u, const std::vector<T>& p, int j, double h) {
    return 2.0 * stencil_d2(u, j, h) - stencil_d1(p, j, h);
}

template <class T>
T stencil_d4(const std::vector<T>& u, const std::vector<T>& p, int j, double h) {
    return (12.0 / (h * h)) * (stencil_d1(p, j, h) - stencil_d2(u, j, h));
}

// delta3 at a node whose neighbours are both interior (j in [2, n-2]).
template <class T>
T stencil_d3(const std::vector<T>& u, const std::vector<T>& p, int j, double h) {
    return 2.0 * stencil_d2(p, j, h) -
           (stencil_tilde2(u, p, j + 1, h) - stencil_tilde2(u, p, j - 1, h)) / (2.0 * h);
}

}  // namespace detail

// Right-hand side of the closure system, assembled from near-boundary values
// of the discrete derivatives of (u, p).  ode_rhs is the first row's right
// side: f_0 - (A'_0 + H_0) u'_0 - B_0 u_0 (the non-homogeneous form of the
// boundary ODE row).  Templated so the same formulas emit assembly rows.
template <class T>
std::array<T, 3> closure_rhs(const std::vector<T>& u, const std::vector<T>& p, double h,
                             Side side, const T& ode_rhs) {
    const int n = static_cast<int>(u.size()) - 1;
    if (n < 4) throw std::invalid_argument("closure_rhs: requires n >= 4");
    std::array<T, 3> b{};
    b[0] = ode_rhs;
    if (side == Side::left) {
        const T t2_1 = detail::stencil_tilde2(u, p, 1, h);
        const T t2_2 = detail::stencil_tilde2(u, p, 2, h);
        const T d4_1 = detail::stencil_d4(u, p, 1, h);
        const T d4_2 = detail::stencil_d4(u, p, 2, h);
        const T d3_2 = detail::stencil_d3(u, p, 2, h);
        b[1] = (1.0 / (2.0 * h)) * d3_2 - (1.0 / 6.0) * (4.0 * d4_1 + d4_2);
        b[2] = d4_1 - (2.0 / (h * h)) * (t2_2 - 2.0 * t2_1) + (1.0 / (2.0 * h)) * d3_2;
    } else {
        const T t2_1 = detail::stencil_tilde2(u, p, n - 1, h);
        const T t2_2 = detail::stencil_tilde2(u, p, n - 2, h);
        const T d4_1 = detail::stencil_d4(u, p, n - 1, h);
        const T d4_2 = detail::stencil_d4(u, p, n - 2, h);
        const T d3_2 = detail::stencil_d3(u, p, n - 2, h);
        b[1] = -((1.0 / (2.0 * h)) * d3_2 + (1.0 / 6.0) * (d4_2 + 4.0 * d4_1));
        b[2] = d4_1 - (2.0 / (h * h)) * (t2_2 - 2.0 * t2_1) - (1.0 / (2.0 * h)) * d3_2;
    }
    return b;
}

namespace detail {

// 3x3 Gaussian elimination with partial pivoting.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a,
                                    std::array<double, 3> b) {
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        if (a[c][c] == 0.0) throw std::runtime_error("closure system: singular 3x3 matrix");
        for (int r = c + 1; r < 3; ++r) {
            const double w = a[r][c] / a[c][c];
            for (int k = c; k < 3; ++k) a[r][k] -= w * a[c][k];
            b[r] -= w * b[c];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < 3; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

}  // namespace detail

// Recovers (u^(2), u^(3), u^(4)) at one endpoint from nodal values of u and
// its Hermitian derivative p, the equation data at that endpoint, and the
// prescribed boundary values u_0 = u[0|n], u'_0 = p[0|n].
inline BoundaryTriple close_boundary(const GridFunction& u, const GridFunction& p, double h,
                                     const EndpointCoefficients& c, Side side) {
    const int n = static_cast<int>(u.size()) - 1;
    const std::size_t end = (side == Side::left) ? 0 : detail::uz(n);
    const double ode_rhs = c.f - (c.Aprime + c.H) * p[end] - c.B * u[end];
    const std::array<double, 3> b = closure_rhs<double>(u, p, h, side, ode_rhs);
    const ClosureMatrix a = closure_matrix(c.A, c.D, h, side);
    const std::array<double, 3> t = detail::solve3(a.m, b);
    return {t[0], t[1], t[2]};
}

// Emits the three closure equations as rows over the unknown vector
// [u_0..u_n, p_0..p_n, d2, d3, d4]: u_j at index j, p_j at (n+1)+j, the
// boundary triple at 2n+2 .. 2n+4.  Row residual is
//   sum(weights * values) + rhs_shift = 0
// when the values satisfy the closure.
inline std::array<StencilRow, 3> emit_closure_rows(const EndpointCoefficients& c, const Grid& g,
                                                   Side side) {
    const int n = g.n();
    const double h = g.h();
    std::vector<LinearForm> u(detail::uz(n + 1)), p(detail::uz(n + 1));
    for (int j = 0; j <= n; ++j) {
        u[detail::uz(j)] = LinearForm::unknown(j);
        p[detail::uz(j)] = LinearForm::unknown(n + 1 + j);
    }
    const int t0 = 2 * n + 2;
    const std::size_t end = (side == Side::left) ? 0 : detail::uz(n);
    const LinearForm ode_rhs =
        LinearForm::constant(c.f) - (c.Aprime + c.H) * p[end] - c.B * u[end];
    const std::array<LinearForm, 3> b = closure_rhs<LinearForm>(u, p, h, side, ode_rhs);
    const ClosureMatrix a = closure_matrix(c.A, c.D, h, side);
    std::array<StencilRow, 3> rows;
    for (int r = 0; r < 3; ++r) {
        LinearForm row;
        for (int k = 0; k < 3; ++k) row += a.m[detail::uz(r)][detail::uz(k)] * LinearForm::unknown(t0 + k);
        row -= b[detail::uz(r)];
        rows[detail::uz(r)] = to_stencil_row(row);
    }
    return rows;
}

}  // namespace compact4
