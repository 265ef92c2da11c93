#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "linear_form.hpp"

namespace compact4 {

// Values attached to the two boundary slots (index 0 and n) of a derivative
// grid function.
struct EndpointPair {
    double left = 0.0;
    double right = 0.0;
};

struct TridiagonalPivotError : std::runtime_error {
    explicit TridiagonalPivotError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::size_t uz(int j) { return static_cast<std::size_t>(j); }

// Thomas elimination for a tridiagonal system with rows
//   lo_i * x_{i-1} + di_i * x_i + up_i * x_{i+1} = rhs_i.
// Overwrites its inputs; throws on a zero pivot.
inline void thomas_solve(std::vector<double>& lo, std::vector<double>& di,
                         std::vector<double>& up, std::vector<double>& rhs) {
    const std::size_t m = di.size();
    for (std::size_t i = 1; i < m; ++i) {
        if (di[i - 1] == 0.0) throw TridiagonalPivotError("tridiagonal solve: zero pivot");
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (di[m - 1] == 0.0) throw TridiagonalPivotError("tridiagonal solve: zero pivot");
    rhs[m - 1] /= di[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

}  // namespace detail

// Simpson smoother sigma = I + (h^2/6) delta2, i.e. weights (1/6, 2/3, 1/6)
// at interior nodes.  Endpoint values pass through unchanged.
template <class T>
std::vector<T> sigma(const std::vector<T>& v) {
    const int n = static_cast<int>(v.size()) - 1;
    std::vector<T> out(v.size(), T{});
    out[0] = v[0];
    out[detail::uz(n)] = v[detail::uz(n)];
    for (int j = 1; j < n; ++j)
        out[detail::uz(j)] =
            (1.0 / 6.0) * v[detail::uz(j - 1)] + (2.0 / 3.0) * v[detail::uz(j)] + (1.0 / 6.0) * v[detail::uz(j + 1)];
    return out;
}

// Central first difference (v_{j+1} - v_{j-1}) / (2h) at interior nodes.
// Endpoint slots are set to zero and carry no meaning.
template <class T>
std::vector<T> delta1(const std::vector<T>& v, double h) {
    const int n = static_cast<int>(v.size()) - 1;
    std::vector<T> out(v.size(), T{});
    for (int j = 1; j < n; ++j)
        out[detail::uz(j)] = (v[detail::uz(j + 1)] - v[detail::uz(j - 1)]) / (2.0 * h);
    return out;
}

// Central second difference (v_{j+1} - 2 v_j + v_{j-1}) / h^2 at interior
// nodes.  Endpoint slots are set to zero and carry no meaning.
template <class T>
std::vector<T> delta2(const std::vector<T>& v, double h) {
    const int n = static_cast<int>(v.size()) - 1;
    std::vector<T> out(v.size(), T{});
    for (int j = 1; j < n; ++j)
        out[detail::uz(j)] =
            (v[detail::uz(j + 1)] - 2.0 * v[detail::uz(j)] + v[detail::uz(j - 1)]) / (h * h);
    return out;
}

// Hermitian (compact, fourth-order) first derivative: solves
//   sigma p = delta1 u   at interior nodes,
// with the endpoint values of p prescribed by bc.
inline GridFunction hermitian_derivative(const GridFunction& u, double h, EndpointPair bc) {
    const int n = static_cast<int>(u.size()) - 1;
    if (n < 2) throw std::invalid_argument("hermitian_derivative: requires n >= 2");
    const int m = n - 1;
    std::vector<double> lo(detail::uz(m), 1.0 / 6.0), di(detail::uz(m), 2.0 / 3.0),
        up(detail::uz(m), 1.0 / 6.0), rhs(detail::uz(m));
    for (int j = 1; j < n; ++j)
        rhs[detail::uz(j - 1)] = (u[detail::uz(j + 1)] - u[detail::uz(j - 1)]) / (2.0 * h);
    rhs[0] -= (1.0 / 6.0) * bc.left;
    rhs[detail::uz(m - 1)] -= (1.0 / 6.0) * bc.right;
    detail::thomas_solve(lo, di, up, rhs);
    GridFunction p(u.size());
    p[0] = bc.left;
    p[detail::uz(n)] = bc.right;
    for (int j = 1; j < n; ++j) p[detail::uz(j)] = rhs[detail::uz(j - 1)];
    return p;
}

// Compact second derivative  tilde_delta2 u = 2 delta2 u - delta1 p,
// where p is the Hermitian derivative of u.  The boundary slots (0 and n)
// hold second-derivative boundary values supplied by the caller (typically
// the closure).
template <class T>
std::vector<T> tilde_delta2(const std::vector<T>& u, const std::vector<T>& p, double h,
                            const T& bc_left, const T& bc_right) {
    const int n = static_cast<int>(u.size()) - 1;
    std::vector<T> out(u.size(), T{});
    out[0] = bc_left;
    out[detail::uz(n)] = bc_right;
    for (int j = 1; j < n; ++j)
        out[detail::uz(j)] =
            2.0 * (u[detail::uz(j + 1)] - 2.0 * u[detail::uz(j)] + u[detail::uz(j - 1)]) / (h * h) -
            (p[detail::uz(j + 1)] - p[detail::uz(j - 1)]) / (2.0 * h);
    return out;
}

inline GridFunction tilde_delta2(const GridFunction& u, const GridFunction& p, double h,
                                 EndpointPair bc2) {
    return tilde_delta2<double>(u, p, h, bc2.left, bc2.right);
}

// Compact third derivative  delta3 u = 2 delta2 p - delta1 (tilde_delta2 u).
// d2 must carry valid boundary slots: the j=1 and j=n-1 rows read them.
// The output boundary slots hold third-derivative values supplied by the
// caller.
template <class T>
std::vector<T> delta3(const std::vector<T>& u, const std::vector<T>& p, const std::vector<T>& d2,
                      double h, const T& bc_left, const T& bc_right) {
    (void)u;
    const int n = static_cast<int>(p.size()) - 1;
    std::vector<T> out(p.size(), T{});
    out[0] = bc_left;
    out[detail::uz(n)] = bc_right;
    for (int j = 1; j < n; ++j)
        out[detail::uz(j)] =
            2.0 * (p[detail::uz(j + 1)] - 2.0 * p[detail::uz(j)] + p[detail::uz(j - 1)]) / (h * h) -
            (d2[detail::uz(j + 1)] - d2[detail::uz(j - 1)]) / (2.0 * h);
    return out;
}

inline GridFunction delta3(const GridFunction& u, const GridFunction& p, const GridFunction& d2,
                           double h, EndpointPair bc3) {
    return delta3<double>(u, p, d2, h, bc3.left, bc3.right);
}

// Compact fourth derivative  delta4 u = (12/h^2)(delta1 p - delta2 u).
// The output boundary slots hold fourth-derivative values supplied by the
// caller.
template <class T>
std::vector<T> delta4(const std::vector<T>& u, const std::vector<T>& p, double h,
                      const T& bc_left, const T& bc_right) {
    const int n = static_cast<int>(u.size()) - 1;
    std::vector<T> out(u.size(), T{});
    out[0] = bc_left;
    out[detail::uz(n)] = bc_right;
    for (int j = 1; j < n; ++j)
        out[detail::uz(j)] =
            (12.0 / (h * h)) * ((p[detail::uz(j + 1)] - p[detail::uz(j - 1)]) / (2.0 * h) -
                                (u[detail::uz(j + 1)] - 2.0 * u[detail::uz(j)] + u[detail::uz(j - 1)]) / (h * h));
    return out;
}

inline GridFunction delta4(const GridFunction& u, const GridFunction& p, double h,
                           EndpointPair bc4) {
    return delta4<double>(u, p, h, bc4.left, bc4.right);
}

// ---------------------------------------------------------------------------
// Stencil emission
// ---------------------------------------------------------------------------

enum class OperatorKind { sigma, delta1, delta2, tilde_delta2, delta3, delta4 };

// Emits the operator as explicit rows over the unknown vector
// [u_0..u_n, p_0..p_n]: u_j has index j, p_j has index (n+1)+j.  Boundary
// slot data (for tilde_delta2 / delta3 / delta4) lands in rhs_shift.  Because
// the rows are produced by the same templated kernels that perform direct
// application, emitted weights match the direct formulas identically.
inline std::vector<StencilRow> emit_stencils(const Grid& g, OperatorKind kind,
                                             EndpointPair slot_data = {}) {
    const int n = g.n();
    const double h = g.h();
    std::vector<LinearForm> u(detail::uz(n + 1)), p(detail::uz(n + 1));
    for (int j = 0; j <= n; ++j) {
        u[detail::uz(j)] = LinearForm::unknown(j);
        p[detail::uz(j)] = LinearForm::unknown(n + 1 + j);
    }
    const LinearForm lo = LinearForm::constant(slot_data.left);
    const LinearForm hi = LinearForm::constant(slot_data.right);

    std::vector<LinearForm> rows;
    switch (kind) {
        case OperatorKind::sigma: rows = sigma(u); break;
        case OperatorKind::delta1: rows = delta1(u, h); break;
        case OperatorKind::delta2: rows = delta2(u, h); break;
        case OperatorKind::tilde_delta2: rows = tilde_delta2(u, p, h, lo, hi); break;
        case OperatorKind::delta3: {
            const std::vector<LinearForm> d2 = tilde_delta2(u, p, h, lo, hi);
            rows = delta3(u, p, d2, h, lo, hi);
            break;
        }
        case OperatorKind::delta4: rows = delta4(u, p, h, lo, hi); break;
    }
    std::vector<StencilRow> out;
    out.reserve(rows.size());
    for (const LinearForm& r : rows) out.push_back(to_stencil_row(r));
    return out;
}

}  // namespace compact4
