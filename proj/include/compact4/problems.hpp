#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace compact4 {

using RealFn = std::function<double(double)>;

// Data of the equation u'''' + D u''' + A u'' + (A' + H) u' + B u = f.
// Aprime is the analytic derivative of A, supplied by the caller.
struct CoefficientSet {
    RealFn A, Aprime, B, D, H, f;
};

// A solution together with its derivatives through order 4.
struct ExactSolution {
    RealFn u, u1, u2, u3, u4;
};

// One fully specified discrete problem: grid, equation data, and the four
// boundary values (u(a), u'(a), u(b), u'(b)).
struct ProblemSpec {
    Grid grid;
    CoefficientSet coeffs;
    std::array<double, 4> boundary{};
};

// A benchmark problem addressable by name.
struct NamedProblem {
    std::string name;
    double a = 0.0;
    double b = 1.0;
    ExactSolution exact;
    CoefficientSet coeffs;

    ProblemSpec make(int n) const {
        return {Grid(a, b, n), coeffs, {exact.u(a), exact.u1(a), exact.u(b), exact.u1(b)}};
    }
};

// f := u'''' + D u''' + A u'' + (A' + H) u' + B u, composed pointwise from
// the exact solution.  The f member of coeffs is ignored.
inline RealFn manufactured_rhs(const ExactSolution& e, const CoefficientSet& c) {
    return [e, c](double x) {
        return e.u4(x) + c.D(x) * e.u3(x) + c.A(x) * e.u2(x) + (c.Aprime(x) + c.H(x)) * e.u1(x) +
               c.B(x) * e.u(x);
    };
}

// Polynomial u(x) = sum_k coeffs[k] x^k with analytic derivatives.
inline ExactSolution polynomial_solution(std::vector<double> coeffs) {
    auto deriv = [](const std::vector<double>& c) {
        std::vector<double> d;
        for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
        return d;
    };
    auto horner = [](std::vector<double> c) {
        return [c = std::move(c)](double x) {
            double s = 0.0;
            for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
            return s;
        };
    };
    const std::vector<double> c1 = deriv(coeffs);
    const std::vector<double> c2 = deriv(c1);
    const std::vector<double> c3 = deriv(c2);
    const std::vector<double> c4 = deriv(c3);
    return {horner(std::move(coeffs)), horner(c1), horner(c2), horner(c3), horner(c4)};
}

// ---------------------------------------------------------------------------
// problem1: constant coefficients, oscillatory-exponential exact solution
//   u(x) = e^x cos(2 pi x)  on (0.3, 1.4),
//   D = 10, A = 10^2, H = 10^3, B = 10^4, A' = 0.
// ---------------------------------------------------------------------------
inline NamedProblem problem1() {
    using std::numbers::pi;
    const double pi2 = pi * pi;

    ExactSolution e;
    e.u = [](double x) { return std::exp(x) * std::cos(2.0 * pi * x); };
    e.u1 = [pi2](double x) {
        return std::exp(x) * (std::cos(2.0 * pi * x) - 2.0 * pi * std::sin(2.0 * pi * x));
    };
    e.u2 = [pi2](double x) {
        return std::exp(x) * ((1.0 - 4.0 * pi2) * std::cos(2.0 * pi * x) -
                              4.0 * pi * std::sin(2.0 * pi * x));
    };
    e.u3 = [pi2](double x) {
        return std::exp(x) * ((1.0 - 12.0 * pi2) * std::cos(2.0 * pi * x) +
                              2.0 * pi * (4.0 * pi2 - 3.0) * std::sin(2.0 * pi * x));
    };
    e.u4 = [pi2](double x) {
        return std::exp(x) * ((1.0 - 24.0 * pi2 + 16.0 * pi2 * pi2) * std::cos(2.0 * pi * x) +
                              8.0 * pi * (4.0 * pi2 - 1.0) * std::sin(2.0 * pi * x));
    };

    const double D = 10.0, A = 100.0, H = 1000.0, B = 10000.0;
    CoefficientSet c;
    c.A = [A](double) { return A; };
    c.Aprime = [](double) { return 0.0; };
    c.B = [B](double) { return B; };
    c.D = [D](double) { return D; };
    c.H = [H](double) { return H; };
    // Closed form of the manufactured right side for this solution and data.
    const double c_cos = 1.0 - 24.0 * pi2 + 16.0 * pi2 * pi2 + D * (1.0 - 12.0 * pi2) +
                         A * (1.0 - 4.0 * pi2) + H + B;
    const double c_sin = 4.0 - 16.0 * pi2 + D * (3.0 - 4.0 * pi2) + 2.0 * A + H;
    c.f = [c_cos, c_sin](double x) {
        return (std::cos(2.0 * pi * x) * c_cos - 2.0 * pi * std::sin(2.0 * pi * x) * c_sin) *
               std::exp(x);
    };

    NamedProblem prob{"problem1", 0.3, 1.4, std::move(e), std::move(c)};

    // Transcription tripwire: the boundary data evaluated at full precision
    // must agree with the rounded reference constants to 5 significant digits.
    const std::array<std::pair<double, double>, 4> ref{{
        {prob.exact.u(prob.a), -0.417129},
        {prob.exact.u(prob.b), -3.28073},
        {prob.exact.u1(prob.a), -8.48343},
        {prob.exact.u1(prob.b), -18.2572},
    }};
    for (const auto& [computed, printed] : ref)
        if (std::abs(computed / printed - 1.0) > 1e-4)
            throw std::logic_error("problem1: boundary data disagrees with reference constants");
    return prob;
}

// ---------------------------------------------------------------------------
// problem2: highly oscillatory exact solution with rough variable data
//   u(x) = x^2 (1-x)^2 sin(1 / ((x - 1/2)^2 + eps)),  eps = 1/40,  on [0, 1],
//   A = 10^4 (1 + sin(40 pi x)/2), A' analytic, B = 10^8 sin(40 pi x),
//   D = 10^2 cos(40 pi x), H = 0; homogeneous boundary data; f manufactured.
// ---------------------------------------------------------------------------
inline NamedProblem problem2() {
    using std::numbers::pi;
    constexpr double eps = 1.0 / 40.0;

    // g(x) = 1 / ((x - 1/2)^2 + eps) and derivatives.
    struct Chain {
        double g, g1, g2, g3, g4;
    };
    auto chain = [](double x) {
        const double t = x - 0.5;
        const double r = t * t + eps;
        const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r;
        Chain c;
        c.g = 1.0 / r;
        c.g1 = -2.0 * t / r2;
        c.g2 = -2.0 / r2 + 8.0 * t * t / r3;
        c.g3 = 24.0 * t / r3 - 48.0 * t * t * t / r4;
        c.g4 = 24.0 / r3 - 288.0 * t * t / r4 + 384.0 * t * t * t * t / r5;
        return c;
    };
    // S(x) = sin(g(x)) and derivatives (Faa di Bruno through order 4).
    struct Osc {
        double S, S1, S2, S3, S4;
    };
    auto osc = [chain](double x) {
        const Chain c = chain(x);
        const double s = std::sin(c.g), co = std::cos(c.g);
        Osc o;
        o.S = s;
        o.S1 = co * c.g1;
        o.S2 = -s * c.g1 * c.g1 + co * c.g2;
        o.S3 = -co * c.g1 * c.g1 * c.g1 - 3.0 * s * c.g1 * c.g2 + co * c.g3;
        o.S4 = s * c.g1 * c.g1 * c.g1 * c.g1 - 6.0 * co * c.g1 * c.g1 * c.g2 -
               3.0 * s * c.g2 * c.g2 - 4.0 * s * c.g1 * c.g3 + co * c.g4;
        return o;
    };
    // P(x) = x^2 (1 - x)^2 = x^2 - 2 x^3 + x^4 and derivatives.
    struct Poly {
        double P, P1, P2, P3, P4;
    };
    auto poly = [](double x) {
        Poly p;
        p.P = x * x - 2.0 * x * x * x + x * x * x * x;
        p.P1 = 2.0 * x - 6.0 * x * x + 4.0 * x * x * x;
        p.P2 = 2.0 - 12.0 * x + 12.0 * x * x;
        p.P3 = -12.0 + 24.0 * x;
        p.P4 = 24.0;
        return p;
    };

    ExactSolution e;
    e.u = [poly, osc](double x) { return poly(x).P * osc(x).S; };
    e.u1 = [poly, osc](double x) {
        const Poly p = poly(x);
        const Osc o = osc(x);
        return p.P1 * o.S + p.P * o.S1;
    };
    e.u2 = [poly, osc](double x) {
        const Poly p = poly(x);
        const Osc o = osc(x);
        return p.P2 * o.S + 2.0 * p.P1 * o.S1 + p.P * o.S2;
    };
    e.u3 = [poly, osc](double x) {
        const Poly p = poly(x);
        const Osc o = osc(x);
        return p.P3 * o.S + 3.0 * p.P2 * o.S1 + 3.0 * p.P1 * o.S2 + p.P * o.S3;
    };
    e.u4 = [poly, osc](double x) {
        const Poly p = poly(x);
        const Osc o = osc(x);
        return p.P4 * o.S + 4.0 * p.P3 * o.S1 + 6.0 * p.P2 * o.S2 + 4.0 * p.P1 * o.S3 +
               p.P * o.S4;
    };

    constexpr double alpha = 1e4, beta = 1e8, gamma = 1e2;
    CoefficientSet c;
    c.A = [](double x) { return alpha * (1.0 + 0.5 * std::sin(40.0 * pi * x)); };
    c.Aprime = [](double x) { return alpha * 20.0 * pi * std::cos(40.0 * pi * x); };
    c.B = [](double x) { return beta * std::sin(40.0 * pi * x); };
    c.D = [](double x) { return gamma * std::cos(40.0 * pi * x); };
    c.H = [](double) { return 0.0; };
    c.f = manufactured_rhs(e, c);

    return {"problem2", 0.0, 1.0, std::move(e), std::move(c)};
}

inline std::optional<NamedProblem> find_problem(std::string_view name) {
    if (name == "problem1") return problem1();
    if (name == "problem2") return problem2();
    return std::nullopt;
}

}  // namespace compact4
