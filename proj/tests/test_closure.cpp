#include <catch2/catch_amalgamated.hpp>

#include <compact4/closure.hpp>
#include <compact4/problems.hpp>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

using namespace compact4;

TEST_CASE("solvability quantity hand values", "[closure]") {
    // 12 - 4*10*0.1 + 100*0.01 = 9, 12 + 4*10*0.1 + 100*0.01 = 17
    CHECK(solvability_quantity(100.0, 10.0, 0.1, Side::left) ==
          Catch::Approx(9.0).margin(1e-12));
    CHECK(solvability_quantity(100.0, 10.0, 0.1, Side::right) ==
          Catch::Approx(17.0).margin(1e-12));
    CHECK(solvability_quantity(0.0, 0.0, 0.5, Side::left) == 12.0);
    CHECK(solvability_quantity(0.0, 0.0, 0.5, Side::right) == 12.0);
}

TEST_CASE("solvability violation fires exactly below the tolerance", "[closure]") {
    const double h = 0.05;
    for (Side s : {Side::left, Side::right}) {
        const double sgn = (s == Side::left) ? 1.0 : -1.0;
        // D chosen so the solvability quantity equals qstar (with A = 0).
        auto D_for = [&](double qstar) { return sgn * (12.0 - qstar) / (4.0 * h); };
        // With A = 0 and |4 D h| ~ 12 the scale is ~24, so tol ~ 2.4e-7.
        const double tol0 = 1e-8 * 24.0;

        CHECK_NOTHROW(check_solvability(0.0, D_for(2.0 * tol0), h, s));
        CHECK_THROWS_AS(check_solvability(0.0, D_for(0.5 * tol0), h, s),
                        SolvabilityViolation);
        CHECK_THROWS_AS(check_solvability(0.0, D_for(0.0), h, s), SolvabilityViolation);
        CHECK_THROWS_AS(closure_matrix(0.0, D_for(0.0), h, s), SolvabilityViolation);
        CHECK_THROWS_AS(alpha_inverse(0.0, D_for(0.0), h, s), SolvabilityViolation);

        try {
            check_solvability(0.0, D_for(0.5 * tol0), h, s);
            FAIL("expected SolvabilityViolation");
        } catch (const SolvabilityViolation& e) {
            CHECK(e.side == s);
            CHECK(e.quantity == Catch::Approx(0.5 * tol0).margin(1e-12));
        }
    }
}

TEST_CASE("closure matrix entries match the definitions", "[closure]") {
    const double h = 0.125;  // dyadic step: every entry below is exact
    const ClosureMatrix l = closure_matrix(100.0, 10.0, h, Side::left);
    CHECK(l.m[0][0] == 100.0);
    CHECK(l.m[0][1] == 10.0);
    CHECK(l.m[0][2] == 1.0);
    CHECK(l.m[1][0] == 0.0);
    CHECK(l.m[1][1] == 4.0);
    CHECK(l.m[1][2] == 1.0 / 6.0);
    CHECK(l.m[2][0] == 128.0);
    CHECK(l.m[2][1] == 4.0);
    CHECK(l.m[2][2] == 0.0);

    const ClosureMatrix r = closure_matrix(100.0, 10.0, h, Side::right);
    CHECK(r.m[0][0] == 100.0);
    CHECK(r.m[0][1] == 10.0);
    CHECK(r.m[0][2] == 1.0);
    CHECK(r.m[1][1] == -4.0);  // only the 1/(2h) entries flip sign
    CHECK(r.m[2][1] == -4.0);
    CHECK(r.m[1][2] == 1.0 / 6.0);
    CHECK(r.m[2][0] == 128.0);
}

TEST_CASE("closed-form inverse multiplies the closure matrix to identity", "[closure]") {
    for (auto [A0, D0] : {std::pair{100.0, 10.0}, std::pair{1e4, 100.0}}) {
        for (int n : {8, 16, 32, 64, 128}) {
            const double h = 1.0 / n;
            for (Side s : {Side::left, Side::right}) {
                const ClosureMatrix a = closure_matrix(A0, D0, h, s);
                const ClosureMatrix inv = alpha_inverse(A0, D0, h, s);
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) {
                        double p = 0.0;
                        for (int k = 0; k < 3; ++k) p += inv.m[r][k] * a.m[k][c];
                        CHECK(std::abs(p - (r == c ? 1.0 : 0.0)) <= 1e-12);
                    }
            }
        }
    }
}

TEST_CASE("boundary recovery is exact on quartics", "[closure]") {
    const ExactSolution e = polynomial_solution({-1.0, 0.5, 3.0, -2.0, 1.0});
    const double A = 7.0, Ap = 0.0, B = 13.0, D = 3.0, H = 11.0;
    auto f = [&](double x) {
        return e.u4(x) + D * e.u3(x) + A * e.u2(x) + (Ap + H) * e.u1(x) + B * e.u(x);
    };
    for (int n : {8, 16, 32}) {
        const Grid g(0.0, 1.0, n);
        const double h = g.h();
        const GridFunction u = sample(e.u, g);
        const GridFunction p = hermitian_derivative(u, h, {e.u1(g.a()), e.u1(g.b())});
        for (Side s : {Side::left, Side::right}) {
            const double x0 = (s == Side::left) ? g.a() : g.b();
            const EndpointCoefficients c{A, Ap, B, D, H, f(x0)};
            const BoundaryTriple t = close_boundary(u, p, h, c, s);
            const double scale = std::max(
                {1.0, std::abs(e.u2(x0)), std::abs(e.u3(x0)), std::abs(e.u4(x0))});
            CHECK(std::abs(t.d2 - e.u2(x0)) <= 1e-9 * scale);
            CHECK(std::abs(t.d3 - e.u3(x0)) <= 1e-9 * scale);
            CHECK(std::abs(t.d4 - e.u4(x0)) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("boundary recovery converges at the designed orders", "[closure]") {
    // On smooth non-polynomial data the recovered triple converges at orders
    // (3, 2, 2) in h.
    const NamedProblem prob = problem1();
    auto errors = [&](int n) {
        const Grid g(prob.a, prob.b, n);
        const double h = g.h();
        const GridFunction u = sample(prob.exact.u, g);
        const GridFunction p =
            hermitian_derivative(u, h, {prob.exact.u1(g.a()), prob.exact.u1(g.b())});
        const EndpointCoefficients c{prob.coeffs.A(g.a()),      prob.coeffs.Aprime(g.a()),
                                     prob.coeffs.B(g.a()),      prob.coeffs.D(g.a()),
                                     prob.coeffs.H(g.a()),      prob.coeffs.f(g.a())};
        const BoundaryTriple t = close_boundary(u, p, h, c, Side::left);
        return std::array<double, 3>{std::abs(t.d2 - prob.exact.u2(g.a())),
                                     std::abs(t.d3 - prob.exact.u3(g.a())),
                                     std::abs(t.d4 - prob.exact.u4(g.a()))};
    };
    const std::array<double, 3> e32 = errors(32), e64 = errors(64);
    const double s2 = std::log2(e32[0] / e64[0]);
    const double s3 = std::log2(e32[1] / e64[1]);
    const double s4 = std::log2(e32[2] / e64[2]);
    CHECK(s2 == Catch::Approx(3.0).margin(0.3));
    CHECK(s3 == Catch::Approx(2.0).margin(0.3));
    CHECK(s4 == Catch::Approx(2.0).margin(0.3));
}

TEST_CASE("closure is symmetric under reflection", "[closure]") {
    // Reflecting the problem through the midpoint swaps the endpoints and
    // flips the sign of odd-order data; the recovered triple transforms as
    // (d2, d3, d4) -> (d2, -d3, d4).
    const NamedProblem prob = problem1();
    const int n = 32;
    const Grid g(prob.a, prob.b, n);
    const double h = g.h();

    const GridFunction u = sample(prob.exact.u, g);
    const GridFunction p =
        hermitian_derivative(u, h, {prob.exact.u1(g.a()), prob.exact.u1(g.b())});
    const EndpointCoefficients cl{prob.coeffs.A(g.a()), prob.coeffs.Aprime(g.a()),
                                  prob.coeffs.B(g.a()), prob.coeffs.D(g.a()),
                                  prob.coeffs.H(g.a()), prob.coeffs.f(g.a())};
    const BoundaryTriple tl = close_boundary(u, p, h, cl, Side::left);

    GridFunction ru(u.size());
    for (int j = 0; j <= n; ++j)
        ru[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(n - j)];
    const GridFunction rp = hermitian_derivative(
        ru, h, {-prob.exact.u1(g.b()), -prob.exact.u1(g.a())});
    const EndpointCoefficients cr{prob.coeffs.A(g.a()), -prob.coeffs.Aprime(g.a()),
                                  prob.coeffs.B(g.a()), -prob.coeffs.D(g.a()),
                                  -prob.coeffs.H(g.a()), prob.coeffs.f(g.a())};
    const BoundaryTriple tr = close_boundary(ru, rp, h, cr, Side::right);

    const double scale =
        std::max({1.0, std::abs(tl.d2), std::abs(tl.d3), std::abs(tl.d4)});
    CHECK(std::abs(tl.d2 - tr.d2) <= 1e-10 * scale);
    CHECK(std::abs(tl.d3 + tr.d3) <= 1e-10 * scale);
    CHECK(std::abs(tl.d4 - tr.d4) <= 1e-10 * scale);
}

TEST_CASE("emitted closure rows agree with the direct computation", "[closure]") {
    const int n = 8;
    const Grid g(0.0, 1.0, n);
    const double h = g.h();
    std::mt19937 rng(42u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction u(static_cast<std::size_t>(n + 1)), p(static_cast<std::size_t>(n + 1));
    for (double& t : u) t = dist(rng);
    for (double& t : p) t = dist(rng);
    const std::array<double, 3> triple{dist(rng), dist(rng), dist(rng)};

    std::vector<double> val;
    val.insert(val.end(), u.begin(), u.end());
    val.insert(val.end(), p.begin(), p.end());
    val.insert(val.end(), triple.begin(), triple.end());

    for (Side s : {Side::left, Side::right}) {
        const EndpointCoefficients c{7.0, 1.5, 13.0, 3.0, 11.0, 0.25};
        const std::array<StencilRow, 3> rows = emit_closure_rows(c, g, s);

        const std::size_t end = (s == Side::left) ? 0 : static_cast<std::size_t>(n);
        const double ode_rhs = c.f - (c.Aprime + c.H) * p[end] - c.B * u[end];
        const std::array<double, 3> b = closure_rhs<double>(u, p, h, s, ode_rhs);
        const ClosureMatrix a = closure_matrix(c.A, c.D, h, s);

        for (int r = 0; r < 3; ++r) {
            double emitted = rows[static_cast<std::size_t>(r)].rhs_shift;
            for (const auto& [k, w] : rows[static_cast<std::size_t>(r)].weights)
                emitted += w * val[static_cast<std::size_t>(k)];
            double direct = -b[static_cast<std::size_t>(r)];
            for (int k = 0; k < 3; ++k)
                direct += a.m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] *
                          triple[static_cast<std::size_t>(k)];
            CHECK(std::abs(emitted - direct) <= 1e-11 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("closure requires at least five nodes", "[closure]") {
    const GridFunction u(4, 1.0), p(4, 0.0);  // n = 3
    CHECK_THROWS_AS(close_boundary(u, p, 0.25, EndpointCoefficients{}, Side::left),
                    std::invalid_argument);
}
