#include <catch2/catch_amalgamated.hpp>

#include <compact4/problems.hpp>

#include <cmath>
#include <random>

using namespace compact4;

TEST_CASE("problem1 metadata and boundary values", "[problems]") {
    const NamedProblem prob = problem1();
    CHECK(prob.name == "problem1");
    CHECK(prob.a == 0.3);
    CHECK(prob.b == 1.4);
    CHECK(prob.coeffs.A(0.5) == 100.0);
    CHECK(prob.coeffs.Aprime(0.5) == 0.0);
    CHECK(prob.coeffs.B(0.5) == 10000.0);
    CHECK(prob.coeffs.D(0.5) == 10.0);
    CHECK(prob.coeffs.H(0.5) == 1000.0);

    const ProblemSpec spec = prob.make(16);
    CHECK(spec.grid.n() == 16);
    CHECK(spec.grid.a() == 0.3);
    CHECK(spec.grid.b() == 1.4);
    // boundary = (u(a), u'(a), u(b), u'(b)), cross-checked against the
    // reference constants to 5 significant digits
    CHECK(spec.boundary[0] == Catch::Approx(-0.417129).epsilon(1e-4));
    CHECK(spec.boundary[1] == Catch::Approx(-8.48343).epsilon(1e-4));
    CHECK(spec.boundary[2] == Catch::Approx(-3.28073).epsilon(1e-4));
    CHECK(spec.boundary[3] == Catch::Approx(-18.2572).epsilon(1e-4));
    CHECK(spec.boundary[0] == prob.exact.u(prob.a));
    CHECK(spec.boundary[1] == prob.exact.u1(prob.a));
    CHECK(spec.boundary[2] == prob.exact.u(prob.b));
    CHECK(spec.boundary[3] == prob.exact.u1(prob.b));
}

TEST_CASE("problem1 closed-form f matches the manufactured right side", "[problems]") {
    const NamedProblem prob = problem1();
    const RealFn man = manufactured_rhs(prob.exact, prob.coeffs);
    std::mt19937 rng(31u);
    std::uniform_real_distribution<double> dist(prob.a, prob.b);
    for (int i = 0; i < 1000; ++i) {
        const double x = dist(rng);
        const double want = man(x);
        CHECK(std::abs(prob.coeffs.f(x) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("problem2 analytic derivatives agree with finite differences", "[problems]") {
    const NamedProblem prob = problem2();
    const double step = 1e-6;
    auto fd = [step](const RealFn& fn, double x) {
        return (fn(x + step) - fn(x - step)) / (2.0 * step);
    };
    std::mt19937 rng(777u);
    std::uniform_real_distribution<double> dist(0.01, 0.99);
    const std::array<std::pair<RealFn, RealFn>, 5> pairs{{
        {prob.exact.u, prob.exact.u1},
        {prob.exact.u1, prob.exact.u2},
        {prob.exact.u2, prob.exact.u3},
        {prob.exact.u3, prob.exact.u4},
        {prob.coeffs.A, prob.coeffs.Aprime},
    }};
    for (int i = 0; i < 100; ++i) {
        const double x = dist(rng);
        for (const auto& [fn, dfn] : pairs) {
            const double an = dfn(x);
            CHECK(std::abs(fd(fn, x) - an) <= 1e-6 * std::max(1.0, std::abs(an)));
        }
    }
}

TEST_CASE("problem2 boundary data is exactly homogeneous", "[problems]") {
    const NamedProblem prob = problem2();
    const ProblemSpec spec = prob.make(64);
    CHECK(spec.boundary[0] == 0.0);
    CHECK(spec.boundary[1] == 0.0);
    CHECK(spec.boundary[2] == 0.0);
    CHECK(spec.boundary[3] == 0.0);
}

TEST_CASE("problem2 term magnitudes sit in the intended band", "[problems]") {
    // max_j |B u| / max_j |u''''| at N=512: a scale sanity band, not a sharp
    // claim.  The measured ratio is ~0.128.
    const NamedProblem prob = problem2();
    const Grid g(prob.a, prob.b, 512);
    double max_bu = 0.0, max_u4 = 0.0;
    for (int j = 0; j <= g.n(); ++j) {
        const double x = g.x(j);
        max_bu = std::max(max_bu, std::abs(prob.coeffs.B(x) * prob.exact.u(x)));
        max_u4 = std::max(max_u4, std::abs(prob.exact.u4(x)));
    }
    const double ratio = max_bu / max_u4;
    CHECK(ratio >= 1e-2);
    CHECK(ratio <= 1e2);
    CHECK(ratio == Catch::Approx(0.1279).margin(0.002));
}

TEST_CASE("manufactured right side composes the operator exactly", "[problems]") {
    const auto zero = [](double) { return 0.0; };
    const CoefficientSet none{zero, zero, zero, zero, zero, zero};
    const ExactSolution quartic = polynomial_solution({0.0, 0.0, 0.0, 0.0, 5.0});
    const RealFn f = manufactured_rhs(quartic, none);
    CHECK(f(0.37) == 120.0);  // u'''' = 24 * 5, all other terms vanish
    CHECK(f(-2.0) == 120.0);

    const NamedProblem prob = problem1();
    const ExactSolution trivial = polynomial_solution({});
    const RealFn f0 = manufactured_rhs(trivial, prob.coeffs);
    CHECK(f0(0.5) == 0.0);
    CHECK(f0(1.3) == 0.0);
}

TEST_CASE("polynomial solution derivatives by hand", "[problems]") {
    const ExactSolution e = polynomial_solution({1.0, 2.0, 3.0, 4.0, 5.0});
    const double x = 0.7;
    CHECK(e.u(x) == Catch::Approx(6.4425).margin(1e-12));
    CHECK(e.u1(x) == Catch::Approx(18.94).margin(1e-12));
    CHECK(e.u2(x) == Catch::Approx(52.2).margin(1e-12));
    CHECK(e.u3(x) == Catch::Approx(108.0).margin(1e-12));
    CHECK(e.u4(x) == 120.0);
}

TEST_CASE("problems are addressable by name", "[problems]") {
    const auto p1 = find_problem("problem1");
    REQUIRE(p1.has_value());
    CHECK(p1->name == "problem1");
    const auto p2 = find_problem("problem2");
    REQUIRE(p2.has_value());
    CHECK(p2->name == "problem2");
    CHECK(!find_problem("problem3").has_value());
    CHECK(!find_problem("").has_value());
}
